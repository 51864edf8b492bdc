#include "sbg/dual_solver.hpp"

#include <cmath>

#include "sbg/best_response.hpp"
#include "sbg/errors.hpp"

namespace sbg {

namespace {

void check_vector_payoff(const VectorPayoff& v, int size, const char* what) {
  if (static_cast<int>(v.size()) != size) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(size) + " entries");
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + ": entries must be finite");
  }
}

DualProgram build_dual(const GameSpec& spec, Side planner, const Belief& own, const VectorPayoff& stat, int n,
                       double lambda, std::int64_t capacity) {
  if (n < 1) throw DomainError("dual LP: horizon must be at least 1");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("dual LP: lambda must lie in (0,1]");
  const Perspective view(spec, planner);
  validate_distribution(own.view(), view.own_states(), planner == Side::PlayerOne ? "p" : "q");
  check_vector_payoff(stat, view.opp_states(), planner == Side::PlayerOne ? "nu" : "mu");
  check_capacity(spec, n, capacity);

  DualProgram out;
  out.lp.set_sense(view.maximizes() ? lp::Sense::Maximize : lp::Sense::Minimize);
  out.block = add_sequence_block(out.lp, view, n, own.view(), lambda);
  out.scalar_var = out.lp.add_variable(-lp::kInf, lp::kInf, 1.0);
  // Player two: Z_{I_1} - Z_0 <= -mu(k). Player one: U_{J_1} - U_0 >= -nu(l).
  for (int s = 0; s < view.opp_states(); ++s) {
    out.lp.add_row({{out.block.value_var(1, s), 1.0}, {out.scalar_var, -1.0}}, view.response_relation(), -stat[s]);
  }
  return out;
}

DualResult solve_dual(const GameSpec& spec, Side planner, const Belief& own, const VectorPayoff& stat, int n,
                      double lambda, std::int64_t capacity) {
  const DualProgram prog = build_dual(spec, planner, own, stat, n, lambda, capacity);
  const lp::LpSolution sol = solve_bounded(prog.lp, "dual LP");
  const Perspective view(spec, planner);
  DualResult out;
  out.value = sol.objective_value;
  out.plan = read_plan(prog.block, view, sol.primal);
  out.strategy = extract_strategy(out.plan, spec);
  // The weights only matter for the reported value, which comes from the LP.
  const std::vector<double> uniform(view.opp_states(), 1.0 / view.opp_states());
  out.weighted_payoffs = best_response_recursive(spec, out.plan, uniform, lambda).weighted_payoffs;
  return out;
}

}  // namespace

DualProgram build_dual1(const GameSpec& spec, const VectorPayoff& mu, const Belief& q, int n, double lambda,
                        std::int64_t capacity) {
  return build_dual(spec, Side::PlayerTwo, q, mu, n, lambda, capacity);
}

DualResult solve_dual1(const GameSpec& spec, const VectorPayoff& mu, const Belief& q, int n, double lambda,
                       std::int64_t capacity) {
  return solve_dual(spec, Side::PlayerTwo, q, mu, n, lambda, capacity);
}

DualProgram build_dual2(const GameSpec& spec, const Belief& p, const VectorPayoff& nu, int n, double lambda,
                        std::int64_t capacity) {
  return build_dual(spec, Side::PlayerOne, p, nu, n, lambda, capacity);
}

DualResult solve_dual2(const GameSpec& spec, const Belief& p, const VectorPayoff& nu, int n, double lambda,
                       std::int64_t capacity) {
  return solve_dual(spec, Side::PlayerOne, p, nu, n, lambda, capacity);
}

}  // namespace sbg
