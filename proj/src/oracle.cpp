#include "sbg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sbg/errors.hpp"
#include "sbg/history_index.hpp"
#include "sbg/lp.hpp"
#include "sbg/primal_solver.hpp"

namespace sbg {

namespace {

int own_action_of(const GameSpec& spec, Side side, int pair) {
  return side == Side::PlayerOne ? pair / spec.num_b : pair % spec.num_b;
}

void expand(const GameSpec& spec, Side side, const SideIndex& idx, int t, int actions, std::int64_t limit,
            PureStrategy& cur, std::vector<PureStrategy>& out) {
  if (t > idx.depth()) {
    if (static_cast<std::int64_t>(out.size()) >= limit) {
      throw CapacityError("oracle: more than " + std::to_string(limit) + " pure strategies");
    }
    out.push_back(cur);
    return;
  }
  std::vector<int> reach;
  for (int id = 0; id < idx.count(t); ++id) {
    if (t == 1) {
      reach.push_back(id);
      continue;
    }
    const int chosen = cur[t - 2][idx.parent(t, id)];
    if (chosen >= 0 && chosen == own_action_of(spec, side, idx.last_pair(t, id))) reach.push_back(id);
  }
  std::vector<int>& level = cur[t - 1];
  for (int id : reach) level[id] = 0;
  while (true) {
    expand(spec, side, idx, t + 1, actions, limit, cur, out);
    std::size_t i = 0;
    while (i < reach.size() && ++level[reach[i]] == actions) level[reach[i++]] = 0;
    if (i == reach.size()) break;
  }
  std::fill(level.begin(), level.end(), -1);
}

struct Evaluator {
  const GameSpec& spec;
  const PureStrategy& s1;
  const PureStrategy& s2;
  SideIndex own;
  SideIndex opp;
  int n;
  double lambda;

  double at(int t, int i, int j, double discount) const {
    const int k = own.last_state(t, i);
    const int l = opp.last_state(t, j);
    const int a = s1[t - 1][i];
    const int b = s2[t - 1][j];
    double v = discount * spec.g(k, l, a, b);
    if (t == n) return v;
    const int pair = spec.pair_index(a, b);
    for (int k2 = 0; k2 < spec.num_k; ++k2) {
      const double pk = spec.p_trans(a, b, k, k2);
      if (pk == 0.0) continue;
      for (int l2 = 0; l2 < spec.num_l; ++l2) {
        const double ql = spec.q_trans(a, b, l, l2);
        if (ql == 0.0) continue;
        v += pk * ql * at(t + 1, own.child(t, i, pair, k2), opp.child(t, j, pair, l2), discount * lambda);
      }
    }
    return v;
  }
};

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> strategy;
};

// Optimal mixed strategy of the row player (maximizer) or column player
// (minimizer) of m[row][col].
MatrixGameSolution solve_matrix_game(const std::vector<std::vector<double>>& m, bool row_player) {
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  const int mine = row_player ? rows : cols;
  const int theirs = row_player ? cols : rows;
  lp::LinearProgram prog(row_player ? lp::Sense::Maximize : lp::Sense::Minimize);
  const int x = prog.add_variables(mine, 0.0, lp::kInf);
  const int v = prog.add_variable(-lp::kInf, lp::kInf, 1.0);
  std::vector<lp::Term> simplex;
  for (int i = 0; i < mine; ++i) simplex.push_back({x + i, 1.0});
  prog.add_row(std::move(simplex), lp::Relation::Equal, 1.0);
  for (int j = 0; j < theirs; ++j) {
    std::vector<lp::Term> terms{{v, -1.0}};
    for (int i = 0; i < mine; ++i) terms.push_back({x + i, row_player ? m[i][j] : m[j][i]});
    prog.add_row(std::move(terms), row_player ? lp::Relation::GreaterEqual : lp::Relation::LessEqual, 0.0);
  }
  const lp::LpSolution sol = solve_bounded(prog, "oracle matrix game");
  MatrixGameSolution out;
  out.value = sol.objective_value;
  out.strategy.assign(sol.primal.begin() + x, sol.primal.begin() + x + mine);
  return out;
}

}  // namespace

std::vector<PureStrategy> enumerate_pure_strategies(const GameSpec& spec, Side side, int n, std::int64_t limit) {
  if (n < 1) throw DomainError("oracle: horizon must be at least 1");
  const int states = side == Side::PlayerOne ? spec.num_k : spec.num_l;
  const int actions = side == Side::PlayerOne ? spec.num_a : spec.num_b;
  const SideIndex idx(states, spec.num_pairs(), n);
  PureStrategy cur(n);
  for (int t = 1; t <= n; ++t) cur[t - 1].assign(idx.count(t), -1);
  std::vector<PureStrategy> out;
  expand(spec, side, idx, 1, actions, limit, cur, out);
  return out;
}

double evaluate_pure(const GameSpec& spec, const Belief& p, const Belief& q, const PureStrategy& s1,
                     const PureStrategy& s2, double lambda) {
  const int n = static_cast<int>(s1.size());
  const Evaluator eval{spec, s1, s2, SideIndex(spec.num_k, spec.num_pairs(), n),
                       SideIndex(spec.num_l, spec.num_pairs(), n), n, lambda};
  double total = 0.0;
  for (int k = 0; k < spec.num_k; ++k)
    for (int l = 0; l < spec.num_l; ++l)
      if (p[k] * q[l] != 0.0) total += p[k] * q[l] * eval.at(1, k, l, 1.0);
  return total;
}

double oracle_value(const GameSpec& spec, const Belief& p, const Belief& q, int n, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("oracle: lambda must lie in (0,1]");
  validate_distribution(p.view(), spec.num_k, "p");
  validate_distribution(q.view(), spec.num_l, "q");
  const std::vector<PureStrategy> first = enumerate_pure_strategies(spec, Side::PlayerOne, n);
  const std::vector<PureStrategy> second = enumerate_pure_strategies(spec, Side::PlayerTwo, n);
  const std::int64_t width = static_cast<std::int64_t>(second.size());

  std::unordered_map<std::int64_t, double> cache;
  auto entry = [&](int i, int j) {
    const auto [it, fresh] = cache.try_emplace(i * width + j, 0.0);
    if (fresh) it->second = evaluate_pure(spec, p, q, first[i], second[j], lambda);
    return it->second;
  };

  std::vector<int> rows{0}, cols{0};
  while (true) {
    std::vector<std::vector<double>> m(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = entry(rows[i], cols[j]);
    const MatrixGameSolution x = solve_matrix_game(m, true);
    const MatrixGameSolution y = solve_matrix_game(m, false);

    // Best pure responses over the full strategy sets.
    int best_row = -1, best_col = -1;
    double upper = -lp::kInf, lower = lp::kInf;
    for (int i = 0; i < static_cast<int>(first.size()); ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (y.strategy[j] > 0.0) v += y.strategy[j] * entry(i, cols[j]);
      if (v > upper) upper = v, best_row = i;
    }
    for (int j = 0; j < static_cast<int>(second.size()); ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (x.strategy[i] > 0.0) v += x.strategy[i] * entry(rows[i], j);
      if (v < lower) lower = v, best_col = j;
    }
    const double value = 0.5 * (x.value + y.value);
    if (upper - lower <= 1e-9 * (1.0 + std::abs(value))) return value;
    bool grew = false;
    if (std::find(rows.begin(), rows.end(), best_row) == rows.end()) rows.push_back(best_row), grew = true;
    if (std::find(cols.begin(), cols.end(), best_col) == cols.end()) cols.push_back(best_col), grew = true;
    if (!grew) return value;
  }
}

}  // namespace sbg
