// Command-line front end: validate, solve, oracle, bound, play and
// reproduce-case-study.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sbg/bounds.hpp"
#include "sbg/errors.hpp"
#include "sbg/game_model.hpp"
#include "sbg/oracle.hpp"
#include "sbg/primal_solver.hpp"
#include "sbg/simulator.hpp"
#include "sbg/window_agent.hpp"

namespace fs = std::filesystem;
using namespace sbg;

namespace {

enum ExitCode { kOk = 0, kValidation = 2, kCapacity = 3, kSolver = 4, kIo = 5 };

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write " + path.string());
}

std::string distribution_text(std::span<const double> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

// Spec from file with optional overrides of the horizon, discount and
// initial distributions.
struct SpecOptions {
  std::string path;
  std::optional<int> horizon;
  std::optional<double> lambda;
  std::vector<double> p;
  std::vector<double> q;

  void add(CLI::App* cmd, bool beliefs) {
    cmd->add_option("--spec", path, "game specification (JSON)")->required();
    cmd->add_option("--horizon", horizon, "number of stages (default: from the spec)");
    cmd->add_option("--lambda", lambda, "discount factor in (0,1] (default: from the spec)");
    if (beliefs) {
      cmd->add_option("--p", p, "player one's initial belief (default: from the spec)")->delimiter(',');
      cmd->add_option("--q", q, "player two's initial belief (default: from the spec)")->delimiter(',');
    }
  }

  GameSpec load() const {
    GameSpec spec = load_spec(path);
    if (horizon) spec.horizon = *horizon;
    if (lambda) spec.lambda = *lambda;
    if (!p.empty()) spec.p0 = p;
    if (!q.empty()) spec.q0 = q;
    validate(spec);
    return spec;
  }
};

// --------------------------------------------------------------- solve

struct SolveOptions {
  SpecOptions spec;
  int side = 1;
  bool strategy = false;
  std::string dump_lp;
  std::int64_t capacity = kDefaultVariableCapacity;
};

void print_strategy(const GameSpec& spec, const BehavioralStrategy& x, std::ostream& out) {
  const char* name = x.side == Side::PlayerOne ? "sigma" : "tau";
  const SideIndex idx = x.index();
  for (int t = 1; t <= x.depth; ++t) {
    for (int id = 0; id < idx.count(t); ++id) {
      const HistoryPath h = idx.decode(t, id);
      out << name << " t=" << t << " states=";
      for (std::size_t i = 0; i < h.states.size(); ++i) out << (i ? "," : "") << h.states[i] + 1;
      out << " actions=";
      for (std::size_t i = 0; i < h.pairs.size(); ++i) {
        out << (i ? "," : "") << '(' << h.pairs[i] / spec.num_b + 1 << ' ' << h.pairs[i] % spec.num_b + 1 << ')';
      }
      out << " -> " << distribution_text(x.row(t, id)) << '\n';
    }
  }
}

int run_solve(const SolveOptions& o) {
  const GameSpec spec = o.spec.load();
  const Side side = o.side == 1 ? Side::PlayerOne : Side::PlayerTwo;
  const Belief p(spec.p0), q(spec.q0);
  if (!o.dump_lp.empty()) {
    const SequenceProgram prog = side == Side::PlayerOne
                                     ? build_primal_p1(spec, p, q, spec.horizon, spec.lambda, o.capacity)
                                     : build_primal_p2(spec, p, q, spec.horizon, spec.lambda, o.capacity);
    std::ofstream out(o.dump_lp);
    if (!out) throw IoError("cannot write " + o.dump_lp);
    lp::write_lp_format(prog.lp, out);
  }
  const PrimalResult r = solve_primal(spec, p, q, spec.horizon, spec.lambda, side, o.capacity);
  std::cout << "value=" << fmt(r.value) << '\n';
  const char* name = side == Side::PlayerOne ? "nu" : "mu";
  for (std::size_t i = 0; i < r.initial_vector_payoff.size(); ++i) {
    std::cout << name << '[' << i + 1 << "]=" << fmt(r.initial_vector_payoff[i]) << '\n';
  }
  if (o.strategy) print_strategy(spec, r.strategy, std::cout);
  return kOk;
}

// ---------------------------------------------------------------- play

// Wraps an agent to record the statistic of a window agent after every
// update, for the trace of the first episode.
class TracingAgent : public Agent {
 public:
  TracingAgent(std::unique_ptr<Agent> inner, std::ostream& out) : inner_(std::move(inner)), out_(out) {
    window_ = dynamic_cast<WindowAgent*>(inner_.get());
  }
  void begin(int own_state) override {
    inner_->begin(own_state);
    record();
  }
  std::vector<double> act() override { return inner_->act(); }
  void observe(int a, int b, int own_next_state) override {
    inner_->observe(a, b, own_next_state);
    record();
  }

 private:
  void record() {
    if (!window_) return;
    const StatisticNode& s = window_->statistic();
    out_ << s.t;
    for (double x : s.belief.probs) out_ << ',' << fmt(x);
    for (double x : s.payoff.values) out_ << ',' << fmt(x);
    out_ << ',' << s.window->index + 1 << ',' << (s.payoff_current ? 1 : 0) << '\n';
  }

  std::unique_ptr<Agent> inner_;
  std::ostream& out_;
  WindowAgent* window_ = nullptr;
};

struct PlayOptions {
  SpecOptions spec;
  int window = 2;
  int runs = 500;
  std::uint64_t seed = 1;
  std::string p1 = "optimal";
  std::string p2 = "window";
  std::string update_horizon = "fixed";
  std::string out;
  std::string trace_dir;
  std::optional<double> reference;
};

enum class AgentKind { Optimal, Window, Fixed };

struct AgentChoice {
  AgentKind kind;
  AgentFactory factory;
};

AgentChoice make_agent(const std::string& text, const GameSpec& spec, Side side, const WindowConfig& config) {
  if (text == "optimal") return {AgentKind::Optimal, optimal_agent_factory(spec, side)};
  if (text == "window") return {AgentKind::Window, window_agent_factory(spec, side, config)};
  if (text.rfind("fixed:", 0) == 0) {
    const bool p1 = side == Side::PlayerOne;
    return {AgentKind::Fixed, fixed_agent_factory(load_fixed_policy(text.substr(6), p1 ? spec.num_k : spec.num_l,
                                                                    p1 ? spec.num_a : spec.num_b))};
  }
  throw ValidationError("unknown agent '" + text + "' (expected optimal, window or fixed:<file>)");
}

void write_trace(const fs::path& path, const GameSpec& spec, Side side, const AgentFactory& factory,
                 const AgentFactory& other, std::uint64_t seed) {
  std::ostringstream text;
  const bool p1 = side == Side::PlayerOne;
  text << 't';
  for (int i = 1; i <= (p1 ? spec.num_k : spec.num_l); ++i) text << (p1 ? ",p" : ",q") << i;
  for (int i = 1; i <= (p1 ? spec.num_l : spec.num_k); ++i) text << (p1 ? ",nu" : ",mu") << i;
  text << ",window,payoff_current\n";
  TracingAgent traced(factory(), text);
  const std::unique_ptr<Agent> rest = other();
  if (p1) {
    run_episode(spec, traced, *rest, seed);
  } else {
    run_episode(spec, *rest, traced, seed);
  }
  write_file(path, text.str());
}

struct BoundCheck {
  double bound = 0.0;
  std::optional<bool> satisfied;
};

// A window player guarantees its side of v within the bound, an optimal
// player within 0; fixed players guarantee nothing. The check needs v,
// which is only computed when it fits the capacity.
BoundCheck check_bound(const GameSpec& spec, int window, AgentKind k1, AgentKind k2, const MonteCarloResult& r,
                       std::optional<double> value) {
  BoundCheck out;
  out.bound = window_bound(spec.lambda, std::min(window, spec.horizon), spec.horizon, g_bar(spec));
  if (k1 == AgentKind::Fixed && k2 == AgentKind::Fixed) {
    out.satisfied = true;
    return out;
  }
  if (!value) return out;
  const double slack = 3.0 * r.stderr_mean;
  bool ok = true;
  if (k1 != AgentKind::Fixed) ok = ok && *value - r.mean <= (k1 == AgentKind::Window ? out.bound : 0.0) + slack;
  if (k2 != AgentKind::Fixed) ok = ok && r.mean - *value <= (k2 == AgentKind::Window ? out.bound : 0.0) + slack;
  out.satisfied = ok;
  return out;
}

std::optional<double> reference_value(const GameSpec& spec, std::optional<double> given) {
  if (given) return given;
  try {
    return solve_primal(spec, Belief(spec.p0), Belief(spec.q0), spec.horizon, spec.lambda, Side::PlayerOne).value;
  } catch (const CapacityError&) {
    std::cerr << "note: the full-horizon game exceeds the LP capacity; pass --value to check the bound\n";
    return std::nullopt;
  }
}

std::string bound_line(const BoundCheck& check, double mean) {
  const std::string verdict = check.satisfied ? (*check.satisfied ? "true" : "false") : "unknown";
  return "bound=" + fmt(check.bound) + " mean=" + fmt(mean) + " satisfied=" + verdict;
}

int run_play(const PlayOptions& o) {
  const GameSpec spec = o.spec.load();
  if (o.runs < 1) throw ValidationError("--runs must be at least 1");
  WindowConfig config;
  config.window_n = std::min(o.window, spec.horizon);
  config.total_horizon = spec.horizon;
  config.update_horizon = o.update_horizon == "remaining" ? UpdateHorizon::RemainingWindow : UpdateHorizon::FixedN;
  const AgentChoice one = make_agent(o.p1, spec, Side::PlayerOne, config);
  const AgentChoice two = make_agent(o.p2, spec, Side::PlayerTwo, config);

  const MonteCarloResult r = run_monte_carlo(spec, one.factory, two.factory, o.runs, o.seed);
  std::ostringstream csv;
  write_results_csv(csv, r);
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(o.out, csv.str());
  }
  if (!o.trace_dir.empty()) {
    fs::create_directories(o.trace_dir);
    if (one.kind != AgentKind::Fixed) {
      write_trace(fs::path(o.trace_dir) / "trace_p1.csv", spec, Side::PlayerOne, one.factory, two.factory, o.seed);
    }
    if (two.kind != AgentKind::Fixed) {
      write_trace(fs::path(o.trace_dir) / "trace_p2.csv", spec, Side::PlayerTwo, two.factory, one.factory, o.seed);
    }
  }
  const bool needs_value = one.kind != AgentKind::Fixed || two.kind != AgentKind::Fixed;
  const std::optional<double> value = needs_value ? reference_value(spec, o.reference) : std::nullopt;
  std::cout << bound_line(check_bound(spec, o.window, one.kind, two.kind, r, value), r.mean) << '\n';
  return kOk;
}

// ------------------------------------------------- reproduce-case-study

struct ReproduceOptions {
  std::string out = "case_study_results";
  std::uint64_t seed = 1;
  int runs = 500;
  bool full_grid = false;
  int grid_horizon = 8;
  std::vector<int> windows{2, 3};
  std::vector<double> lambdas{0.3, 0.9};
};

int run_reproduce(ReproduceOptions o) {
  const GameSpec spec = load_spec(fs::path(SBG_DATA_DIR) / "case_study.json");
  const auto fixed_p1 = load_fixed_policy((fs::path(SBG_DATA_DIR) / "fixed_p1.json").string(), spec.num_k, spec.num_a);
  const auto fixed_p2 = load_fixed_policy((fs::path(SBG_DATA_DIR) / "fixed_p2.json").string(), spec.num_l, spec.num_b);
  if (o.full_grid) {
    o.grid_horizon = 36;
    o.lambdas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::cerr << "warning: the full grid (N=36) runs thousands of LP solves per configuration and can take hours\n";
  }
  fs::create_directories(o.out);
  const fs::path dir(o.out);

  const PrimalResult primal =
      solve_primal(spec, Belief(spec.p0), Belief(spec.q0), spec.horizon, spec.lambda, Side::PlayerOne);
  std::ostringstream value;
  value << "value=" << fmt(primal.value) << '\n';
  for (std::size_t l = 0; l < primal.initial_vector_payoff.size(); ++l) {
    value << "nu[" << l + 1 << "]=" << fmt(primal.initial_vector_payoff[l]) << '\n';
  }
  write_file(dir / "value.txt", value.str());
  std::cout << value.str();

  const int window = 2;
  const double bound = window_bound(spec.lambda, window, spec.horizon, g_bar(spec));
  write_file(dir / "bound.txt", "bound=" + fmt(bound) + '\n');
  std::cout << "bound=" << fmt(bound) << '\n';

  WindowConfig config;
  config.window_n = window;
  config.total_horizon = spec.horizon;
  std::ostringstream summary;
  summary << "value=" << fmt(primal.value) << "\nbound=" << fmt(bound) << '\n';
  struct Pairing {
    const char* file;
    AgentKind k1, k2;
  };
  for (const Pairing& pr : {Pairing{"p1_optimal_vs_p2_window.csv", AgentKind::Optimal, AgentKind::Window},
                            Pairing{"p1_window_vs_p2_optimal.csv", AgentKind::Window, AgentKind::Optimal}}) {
    const AgentFactory one = pr.k1 == AgentKind::Optimal ? optimal_agent_factory(spec, Side::PlayerOne)
                                                         : window_agent_factory(spec, Side::PlayerOne, config);
    const AgentFactory two = pr.k2 == AgentKind::Optimal ? optimal_agent_factory(spec, Side::PlayerTwo)
                                                         : window_agent_factory(spec, Side::PlayerTwo, config);
    const MonteCarloResult r = run_monte_carlo(spec, one, two, o.runs, o.seed);
    std::ostringstream csv;
    write_results_csv(csv, r);
    write_file(dir / pr.file, csv.str());
    const std::string line = std::string(pr.file) + ": " +
                             bound_line(check_bound(spec, window, pr.k1, pr.k2, r, primal.value), r.mean) +
                             " stderr=" + fmt(r.stderr_mean);
    summary << line << '\n';
    std::cout << line << '\n';
  }
  write_file(dir / "summary.txt", summary.str());

  std::ostringstream table;
  table << "horizon,lambda,window,p1_window_vs_fixed_mean,p1_window_vs_fixed_stderr,fixed_vs_p2_window_mean,"
           "fixed_vs_p2_window_stderr\n";
  for (double lambda : o.lambdas) {
    GameSpec grid = spec;
    grid.lambda = lambda;
    grid.horizon = o.grid_horizon;
    validate(grid);
    for (int n : o.windows) {
      WindowConfig c;
      c.window_n = std::min(n, grid.horizon);
      c.total_horizon = grid.horizon;
      const MonteCarloResult one = run_monte_carlo(grid, window_agent_factory(grid, Side::PlayerOne, c),
                                                   fixed_agent_factory(fixed_p2), o.runs, o.seed);
      const MonteCarloResult two = run_monte_carlo(grid, fixed_agent_factory(fixed_p1),
                                                   window_agent_factory(grid, Side::PlayerTwo, c), o.runs, o.seed);
      table << grid.horizon << ',' << fmt(lambda) << ',' << n << ',' << fmt(one.mean) << ',' << fmt(one.stderr_mean)
            << ',' << fmt(two.mean) << ',' << fmt(two.stderr_mean) << '\n';
      std::cout << "grid N=" << grid.horizon << " lambda=" << fmt(lambda) << " n=" << n
                << " p1_window=" << fmt(one.mean) << " p2_window=" << fmt(two.mean) << '\n';
    }
  }
  write_file(dir / "window_grid.csv", table.str());
  return kOk;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const NumericalError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Window-by-window solver for zero-sum stochastic Bayesian games"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a game specification file");
  validate_cmd->add_option("spec", validate_path, "game specification (JSON)")->required();
  validate_cmd->callback([&] {
    action = [&] {
      const GameSpec spec = load_spec(validate_path);
      std::cout << "valid: |K|=" << spec.num_k << " |L|=" << spec.num_l << " |A|=" << spec.num_a
                << " |B|=" << spec.num_b << " N=" << spec.horizon << " lambda=" << fmt(spec.lambda)
                << " gbar=" << fmt(g_bar(spec)) << '\n';
      return kOk;
    };
  });

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "game value and initial vector payoff by the sequence-form LP");
  solve.spec.add(solve_cmd, true);
  solve_cmd->add_option("--side", solve.side, "which player's LP to solve")->check(CLI::IsMember({1, 2}));
  solve_cmd->add_flag("--strategy", solve.strategy, "print the behavioral security strategy");
  solve_cmd->add_option("--dump-lp", solve.dump_lp, "write the LP in CPLEX LP format");
  solve_cmd->add_option("--capacity", solve.capacity, "maximum number of LP variables");
  solve_cmd->callback([&] { action = [&] { return run_solve(solve); }; });

  SpecOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "game value by enumerating pure behavioral strategies");
  oracle.add(oracle_cmd, true);
  oracle_cmd->callback([&] {
    action = [&] {
      const GameSpec spec = oracle.load();
      const double v = oracle_value(spec, Belief(spec.p0), Belief(spec.q0), spec.horizon, spec.lambda);
      std::cout << "value=" << fmt(v) << '\n';
      return kOk;
    };
  });

  double lambda = 0.0, gbar = 0.0;
  int window = 0, horizon = 0;
  auto* bound_cmd = app.add_subcommand("bound", "performance bound of the window-by-window strategy");
  bound_cmd->add_option("--lambda", lambda, "discount factor")->required();
  bound_cmd->add_option("--window", window, "window size n")->required();
  bound_cmd->add_option("--horizon", horizon, "total number of stages N")->required();
  bound_cmd->add_option("--gbar", gbar, "largest one-stage payoff")->required();
  bound_cmd->callback([&] {
    action = [&] {
      const double b = window_bound(lambda, window, horizon, gbar);
      std::cout << "bound=" << fmt(b) << '\n';
      return kOk;
    };
  });

  PlayOptions play;
  auto* play_cmd = app.add_subcommand("play", "Monte Carlo play between two agents");
  play.spec.add(play_cmd, true);
  play_cmd->add_option("--window", play.window, "window size n");
  play_cmd->add_option("--runs", play.runs, "number of episodes");
  play_cmd->add_option("--seed", play.seed, "base seed; episode i uses seed + i");
  play_cmd->add_option("--p1", play.p1, "optimal | window | fixed:<policy.json>");
  play_cmd->add_option("--p2", play.p2, "optimal | window | fixed:<policy.json>");
  play_cmd->add_option("--update-horizon", play.update_horizon, "vector payoff look-ahead")
      ->check(CLI::IsMember({"fixed", "remaining"}));
  play_cmd->add_option("--out", play.out, "write the results CSV here instead of stdout");
  play_cmd->add_option("--trace-dir", play.trace_dir, "write per-stage statistic traces of the first episode");
  play_cmd->add_option("--value", play.reference, "game value to check the bound against (default: solved)");
  play_cmd->callback([&] { action = [&] { return run_play(play); }; });

  ReproduceOptions reproduce;
  auto* reproduce_cmd = app.add_subcommand("reproduce-case-study", "run the jamming case study end to end");
  reproduce_cmd->add_option("--out", reproduce.out, "results directory");
  reproduce_cmd->add_option("--seed", reproduce.seed, "base seed");
  reproduce_cmd->add_option("--runs", reproduce.runs, "episodes per configuration");
  reproduce_cmd->add_option("--grid-horizon", reproduce.grid_horizon, "horizon of the window-size grid");
  reproduce_cmd->add_option("--windows", reproduce.windows, "window sizes of the grid")->delimiter(',');
  reproduce_cmd->add_option("--lambdas", reproduce.lambdas, "discount factors of the grid")->delimiter(',');
  reproduce_cmd->add_flag("--full-grid", reproduce.full_grid, "N=36 and lambda 0.1..0.9");
  reproduce_cmd->callback([&] { action = [&] { return run_reproduce(reproduce); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  return guarded(action);
}
