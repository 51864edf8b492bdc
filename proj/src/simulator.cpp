#include "sbg/simulator.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sbg/errors.hpp"

namespace sbg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_distribution(std::span<const double> probs, int size, const char* who) {
  if (static_cast<int>(probs.size()) != size) {
    throw ValidationError(std::string(who) + " returned a distribution of the wrong length");
  }
}

}  // namespace

EpisodeRng::EpisodeRng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double EpisodeRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int EpisodeRng::sample(std::span<const double> probs) {
  const double u = uniform();
  double cumulative = 0.0;
  int last = 0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last = i;
    if (u < cumulative) return i;
  }
  // Rounding left u above the total mass.
  return last;
}

EpisodeTrace run_episode(const GameSpec& spec, Agent& first, Agent& second, std::uint64_t seed) {
  EpisodeRng rng(seed);
  EpisodeTrace trace;
  trace.seed = seed;
  int k = rng.sample(spec.p0);
  int l = rng.sample(spec.q0);
  first.begin(k);
  second.begin(l);
  double discount = 1.0;
  for (int t = 1; t <= spec.horizon; ++t) {
    const std::vector<double> x = first.act();
    const std::vector<double> y = second.act();
    check_distribution(x, spec.num_a, "player one");
    check_distribution(y, spec.num_b, "player two");
    const int a = rng.sample(x);
    const int b = rng.sample(y);
    const double payoff = discount * spec.g(k, l, a, b);
    trace.stages.push_back({t, k, l, a, b, payoff});
    trace.total += payoff;

    std::vector<double> row_p(spec.num_k), row_q(spec.num_l);
    for (int k2 = 0; k2 < spec.num_k; ++k2) row_p[k2] = spec.p_trans(a, b, k, k2);
    for (int l2 = 0; l2 < spec.num_l; ++l2) row_q[l2] = spec.q_trans(a, b, l, l2);
    k = rng.sample(row_p);
    l = rng.sample(row_q);
    first.observe(a, b, k);
    second.observe(a, b, l);
    discount *= spec.lambda;
  }
  return trace;
}

MonteCarloResult run_monte_carlo(const GameSpec& spec, const AgentFactory& first, const AgentFactory& second,
                                 int num_runs, std::uint64_t base_seed) {
  if (num_runs < 1) throw DomainError("Monte Carlo: at least one run is required");
  MonteCarloResult out;
  out.runs = num_runs;
  for (int i = 0; i < num_runs; ++i) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
    const std::unique_ptr<Agent> one = first();
    const std::unique_ptr<Agent> two = second();
    out.seeds.push_back(seed);
    out.totals.push_back(run_episode(spec, *one, *two, seed).total);
  }
  double sum = 0.0;
  for (double v : out.totals) sum += v;
  out.mean = sum / num_runs;
  if (num_runs > 1) {
    double sq = 0.0;
    for (double v : out.totals) sq += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(sq / (num_runs - 1));
  }
  out.stderr_mean = out.stddev / std::sqrt(static_cast<double>(num_runs));
  return out;
}

void write_results_csv(std::ostream& out, const MonteCarloResult& result) {
  std::ostringstream text;
  text.precision(17);
  text << "seed,total\n";
  for (std::size_t i = 0; i < result.totals.size(); ++i) text << result.seeds[i] << ',' << result.totals[i] << '\n';
  text << "runs,mean,stddev,stderr\n";
  text << result.runs << ',' << result.mean << ',' << result.stddev << ',' << result.stderr_mean << '\n';
  out << text.str();
}

FixedPolicyAgent::FixedPolicyAgent(std::vector<std::vector<double>> by_state) : by_state_(std::move(by_state)) {}

std::vector<std::vector<double>> load_fixed_policy(const std::string& path, int num_states, int num_actions) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open policy file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("policy file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("policy file " + path + ": expected an object keyed by state");
  std::vector<std::vector<double>> out(num_states);
  try {
    for (int s = 0; s < num_states; ++s) {
      const std::string key = std::to_string(s + 1);
      if (!doc.contains(key)) throw ValidationError("policy file " + path + ": missing state " + key);
      out[s] = doc.at(key).get<std::vector<double>>();
      validate_distribution(out[s], num_actions, "policy for state " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("policy file " + path + ": " + e.what());
  }
  if (static_cast<int>(doc.size()) != num_states) {
    throw ValidationError("policy file " + path + ": expected " + std::to_string(num_states) + " states");
  }
  return out;
}

AgentFactory fixed_agent_factory(std::vector<std::vector<double>> by_state) {
  return [by_state = std::move(by_state)]() -> std::unique_ptr<Agent> {
    return std::make_unique<FixedPolicyAgent>(by_state);
  };
}

}  // namespace sbg
