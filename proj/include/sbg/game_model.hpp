#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sbg {

enum class Side { PlayerOne, PlayerTwo };

inline Side opponent(Side s) { return s == Side::PlayerOne ? Side::PlayerTwo : Side::PlayerOne; }

// Tolerance used when checking that input distributions sum to one.
inline constexpr double kProbabilityTolerance = 1e-9;

// Two-player zero-sum stochastic Bayesian game with finite horizon.
//
// Player one privately observes a state k in K and picks actions a in A,
// player two privately observes l in L and picks b in B. States evolve
// independently given the public action pair. Player one receives
// payoff(k, l, a, b) each stage, discounted by lambda^(t-1).
//
// All indices are 0-based. Storage is flat and row-major:
//   payoff  [k][l][a][b]
//   trans_p [a][b][k][k_next]
//   trans_q [a][b][l][l_next]
struct GameSpec {
  int num_k = 1;
  int num_l = 1;
  int num_a = 1;
  int num_b = 1;
  double lambda = 1.0;
  int horizon = 1;
  std::vector<double> p0;
  std::vector<double> q0;
  std::vector<double> payoff;
  std::vector<double> trans_p;
  std::vector<double> trans_q;

  int num_pairs() const { return num_a * num_b; }
  int pair_index(int a, int b) const { return a * num_b + b; }

  double g(int k, int l, int a, int b) const {
    return payoff[((static_cast<std::size_t>(k) * num_l + l) * num_a + a) * num_b + b];
  }
  double& g(int k, int l, int a, int b) {
    return payoff[((static_cast<std::size_t>(k) * num_l + l) * num_a + a) * num_b + b];
  }
  double p_trans(int a, int b, int k, int k_next) const {
    return trans_p[((static_cast<std::size_t>(a) * num_b + b) * num_k + k) * num_k + k_next];
  }
  double& p_trans(int a, int b, int k, int k_next) {
    return trans_p[((static_cast<std::size_t>(a) * num_b + b) * num_k + k) * num_k + k_next];
  }
  double q_trans(int a, int b, int l, int l_next) const {
    return trans_q[((static_cast<std::size_t>(a) * num_b + b) * num_l + l) * num_l + l_next];
  }
  double& q_trans(int a, int b, int l, int l_next) {
    return trans_q[((static_cast<std::size_t>(a) * num_b + b) * num_l + l) * num_l + l_next];
  }

  // Allocates every tensor at the right size, zero-filled.
  static GameSpec zeros(int num_k, int num_l, int num_a, int num_b, double lambda, int horizon);

  bool operator==(const GameSpec&) const = default;
};

// Probability vector over a player's own states.
struct Belief {
  std::vector<double> probs;

  Belief() = default;
  explicit Belief(std::vector<double> p) : probs(std::move(p)) {}
  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
  std::span<const double> view() const { return probs; }
  bool operator==(const Belief&) const = default;
};

// Cumulative discounted payoff offsets indexed by the opponent's states
// (mu over K for player two, nu over L for player one).
struct VectorPayoff {
  std::vector<double> values;

  VectorPayoff() = default;
  explicit VectorPayoff(std::vector<double> v) : values(std::move(v)) {}
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const { return values; }
  bool operator==(const VectorPayoff&) const = default;
};

// Throws ValidationError naming the first violated invariant.
void validate(const GameSpec& spec);

// Throws ValidationError unless `probs` is a distribution of length `size`.
void validate_distribution(std::span<const double> probs, std::size_t size, const std::string& what);

// Largest one-stage payoff entry.
double g_bar(const GameSpec& spec);

// JSON game files. Parsing errors raise ParseError; a well-formed file
// describing an invalid game raises ValidationError.
GameSpec parse_spec(const std::string& json_text);
std::string serialize_spec(const GameSpec& spec);
GameSpec load_spec(const std::filesystem::path& path);
void save_spec(const GameSpec& spec, const std::filesystem::path& path);

// The jamming game of the underwater sensor network case study
// (3 sensor states, 2 jammer states, 2 actions each).
GameSpec case_study_spec();

}  // namespace sbg
