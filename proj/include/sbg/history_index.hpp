#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sbg/game_model.hpp"

namespace sbg {

// Default limit on the projected number of LP variables for one window.
inline constexpr std::int64_t kDefaultVariableCapacity = 5'000'000;

// Public action pairs are encoded as a * |B| + b.
struct HistoryPath {
  std::vector<int> states;  // own states k_1..k_t (or l_1..l_t)
  std::vector<int> pairs;   // action pairs of stages 1..t-1

  bool operator==(const HistoryPath&) const = default;
};

struct HistoryId {
  Side side;
  int depth;
  int id;

  bool operator==(const HistoryId&) const = default;
};

// Dense closed-form indexing of one player's information sets up to a depth.
//
// An information set at depth t is a state sequence of length t plus a
// public history of t-1 action pairs. Its id is
//   state_index * num_public(t) + public_index
// where both indices are mixed-radix with the earliest element most
// significant, so ids are ordered lexicographically by (states, pairs).
class SideIndex {
 public:
  SideIndex() = default;
  SideIndex(int num_states, int num_pairs, int depth);

  int num_states() const { return num_states_; }
  int num_pairs() const { return num_pairs_; }
  int depth() const { return depth_; }

  // Number of public histories of length t-1 (preceding stage t).
  int num_public(int t) const { return pub_count_[t]; }
  // Number of state sequences of length t.
  int num_sequences(int t) const { return seq_count_[t]; }
  int count(int t) const { return seq_count_[t] * pub_count_[t]; }

  int make_id(int t, int sequence, int pub) const { return sequence * pub_count_[t] + pub; }
  int sequence_of(int t, int id) const { return id / pub_count_[t]; }
  int public_of(int t, int id) const { return id % pub_count_[t]; }
  int last_state(int t, int id) const { return sequence_of(t, id) % num_states_; }

  // Requires t >= 2.
  int parent(int t, int id) const;
  int last_pair(int t, int id) const { return public_of(t, id) % num_pairs_; }
  // Child at depth t+1 after `pair` and own transition to `next_state`.
  int child(int t, int id, int pair, int next_state) const;

  // Ids at depth t whose public history has index `pub`, in increasing order.
  std::vector<int> compatible(int t, int pub) const;

  int encode(const HistoryPath& path) const;
  HistoryPath decode(int t, int id) const;
  // Index of a public history given as a pair sequence.
  int public_index(std::span<const int> pairs) const;

 private:
  int num_states_ = 1;
  int num_pairs_ = 1;
  int depth_ = 0;
  std::vector<int> pub_count_;
  std::vector<int> seq_count_;
};

// Both players' information-set indices for one window depth.
class HistoryIndex {
 public:
  HistoryIndex(int num_k, int num_l, int num_pairs, int depth);

  int depth() const { return p1_.depth(); }
  const SideIndex& side(Side s) const { return s == Side::PlayerOne ? p1_ : p2_; }
  int count(Side s, int t) const { return side(s).count(t); }

  std::vector<HistoryId> compatible_histories(Side s, std::span<const int> public_history) const;

 private:
  SideIndex p1_;
  SideIndex p2_;
};

// Largest variable count over the sequence-form LPs of either player for
// the given window depth.
std::int64_t projected_variables(const GameSpec& spec, int depth);

// Throws CapacityError when projected_variables exceeds `capacity`.
void check_capacity(const GameSpec& spec, int depth, std::int64_t capacity = kDefaultVariableCapacity);

HistoryIndex build_index(const GameSpec& spec, int depth, std::int64_t capacity = kDefaultVariableCapacity);

}  // namespace sbg
