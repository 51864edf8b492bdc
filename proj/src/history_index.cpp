#include "sbg/history_index.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sbg/errors.hpp"

namespace sbg {

SideIndex::SideIndex(int num_states, int num_pairs, int depth)
    : num_states_(num_states), num_pairs_(num_pairs), depth_(depth) {
  if (num_states < 1 || num_pairs < 1 || depth < 0) throw DomainError("SideIndex: invalid dimensions");
  // Entry t (1-based) holds the counts for depth t; entry depth+1 is kept
  // for child lookups past the last stage.
  pub_count_.assign(depth + 2, 1);
  seq_count_.assign(depth + 2, 1);
  const std::int64_t limit = std::numeric_limits<int>::max();
  std::int64_t pub = 1;
  std::int64_t seq = 1;
  for (int t = 1; t <= depth + 1; ++t) {
    if (t > 1) pub *= num_pairs;
    seq *= num_states;
    if (pub * seq > limit) throw CapacityError("history index exceeds integer id range");
    pub_count_[t] = static_cast<int>(pub);
    seq_count_[t] = static_cast<int>(seq);
  }
}

int SideIndex::parent(int t, int id) const {
  return make_id(t - 1, sequence_of(t, id) / num_states_, public_of(t, id) / num_pairs_);
}

int SideIndex::child(int t, int id, int pair, int next_state) const {
  return make_id(t + 1, sequence_of(t, id) * num_states_ + next_state, public_of(t, id) * num_pairs_ + pair);
}

std::vector<int> SideIndex::compatible(int t, int pub) const {
  std::vector<int> ids(seq_count_[t]);
  for (int s = 0; s < seq_count_[t]; ++s) ids[s] = make_id(t, s, pub);
  return ids;
}

int SideIndex::encode(const HistoryPath& path) const {
  const int t = static_cast<int>(path.states.size());
  if (t < 1 || t > depth_ + 1 || static_cast<int>(path.pairs.size()) != t - 1) {
    throw DomainError("SideIndex::encode: inconsistent path length");
  }
  int seq = 0;
  for (int s : path.states) seq = seq * num_states_ + s;
  return make_id(t, seq, public_index(path.pairs));
}

HistoryPath SideIndex::decode(int t, int id) const {
  HistoryPath path;
  path.states.resize(t);
  path.pairs.resize(t - 1);
  int seq = sequence_of(t, id);
  for (int i = t - 1; i >= 0; --i) {
    path.states[i] = seq % num_states_;
    seq /= num_states_;
  }
  int pub = public_of(t, id);
  for (int i = t - 2; i >= 0; --i) {
    path.pairs[i] = pub % num_pairs_;
    pub /= num_pairs_;
  }
  return path;
}

int SideIndex::public_index(std::span<const int> pairs) const {
  int pub = 0;
  for (int h : pairs) pub = pub * num_pairs_ + h;
  return pub;
}

HistoryIndex::HistoryIndex(int num_k, int num_l, int num_pairs, int depth)
    : p1_(num_k, num_pairs, depth), p2_(num_l, num_pairs, depth) {}

std::vector<HistoryId> HistoryIndex::compatible_histories(Side s, std::span<const int> public_history) const {
  const int t = static_cast<int>(public_history.size()) + 1;
  if (t > depth()) throw DomainError("compatible_histories: public history longer than index depth");
  const SideIndex& idx = side(s);
  std::vector<HistoryId> out;
  for (int id : idx.compatible(t, idx.public_index(public_history))) out.push_back({s, t, id});
  return out;
}

std::int64_t projected_variables(const GameSpec& spec, int depth) {
  // Plan variables of one side plus weighted-payoff variables of the other.
  auto side_total = [&](int own_states, int own_actions, int opp_states) {
    long double total = 0.0L;
    long double own = 1.0L, opp = 1.0L, pub = 1.0L;
    for (int t = 1; t <= depth; ++t) {
      own *= own_states;
      opp *= opp_states;
      if (t > 1) pub *= spec.num_pairs();
      total += own * pub * own_actions + opp * pub;
    }
    return total;
  };
  const long double worst = std::max(side_total(spec.num_k, spec.num_a, spec.num_l),
                                     side_total(spec.num_l, spec.num_b, spec.num_k));
  if (worst > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 2)) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(worst);
}

void check_capacity(const GameSpec& spec, int depth, std::int64_t capacity) {
  const std::int64_t vars = projected_variables(spec, depth);
  if (vars > capacity) {
    throw CapacityError("window depth " + std::to_string(depth) + " needs " + std::to_string(vars) +
                        " LP variables, limit is " + std::to_string(capacity));
  }
}

HistoryIndex build_index(const GameSpec& spec, int depth, std::int64_t capacity) {
  if (depth < 1) throw DomainError("build_index: depth must be at least 1");
  check_capacity(spec, depth, capacity);
  return HistoryIndex(spec.num_k, spec.num_l, spec.num_pairs(), depth);
}

}  // namespace sbg
