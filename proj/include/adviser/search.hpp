#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adviser/arena.hpp"
#include "adviser/meanpayoff.hpp"
#include "adviser/rational.hpp"
#include "adviser/safety.hpp"

namespace adviser {

inline constexpr std::size_t default_cap = 4096;

struct FreeChoice {
  std::string state;
  std::string input;

  friend bool operator==(const FreeChoice&, const FreeChoice&) = default;
};

struct CandidateRecord {
  Adviser adviser;
  std::uint64_t mask = 0;  // which free choices are forbidden on top of α⁰
  bool good = false;
  std::optional<Arena> restricted;
  std::optional<Rational> lambda;
  std::optional<MemorylessStrategy> strategy;
  std::optional<MemorylessStrategy> adversary_witness;
  std::optional<std::map<std::string, Rational, std::less<>>> per_state_value;
};

struct SolveBundle {
  std::shared_ptr<const Arena> arena;
  LosingLadder losing;
  std::vector<FreeChoice> free_choices;
  std::vector<CandidateRecord> candidates;  // candidates[0] is α⁰
  std::size_t generated = 0;                // supersets examined
  bool truncated = false;
  std::optional<std::size_t> best_index;
  // below[i]: good candidates j != i with candidates[j] ⪯ candidates[i].
  std::vector<std::vector<std::size_t>> below;

  const CandidateRecord& nominal() const { return candidates.front(); }
  const CandidateRecord& best() const {
    if (!best_index) throw Error(ErrorCode::precondition, "bundle has not been solved");
    return candidates[*best_index];
  }
  bool solved() const { return best_index.has_value(); }
};

// Adversary edges of T^{α⁰} that α⁰ leaves open; forbidding anything outside
// this list cannot change any candidate's restricted arena.
inline std::vector<FreeChoice> free_choices(const Arena& arena, const Adviser& nominal) {
  const auto restricted = nonblocking_restricted(arena, nominal);
  std::vector<FreeChoice> choices;
  if (!restricted) return choices;
  for (const auto& edge : restricted->edges()) {
    if (restricted->owner(edge.from) != Owner::adversary) continue;
    const auto& state = restricted->id(edge.from);
    if (nominal.forbids(state, edge.input)) continue;
    FreeChoice choice{state, edge.input};
    if (std::find(choices.begin(), choices.end(), choice) == choices.end()) choices.push_back(std::move(choice));
  }
  return choices;
}

struct Goodness {
  bool good = false;
  std::optional<Arena> restricted;
};

// For α ⊇ α⁰ a good adviser is one whose T^α exists; for anything else the
// protagonist additionally needs a safe strategy inside T^α.
inline Goodness is_good(const Arena& arena, const Adviser& alpha, const Adviser& nominal) {
  auto restricted = nonblocking_restricted(arena, alpha);
  if (!restricted) return {};
  bool superset = true;
  for (const auto& [state, inputs] : nominal.forbidden) {
    const auto& mine = alpha.at(state);
    if (!std::includes(mine.begin(), mine.end(), inputs.begin(), inputs.end())) {
      superset = false;
      break;
    }
  }
  if (!superset && !winning_subarena(*restricted)) return {};
  return Goodness{true, std::move(restricted)};
}

inline Goodness is_good(const Arena& arena, const Adviser& alpha) {
  return is_good(arena, alpha, nominal_adviser(arena).adviser);
}

// Pointwise inclusion α ⪯ α'.
inline bool leq(const Adviser& lhs, const Adviser& rhs) {
  if (lhs.forbidden.size() != rhs.forbidden.size()) {
    throw Error(ErrorCode::domain_mismatch, "advisers are defined on different adversary states");
  }
  auto it = rhs.forbidden.begin();
  for (const auto& [state, inputs] : lhs.forbidden) {
    if (it->first != state) {
      throw Error(ErrorCode::domain_mismatch, "advisers are defined on different adversary states");
    }
    if (!std::includes(it->second.begin(), it->second.end(), inputs.begin(), inputs.end())) return false;
    ++it;
  }
  return true;
}

namespace detail {

inline bool mask_leq(std::uint64_t lhs, std::uint64_t rhs) { return (lhs & rhs) == lhs; }

inline std::vector<std::pair<std::string, std::string>> forbidden_pairs(const Adviser& alpha) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [s, inputs] : alpha.forbidden)
    for (const auto& u : inputs) pairs.emplace_back(s, u);
  return pairs;  // already sorted: both levels are ordered containers
}

// Deterministic preference among advisers of equal λ: fewer forbidden inputs,
// then the lexicographically smaller sorted list of (state, input) pairs.
inline bool prefer(const CandidateRecord& a, const CandidateRecord& b) {
  if (a.adviser.total() != b.adviser.total()) return a.adviser.total() < b.adviser.total();
  return forbidden_pairs(a.adviser) < forbidden_pairs(b.adviser);
}

inline SolveBundle enumerate(const Arena& arena, std::size_t cap) {
  if (cap == 0) throw Error(ErrorCode::bad_cap, "cap must be positive");
  auto nominal = nominal_adviser(arena);
  if (!arena.has_initial() || nominal.ladder.member[arena.initial()]) {
    throw Error(ErrorCode::no_good_adviser, "no good adviser exists: the initial state is in Losing");
  }
  SolveBundle bundle;
  bundle.arena = std::make_shared<const Arena>(arena);
  bundle.free_choices = free_choices(arena, nominal.adviser);
  const auto k = bundle.free_choices.size();

  std::uint64_t total = 0;
  if (k < 63) {
    total = std::uint64_t{1} << k;
    bundle.truncated = total > cap;
  } else {
    bundle.truncated = true;
  }
  const std::uint64_t count = bundle.truncated ? cap : total;
  bundle.generated = static_cast<std::size_t>(count);

  for (std::uint64_t mask = 0; mask < count; ++mask) {
    CandidateRecord rec;
    rec.adviser = nominal.adviser;
    rec.mask = mask;
    for (std::size_t b = 0; b < k && b < 64; ++b) {
      if (mask >> b & 1U) rec.adviser.forbid(bundle.free_choices[b].state, bundle.free_choices[b].input);
    }
    rec.restricted = nonblocking_restricted(arena, rec.adviser);
    rec.good = rec.restricted.has_value();
    bundle.candidates.push_back(std::move(rec));
  }
  bundle.losing = std::move(nominal.ladder);

  bundle.below.assign(bundle.candidates.size(), {});
  for (std::size_t i = 0; i < bundle.candidates.size(); ++i) {
    for (std::size_t j = 0; j < bundle.candidates.size(); ++j) {
      if (i != j && bundle.candidates[j].good && mask_leq(bundle.candidates[j].mask, bundle.candidates[i].mask)) {
        bundle.below[i].push_back(j);
      }
    }
  }
  return bundle;
}

}  // namespace detail

// Supersets of α⁰ over the free choices in binary-counter order, each marked
// good or not. λ and strategies are left empty.
inline SolveBundle enumerate_candidates(const Arena& arena, std::size_t cap = default_cap) {
  return detail::enumerate(arena, cap);
}

inline SolveBundle synthesize(const Arena& arena, std::size_t cap = default_cap, const SolveOptions& options = {}) {
  auto bundle = detail::enumerate(arena, cap);
  if (!bundle.candidates.front().good) {
    throw Error(ErrorCode::no_good_adviser, "no good adviser exists: T^α⁰ is empty");
  }
  for (auto& rec : bundle.candidates) {
    if (!rec.good) continue;
    const auto weighted = build_meanpayoff(*rec.restricted, effective_adviser(arena, *rec.restricted, rec.adviser));
    auto report = solve(weighted, options);
    rec.lambda = -report.per_state.at(rec.restricted->id(rec.restricted->initial()));
    rec.strategy = std::move(report.strategy);
    rec.adversary_witness = std::move(report.adversary_witness);
    rec.per_state_value = std::move(report.per_state);
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < bundle.candidates.size(); ++i) {
    const auto& rec = bundle.candidates[i];
    if (!rec.good) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& cur = bundle.candidates[*best];
    if (*rec.lambda < *cur.lambda || (*rec.lambda == *cur.lambda && detail::prefer(rec, cur))) best = i;
  }
  bundle.best_index = best;
  return bundle;
}

enum class SwitchRanking {
  per_state,  // λ re-based at the state the play moves to
  initial,    // λ measured from the initial state
};

// Good candidates α ⪯ current that pass `feasible`, cheapest first. With
// per-state ranking the key is the candidate's value at `at_state`.
inline std::vector<std::size_t> successors_in_order(const SolveBundle& bundle, std::size_t current,
                                                    const std::function<bool(const CandidateRecord&)>& feasible,
                                                    SwitchRanking ranking = SwitchRanking::initial,
                                                    std::string_view at_state = {}) {
  if (current >= bundle.candidates.size()) throw Error(ErrorCode::precondition, "candidate index out of range");
  std::vector<std::size_t> pool;
  auto consider = [&](std::size_t idx) {
    const auto& rec = bundle.candidates[idx];
    if (rec.good && rec.lambda && feasible(rec)) pool.push_back(idx);
  };
  consider(current);
  for (auto idx : bundle.below[current]) consider(idx);

  auto key = [&](std::size_t idx) {
    const auto& rec = bundle.candidates[idx];
    if (ranking == SwitchRanking::per_state && rec.per_state_value) {
      const auto it = rec.per_state_value->find(at_state);
      if (it != rec.per_state_value->end()) return -it->second;
    }
    return *rec.lambda;
  };
  std::stable_sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) {
    const auto ka = key(a);
    const auto kb = key(b);
    if (ka != kb) return ka < kb;
    return detail::prefer(bundle.candidates[a], bundle.candidates[b]);
  });
  return pool;
}

}  // namespace adviser
