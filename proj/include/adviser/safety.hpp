#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adviser/arena.hpp"

namespace adviser {

// The increasing sequence Losing^0 ⊆ Losing^1 ⊆ ... of the nominal-adviser
// fixpoint. levels.back() == levels[levels.size() - 2] once it has converged.
struct LosingLadder {
  std::vector<std::set<std::string>> levels;
  std::set<std::string> final;
  std::vector<char> member;  // indexed by arena state

  bool contains(std::string_view id) const { return final.find(std::string(id)) != final.end(); }
  std::size_t iterations() const { return levels.empty() ? 0 : levels.size() - 1; }
};

// Least set containing Unsafe and every state whose enabled successors are all
// in the set, for both owners. Levels are computed synchronously.
inline LosingLadder compute_losing(const Arena& arena) {
  const auto n = arena.size();
  std::vector<char> current(n, 0);
  for (StateIndex s = 0; s < n; ++s) current[s] = arena.state(s).safe ? 0 : 1;

  auto as_ids = [&](const std::vector<char>& mask) {
    std::set<std::string> ids;
    for (StateIndex s = 0; s < n; ++s)
      if (mask[s]) ids.insert(arena.id(s));
    return ids;
  };

  LosingLadder ladder;
  ladder.levels.push_back(as_ids(current));
  while (true) {
    auto next = current;
    for (StateIndex s = 0; s < n; ++s) {
      if (current[s]) continue;
      bool all_losing = true;
      for (auto e : arena.out_edges(s)) {
        if (!current[arena.edge(e).to]) {
          all_losing = false;
          break;
        }
      }
      if (all_losing) next[s] = 1;
    }
    ladder.levels.push_back(as_ids(next));
    const bool stable = next == current;
    current = std::move(next);
    if (stable) break;
  }
  ladder.final = ladder.levels.back();
  ladder.member = std::move(current);
  return ladder;
}

struct NominalResult {
  Adviser adviser;
  LosingLadder ladder;
};

// α⁰: every adversary state gets an entry; unsafe adversary states forbid all
// their inputs, every other adversary state forbids exactly the inputs that
// lead into Losing. Unsafe protagonist states get no entry.
inline NominalResult nominal_adviser(const Arena& arena) {
  NominalResult result{Adviser{}, compute_losing(arena)};
  auto& alpha = result.adviser;
  const auto& losing = result.ladder.member;
  for (StateIndex s = 0; s < arena.size(); ++s) {
    if (arena.owner(s) != Owner::adversary) continue;
    auto& entry = alpha.forbidden[arena.id(s)];
    for (auto e : arena.out_edges(s)) {
      const auto& edge = arena.edge(e);
      if (!arena.state(s).safe || losing[edge.to]) entry.insert(edge.input);
    }
  }
  return result;
}

inline bool exists_good_adviser(const Arena& arena) {
  const auto ladder = compute_losing(arena);
  return arena.has_initial() && !ladder.member[arena.initial()];
}

// Protagonist's winning region of the ordinary safety game on `arena`, where
// the adversary may take any transition present.
inline std::vector<char> safety_winning_region(const Arena& arena) {
  const auto n = arena.size();
  std::vector<char> losing(n, 0);
  std::vector<std::size_t> escape(n, 0);
  std::vector<StateIndex> work;
  for (StateIndex s = 0; s < n; ++s) {
    escape[s] = arena.out_edges(s).size();
    if (!arena.state(s).safe || (escape[s] == 0 && arena.owner(s) == Owner::protagonist)) {
      losing[s] = 1;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    const auto t = work.back();
    work.pop_back();
    for (auto e : arena.in_edges(t)) {
      const auto s = arena.edge(e).from;
      if (losing[s]) continue;
      if (arena.owner(s) == Owner::adversary || --escape[s] == 0) {
        losing[s] = 1;
        work.push_back(s);
      }
    }
  }
  std::vector<char> winning(n);
  for (StateIndex s = 0; s < n; ++s) winning[s] = !losing[s];
  return winning;
}

// The part of `arena` in which the protagonist plays only winning strategies:
// losing states and protagonist moves into them are dropped, then blocking and
// unreachable states are pruned. Absent when the initial state is losing.
inline std::optional<Arena> winning_subarena(const Arena& arena) {
  const auto winning = safety_winning_region(arena);
  if (!arena.has_initial() || !winning[arena.initial()]) return std::nullopt;
  std::vector<char> keep_edge(arena.transition_count(), 1);
  auto sub = arena.subarena(winning, keep_edge);
  auto pruned = prune_blocking(sub);
  if (!pruned) return std::nullopt;
  return std::move(pruned->arena);
}

}  // namespace adviser
