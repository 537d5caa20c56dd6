#pragma once

// Random arena generators and brute-force oracles shared by the test
// binaries. The oracles work on plain adjacency lists and deliberately share
// no code with the library beyond Arena, Adviser and Rational.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "adviser/adviser.hpp"

namespace testing_support {

using adviser::Adviser;
using adviser::Arena;
using adviser::Owner;
using adviser::Rational;

struct GenParams {
  int min_states = 2;
  int max_states = 10;
  int max_out = 3;
  double unsafe_prob = 0.2;
  double dead_prob = 0.0;  // chance a state gets no outgoing transition
  int max_adversary_edges = 1 << 20;
};

// Alternating arena with states s0..s(n-1); s0 is the protagonist initial state.
inline Arena random_arena(std::mt19937_64& rng, const GenParams& p) {
  std::uniform_int_distribution<int> size(std::max(p.min_states, 2), p.max_states);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const int n = size(rng);
  std::vector<Owner> owner(n);
  owner[0] = Owner::protagonist;
  owner[1] = Owner::adversary;
  for (int i = 2; i < n; ++i) owner[i] = coin(rng) < 0.5 ? Owner::protagonist : Owner::adversary;

  Arena arena;
  for (int i = 0; i < n; ++i) arena.add_state("s" + std::to_string(i), owner[i], i == 0 ? coin(rng) >= p.unsafe_prob / 4 : coin(rng) >= p.unsafe_prob);
  int adversary_edges = 0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> targets;
    for (int j = 0; j < n; ++j)
      if (owner[j] != owner[i]) targets.push_back(j);
    if (coin(rng) < p.dead_prob) continue;
    std::uniform_int_distribution<int> deg(1, p.max_out);
    int d = deg(rng);
    if (owner[i] == Owner::adversary) d = std::min(d, p.max_adversary_edges - adversary_edges);
    for (int k = 0; k < d; ++k) {
      std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
      const auto tag = owner[i] == Owner::protagonist ? "p" : "a";
      arena.add_transition(static_cast<adviser::StateIndex>(i), std::string(tag) + std::to_string(i) + "_" + std::to_string(k),
                           static_cast<adviser::StateIndex>(targets[pick(rng)]));
      if (owner[i] == Owner::adversary) ++adversary_edges;
    }
  }
  arena.set_initial("s0");
  return arena;
}

// Same shape without dead ends, with a weight in [lo, 0] on every edge.
inline adviser::WeightedArena random_weighted(std::mt19937_64& rng, int max_states, int lo) {
  GenParams p;
  p.max_states = max_states;
  p.min_states = 2;
  auto arena = random_arena(rng, p);
  std::uniform_int_distribution<int> w(lo, 0);
  std::vector<std::int64_t> weight(arena.transition_count());
  for (auto& x : weight) x = w(rng);
  return adviser::WeightedArena{std::move(arena), std::move(weight)};
}

// ---------------------------------------------------------------------------
// Plain graph used by the oracles

struct Graph {
  struct Arc {
    int to;
    std::int64_t weight;
    std::string input;
  };
  std::vector<bool> protagonist;
  std::vector<bool> safe;
  std::vector<bool> alive;
  std::vector<std::vector<Arc>> out;
  std::vector<std::string> id;
  int init = 0;

  int size() const { return static_cast<int>(out.size()); }
};

inline Graph to_graph(const Arena& arena, const std::vector<std::int64_t>* weight = nullptr) {
  Graph g;
  const int n = static_cast<int>(arena.size());
  g.protagonist.resize(n);
  g.safe.resize(n);
  g.alive.assign(n, true);
  g.out.resize(n);
  for (int s = 0; s < n; ++s) {
    g.protagonist[s] = arena.owner(s) == Owner::protagonist;
    g.safe[s] = arena.state(s).safe;
    g.id.push_back(arena.id(s));
  }
  const auto edges = arena.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    g.out[edges[e].from].push_back({static_cast<int>(edges[e].to), weight ? (*weight)[e] : 0, edges[e].input});
  }
  g.init = static_cast<int>(arena.initial());
  return g;
}

// Losing by the textbook fixpoint: Unsafe, then any state all of whose
// successors are losing (states without successors included).
inline std::set<std::string> losing(const Arena& arena) {
  const auto g = to_graph(arena);
  std::vector<bool> L(g.size());
  for (int s = 0; s < g.size(); ++s) L[s] = !g.safe[s];
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < g.size(); ++s) {
      if (L[s]) continue;
      bool all = true;
      for (const auto& a : g.out[s]) all = all && L[a.to];
      if (all) {
        L[s] = true;
        changed = true;
      }
    }
  }
  std::set<std::string> out;
  for (int s = 0; s < g.size(); ++s)
    if (L[s]) out.insert(g.id[s]);
  return out;
}

inline Adviser nominal(const Arena& arena) {
  const auto L = losing(arena);
  Adviser alpha;
  for (adviser::StateIndex s = 0; s < arena.size(); ++s) {
    if (arena.owner(s) != Owner::adversary) continue;
    auto& f = alpha.forbidden[arena.id(s)];
    for (auto e : arena.out_edges(s)) {
      const auto& edge = arena.edge(e);
      if (!arena.state(s).safe || L.contains(arena.id(edge.to))) f.insert(edge.input);
    }
  }
  return alpha;
}

// Restriction and pruning: drop forbidden adversary arcs, repeatedly kill
// states without live successors, then keep what is reachable from init.
inline std::optional<Graph> restricted(const Arena& arena, const Adviser& alpha) {
  auto g = to_graph(arena);
  for (int s = 0; s < g.size(); ++s) {
    if (g.protagonist[s]) continue;
    std::erase_if(g.out[s], [&](const Graph::Arc& a) { return alpha.forbids(g.id[s], a.input); });
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < g.size(); ++s) {
      if (!g.alive[s]) continue;
      const bool any = std::any_of(g.out[s].begin(), g.out[s].end(), [&](const auto& a) { return g.alive[a.to]; });
      if (!any) {
        g.alive[s] = false;
        changed = true;
      }
    }
  }
  if (!g.alive[g.init]) return std::nullopt;
  for (int s = 0; s < g.size(); ++s) std::erase_if(g.out[s], [&](const auto& a) { return !g.alive[a.to]; });
  std::vector<bool> seen(g.size());
  std::vector<int> stack{g.init};
  seen[g.init] = true;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (const auto& a : g.out[s])
      if (!seen[a.to]) {
        seen[a.to] = true;
        stack.push_back(a.to);
      }
  }
  for (int s = 0; s < g.size(); ++s) {
    if (!seen[s]) {
      g.alive[s] = false;
      g.out[s].clear();
    }
  }
  return g;
}

inline std::set<std::string> alive_ids(const Graph& g) {
  std::set<std::string> out;
  for (int s = 0; s < g.size(); ++s)
    if (g.alive[s]) out.insert(g.id[s]);
  return out;
}

// All memoryless protagonist choices (index into out[s]) over live states.
inline void for_each_strategy(const Graph& g, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> owners;
  for (int s = 0; s < g.size(); ++s)
    if (g.alive[s] && g.protagonist[s] && !g.out[s].empty()) owners.push_back(s);
  std::vector<int> choice(g.size(), 0);
  while (true) {
    f(choice);
    std::size_t k = 0;
    for (; k < owners.size(); ++k) {
      const int s = owners[k];
      if (++choice[s] < static_cast<int>(g.out[s].size())) break;
      choice[s] = 0;
    }
    if (k == owners.size()) return;
  }
}

inline std::vector<std::vector<int>> fixed_successors(const Graph& g, const std::vector<int>& choice) {
  std::vector<std::vector<int>> succ(g.size());
  for (int s = 0; s < g.size(); ++s) {
    if (!g.alive[s] || g.out[s].empty()) continue;
    if (g.protagonist[s]) {
      succ[s].push_back(choice[s]);
    } else {
      for (int i = 0; i < static_cast<int>(g.out[s].size()); ++i) succ[s].push_back(i);
    }
  }
  return succ;
}

inline std::vector<bool> reachable_from(const Graph& g, const std::vector<std::vector<int>>& succ, int from) {
  std::vector<bool> seen(g.size());
  std::vector<int> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int i : succ[s]) {
      const int t = g.out[s][i].to;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return seen;
}

struct Cycle {
  std::vector<int> states;
  Rational mean;  // per edge
};

// Every simple cycle of the graph restricted to `succ`, each reported once
// from its smallest state.
inline std::vector<Cycle> simple_cycles(const Graph& g, const std::vector<std::vector<int>>& succ) {
  std::vector<Cycle> cycles;
  std::vector<int> path;
  std::vector<std::int64_t> sums{0};
  std::vector<bool> on(g.size());
  std::function<void(int, int)> dfs = [&](int start, int s) {
    for (int i : succ[s]) {
      const auto& arc = g.out[s][i];
      if (arc.to < start) continue;
      if (arc.to == start) {
        const auto total = sums.back() + arc.weight;
        cycles.push_back({path, Rational(total, static_cast<std::int64_t>(path.size()))});
      } else if (!on[arc.to]) {
        on[arc.to] = true;
        path.push_back(arc.to);
        sums.push_back(sums.back() + arc.weight);
        dfs(start, arc.to);
        sums.pop_back();
        path.pop_back();
        on[arc.to] = false;
      }
    }
  };
  for (int start = 0; start < g.size(); ++start) {
    if (!g.alive[start]) continue;
    path = {start};
    sums = {0};
    on.assign(g.size(), false);
    on[start] = true;
    dfs(start, start);
  }
  return cycles;
}

// Per-edge value of the mean-payoff game at every state: the protagonist
// maximizes over memoryless strategies the worst reachable cycle mean.
inline std::vector<Rational> meanpayoff_values(const Graph& g) {
  std::vector<std::optional<Rational>> best(g.size());
  for_each_strategy(g, [&](const std::vector<int>& choice) {
    const auto succ = fixed_successors(g, choice);
    const auto cycles = simple_cycles(g, succ);
    for (int s = 0; s < g.size(); ++s) {
      if (!g.alive[s]) continue;
      const auto reach = reachable_from(g, succ, s);
      std::optional<Rational> worst;
      for (const auto& c : cycles) {
        if (!reach[c.states.front()]) continue;
        if (!worst || c.mean < *worst) worst = c.mean;
      }
      if (worst && (!best[s] || *worst > *best[s])) best[s] = *worst;
    }
  });
  std::vector<Rational> out(g.size());
  for (int s = 0; s < g.size(); ++s) out[s] = best[s].value_or(Rational(0));
  return out;
}

// Protagonist can keep every play inside Safe (classical safety fixpoint).
inline bool safety_winnable(const Graph& g) {
  std::vector<bool> W(g.size());
  for (int s = 0; s < g.size(); ++s) W[s] = g.alive[s] && g.safe[s];
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < g.size(); ++s) {
      if (!W[s]) continue;
      bool keep;
      if (g.protagonist[s]) {
        keep = std::any_of(g.out[s].begin(), g.out[s].end(), [&](const auto& a) { return W[a.to]; });
      } else {
        keep = std::all_of(g.out[s].begin(), g.out[s].end(), [&](const auto& a) { return W[a.to]; });
      }
      if (!keep) {
        W[s] = false;
        changed = true;
      }
    }
  }
  return W[g.init];
}

inline bool good(const Arena& arena, const Adviser& alpha) {
  const auto g = restricted(arena, alpha);
  return g && safety_winnable(*g);
}

// λ by exhaustion: over memoryless strategies that keep every reachable
// state safe, the smallest worst-case cycle average per round of the number
// of adversary inputs missing from the restricted graph.
inline std::optional<Rational> lambda(const Arena& arena, const Adviser& alpha) {
  auto g = restricted(arena, alpha);
  if (!g) return std::nullopt;
  const auto full = to_graph(arena);
  for (int s = 0; s < g->size(); ++s) {
    if (!g->protagonist[s]) continue;
    for (auto& a : g->out[s]) a.weight = static_cast<std::int64_t>(full.out[a.to].size() - g->out[a.to].size());
  }
  std::optional<Rational> best;
  for_each_strategy(*g, [&](const std::vector<int>& choice) {
    const auto succ = fixed_successors(*g, choice);
    const auto reach = reachable_from(*g, succ, g->init);
    for (int s = 0; s < g->size(); ++s)
      if (reach[s] && !g->safe[s]) return;
    std::optional<Rational> worst;
    for (const auto& c : simple_cycles(*g, succ)) {
      if (!reach[c.states.front()]) continue;
      const auto per_round = c.mean * Rational(2);
      if (!worst || per_round > *worst) worst = per_round;
    }
    if (worst && (!best || *worst < *best)) best = *worst;
  });
  return best;
}

// All adversary (state, input) pairs of the arena in edge order.
inline std::vector<std::pair<std::string, std::string>> adversary_pairs(const Arena& arena) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& e : arena.edges())
    if (arena.owner(e.from) == Owner::adversary) pairs.emplace_back(arena.id(e.from), e.input);
  return pairs;
}

inline Adviser adviser_from_mask(const Arena& arena, const std::vector<std::pair<std::string, std::string>>& pairs,
                                 std::uint64_t mask) {
  Adviser alpha = adviser::complete_adviser(arena, Adviser{});
  for (std::size_t b = 0; b < pairs.size(); ++b)
    if (mask >> b & 1U) alpha.forbid(pairs[b].first, pairs[b].second);
  return alpha;
}

}  // namespace testing_support
