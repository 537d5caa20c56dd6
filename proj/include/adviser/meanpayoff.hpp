#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adviser/arena.hpp"
#include "adviser/rational.hpp"
#include "adviser/safety.hpp"

namespace adviser {

using MemorylessStrategy = std::map<std::string, std::string, std::less<>>;

// An arena with an integer weight on every transition (indexed like edges()).
struct WeightedArena {
  Arena base;
  std::vector<std::int64_t> weight;

  std::int64_t weight_of(std::string_view from, std::string_view input) const {
    const auto s = base.index_of(from);
    for (auto e : base.out_edges(s)) {
      if (base.edge(e).input == input) return weight[e];
    }
    throw Error(ErrorCode::precondition, "no transition " + std::string(from) + " -" + std::string(input) + "->");
  }
};

// Values are mean payoffs per round (one protagonist and one adversary move).
struct ValueReport {
  std::map<std::string, Rational, std::less<>> per_state;
  MemorylessStrategy strategy;
  MemorylessStrategy adversary_witness;
};

struct SolveOptions {
  // When false, skip the early certified exit and run the full fixed-horizon
  // iteration with rational rounding and edge-elimination strategy extraction.
  bool certify = true;
};

namespace detail {

struct GameEdge {
  std::size_t to;
  std::int64_t weight;
  EdgeIndex source;  // index into the originating arena
};

// Two-player graph; maximizer[s] marks protagonist states. Out-lists are in
// tie-break order.
struct Game {
  std::vector<char> maximizer;
  std::vector<std::vector<GameEdge>> out;

  std::size_t size() const { return out.size(); }
  std::int64_t max_abs_weight() const {
    std::int64_t w = 0;
    for (const auto& edges : out)
      for (const auto& e : edges) w = std::max(w, e.weight < 0 ? -e.weight : e.weight);
    return w;
  }
};

using Choice = std::vector<std::size_t>;  // position in out[s]

// Strongly connected components, sinks first (Tarjan, iterative).
inline std::vector<std::vector<std::size_t>> strongly_connected(const std::vector<std::vector<GameEdge>>& out) {
  const auto n = out.size();
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, unset), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;
  std::vector<std::pair<std::size_t, std::size_t>> frames;  // (node, next edge)

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < out[v].size()) {
        const auto w = out[v][next++].to;
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const auto done = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != done);
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

// Karp's maximum cycle mean restricted to one strongly connected component.
inline std::optional<Rational> karp_max_mean(const std::vector<std::vector<GameEdge>>& out,
                                             const std::vector<std::size_t>& comp,
                                             const std::vector<std::size_t>& comp_of, std::size_t comp_id) {
  const auto m = comp.size();
  std::vector<std::size_t> local(out.size(), 0);
  for (std::size_t i = 0; i < m; ++i) local[comp[i]] = i;

  bool has_cycle = false;
  for (auto v : comp)
    for (const auto& e : out[v])
      if (comp_of[e.to] == comp_id) has_cycle = true;
  if (!has_cycle) return std::nullopt;

  constexpr auto neg_inf = std::numeric_limits<std::int64_t>::min();
  // walks[k][v]: heaviest walk of exactly k edges ending at v, from anywhere.
  std::vector<std::vector<std::int64_t>> walks(m + 1, std::vector<std::int64_t>(m, neg_inf));
  std::fill(walks[0].begin(), walks[0].end(), 0);
  for (std::size_t k = 1; k <= m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      if (walks[k - 1][i] == neg_inf) continue;
      for (const auto& e : out[comp[i]]) {
        if (comp_of[e.to] != comp_id) continue;
        auto& slot = walks[k][local[e.to]];
        slot = std::max(slot, walks[k - 1][i] + e.weight);
      }
    }
  }

  std::optional<Rational> best;
  for (std::size_t v = 0; v < m; ++v) {
    if (walks[m][v] == neg_inf) continue;
    std::optional<Rational> worst;
    for (std::size_t k = 0; k < m; ++k) {
      if (walks[k][v] == neg_inf) continue;
      Rational r(walks[m][v] - walks[k][v], static_cast<std::int64_t>(m - k));
      if (!worst || r < *worst) worst = r;
    }
    if (worst && (!best || *worst > *best)) best = worst;
  }
  return best;
}

// One-player mean payoff per edge: the best cycle mean reachable from each
// state, maximizing or minimizing. Every state must have a successor.
inline std::vector<Rational> one_player_values(std::vector<std::vector<GameEdge>> out, bool maximize) {
  if (!maximize)
    for (auto& edges : out)
      for (auto& e : edges) e.weight = -e.weight;

  const auto components = strongly_connected(out);
  std::vector<std::size_t> comp_of(out.size(), 0);
  for (std::size_t c = 0; c < components.size(); ++c)
    for (auto v : components[c]) comp_of[v] = c;

  std::vector<std::optional<Rational>> comp_value(components.size());
  for (std::size_t c = 0; c < components.size(); ++c) {
    auto best = karp_max_mean(out, components[c], comp_of, c);
    for (auto v : components[c]) {
      for (const auto& e : out[v]) {
        const auto d = comp_of[e.to];
        if (d == c || !comp_value[d]) continue;
        if (!best || *comp_value[d] > *best) best = comp_value[d];
      }
    }
    comp_value[c] = best;
  }

  std::vector<Rational> values(out.size());
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (!comp_value[comp_of[v]]) throw Error(ErrorCode::precondition, "one-player graph has a dead end");
    values[v] = maximize ? *comp_value[comp_of[v]] : -*comp_value[comp_of[v]];
  }
  return values;
}

// Fixes the choices of one side and returns the graph left to the other.
inline std::vector<std::vector<GameEdge>> fix_side(const Game& game, const Choice& choice, bool fix_maximizer) {
  auto out = game.out;
  for (std::size_t s = 0; s < game.size(); ++s) {
    if (static_cast<bool>(game.maximizer[s]) == fix_maximizer) out[s] = {game.out[s][choice[s]]};
  }
  return out;
}

struct GameSolution {
  std::vector<Rational> value;  // per edge
  Choice choice;                // both players' optimal positional choices
};

inline Choice greedy_choice(const Game& game, const std::vector<std::int64_t>& prev) {
  Choice choice(game.size(), 0);
  for (std::size_t s = 0; s < game.size(); ++s) {
    const bool maximize = game.maximizer[s];
    for (std::size_t i = 1; i < game.out[s].size(); ++i) {
      const auto& cand = game.out[s][i];
      const auto& cur = game.out[s][choice[s]];
      const auto a = cand.weight + prev[cand.to];
      const auto b = cur.weight + prev[cur.to];
      if (maximize ? a > b : a < b) choice[s] = i;
    }
  }
  return choice;
}

inline void iterate_once(const Game& game, const std::vector<std::int64_t>& prev, std::vector<std::int64_t>& next) {
  for (std::size_t s = 0; s < game.size(); ++s) {
    const bool maximize = game.maximizer[s];
    std::int64_t best = 0;
    bool first = true;
    for (const auto& e : game.out[s]) {
      const auto v = e.weight + prev[e.to];
      if (first || (maximize ? v > best : v < best)) best = v;
      first = false;
    }
    next[s] = best;
  }
}

// Horizon after which k-step values pin down the exact mean payoff.
inline std::int64_t exact_horizon(const Game& game) {
  const auto n = static_cast<std::int64_t>(game.size());
  return 4 * n * n * n * std::max<std::int64_t>(game.max_abs_weight(), 1) + 1;
}

// Exact per-edge values by fixed-horizon value iteration and rounding to the
// unique rational with denominator at most n in the error window.
inline std::vector<Rational> horizon_values(const Game& game) {
  const auto n = static_cast<std::int64_t>(game.size());
  const auto w = game.max_abs_weight();
  if (w == 0) return std::vector<Rational>(game.size(), Rational(0));
  const auto horizon = exact_horizon(game);
  std::vector<std::int64_t> prev(game.size(), 0), next(game.size(), 0);
  for (std::int64_t k = 0; k < horizon; ++k) {
    iterate_once(game, prev, next);
    std::swap(prev, next);
  }
  std::vector<Rational> values(game.size());
  const __int128 slack = static_cast<__int128>(2) * n * w;
  for (std::size_t s = 0; s < game.size(); ++s) {
    const __int128 total = prev[s];
    bool found = false;
    for (std::int64_t d = 1; d <= n && !found; ++d) {
      const __int128 scaled = total * d;
      __int128 num = scaled / horizon;
      for (__int128 cand = num - 1; cand <= num + 1; ++cand) {
        __int128 diff = cand * horizon - scaled;
        if (diff < 0) diff = -diff;
        if (diff <= slack * d) {
          values[s] = Rational(static_cast<std::int64_t>(cand), d);
          found = true;
          break;
        }
      }
    }
    if (!found) throw Error(ErrorCode::precondition, "value rounding failed");
  }
  return values;
}

// Picks positional choices for one side by eliminating its edges while the
// value vector stays put; the other side keeps all its options, so the result
// is optimal against every opponent. Slow (one exact solve per candidate edge)
// but needs no certificate.
inline void eliminate_choices(const Game& game, const std::vector<Rational>& values, bool maximizer, Choice& choice) {
  Game work = game;
  for (std::size_t s = 0; s < game.size(); ++s) {
    if (static_cast<bool>(game.maximizer[s]) != maximizer || game.out[s].size() == 1) continue;
    bool fixed = false;
    for (std::size_t i = 0; i < game.out[s].size() && !fixed; ++i) {
      Game trial = work;
      trial.out[s] = {game.out[s][i]};
      if (horizon_values(trial) == values) {
        work = std::move(trial);
        choice[s] = i;
        fixed = true;
      }
    }
    if (!fixed) throw Error(ErrorCode::precondition, "no value-preserving choice found");
  }
}

inline GameSolution solve_game(const Game& game, const SolveOptions& options) {
  const auto n = game.size();
  for (std::size_t s = 0; s < n; ++s) {
    if (game.out[s].empty()) throw Error(ErrorCode::precondition, "mean-payoff game is blocking");
  }
  if (options.certify) {
    const auto horizon = exact_horizon(game);
    std::vector<std::int64_t> prev(n, 0), next(n, 0);
    std::int64_t checkpoint = 1;
    for (std::int64_t k = 1; k <= horizon; ++k) {
      if (k == checkpoint || k == horizon) {
        auto choice = greedy_choice(game, prev);
        auto lower = one_player_values(fix_side(game, choice, true), false);
        auto upper = one_player_values(fix_side(game, choice, false), true);
        if (lower == upper) return GameSolution{std::move(lower), std::move(choice)};
        checkpoint *= 2;
      }
      iterate_once(game, prev, next);
      std::swap(prev, next);
    }
  }
  auto values = horizon_values(game);
  Choice choice(n, 0);
  eliminate_choices(game, values, true, choice);
  eliminate_choices(game, values, false, choice);
  return GameSolution{std::move(values), std::move(choice)};
}

inline Game to_game(const WeightedArena& weighted) {
  const auto& arena = weighted.base;
  Game game;
  game.maximizer.resize(arena.size());
  game.out.resize(arena.size());
  for (StateIndex s = 0; s < arena.size(); ++s) {
    game.maximizer[s] = arena.owner(s) == Owner::protagonist;
    std::vector<EdgeIndex> edges(arena.out_edges(s).begin(), arena.out_edges(s).end());
    std::stable_sort(edges.begin(), edges.end(),
                     [&](EdgeIndex a, EdgeIndex b) { return arena.edge(a).input < arena.edge(b).input; });
    for (auto e : edges) game.out[s].push_back(GameEdge{arena.edge(e).to, weighted.weight.at(e), e});
  }
  return game;
}

}  // namespace detail

// Def.-4 weights: protagonist move into s_a costs |α(s_a)|, adversary moves are free.
inline WeightedArena build_meanpayoff(const Arena& restricted, const Adviser& alpha) {
  WeightedArena weighted{restricted, std::vector<std::int64_t>(restricted.transition_count(), 0)};
  for (StateIndex s = 0; s < restricted.size(); ++s) {
    if (restricted.owner(s) == Owner::adversary && !alpha.has_entry(restricted.id(s))) {
      throw Error(ErrorCode::invalid_adviser, "adviser has no entry for adversary state '" + restricted.id(s) + "'");
    }
  }
  for (EdgeIndex e = 0; e < restricted.transition_count(); ++e) {
    const auto& edge = restricted.edge(e);
    if (restricted.owner(edge.from) == Owner::protagonist) {
      weighted.weight[e] = -static_cast<std::int64_t>(alpha.count_at(restricted.id(edge.to)));
    }
  }
  return weighted;
}

inline ValueReport solve(const WeightedArena& weighted, const SolveOptions& options = {}) {
  const auto game = detail::to_game(weighted);
  const auto solution = detail::solve_game(game, options);
  const auto& arena = weighted.base;
  ValueReport report;
  for (StateIndex s = 0; s < arena.size(); ++s) {
    report.per_state.emplace(arena.id(s), solution.value[s] * Rational(2));
    const auto& input = arena.edge(game.out[s][solution.choice[s]].source).input;
    if (arena.owner(s) == Owner::protagonist) {
      report.strategy.emplace(arena.id(s), input);
    } else {
      report.adversary_witness.emplace(arena.id(s), input);
    }
  }
  return report;
}

// Copy of α with an explicit (possibly empty) entry for every adversary state.
inline Adviser complete_adviser(const Arena& arena, Adviser alpha) {
  for (StateIndex s = 0; s < arena.size(); ++s) {
    if (arena.owner(s) == Owner::adversary) alpha.forbidden.try_emplace(arena.id(s));
  }
  return alpha;
}

// What the adversary is actually denied in T^α: α's forbidden inputs plus
// any input whose target was pruned as blocking. Pruning can cut an input α
// left open, and such a cut restricts the adversary just as much as a
// forbidden input, so λ charges for it.
inline Adviser effective_adviser(const Arena& arena, const Arena& restricted, const Adviser& alpha) {
  auto effective = complete_adviser(arena, alpha);
  for (StateIndex s = 0; s < restricted.size(); ++s) {
    if (restricted.owner(s) != Owner::adversary) continue;
    const auto& id = restricted.id(s);
    for (auto e : arena.out_edges(arena.index_of(id))) {
      const auto& input = arena.edge(e).input;
      if (!restricted.successor(s, input)) effective.forbid(id, input);
    }
  }
  return effective;
}

struct Evaluation {
  Arena restricted;  // T^α
  Arena playable;    // T^α cut down to the protagonist's safe region
  ValueReport report;
  Rational lambda;
};

// Solves the limitation game of a good adviser. For α ⊇ α⁰ the playable arena
// is T^α itself; for other advisers the protagonist is confined to its winning
// region, since λ only ranges over winning strategies.
inline Evaluation evaluate(const Arena& arena, const Adviser& alpha, const SolveOptions& options = {}) {
  auto restricted = nonblocking_restricted(arena, alpha);
  if (!restricted) throw Error(ErrorCode::not_good, "adviser leaves no play from the initial state");
  auto playable = winning_subarena(*restricted);
  if (!playable) throw Error(ErrorCode::not_good, "protagonist cannot stay safe under this adviser");
  auto report = solve(build_meanpayoff(*playable, effective_adviser(arena, *restricted, alpha)), options);
  const auto lambda = -report.per_state.at(playable->id(playable->initial()));
  return Evaluation{std::move(*restricted), std::move(*playable), std::move(report), lambda};
}

inline Rational lambda(const Arena& arena, const Adviser& alpha) { return evaluate(arena, alpha).lambda; }

// Worst-case long-run number of denied inputs per adversary visit when the
// protagonist commits to σ inside T^α.
inline Rational gamma(const Arena& arena, const Adviser& alpha, const MemorylessStrategy& sigma) {
  auto restricted = nonblocking_restricted(arena, alpha);
  if (!restricted) throw Error(ErrorCode::not_good, "adviser leaves no play from the initial state");
  const auto& t = *restricted;
  const auto effective = effective_adviser(arena, t, alpha);
  std::vector<std::vector<detail::GameEdge>> out(t.size());
  for (StateIndex s = 0; s < t.size(); ++s) {
    if (t.owner(s) == Owner::protagonist) {
      const auto it = sigma.find(t.id(s));
      if (it == sigma.end()) {
        throw Error(ErrorCode::invalid_strategy, "strategy has no choice at '" + t.id(s) + "'");
      }
      bool found = false;
      for (auto e : t.out_edges(s)) {
        const auto& edge = t.edge(e);
        if (edge.input == it->second) {
          out[s].push_back({edge.to, static_cast<std::int64_t>(effective.count_at(t.id(edge.to))), e});
          found = true;
          break;
        }
      }
      if (!found) {
        throw Error(ErrorCode::invalid_strategy,
                    "strategy selects '" + it->second + "' which is not enabled at '" + t.id(s) + "'");
      }
    } else {
      for (auto e : t.out_edges(s)) out[s].push_back({t.edge(e).to, 0, e});
    }
  }
  const auto values = detail::one_player_values(std::move(out), true);
  return values[t.initial()] * Rational(2);
}

}  // namespace adviser
