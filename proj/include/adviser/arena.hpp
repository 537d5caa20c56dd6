#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "adviser/error.hpp"

namespace adviser {

enum class Owner { protagonist, adversary };

constexpr Owner opponent(Owner o) {
  return o == Owner::protagonist ? Owner::adversary : Owner::protagonist;
}

constexpr std::string_view owner_tag(Owner o) { return o == Owner::protagonist ? "p" : "a"; }

// The pass input. It is an ordinary label; no algorithm treats it specially.
inline const std::string pass_input = "ε_pass";

using StateIndex = std::size_t;
using EdgeIndex = std::size_t;

struct StateRecord {
  std::string id;
  Owner owner = Owner::protagonist;
  bool safe = true;
  std::string label;

  friend bool operator==(const StateRecord&, const StateRecord&) = default;
};

struct Edge {
  StateIndex from = 0;
  std::string input;
  StateIndex to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// A turn-based game graph. States and transitions keep insertion order, so
// everything computed from an arena is deterministic. The builder accepts
// malformed input (duplicate (state, input) pairs, non-alternating edges) so
// that validate() can report it.
class Arena {
 public:
  StateIndex add_state(StateRecord rec) {
    if (index_.contains(rec.id)) {
      throw Error(ErrorCode::semantic, "duplicate state id '" + rec.id + "'");
    }
    const auto idx = states_.size();
    index_.emplace(rec.id, idx);
    states_.push_back(std::move(rec));
    out_.emplace_back();
    in_.emplace_back();
    return idx;
  }

  StateIndex add_state(std::string id, Owner owner, bool safe = true, std::string label = {}) {
    return add_state(StateRecord{std::move(id), owner, safe, std::move(label)});
  }

  EdgeIndex add_transition(StateIndex from, std::string input, StateIndex to) {
    if (from >= states_.size() || to >= states_.size()) {
      throw Error(ErrorCode::unknown_state, "transition endpoint out of range");
    }
    declare_input(states_[from].owner, input);
    const auto idx = edges_.size();
    edges_.push_back(Edge{from, std::move(input), to});
    out_[from].push_back(idx);
    in_[to].push_back(idx);
    return idx;
  }

  EdgeIndex add_transition(std::string_view from, std::string input, std::string_view to) {
    return add_transition(index_of(from), std::move(input), index_of(to));
  }

  void set_initial(std::string_view id) { initial_ = index_of(id); }
  void set_initial(StateIndex idx) {
    if (idx >= states_.size()) throw Error(ErrorCode::unknown_state, "initial state out of range");
    initial_ = idx;
  }

  void declare_input(Owner owner, const std::string& input) {
    auto& inputs = owner == Owner::protagonist ? protagonist_inputs_ : adversary_inputs_;
    if (std::find(inputs.begin(), inputs.end(), input) == inputs.end()) inputs.push_back(input);
  }

  std::size_t size() const { return states_.size(); }
  std::size_t transition_count() const { return edges_.size(); }

  std::span<const StateRecord> states() const { return states_; }
  const StateRecord& state(StateIndex idx) const { return states_.at(idx); }
  const std::string& id(StateIndex idx) const { return states_.at(idx).id; }
  Owner owner(StateIndex idx) const { return states_.at(idx).owner; }

  std::optional<StateIndex> find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(std::string_view id) const { return find(id).has_value(); }

  StateIndex index_of(std::string_view id) const {
    if (auto idx = find(id)) return *idx;
    throw Error(ErrorCode::unknown_state, "unknown state '" + std::string(id) + "'");
  }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
  std::span<const EdgeIndex> out_edges(StateIndex idx) const { return out_.at(idx); }
  std::span<const EdgeIndex> in_edges(StateIndex idx) const { return in_.at(idx); }

  bool has_initial() const { return initial_.has_value(); }
  StateIndex initial() const {
    if (!initial_) throw Error(ErrorCode::precondition, "arena has no initial state");
    return *initial_;
  }

  const std::vector<std::string>& protagonist_inputs() const { return protagonist_inputs_; }
  const std::vector<std::string>& adversary_inputs() const { return adversary_inputs_; }

  // First successor of `from` under `input`, if the transition exists.
  std::optional<StateIndex> successor(StateIndex from, std::string_view input) const {
    for (auto e : out_.at(from)) {
      if (edges_[e].input == input) return edges_[e].to;
    }
    return std::nullopt;
  }

  // Sub-arena on the kept states and edges. Input alphabets carry over.
  Arena subarena(const std::vector<char>& keep_state, const std::vector<char>& keep_edge) const {
    Arena out;
    out.protagonist_inputs_ = protagonist_inputs_;
    out.adversary_inputs_ = adversary_inputs_;
    std::vector<StateIndex> remap(states_.size(), static_cast<StateIndex>(-1));
    for (StateIndex s = 0; s < states_.size(); ++s) {
      if (keep_state[s]) remap[s] = out.add_state(states_[s]);
    }
    for (EdgeIndex e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (keep_edge[e] && keep_state[edge.from] && keep_state[edge.to]) {
        out.add_transition(remap[edge.from], edge.input, remap[edge.to]);
      }
    }
    if (initial_ && keep_state[*initial_]) out.initial_ = remap[*initial_];
    return out;
  }

  friend bool operator==(const Arena& a, const Arena& b) {
    return a.states_ == b.states_ && a.edges_ == b.edges_ && a.initial_ == b.initial_ &&
           a.protagonist_inputs_ == b.protagonist_inputs_ &&
           a.adversary_inputs_ == b.adversary_inputs_;
  }

 private:
  std::vector<StateRecord> states_;
  std::unordered_map<std::string, StateIndex> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::optional<StateIndex> initial_;
  std::vector<std::string> protagonist_inputs_;
  std::vector<std::string> adversary_inputs_;
};

using InputSet = std::set<std::string, std::less<>>;

// Forbidden adversary inputs per adversary state. A missing key and an empty
// set both mean nothing is forbidden there; advisers produced by the library
// carry an entry for every adversary state.
struct Adviser {
  std::map<std::string, InputSet, std::less<>> forbidden;

  const InputSet& at(std::string_view state) const {
    static const InputSet empty;
    const auto it = forbidden.find(state);
    return it == forbidden.end() ? empty : it->second;
  }
  bool has_entry(std::string_view state) const { return forbidden.find(state) != forbidden.end(); }
  bool forbids(std::string_view state, std::string_view input) const {
    const auto& set = at(state);
    return set.find(input) != set.end();
  }
  std::size_t count_at(std::string_view state) const { return at(state).size(); }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [_, set] : forbidden) n += set.size();
    return n;
  }
  void forbid(const std::string& state, const std::string& input) { forbidden[state].insert(input); }

  friend bool operator==(const Adviser&, const Adviser&) = default;
  friend auto operator<=>(const Adviser& a, const Adviser& b) { return a.forbidden <=> b.forbidden; }
};

// A finite play prefix: state ids starting at the initial state.
struct PlayPrefix {
  std::vector<std::string> states;

  bool conforms_to(const Arena& arena) const {
    if (states.empty() || !arena.has_initial()) return false;
    if (states.front() != arena.id(arena.initial())) return false;
    std::optional<StateIndex> prev;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto idx = arena.find(states[i]);
      if (!idx) return false;
      const Owner expected = i % 2 == 0 ? Owner::protagonist : Owner::adversary;
      if (arena.owner(*idx) != expected) return false;
      if (prev) {
        const auto out = arena.out_edges(*prev);
        const bool linked = std::any_of(out.begin(), out.end(),
                                        [&](EdgeIndex e) { return arena.edge(e).to == *idx; });
        if (!linked) return false;
      }
      prev = idx;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Validation

enum class Severity { error, warning };

struct Violation {
  Severity severity = Severity::error;
  std::string rule;
  std::string subject;
  std::string message;
};

inline std::vector<Violation> validate(const Arena& arena, bool strict = false) {
  std::vector<Violation> report;
  auto error = [&](std::string rule, std::string subject, std::string message) {
    report.push_back({Severity::error, std::move(rule), std::move(subject), std::move(message)});
  };

  if (!arena.has_initial()) {
    error("initial_missing", "", "no initial state");
  } else if (arena.owner(arena.initial()) != Owner::protagonist) {
    error("initial_not_protagonist", arena.id(arena.initial()), "initial not protagonist");
  }

  for (const auto& edge : arena.edges()) {
    const auto& from = arena.state(edge.from);
    const auto& to = arena.state(edge.to);
    const auto subject = from.id + " -" + edge.input + "-> " + to.id;
    if (from.owner == to.owner) {
      error("alternation", subject, "transition connects two " +
                                        std::string(from.owner == Owner::protagonist ? "protagonist" : "adversary") +
                                        " states");
    }
    const auto& inputs = from.owner == Owner::protagonist ? arena.protagonist_inputs() : arena.adversary_inputs();
    if (std::find(inputs.begin(), inputs.end(), edge.input) == inputs.end()) {
      error("input_owner", subject, "input not in the owner's input set");
    }
  }

  for (StateIndex s = 0; s < arena.size(); ++s) {
    std::map<std::string, std::size_t, std::less<>> seen;
    for (auto e : arena.out_edges(s)) {
      const auto& edge = arena.edge(e);
      if (++seen[edge.input] == 2) {
        error("partial_function", arena.id(s) + " " + edge.input,
              "input '" + edge.input + "' has more than one target at " + arena.id(s));
      }
    }
  }

  if (strict) {
    for (StateIndex t = 0; t < arena.size(); ++t) {
      const auto in = arena.in_edges(t);
      if (in.size() < 2) continue;
      std::string pairs;
      for (auto e : in) {
        const auto& edge = arena.edge(e);
        if (!pairs.empty()) pairs += ", ";
        pairs += "(" + arena.id(edge.from) + "," + edge.input + ")";
      }
      report.push_back({Severity::warning, "injectivity", arena.id(t),
                        "target " + arena.id(t) + " shared by " + pairs});
    }
  }
  return report;
}

inline bool has_errors(const std::vector<Violation>& report) {
  return std::any_of(report.begin(), report.end(),
                     [](const Violation& v) { return v.severity == Severity::error; });
}

// ---------------------------------------------------------------------------
// Structural operations

inline std::vector<std::string> enabled_inputs(const Arena& arena, StateIndex s) {
  std::vector<std::string> inputs;
  for (auto e : arena.out_edges(s)) {
    const auto& input = arena.edge(e).input;
    if (std::find(inputs.begin(), inputs.end(), input) == inputs.end()) inputs.push_back(input);
  }
  return inputs;
}

inline std::vector<std::string> enabled_inputs(const Arena& arena, std::string_view state) {
  return enabled_inputs(arena, arena.index_of(state));
}

// Splits every same-owner transition (s,u,s') into (s,u,m),(m,ε_pass,s') with a
// fresh opposite-owner state m named "<s>__via__<u>".
inline Arena alternation_transform(const Arena& raw) {
  Arena out;
  for (const auto& input : raw.protagonist_inputs()) out.declare_input(Owner::protagonist, input);
  for (const auto& input : raw.adversary_inputs()) out.declare_input(Owner::adversary, input);
  for (const auto& rec : raw.states()) out.add_state(rec);

  for (const auto& edge : raw.edges()) {
    const auto& from = raw.state(edge.from);
    const auto& to = raw.state(edge.to);
    if (from.owner != to.owner) {
      out.add_transition(edge.from, edge.input, edge.to);
      continue;
    }
    auto fresh_id = from.id + "__via__" + edge.input;
    if (out.contains(fresh_id)) {
      throw Error(ErrorCode::precondition, "cannot create fresh state '" + fresh_id + "': id already taken");
    }
    const auto mid = out.add_state(StateRecord{std::move(fresh_id), opponent(from.owner), from.safe, {}});
    out.add_transition(edge.from, edge.input, mid);
    out.add_transition(mid, pass_input, edge.to);
  }
  if (raw.has_initial()) out.set_initial(raw.initial());
  return out;
}

inline void check_adviser(const Arena& arena, const Adviser& alpha) {
  for (const auto& [state, inputs] : alpha.forbidden) {
    const auto idx = arena.find(state);
    if (!idx) throw Error(ErrorCode::invalid_adviser, "adviser names unknown state '" + state + "'");
    if (arena.owner(*idx) != Owner::adversary) {
      throw Error(ErrorCode::invalid_adviser, "adviser entry for protagonist state '" + state + "'");
    }
    const auto enabled = enabled_inputs(arena, *idx);
    for (const auto& input : inputs) {
      if (std::find(enabled.begin(), enabled.end(), input) == enabled.end()) {
        throw Error(ErrorCode::invalid_adviser,
                    "adviser forbids '" + input + "' which is not enabled at '" + state + "'");
      }
    }
  }
}

// Drops exactly the forbidden adversary transitions. May leave the arena blocking.
inline Arena restrict(const Arena& arena, const Adviser& alpha) {
  check_adviser(arena, alpha);
  std::vector<char> keep_state(arena.size(), 1);
  std::vector<char> keep_edge(arena.transition_count(), 1);
  for (EdgeIndex e = 0; e < arena.transition_count(); ++e) {
    const auto& edge = arena.edge(e);
    if (arena.owner(edge.from) == Owner::adversary && alpha.forbids(arena.id(edge.from), edge.input)) {
      keep_edge[e] = 0;
    }
  }
  return arena.subarena(keep_state, keep_edge);
}

struct PruneResult {
  Arena arena;
  std::vector<std::string> removed;
};

// Removes blocking states (no enabled input, or every successor blocking) and
// then everything unreachable from the initial state. Both removals keep the
// play set unchanged. Empty result means the initial state has no play.
inline std::optional<PruneResult> prune_blocking(const Arena& arena) {
  const auto n = arena.size();
  std::vector<std::size_t> live_succ(n, 0);
  std::vector<char> alive(n, 1);
  std::vector<StateIndex> work;
  for (StateIndex s = 0; s < n; ++s) {
    live_succ[s] = arena.out_edges(s).size();
    if (live_succ[s] == 0) {
      alive[s] = 0;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    const auto dead = work.back();
    work.pop_back();
    for (auto e : arena.in_edges(dead)) {
      const auto pred = arena.edge(e).from;
      if (alive[pred] && --live_succ[pred] == 0) {
        alive[pred] = 0;
        work.push_back(pred);
      }
    }
  }
  if (!arena.has_initial() || !alive[arena.initial()]) return std::nullopt;

  std::vector<char> reach(n, 0);
  reach[arena.initial()] = 1;
  work.push_back(arena.initial());
  while (!work.empty()) {
    const auto s = work.back();
    work.pop_back();
    for (auto e : arena.out_edges(s)) {
      const auto t = arena.edge(e).to;
      if (alive[t] && !reach[t]) {
        reach[t] = 1;
        work.push_back(t);
      }
    }
  }

  PruneResult result;
  std::vector<char> keep_edge(arena.transition_count(), 1);
  for (StateIndex s = 0; s < n; ++s) {
    if (!reach[s]) result.removed.push_back(arena.id(s));
  }
  result.arena = arena.subarena(reach, keep_edge);
  return result;
}

// T^α: the restricted arena with blocking and unreachable states removed.
inline std::optional<Arena> nonblocking_restricted(const Arena& arena, const Adviser& alpha) {
  auto pruned = prune_blocking(restrict(arena, alpha));
  if (!pruned) return std::nullopt;
  return std::move(pruned->arena);
}

}  // namespace adviser
