#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "adviser/arena.hpp"
#include "adviser/meanpayoff.hpp"

namespace adviser {

struct DotOverlay {
  std::optional<Adviser> adviser;               // forbidden edges in red
  std::optional<std::set<std::string>> losing;  // Losing states outlined red
  std::optional<MemorylessStrategy> strategy;   // chosen edges in green
  std::optional<std::string> current;           // highlighted state
};

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

// Graphviz text. Protagonist states are boxes, adversary states circles,
// unsafe states filled blue and safe ones green.
inline std::string export_dot(const Arena& arena, const DotOverlay& overlay = {}) {
  if (overlay.adviser) check_adviser(arena, *overlay.adviser);
  if (overlay.losing)
    for (const auto& id : *overlay.losing) arena.index_of(id);
  if (overlay.strategy) {
    for (const auto& [state, input] : *overlay.strategy) {
      const auto s = arena.find(state);
      if (!s || arena.owner(*s) != Owner::protagonist) {
        throw Error(ErrorCode::invalid_strategy, "strategy names unknown protagonist state '" + state + "'");
      }
    }
  }
  if (overlay.current) arena.index_of(*overlay.current);

  std::ostringstream os;
  os << "digraph arena {\n";
  os << "  node [style=filled];\n";
  if (arena.has_initial()) {
    os << "  __start [shape=point];\n";
    os << "  __start -> " << detail::dot_quote(arena.id(arena.initial())) << ";\n";
  }
  for (const auto& rec : arena.states()) {
    os << "  " << detail::dot_quote(rec.id) << " [shape="
       << (rec.owner == Owner::protagonist ? "box" : "circle") << ", fillcolor="
       << (rec.safe ? "\"palegreen\"" : "\"lightblue\"");
    if (overlay.losing && overlay.losing->contains(rec.id)) os << ", color=\"red\", penwidth=2";
    if (overlay.current && *overlay.current == rec.id) os << ", peripheries=2, penwidth=3";
    os << "];\n";
  }
  for (const auto& edge : arena.edges()) {
    const auto& from = arena.id(edge.from);
    os << "  " << detail::dot_quote(from) << " -> " << detail::dot_quote(arena.id(edge.to)) << " [label="
       << detail::dot_quote(edge.input);
    if (overlay.adviser && arena.owner(edge.from) == Owner::adversary && overlay.adviser->forbids(from, edge.input)) {
      os << ", color=\"red\", fontcolor=\"red\"";
    } else if (overlay.strategy) {
      const auto it = overlay.strategy->find(from);
      if (it != overlay.strategy->end() && it->second == edge.input) os << ", color=\"green3\", penwidth=2";
    }
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace adviser
