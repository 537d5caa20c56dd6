#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "adviser/arena.hpp"
#include "adviser/guided.hpp"
#include "adviser/meanpayoff.hpp"
#include "adviser/search.hpp"

namespace adviser {

inline constexpr int document_version = 1;

// Line-oriented arena document:
//
//   arena 1
//   inputs p u_p1 u_p2          (optional; fixes alphabet order)
//   inputs a u_a1
//   state s1 p safe init [label free text...]
//   transition s1 u_p1 s2
//
// Blank lines and lines starting with '#' are ignored.
class DocumentError : public Error {
 public:
  DocumentError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    tokens.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return tokens;
}

// Calls fn(line_no, tokens, raw_line) for every meaningful line.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    ++line_no;
    auto tokens = tokenize(line);
    if (!tokens.empty() && tokens.front().text[0] != '#') fn(line_no, tokens, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

inline void expect_header(const std::vector<Token>& tokens, std::size_t line, std::string_view kind) {
  if (tokens[0].text != kind) {
    throw DocumentError(ErrorCode::syntax, line, tokens[0].column,
                        "expected '" + std::string(kind) + " " + std::to_string(document_version) + "' header");
  }
  if (tokens.size() != 2 || tokens[1].text != std::to_string(document_version)) {
    throw DocumentError(ErrorCode::syntax, line, tokens.size() > 1 ? tokens[1].column : tokens[0].column,
                        "unsupported " + std::string(kind) + " document version");
  }
}

}  // namespace detail

inline Arena parse_arena(std::string_view text) {
  Arena arena;
  bool header = false;
  std::optional<std::pair<std::string, std::size_t>> init;
  std::size_t last_line = 0;

  detail::for_each_record(text, [&](std::size_t line, const std::vector<detail::Token>& t, std::string_view raw) {
    last_line = line;
    if (!header) {
      detail::expect_header(t, line, "arena");
      header = true;
      return;
    }
    const auto& kind = t[0].text;
    if (kind == "inputs") {
      if (t.size() < 2 || (t[1].text != "p" && t[1].text != "a")) {
        throw DocumentError(ErrorCode::syntax, line, t.size() > 1 ? t[1].column : t[0].column,
                            "inputs record needs owner tag 'p' or 'a'");
      }
      const auto owner = t[1].text == "p" ? Owner::protagonist : Owner::adversary;
      for (std::size_t i = 2; i < t.size(); ++i) arena.declare_input(owner, t[i].text);
    } else if (kind == "state") {
      if (t.size() < 4) throw DocumentError(ErrorCode::syntax, line, t[0].column, "state record needs id, owner and safety");
      StateRecord rec;
      rec.id = t[1].text;
      if (t[2].text == "p") {
        rec.owner = Owner::protagonist;
      } else if (t[2].text == "a") {
        rec.owner = Owner::adversary;
      } else {
        throw DocumentError(ErrorCode::syntax, line, t[2].column, "unknown owner tag '" + t[2].text + "'");
      }
      if (t[3].text == "safe") {
        rec.safe = true;
      } else if (t[3].text == "unsafe") {
        rec.safe = false;
      } else {
        throw DocumentError(ErrorCode::syntax, line, t[3].column, "expected 'safe' or 'unsafe'");
      }
      std::size_t i = 4;
      bool is_init = false;
      if (i < t.size() && t[i].text == "init") {
        is_init = true;
        ++i;
      }
      if (i < t.size()) {
        if (t[i].text != "label") {
          throw DocumentError(ErrorCode::syntax, line, t[i].column, "unexpected token '" + t[i].text + "'");
        }
        if (i + 1 < t.size()) rec.label = std::string(raw.substr(t[i + 1].column - 1));
        while (!rec.label.empty() && (rec.label.back() == '\r' || rec.label.back() == ' ')) rec.label.pop_back();
      }
      try {
        arena.add_state(rec);
      } catch (const Error& e) {
        throw DocumentError(ErrorCode::semantic, line, t[1].column, e.what());
      }
      if (is_init) {
        if (init) {
          throw DocumentError(ErrorCode::semantic, line, t[4].column,
                              "second init state '" + rec.id + "' (first was '" + init->first + "' on line " +
                                  std::to_string(init->second) + ")");
        }
        init = {rec.id, line};
      }
    } else if (kind == "transition") {
      if (t.size() != 4) throw DocumentError(ErrorCode::syntax, line, t[0].column, "transition record needs from, input, to");
      for (std::size_t i : {std::size_t{1}, std::size_t{3}}) {
        if (!arena.contains(t[i].text)) {
          throw DocumentError(ErrorCode::semantic, line, t[i].column, "unknown state '" + t[i].text + "'");
        }
      }
      arena.add_transition(t[1].text, t[2].text, t[3].text);
    } else {
      throw DocumentError(ErrorCode::syntax, line, t[0].column, "unknown record '" + kind + "'");
    }
  });

  if (!header) throw DocumentError(ErrorCode::syntax, 1, 1, "empty document");
  if (!init) throw DocumentError(ErrorCode::semantic, last_line, 1, "no init state");
  arena.set_initial(init->first);
  return arena;
}

inline std::string serialize_arena(const Arena& arena) {
  std::ostringstream os;
  os << "arena " << document_version << "\n";
  auto inputs = [&](std::string_view tag, const std::vector<std::string>& list) {
    if (list.empty()) return;
    os << "inputs " << tag;
    for (const auto& u : list) os << ' ' << u;
    os << "\n";
  };
  inputs("p", arena.protagonist_inputs());
  inputs("a", arena.adversary_inputs());
  for (StateIndex s = 0; s < arena.size(); ++s) {
    const auto& rec = arena.state(s);
    os << "state " << rec.id << ' ' << owner_tag(rec.owner) << ' ' << (rec.safe ? "safe" : "unsafe");
    if (arena.has_initial() && arena.initial() == s) os << " init";
    if (!rec.label.empty()) os << " label " << rec.label;
    os << "\n";
  }
  for (const auto& edge : arena.edges()) {
    os << "transition " << arena.id(edge.from) << ' ' << edge.input << ' ' << arena.id(edge.to) << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Adviser and strategy documents

inline std::string serialize_adviser(const Adviser& alpha) {
  std::ostringstream os;
  os << "adviser " << document_version << "\n";
  for (const auto& [state, inputs] : alpha.forbidden) {
    os << "forbid " << state;
    for (const auto& u : inputs) os << ' ' << u;
    os << "\n";
  }
  return os.str();
}

inline Adviser parse_adviser(std::string_view text) {
  Adviser alpha;
  bool header = false;
  detail::for_each_record(text, [&](std::size_t line, const std::vector<detail::Token>& t, std::string_view) {
    if (!header) {
      detail::expect_header(t, line, "adviser");
      header = true;
      return;
    }
    if (t[0].text != "forbid" || t.size() < 2) {
      throw DocumentError(ErrorCode::syntax, line, t[0].column, "expected 'forbid <state> <input>...'");
    }
    auto& entry = alpha.forbidden[t[1].text];
    for (std::size_t i = 2; i < t.size(); ++i) entry.insert(t[i].text);
  });
  if (!header) throw DocumentError(ErrorCode::syntax, 1, 1, "empty document");
  return alpha;
}

inline std::string serialize_strategy(const MemorylessStrategy& sigma) {
  std::ostringstream os;
  os << "strategy " << document_version << "\n";
  for (const auto& [state, input] : sigma) os << "choose " << state << ' ' << input << "\n";
  return os.str();
}

inline MemorylessStrategy parse_strategy(std::string_view text) {
  MemorylessStrategy sigma;
  bool header = false;
  detail::for_each_record(text, [&](std::size_t line, const std::vector<detail::Token>& t, std::string_view) {
    if (!header) {
      detail::expect_header(t, line, "strategy");
      header = true;
      return;
    }
    if (t[0].text != "choose" || t.size() != 3) {
      throw DocumentError(ErrorCode::syntax, line, t[0].column, "expected 'choose <state> <input>'");
    }
    if (!sigma.emplace(t[1].text, t[2].text).second) {
      throw DocumentError(ErrorCode::semantic, line, t[1].column, "second choice for '" + t[1].text + "'");
    }
  });
  if (!header) throw DocumentError(ErrorCode::syntax, 1, 1, "empty document");
  return sigma;
}

// ---------------------------------------------------------------------------
// Bundle document (write-only)

inline std::string serialize_bundle(const SolveBundle& bundle) {
  std::ostringstream os;
  os << "bundle " << document_version << "\n";
  for (const auto& choice : bundle.free_choices) os << "free " << choice.state << ' ' << choice.input << "\n";
  os << "generated " << bundle.generated << "\n";
  os << "truncated " << (bundle.truncated ? "yes" : "no") << "\n";
  if (bundle.best_index) os << "best " << *bundle.best_index << "\n";
  for (std::size_t i = 0; i < bundle.candidates.size(); ++i) {
    const auto& rec = bundle.candidates[i];
    os << "candidate " << i << ' ' << (rec.good ? "good" : "bad");
    if (rec.lambda) os << " lambda " << rec.lambda->str();
    if (i == 0) os << " nominal";
    os << "\n";
    for (const auto& [state, inputs] : rec.adviser.forbidden) {
      os << "forbid " << state;
      for (const auto& u : inputs) os << ' ' << u;
      os << "\n";
    }
    if (rec.strategy)
      for (const auto& [state, input] : *rec.strategy) os << "choose " << state << ' ' << input << "\n";
    if (rec.per_state_value)
      for (const auto& [state, v] : *rec.per_state_value) os << "value " << state << ' ' << v.str() << "\n";
    os << "end\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Move scripts: one move per line, "p <input>" / "a <input>", or a bare input
// meaning an adversary move.

struct ScriptMove {
  std::optional<Owner> actor;
  std::string input;

  friend bool operator==(const ScriptMove&, const ScriptMove&) = default;
};

inline std::vector<ScriptMove> parse_script(std::string_view text) {
  std::vector<ScriptMove> moves;
  detail::for_each_record(text, [&](std::size_t line, const std::vector<detail::Token>& t, std::string_view) {
    if (t.size() == 1) {
      moves.push_back({Owner::adversary, t[0].text});
    } else if (t.size() == 2 && (t[0].text == "p" || t[0].text == "a")) {
      moves.push_back({t[0].text == "p" ? Owner::protagonist : Owner::adversary, t[1].text});
    } else {
      throw DocumentError(ErrorCode::syntax, line, t[0].column, "expected '[p|a] <input>'");
    }
  });
  return moves;
}

inline std::string script_from_history(const std::vector<StepEvent>& history) {
  std::ostringstream os;
  for (const auto& ev : history) os << owner_tag(ev.actor) << ' ' << ev.input << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::unknown_name, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::unknown_name, "cannot write '" + path + "'");
  out << content;
}

}  // namespace adviser
