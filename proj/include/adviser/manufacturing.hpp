#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adviser/arena.hpp"
#include "adviser/io.hpp"

namespace adviser {

// Piece statuses. A piece grabbed while the other actor holds it becomes
// contested.
enum class Status { desk, human, robot, contested };

constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::desk: return "desk";
    case Status::human: return "human";
    case Status::robot: return "robot";
    case Status::contested: return "contested";
  }
  return "desk";
}

struct ConnectRule {
  Owner actor = Owner::adversary;  // adversary = human, protagonist = robot
  std::string left;
  std::string right;
  std::string product;
};

struct UnsafeRule {
  // "contested": any contested piece. "status": the (piece, status) pair is present.
  std::string kind = "contested";
  std::string piece;
  Status status = Status::contested;
};

struct RuleTemplate {
  std::vector<std::string> pieces;
  std::vector<ConnectRule> connects;
  std::vector<std::pair<std::string, Status>> initial;
  std::vector<UnsafeRule> unsafe{UnsafeRule{}};
};

// Pieces A, B, C and their products; the human joins A to B or BC, the robot
// joins B or AB to C.
inline RuleTemplate default_manufacturing_template() {
  RuleTemplate t;
  t.pieces = {"A", "B", "C", "AB", "BC", "ABC"};
  t.connects = {
      {Owner::adversary, "A", "B", "AB"},
      {Owner::adversary, "A", "BC", "ABC"},
      {Owner::protagonist, "B", "C", "BC"},
      {Owner::protagonist, "AB", "C", "ABC"},
  };
  t.initial = {{"A", Status::desk}, {"B", Status::desk}, {"C", Status::desk}};
  return t;
}

inline Status parse_status(std::string_view text) {
  if (text == "desk") return Status::desk;
  if (text == "human") return Status::human;
  if (text == "robot") return Status::robot;
  if (text == "contested") return Status::contested;
  throw Error(ErrorCode::syntax, "unknown status '" + std::string(text) + "'");
}

// Template document:
//
//   template 1
//   pieces A B C AB BC ABC
//   connect a A B AB          (actor a = human, p = robot)
//   initial A:desk B:desk C:desk
//   unsafe contested | unsafe status <piece> <status>
inline RuleTemplate parse_template(std::string_view text) {
  RuleTemplate t;
  t.unsafe.clear();
  bool header = false;
  detail::for_each_record(text, [&](std::size_t line, const std::vector<detail::Token>& tok, std::string_view) {
    if (!header) {
      detail::expect_header(tok, line, "template");
      header = true;
      return;
    }
    const auto& kind = tok[0].text;
    try {
      if (kind == "pieces") {
        for (std::size_t i = 1; i < tok.size(); ++i) t.pieces.push_back(tok[i].text);
      } else if (kind == "connect") {
        if (tok.size() != 5 || (tok[1].text != "a" && tok[1].text != "p")) {
          throw DocumentError(ErrorCode::syntax, line, tok[0].column, "expected 'connect <a|p> <left> <right> <product>'");
        }
        t.connects.push_back({tok[1].text == "p" ? Owner::protagonist : Owner::adversary, tok[2].text, tok[3].text,
                              tok[4].text});
      } else if (kind == "initial") {
        for (std::size_t i = 1; i < tok.size(); ++i) {
          const auto colon = tok[i].text.find(':');
          if (colon == std::string::npos) {
            throw DocumentError(ErrorCode::syntax, line, tok[i].column, "expected <piece>:<status>");
          }
          t.initial.emplace_back(tok[i].text.substr(0, colon), parse_status(tok[i].text.substr(colon + 1)));
        }
      } else if (kind == "unsafe") {
        if (tok.size() == 2 && tok[1].text == "contested") {
          t.unsafe.push_back(UnsafeRule{});
        } else if (tok.size() == 4 && tok[1].text == "status") {
          t.unsafe.push_back(UnsafeRule{"status", tok[2].text, parse_status(tok[3].text)});
        } else {
          throw DocumentError(ErrorCode::syntax, line, tok[0].column, "expected 'unsafe contested' or 'unsafe status <piece> <status>'");
        }
      } else {
        throw DocumentError(ErrorCode::syntax, line, tok[0].column, "unknown record '" + kind + "'");
      }
    } catch (const DocumentError&) {
      throw;
    } catch (const Error& e) {
      throw DocumentError(ErrorCode::syntax, line, tok[0].column, e.what());
    }
  });
  if (!header) throw DocumentError(ErrorCode::syntax, 1, 1, "empty document");
  return t;
}

namespace detail {

using Configuration = std::vector<std::pair<std::size_t, Status>>;  // sorted by piece index

inline std::string config_id(const RuleTemplate& t, const Configuration& q, Owner turn) {
  std::string id = "{";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) id += ",";
    id += "(" + t.pieces[q[i].first] + "," + std::string(to_string(q[i].second)) + ")";
  }
  return id + "}," + std::string(owner_tag(turn));
}

inline void normalize(Configuration& q) {
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
}

}  // namespace detail

// Expands the template into an alternating arena over (configuration, turn)
// states reachable from the initial configuration with the robot to move.
inline Arena generate_manufacturing(const RuleTemplate& t) {
  auto piece_index = [&](const std::string& name) {
    const auto it = std::find(t.pieces.begin(), t.pieces.end(), name);
    if (it == t.pieces.end()) throw Error(ErrorCode::semantic, "template references unknown piece '" + name + "'");
    return static_cast<std::size_t>(it - t.pieces.begin());
  };
  for (const auto& rule : t.connects) {
    piece_index(rule.left);
    piece_index(rule.right);
    piece_index(rule.product);
  }
  for (const auto& rule : t.unsafe)
    if (rule.kind == "status") piece_index(rule.piece);

  detail::Configuration start;
  for (const auto& [piece, status] : t.initial) start.emplace_back(piece_index(piece), status);
  detail::normalize(start);

  auto is_unsafe = [&](const detail::Configuration& q) {
    for (const auto& rule : t.unsafe) {
      for (const auto& [piece, status] : q) {
        if (rule.kind == "contested" && status == Status::contested) return true;
        if (rule.kind == "status" && t.pieces[piece] == rule.piece && status == rule.status) return true;
      }
    }
    return false;
  };

  Arena arena;
  std::map<std::pair<detail::Configuration, Owner>, StateIndex> seen;
  std::deque<std::pair<detail::Configuration, Owner>> queue;
  auto intern = [&](const detail::Configuration& q, Owner turn) {
    const auto key = std::make_pair(q, turn);
    if (auto it = seen.find(key); it != seen.end()) return it->second;
    const auto idx = arena.add_state(detail::config_id(t, q, turn), turn, !is_unsafe(q));
    seen.emplace(key, idx);
    queue.push_back(key);
    return idx;
  };

  arena.set_initial(intern(start, Owner::protagonist));
  while (!queue.empty()) {
    const auto [q, turn] = queue.front();
    queue.pop_front();
    const auto from = seen.at({q, turn});
    const auto next_turn = opponent(turn);
    const auto own = turn == Owner::protagonist ? Status::robot : Status::human;
    const auto other = turn == Owner::protagonist ? Status::human : Status::robot;
    const std::string suffix = turn == Owner::protagonist ? "_p" : "_a";

    auto emit = [&](std::string input, detail::Configuration target) {
      detail::normalize(target);
      const auto to = intern(target, next_turn);
      arena.add_transition(from, std::move(input), to);
    };

    emit(pass_input, q);
    const bool stuck = std::any_of(q.begin(), q.end(), [](const auto& p) { return p.second == Status::contested; });
    if (stuck) continue;

    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto& [piece, status] = q[i];
      if (status == Status::desk || status == other) {
        auto target = q;
        target[i].second = status == Status::desk ? own : Status::contested;
        emit("(grab" + suffix + "," + t.pieces[piece] + ")", target);
      }
      if (status == own) {
        auto target = q;
        target[i].second = Status::desk;
        emit("(drop" + suffix + "," + t.pieces[piece] + ")", target);
      }
    }
    for (const auto& rule : t.connects) {
      if (rule.actor != turn) continue;
      const auto left = std::find(q.begin(), q.end(), std::make_pair(piece_index(rule.left), own));
      const auto right = std::find(q.begin(), q.end(), std::make_pair(piece_index(rule.right), own));
      if (left == q.end() || right == q.end()) continue;
      detail::Configuration target;
      for (auto it = q.begin(); it != q.end(); ++it)
        if (it != left && it != right) target.push_back(*it);
      target.emplace_back(piece_index(rule.product), own);
      emit("(connect" + suffix + ",(" + rule.left + "," + rule.right + "))", target);
    }
  }
  return arena;
}

}  // namespace adviser
