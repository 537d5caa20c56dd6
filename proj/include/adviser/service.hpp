#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "adviser/dot.hpp"
#include "adviser/fixtures.hpp"
#include "adviser/guided.hpp"
#include "adviser/io.hpp"
#include "adviser/search.hpp"

namespace adviser {

using Json = nlohmann::ordered_json;

// Error body {code, message, detail} plus the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message, Json detail = Json::object())
      : std::runtime_error(message), status_(status), code_(std::move(code)), detail_(std::move(detail)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  Json body() const { return Json{{"code", code_}, {"message", what()}, {"detail", detail_}}; }

 private:
  int status_;
  std::string code_;
  Json detail_;
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax:
    case ErrorCode::semantic:
    case ErrorCode::bad_cap:
    case ErrorCode::invalid_adviser:
    case ErrorCode::invalid_strategy:
    case ErrorCode::domain_mismatch:
      return 400;
    case ErrorCode::unknown_state:
    case ErrorCode::unknown_name:
      return 404;
    case ErrorCode::disabled_input:
    case ErrorCode::precondition:
    case ErrorCode::script_exhausted:
      return 409;
    case ErrorCode::no_good_adviser:
    case ErrorCode::not_good:
      return 422;
  }
  return 400;
}

inline Json to_json(const Rational& r) { return Json{{"num", r.num()}, {"den", r.den()}}; }

inline Json to_json(const InputSet& inputs) {
  Json out = Json::array();
  for (const auto& u : inputs) out.push_back(u);
  return out;
}

inline Json to_json(const Adviser& alpha) {
  Json out = Json::object();
  for (const auto& [state, inputs] : alpha.forbidden) out[state] = to_json(inputs);
  return out;
}

inline Json to_json(const StepEvent& ev) {
  return Json{{"actor", owner_tag(ev.actor)},
              {"input", ev.input},
              {"from", ev.from},
              {"to", ev.to},
              {"outcome", to_string(ev.outcome)},
              {"new_adviser", ev.new_adviser ? Json(*ev.new_adviser) : Json(nullptr)}};
}

inline Json to_json(const AdvicePacket& packet) {
  return Json{{"state", packet.state},
              {"hard", to_json(packet.hard)},
              {"soft", to_json(packet.soft)},
              {"allowed", to_json(packet.allowed)}};
}

inline Json bundle_summary(const SolveBundle& bundle) {
  Json lambdas = Json::array();
  for (const auto& rec : bundle.candidates) lambdas.push_back(rec.lambda ? to_json(*rec.lambda) : Json(nullptr));
  return Json{{"candidate_count", bundle.candidates.size()},
              {"generated", bundle.generated},
              {"good_count", std::count_if(bundle.candidates.begin(), bundle.candidates.end(),
                                           [](const CandidateRecord& r) { return r.good; })},
              {"truncated", bundle.truncated},
              {"free_choices", bundle.free_choices.size()},
              {"lambdas", lambdas},
              {"best_index", *bundle.best_index},
              {"best_lambda", to_json(*bundle.best().lambda)},
              {"nominal_lambda", to_json(*bundle.nominal().lambda)}};
}

// In-memory session registry. The map is guarded by a shared lock; each
// session has its own mutex so moves on different sessions run in parallel.
class AdviceService {
 public:
  explicit AdviceService(std::size_t default_cap = adviser::default_cap) : default_cap_(default_cap) {}

  // Body: {"fixture": name} or {"document": arena text}; optional "cap".
  Json create_session(const Json& request) {
    if (!request.is_object()) throw ServiceError(400, "syntax", "request body must be an object");
    const auto cap = request.contains("cap") ? request.at("cap").get<std::int64_t>() : static_cast<std::int64_t>(default_cap_);
    if (cap <= 0) throw ServiceError(400, "bad_cap", "cap must be positive", Json{{"cap", cap}});

    Arena arena;
    try {
      if (request.contains("fixture")) {
        arena = fixture(request.at("fixture").get<std::string>());
      } else if (request.contains("document")) {
        arena = parse_arena(request.at("document").get<std::string>());
      } else {
        throw ServiceError(400, "syntax", "expected 'fixture' or 'document'");
      }
    } catch (const DocumentError& e) {
      throw ServiceError(400, std::string(to_string(e.code())), e.what(), Json{{"line", e.line()}, {"column", e.column()}});
    } catch (const Error& e) {
      throw ServiceError(http_status(e.code()), std::string(to_string(e.code())), e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ServiceError(400, "syntax", e.what());
    }

    std::shared_ptr<const SolveBundle> bundle;
    try {
      bundle = std::make_shared<const SolveBundle>(synthesize(arena, static_cast<std::size_t>(cap)));
    } catch (const Error& e) {
      Json detail = Json::object();
      if (e.code() == ErrorCode::no_good_adviser && arena.has_initial()) {
        detail = Json{{"condition", "initial_state_in_losing"}, {"state", arena.id(arena.initial())}};
      }
      throw ServiceError(http_status(e.code()), std::string(to_string(e.code())), e.what(), detail);
    }

    auto entry = std::make_shared<Entry>(bundle, Session::start(bundle));
    const auto id = next_id();
    {
      std::unique_lock lock(map_mutex_);
      sessions_.emplace(id, entry);
    }
    return Json{{"session_id", id}, {"created_at", entry->created_at}, {"summary", bundle_summary(*bundle)}};
  }

  Json get_state(const std::string& id) const {
    auto entry = lookup(id);
    std::lock_guard lock(entry->mutex);
    return snapshot(id, *entry);
  }

  Json post_move(const std::string& id, const Json& request) {
    if (!request.is_object() || !request.contains("input") || !request.at("input").is_string()) {
      throw ServiceError(400, "syntax", "expected {\"input\": <label>}");
    }
    auto entry = lookup(id);
    std::lock_guard lock(entry->mutex);
    return guarded([&] {
      if (entry->session.current_owner() != Owner::adversary) {
        throw Error(ErrorCode::precondition, "it is the protagonist's turn; use auto");
      }
      return to_json(entry->session.adversary_step(request.at("input").get<std::string>()));
    }, *entry);
  }

  Json auto_step(const std::string& id) {
    auto entry = lookup(id);
    std::lock_guard lock(entry->mutex);
    return guarded([&] { return to_json(entry->session.protagonist_step()); }, *entry);
  }

  Json reset(const std::string& id) {
    auto entry = lookup(id);
    std::lock_guard lock(entry->mutex);
    entry->session = Session::start(entry->bundle);
    return snapshot(id, *entry);
  }

  static Json list_fixtures() {
    Json names = Json::array();
    for (const auto& n : fixture_names()) names.push_back(n);
    return Json{{"fixtures", names}};
  }

  Json get_graph(const std::string& id) const {
    auto entry = lookup(id);
    std::lock_guard lock(entry->mutex);
    DotOverlay overlay;
    overlay.adviser = entry->session.current_candidate().adviser;
    overlay.strategy = entry->session.current_strategy();
    overlay.current = entry->session.current_state();
    return Json{{"session_id", id}, {"dot", export_dot(entry->session.arena(), overlay)}};
  }

  std::size_t session_count() const {
    std::shared_lock lock(map_mutex_);
    return sessions_.size();
  }

 private:
  struct Entry {
    Entry(std::shared_ptr<const SolveBundle> b, Session s)
        : bundle(std::move(b)), session(std::move(s)),
          created_at(std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count()) {}
    std::shared_ptr<const SolveBundle> bundle;
    Session session;
    std::int64_t created_at;
    mutable std::mutex mutex;
  };

  std::shared_ptr<Entry> lookup(const std::string& id) const {
    std::shared_lock lock(map_mutex_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "unknown session '" + id + "'", Json{{"session_id", id}});
    return it->second;
  }

  template <class F>
  static Json guarded(F&& f, const Entry& entry) {
    try {
      return f();
    } catch (const Error& e) {
      Json detail = Json::object();
      if (e.code() == ErrorCode::disabled_input || e.code() == ErrorCode::precondition) {
        detail["state"] = entry.session.current_state();
        if (entry.session.halted() == Halt::no) {
          Json enabled = Json::array();
          for (const auto& u : enabled_inputs(entry.session.arena(), *entry.session.arena().find(entry.session.current_state())))
            enabled.push_back(u);
          detail["enabled"] = enabled;
        } else {
          detail["halted"] = to_string(entry.session.halted());
        }
      }
      throw ServiceError(http_status(e.code()), std::string(to_string(e.code())), e.what(), detail);
    }
  }

  static Json snapshot(const std::string& id, const Entry& entry) {
    const auto& s = entry.session;
    const auto& rec = s.current_candidate();
    Json history = Json::array();
    for (const auto& ev : s.history()) history.push_back(to_json(ev));
    Json out{{"session_id", id},
             {"state", s.current_state()},
             {"owner", owner_tag(s.current_owner())},
             {"halted", to_string(s.halted())},
             {"advice", nullptr},
             {"adviser",
              {{"index", s.current_adviser()},
               {"lambda", to_json(*rec.lambda)},
               {"nominal", s.current_adviser() == 0},
               {"forbidden", to_json(rec.adviser)}}},
             {"running_average", to_json(s.running_average())},
             {"running_sum", s.running_sum()},
             {"rounds", s.rounds()},
             {"history", history}};
    if (s.halted() == Halt::no && s.current_owner() == Owner::adversary) out["advice"] = to_json(s.advice());
    return out;
  }

  std::string next_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream os;
    os << std::hex << (counter_.fetch_add(1) + 1) << '-' << (rng() & 0xffffffffULL);
    return os.str();
  }

  std::size_t default_cap_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::atomic<std::uint64_t> counter_{0};
};

}  // namespace adviser
