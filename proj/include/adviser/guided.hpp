#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "adviser/arena.hpp"
#include "adviser/rational.hpp"
#include "adviser/search.hpp"

namespace adviser {

enum class Halt { no, hard_violation, unsafe };

constexpr std::string_view to_string(Halt h) {
  switch (h) {
    case Halt::no: return "no";
    case Halt::hard_violation: return "hard_violation";
    case Halt::unsafe: return "unsafe";
  }
  return "no";
}

enum class Outcome {
  normal,
  soft_violation,   // a soft advice was ignored; new_adviser is set
  hard_violation,   // a hard advice was ignored; the session halts
  unsafe_reached,   // an unsafe state was entered without a hard violation
  rerouted,         // compliant move left T^α_curr; new_adviser is set
};

constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::normal: return "normal";
    case Outcome::soft_violation: return "soft_violation";
    case Outcome::hard_violation: return "hard_violation";
    case Outcome::unsafe_reached: return "unsafe_reached";
    case Outcome::rerouted: return "rerouted";
  }
  return "normal";
}

struct StepEvent {
  Owner actor = Owner::protagonist;
  std::string input;
  std::string from;
  std::string to;
  Outcome outcome = Outcome::normal;
  std::optional<std::size_t> new_adviser;

  friend bool operator==(const StepEvent&, const StepEvent&) = default;
};

struct AdvicePacket {
  std::string state;
  InputSet hard;
  InputSet soft;
  InputSet allowed;
};

namespace policy {
struct CompliantRandom {
  std::uint64_t seed = 0;
};
struct WorstCase {};
struct Scripted {
  std::vector<std::string> inputs;
};
}  // namespace policy

using AdversaryPolicy = std::variant<policy::CompliantRandom, policy::WorstCase, policy::Scripted>;

// Live guided execution over a solved bundle. Not thread-safe: callers
// serialize mutations of one session.
class Session {
 public:
  static Session start(std::shared_ptr<const SolveBundle> bundle, SwitchRanking ranking = SwitchRanking::per_state) {
    if (!bundle || !bundle->solved()) throw Error(ErrorCode::precondition, "bundle is not solved");
    return Session(std::move(bundle), ranking);
  }

  const SolveBundle& bundle() const { return *bundle_; }
  const Arena& arena() const { return *bundle_->arena; }
  const std::string& current_state() const { return arena().id(state_); }
  Owner current_owner() const { return arena().owner(state_); }
  std::size_t current_adviser() const { return adviser_; }
  const CandidateRecord& current_candidate() const { return bundle_->candidates[adviser_]; }
  const MemorylessStrategy& current_strategy() const { return *current_candidate().strategy; }
  const std::vector<StepEvent>& history() const { return history_; }
  std::int64_t running_sum() const { return running_sum_; }
  std::int64_t rounds() const { return rounds_; }
  Rational running_average() const { return rounds_ == 0 ? Rational(0) : Rational(running_sum_, rounds_); }
  Halt halted() const { return halted_; }
  SwitchRanking ranking() const { return ranking_; }

  StepEvent protagonist_step() {
    require_live();
    if (current_owner() != Owner::protagonist) {
      throw Error(ErrorCode::precondition, "protagonist_step called at adversary state '" + current_state() + "'");
    }
    const auto& strategy = current_strategy();
    const auto it = strategy.find(current_state());
    if (it == strategy.end()) {
      throw Error(ErrorCode::precondition, "current strategy has no move at '" + current_state() + "'");
    }
    const auto next = arena().successor(state_, it->second);
    StepEvent ev{Owner::protagonist, it->second, current_state(), arena().id(*next), Outcome::normal, {}};
    state_ = *next;
    if (!arena().state(state_).safe) {
      ev.outcome = Outcome::unsafe_reached;
      halted_ = Halt::unsafe;
    }
    history_.push_back(ev);
    return ev;
  }

  AdvicePacket advice() const {
    require_live();
    if (current_owner() != Owner::adversary) {
      throw Error(ErrorCode::precondition, "advice requested at protagonist state '" + current_state() + "'");
    }
    AdvicePacket packet;
    packet.state = current_state();
    const auto& nominal = bundle_->nominal().adviser;
    const auto& current = current_candidate().adviser;
    for (const auto& input : enabled_inputs(arena(), state_)) {
      if (nominal.forbids(packet.state, input)) {
        packet.hard.insert(input);
      } else if (current.forbids(packet.state, input)) {
        packet.soft.insert(input);
      } else {
        packet.allowed.insert(input);
      }
    }
    return packet;
  }

  StepEvent adversary_step(const std::string& input) {
    require_live();
    if (current_owner() != Owner::adversary) {
      throw Error(ErrorCode::precondition, "adversary_step called at protagonist state '" + current_state() + "'");
    }
    const auto next = arena().successor(state_, input);
    if (!next) {
      std::string enabled;
      for (const auto& u : enabled_inputs(arena(), state_)) enabled += (enabled.empty() ? "" : ",") + u;
      throw Error(ErrorCode::disabled_input,
                  "input '" + input + "' is not enabled at '" + current_state() + "'; enabled: {" + enabled + "}");
    }
    const auto packet = advice();
    StepEvent ev{Owner::adversary, input, current_state(), arena().id(*next), Outcome::normal, {}};

    // The round is charged with the advice that was on display.
    running_sum_ += static_cast<std::int64_t>(current_candidate().adviser.count_at(current_state()));
    rounds_ += 1;

    if (packet.hard.contains(input)) {
      ev.outcome = Outcome::hard_violation;
      halted_ = Halt::hard_violation;
      state_ = *next;
      history_.push_back(ev);
      return ev;
    }

    const auto& target = ev.to;
    if (packet.soft.contains(input)) {
      const auto at = current_state();
      const auto order = successors_in_order(
          *bundle_, adviser_,
          [&](const CandidateRecord& rec) {
            return !rec.adviser.forbids(at, input) && rec.restricted->contains(target);
          },
          ranking_, target);
      if (order.empty()) throw Error(ErrorCode::precondition, "no feasible adviser after soft violation");
      adviser_ = order.front();
      ev.outcome = Outcome::soft_violation;
      ev.new_adviser = adviser_;
    } else if (!current_candidate().restricted->contains(target)) {
      const auto order = successors_in_order(
          *bundle_, adviser_, [&](const CandidateRecord& rec) { return rec.restricted->contains(target); }, ranking_,
          target);
      if (order.empty()) throw Error(ErrorCode::precondition, "no feasible adviser after compliant move");
      adviser_ = order.front();
      ev.outcome = Outcome::rerouted;
      ev.new_adviser = adviser_;
    }

    state_ = *next;
    if (!arena().state(state_).safe) {
      ev.outcome = Outcome::unsafe_reached;
      halted_ = Halt::unsafe;
    }
    history_.push_back(ev);
    return ev;
  }

  StepEvent auto_adversary(AdversaryPolicy& chooser) {
    require_live();
    if (current_owner() != Owner::adversary) {
      throw Error(ErrorCode::precondition, "auto_adversary called at protagonist state '" + current_state() + "'");
    }
    std::string input;
    if (auto* random = std::get_if<policy::CompliantRandom>(&chooser)) {
      const auto packet = advice();
      std::vector<std::string> allowed(packet.allowed.begin(), packet.allowed.end());
      if (allowed.empty()) throw Error(ErrorCode::precondition, "no allowed input at '" + current_state() + "'");
      if (!rng_ || rng_seed_ != random->seed) {
        rng_.emplace(random->seed);
        rng_seed_ = random->seed;
      }
      input = allowed[(*rng_)() % allowed.size()];
    } else if (std::holds_alternative<policy::WorstCase>(chooser)) {
      const auto& witness = *current_candidate().adversary_witness;
      const auto it = witness.find(current_state());
      if (it == witness.end()) throw Error(ErrorCode::precondition, "no witness move at '" + current_state() + "'");
      input = it->second;
    } else {
      auto& script = std::get<policy::Scripted>(chooser);
      if (script.inputs.empty()) throw Error(ErrorCode::script_exhausted, "adversary script exhausted");
      input = script.inputs.front();
      script.inputs.erase(script.inputs.begin());
    }
    return adversary_step(input);
  }

  // Next move by whoever owns the current state.
  StepEvent step(AdversaryPolicy& chooser) {
    return current_owner() == Owner::protagonist ? protagonist_step() : auto_adversary(chooser);
  }

 private:
  Session(std::shared_ptr<const SolveBundle> bundle, SwitchRanking ranking)
      : bundle_(std::move(bundle)), ranking_(ranking) {
    adviser_ = *bundle_->best_index;
    state_ = bundle_->arena->initial();
  }

  void require_live() const {
    if (halted_ != Halt::no) throw Error(ErrorCode::precondition, "session halted (" + std::string(to_string(halted_)) + ")");
  }

  std::shared_ptr<const SolveBundle> bundle_;
  SwitchRanking ranking_;
  StateIndex state_ = 0;
  std::size_t adviser_ = 0;
  std::vector<StepEvent> history_;
  std::int64_t running_sum_ = 0;
  std::int64_t rounds_ = 0;
  Halt halted_ = Halt::no;
  std::optional<std::mt19937_64> rng_;
  std::uint64_t rng_seed_ = 0;
};

}  // namespace adviser
