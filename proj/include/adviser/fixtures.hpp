#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "adviser/arena.hpp"

namespace adviser {

namespace detail {

struct FixtureState {
  const char* id;
  Owner owner;
  bool safe;
};

struct FixtureEdge {
  const char* from;
  const char* input;
  const char* to;
};

inline Arena build_fixture(std::initializer_list<FixtureState> states, std::initializer_list<FixtureEdge> edges) {
  Arena arena;
  for (const auto& s : states) arena.add_state(s.id, s.owner, s.safe);
  for (const auto& e : edges) arena.add_transition(e.from, e.input, e.to);
  arena.set_initial("s1");
  return arena;
}

constexpr auto P = Owner::protagonist;
constexpr auto A = Owner::adversary;

}  // namespace detail

// Seven states, fourteen transitions; Unsafe = {s5, s6, s7}.
inline Arena fixture_fig1() {
  using detail::A;
  using detail::P;
  return detail::build_fixture(
      {{"s1", P, true}, {"s2", A, true}, {"s3", P, true}, {"s4", A, true},
       {"s5", P, false}, {"s6", A, false}, {"s7", P, false}},
      {{"s1", "u_p1", "s2"}, {"s1", "u_p2", "s4"}, {"s2", "u_a1", "s1"}, {"s2", "u_a2", "s3"},
       {"s2", "u_a3", "s5"}, {"s3", "u_p3", "s2"}, {"s3", "u_p4", "s4"}, {"s4", "u_a4", "s5"},
       {"s4", "u_a5", "s7"}, {"s5", "u_p5", "s6"}, {"s7", "u_p6", "s6"}, {"s7", "u_p7", "s4"},
       {"s6", "u_a6", "s5"}, {"s6", "u_a7", "s7"}});
}

// Seven states, ten transitions; Unsafe = {s4}.
inline Arena fixture_fig2() {
  using detail::A;
  using detail::P;
  return detail::build_fixture(
      {{"s1", P, true}, {"s2", A, true}, {"s3", P, true}, {"s4", P, false},
       {"s5", P, true}, {"s6", A, true}, {"s7", A, true}},
      {{"s1", "u_p1", "s2"}, {"s2", "u_a1", "s3"}, {"s2", "u_a2", "s4"}, {"s2", "u_a3", "s5"},
       {"s3", "u_p2", "s6"}, {"s5", "u_p4", "s7"}, {"s4", "u_p3", "s6"}, {"s6", "u_a4", "s3"},
       {"s6", "u_a5", "s4"}, {"s7", "u_a6", "s5"}});
}

// Twelve states, seventeen transitions; Unsafe = {s4, s12}. The drawing leaves
// the target of u_p5 implicit; it goes to s8, where the guided run continues.
inline Arena fixture_fig3() {
  using detail::A;
  using detail::P;
  return detail::build_fixture(
      {{"s1", P, true}, {"s2", A, true}, {"s3", P, true}, {"s4", P, false},
       {"s5", P, true}, {"s6", A, true}, {"s7", A, true}, {"s8", A, true},
       {"s9", P, true}, {"s10", P, true}, {"s11", A, true}, {"s12", P, false}},
      {{"s1", "u_p1", "s2"}, {"s2", "u_a1", "s3"}, {"s2", "u_a2", "s4"}, {"s2", "u_a3", "s5"},
       {"s3", "u_p2", "s6"}, {"s5", "u_p5", "s8"}, {"s3", "u_p3", "s7"}, {"s6", "u_a4", "s3"},
       {"s7", "u_a5", "s4"}, {"s4", "u_p4", "s7"}, {"s8", "u_a6", "s9"}, {"s8", "u_a7", "s10"},
       {"s8", "u_a8", "s12"}, {"s12", "u_p7", "s8"}, {"s10", "u_p8", "s11"}, {"s11", "u_a9", "s12"},
       {"s9", "u_p6", "s8"}});
}

inline std::vector<std::string> fixture_names() { return {"fig1", "fig2", "fig3"}; }

inline Arena fixture(std::string_view name) {
  if (name == "fig1") return fixture_fig1();
  if (name == "fig2") return fixture_fig2();
  if (name == "fig3") return fixture_fig3();
  throw Error(ErrorCode::unknown_name, "unknown fixture '" + std::string(name) + "'");
}

}  // namespace adviser
