#include <gtest/gtest.h>

#include <thread>

#include "adviser/http.hpp"
#include "adviser/service.hpp"

using namespace adviser;

namespace {

// Runs f and returns the ServiceError it throws.
template <class F>
ServiceError error_of(F&& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a ServiceError";
  return ServiceError(0, "", "");
}

std::string open(AdviceService& svc, const std::string& fixture_name) {
  return svc.create_session(Json{{"fixture", fixture_name}}).at("session_id").get<std::string>();
}

}  // namespace

TEST(Service, CreateSummaries) {
  AdviceService svc;
  const auto r3 = svc.create_session(Json{{"fixture", "fig3"}});
  EXPECT_EQ(r3.at("summary").at("generated"), 16);
  EXPECT_EQ(r3.at("summary").at("best_lambda"), (Json{{"num", 0}, {"den", 1}}));
  EXPECT_EQ(r3.at("summary").at("nominal_lambda"), (Json{{"num", 2}, {"den", 1}}));
  EXPECT_FALSE(r3.at("summary").at("truncated").get<bool>());

  const auto r1 = svc.create_session(Json{{"fixture", "fig1"}});
  EXPECT_EQ(r1.at("summary").at("best_lambda"), (Json{{"num", 1}, {"den", 1}}));
  EXPECT_NE(r1.at("session_id"), r3.at("session_id"));
  EXPECT_EQ(svc.session_count(), 2U);

  const auto capped = svc.create_session(Json{{"fixture", "fig3"}, {"cap", 3}});
  EXPECT_TRUE(capped.at("summary").at("truncated").get<bool>());
}

TEST(Service, CreateErrors) {
  AdviceService svc;
  const std::string unsafe_init =
      "arena 1\nstate p p unsafe init\nstate q a safe\ntransition p u q\ntransition q v p\n";
  auto e = error_of([&] { svc.create_session(Json{{"document", unsafe_init}}); });
  EXPECT_EQ(e.status(), 422);
  EXPECT_EQ(e.body().at("code"), "no_good_adviser");
  EXPECT_EQ(e.body().at("detail").at("condition"), "initial_state_in_losing");
  EXPECT_EQ(e.body().at("detail").at("state"), "p");

  e = error_of([&] { svc.create_session(Json{{"fixture", "fig3"}, {"cap", 0}}); });
  EXPECT_EQ(e.status(), 400);
  EXPECT_EQ(e.body().at("code"), "bad_cap");

  e = error_of([&] { svc.create_session(Json{{"fixture", "nope"}}); });
  EXPECT_EQ(e.status(), 404);

  e = error_of([&] { svc.create_session(Json{{"document", "arena 1\nstate s x safe init\n"}}); });
  EXPECT_EQ(e.status(), 400);
  EXPECT_EQ(e.body().at("code"), "syntax");
  EXPECT_EQ(e.body().at("detail").at("line"), 2);

  e = error_of([&] { svc.get_state("missing"); });
  EXPECT_EQ(e.status(), 404);
  EXPECT_EQ(e.body().at("code"), "unknown_session");
  EXPECT_EQ(svc.session_count(), 0U);
}

TEST(Service, Fig3Walkthrough) {
  AdviceService svc;
  const auto id = open(svc, "fig3");
  auto st = svc.get_state(id);
  EXPECT_EQ(st.at("state"), "s1");
  EXPECT_EQ(st.at("owner"), "p");
  EXPECT_TRUE(st.at("advice").is_null());
  EXPECT_EQ(st.at("halted"), "no");

  const auto ev = svc.auto_step(id);
  EXPECT_EQ(ev.at("input"), "u_p1");
  st = svc.get_state(id);
  EXPECT_EQ(st.at("state"), "s2");
  EXPECT_EQ(st.at("advice").at("hard"), (Json{"u_a2"}));
  EXPECT_EQ(st.at("advice").at("soft"), (Json{"u_a3"}));
  EXPECT_EQ(st.at("advice").at("allowed"), (Json{"u_a1"}));

  const auto soft = svc.post_move(id, Json{{"input", "u_a3"}});
  EXPECT_EQ(soft.at("outcome"), "soft_violation");
  EXPECT_EQ(soft.at("new_adviser"), 0);
  st = svc.get_state(id);
  EXPECT_TRUE(st.at("adviser").at("nominal").get<bool>());
  EXPECT_EQ(st.at("history").size(), 2U);

  svc.auto_step(id);
  EXPECT_EQ(svc.get_state(id).at("advice").at("hard"), (Json{"u_a7", "u_a8"}));
  EXPECT_EQ(svc.post_move(id, Json{{"input", "u_a7"}}).at("outcome"), "hard_violation");
  st = svc.get_state(id);
  EXPECT_EQ(st.at("halted"), "hard_violation");
  EXPECT_TRUE(st.at("advice").is_null());

  const auto e = error_of([&] { svc.auto_step(id); });
  EXPECT_EQ(e.status(), 409);
  EXPECT_EQ(e.body().at("detail").at("halted"), "hard_violation");

  const auto fresh = svc.reset(id);
  EXPECT_EQ(fresh.at("state"), "s1");
  EXPECT_EQ(fresh.at("history").size(), 0U);
}

TEST(Service, MoveErrors) {
  AdviceService svc;
  const auto id = open(svc, "fig3");
  auto e = error_of([&] { svc.post_move(id, Json{{"input", "u_a1"}}); });
  EXPECT_EQ(e.status(), 409);
  EXPECT_EQ(e.body().at("code"), "precondition");

  svc.auto_step(id);
  e = error_of([&] { svc.post_move(id, Json{{"input", "u_a9"}}); });
  EXPECT_EQ(e.status(), 409);
  EXPECT_EQ(e.body().at("code"), "disabled_input");
  EXPECT_EQ(e.body().at("detail").at("enabled"), (Json{"u_a1", "u_a2", "u_a3"}));
  EXPECT_EQ(svc.get_state(id).at("state"), "s2");

  e = error_of([&] { svc.post_move(id, Json{{"label", "u_a1"}}); });
  EXPECT_EQ(e.status(), 400);
}

TEST(Service, ReadsAreIdempotent) {
  AdviceService svc;
  const auto id = open(svc, "fig1");
  svc.auto_step(id);
  EXPECT_EQ(svc.get_state(id), svc.get_state(id));
  const auto g = svc.get_graph(id);
  EXPECT_EQ(g, svc.get_graph(id));
  EXPECT_NE(g.at("dot").get<std::string>().find("peripheries=2"), std::string::npos);
  EXPECT_EQ(AdviceService::list_fixtures().at("fixtures"), (Json{"fig1", "fig2", "fig3"}));
}

TEST(Service, HistoryReplaysThroughTheLibrary) {
  AdviceService svc;
  const auto id = open(svc, "fig3");
  for (const char* input : {"u_a3", "u_a6", "u_a6"}) {
    svc.auto_step(id);
    svc.post_move(id, Json{{"input", input}});
  }
  const auto history = svc.get_state(id).at("history");

  std::string script;
  for (const auto& ev : history) script += ev.at("actor").get<std::string>() + " " + ev.at("input").get<std::string>() + "\n";
  auto session = Session::start(std::make_shared<const SolveBundle>(synthesize(fixture_fig3())));
  for (const auto& move : parse_script(script)) {
    if (*move.actor == Owner::protagonist) {
      EXPECT_EQ(session.protagonist_step().input, move.input);
    } else {
      session.adversary_step(move.input);
    }
  }
  Json replayed = Json::array();
  for (const auto& ev : session.history()) replayed.push_back(to_json(ev));
  EXPECT_EQ(replayed, history);
  EXPECT_EQ(script_from_history(session.history()), script);
}

TEST(Service, ConcurrentSessionsAreIsolated) {
  AdviceService svc;
  constexpr int workers = 8;
  std::vector<std::string> ids(workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      // Odd workers circle s1/s3 -> s2 on fig1, even ones the s3/s6 loop on fig3.
      ids[w] = open(svc, w % 2 ? "fig1" : "fig3");
      for (int k = 0; k < 50; ++k) {
        svc.auto_step(ids[w]);
        const char* input = w % 2 ? (k % 2 ? "u_a1" : "u_a2") : (k == 0 ? "u_a1" : "u_a4");
        svc.post_move(ids[w], Json{{"input", input}});
        svc.get_state(ids[w]);
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(svc.session_count(), static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const auto st = svc.get_state(ids[w]);
    EXPECT_EQ(st.at("history").size(), 100U);
    EXPECT_EQ(st.at("halted"), "no");
  }
}

TEST(Http, EndToEnd) {
  AdviceService svc;
  httplib::Server server;
  mount(server, svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread runner([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Post("/sessions", R"({"fixture":"fig3"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto id = Json::parse(res->body).at("session_id").get<std::string>();

  res = client.Post("/sessions/" + id + "/auto", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body).at("to"), "s2");

  res = client.Post("/sessions/" + id + "/move", R"({"input":"u_a3"})", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body).at("outcome"), "soft_violation");

  res = client.Get("/sessions/" + id);
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body).at("state"), "s5");

  res = client.Get("/sessions/" + id + "/graph");
  ASSERT_TRUE(res);
  EXPECT_NE(Json::parse(res->body).at("dot").get<std::string>().find("digraph"), std::string::npos);

  res = client.Get("/sessions/zzz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(Json::parse(res->body).at("code"), "unknown_session");

  res = client.Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  res = client.Get("/fixtures");
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body).at("fixtures").size(), 3U);

  server.stop();
  runner.join();
}
