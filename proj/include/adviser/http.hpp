#pragma once

#include <string>

#include "httplib.h"

#include "adviser/service.hpp"

namespace adviser {

namespace detail {

inline void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void handle(httplib::Response& res, F&& f) {
  try {
    send_json(res, 200, f());
  } catch (const ServiceError& e) {
    send_json(res, e.status(), e.body());
  } catch (const nlohmann::json::exception& e) {
    send_json(res, 400, Json{{"code", "syntax"}, {"message", e.what()}, {"detail", Json::object()}});
  } catch (const Error& e) {
    send_json(res, http_status(e.code()),
              Json{{"code", to_string(e.code())}, {"message", e.what()}, {"detail", Json::object()}});
  }
}

inline Json body_of(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  return Json::parse(req.body);
}

}  // namespace detail

// One JSON document per request and per response.
inline void mount(httplib::Server& server, AdviceService& service) {
  using detail::handle;
  server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service.create_session(detail::body_of(req)); });
  });
  server.Get("/fixtures", [&](const httplib::Request&, httplib::Response& res) {
    handle(res, [&] { return AdviceService::list_fixtures(); });
  });
  server.Get(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service.get_state(req.matches[1]); });
  });
  server.Get(R"(/sessions/([^/]+)/graph)", [&](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service.get_graph(req.matches[1]); });
  });
  server.Post(R"(/sessions/([^/]+)/move)", [&](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service.post_move(req.matches[1], detail::body_of(req)); });
  });
  server.Post(R"(/sessions/([^/]+)/auto)", [&](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service.auto_step(req.matches[1]); });
  });
  server.Post(R"(/sessions/([^/]+)/reset)", [&](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service.reset(req.matches[1]); });
  });
}

}  // namespace adviser
