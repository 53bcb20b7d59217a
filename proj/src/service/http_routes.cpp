#include <httplib.h>

#include "gridbench/service/reconstruction.hpp"

namespace gridbench::service {
namespace {

void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(reply.body.dump(), "application/json");
}

template <typename Handler>
void with_json(const httplib::Request& req, httplib::Response& res, Handler handler) {
  auto body = nlohmann::json::parse(req.body, nullptr, false);
  if (body.is_discarded()) {
    send(res, {400, {{"error", "request body is not valid JSON"}}});
    return;
  }
  send(res, handler(body));
}

}  // namespace

void mount_routes(httplib::Server& server, ReconstructionService& service) {
  server.Get("/tasks/next", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.next_task(req.get_param_value("annotator")));
  });
  server.Post("/reconstructions", [&service](const httplib::Request& req, httplib::Response& res) {
    with_json(req, res, [&](const nlohmann::json& b) { return service.submit(b); });
  });
  server.Get("/results", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.results());
  });
  server.Post("/execute", [&service](const httplib::Request& req, httplib::Response& res) {
    with_json(req, res, [&](const nlohmann::json& b) { return service.execute(b); });
  });
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

}  // namespace gridbench::service
