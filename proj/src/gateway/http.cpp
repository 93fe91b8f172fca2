#include "archemist/gateway/http.hpp"

#include <httplib.h>

namespace archemist::gateway {

using nlohmann::json;

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

std::optional<json> body_of(const httplib::Request& req, httplib::Response& res) {
  try {
    return json::parse(req.body);
  } catch (const json::exception&) {
    reply(res, {400, {{"error", "request body is not valid JSON"}}});
    return std::nullopt;
  }
}

}  // namespace

std::pair<std::string, int> parse_address(const std::string& addr) {
  auto colon = addr.rfind(':');
  if (colon == std::string::npos) return {"127.0.0.1", std::stoi(addr)};
  std::string host = addr.substr(0, colon);
  return {host.empty() ? "127.0.0.1" : host, std::stoi(addr.substr(colon + 1))};
}

HttpServer::HttpServer(GatewayService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.Get("/state", [this](const httplib::Request&, httplib::Response& res) { reply(res, service_.get_state()); });
  s.Get("/schema", [this](const httplib::Request&, httplib::Response& res) { reply(res, service_.schema()); });
  s.Post("/samples", [this](const httplib::Request& req, httplib::Response& res) {
    if (auto b = body_of(req, res)) reply(res, service_.submit(*b));
  });
  s.Post("/control", [this](const httplib::Request& req, httplib::Response& res) {
    if (auto b = body_of(req, res)) reply(res, service_.control(*b));
  });
  s.Post(R"(/alerts/([^/]+)/ack)", [this](const httplib::Request& req, httplib::Response& res) {
    reply(res, service_.ack(req.matches[1]));
  });
  s.Get("/state/stream", [this](const httplib::Request& req, httplib::Response& res) {
    Revision after = 0;
    if (req.has_param("after")) after = std::stoull(req.get_param_value("after"));
    else if (req.has_header("Last-Event-ID")) after = std::stoull(req.get_header_value("Last-Event-ID"));
    std::size_t max = req.has_param("max") ? std::stoull(req.get_param_value("max")) : 0;
    auto last = std::make_shared<Revision>(after);
    auto sent = std::make_shared<std::size_t>(0);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [this, last, sent, max](std::size_t, httplib::DataSink& sink) {
      if (stopping_) return false;
      auto events = service_.events_after(*last, std::chrono::milliseconds(250));
      if (events.empty()) {
        std::string ping = ": keepalive\n\n";
        return sink.write(ping.data(), ping.size());
      }
      for (const auto& e : events) {
        std::string frame = "id: " + std::to_string(e.at("rev").get<Revision>()) + "\nevent: " +
                            e.at("kind").get<std::string>() + "\ndata: " + e.dump() + "\n\n";
        if (!sink.write(frame.data(), frame.size())) return false;
        *last = e.at("rev").get<Revision>();
        if (max > 0 && ++*sent >= max) {
          sink.done();
          return true;
        }
      }
      return true;
    });
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) return -1;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  stopping_ = true;
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace archemist::gateway
