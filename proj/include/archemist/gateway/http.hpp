#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "archemist/gateway/service.hpp"

namespace httplib {
class Server;
}

namespace archemist::gateway {

/// JSON over HTTP front end for a GatewayService:
///   GET /state, GET /state/stream (server-sent events), GET /schema,
///   POST /samples, POST /control, POST /alerts/{id}/ack
class HttpServer {
 public:
  explicit HttpServer(GatewayService& service);
  ~HttpServer();

  /// Binds and starts serving on a background thread; port 0 picks a free port.
  /// Returns the bound port, or -1 when binding failed.
  int start(const std::string& host, int port);
  void stop();

 private:
  GatewayService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
};

/// Splits "host:port" (or ":port", or "port").
std::pair<std::string, int> parse_address(const std::string& addr);

}  // namespace archemist::gateway
