#pragma once

#include <memory>
#include <string>

#include "pickchoose/service.hpp"

namespace pickchoose {

// HTTP binding of GameService. Adds permissive CORS headers so a browser
// client served from another origin can talk to it.
class HttpServer {
 public:
  explicit HttpServer(GameService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to `port` (0 = any free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks serving requests until stop().
  bool serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pickchoose
