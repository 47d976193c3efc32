#include "pickchoose/http_server.hpp"

#include <httplib.h>

namespace pickchoose {

struct HttpServer::Impl {
  explicit Impl(GameService& s) : service(s) {}
  GameService& service;
  httplib::Server server;
};

HttpServer::HttpServer(GameService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& svc = impl_->service;
  auto dispatch = [&svc](const httplib::Request& req, httplib::Response& res) {
    const ServiceResponse r = svc.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Get(R"(/.*)", dispatch);
  srv.Post(R"(/.*)", dispatch);
  srv.Put(R"(/.*)", dispatch);
  srv.Delete(R"(/.*)", dispatch);
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace pickchoose
