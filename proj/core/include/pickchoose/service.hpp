#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pickchoose/session.hpp"
#include "pickchoose/solver.hpp"

namespace pickchoose {

struct ServiceConfig {
  // Largest board / ground set accepted by POST /games. Kept well below the
  // solver cap so per-move analysis stays interactive.
  int ground_set_cap = 12;
  std::size_t max_sessions = 10000;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

// Transport-independent router for the JSON game API:
//   POST /games                    create (body: CreateGameRequest JSON)
//   GET  /games                    list session ids
//   GET  /games/{id}               state
//   POST /games/{id}/pick          {"element": 3}
//   POST /games/{id}/choose        {"recipient": "alice"}
//   POST /games/{id}/engine-move
//   GET  /games/{id}/analysis
//   GET  /games/{id}/snapshot      {"request": ..., "log": [...]}
//   POST /games/import             snapshot body; recreated under a new id
// Errors come back as {"code": ..., "message": ...}.
class GameService {
 public:
  explicit GameService(ServiceConfig config = {});

  ServiceResponse handle(std::string_view method, std::string_view path, std::string_view body);

  // Every live session as {"games": [{"id", "request", "log"}, ...]}.
  nlohmann::json snapshot() const;
  // Replaces all sessions with those in `snapshot`; ids are kept.
  void restore(const nlohmann::json& snapshot);
  void save_snapshot(const std::string& path) const;
  void load_snapshot(const std::string& path);

  std::size_t session_count() const;
  const ServiceConfig& config() const { return config_; }
  const Solver& solver() const { return solver_; }

 private:
  std::shared_ptr<GameSession> find(const std::string& id) const;
  std::shared_ptr<GameSession> add(CreateGameRequest request, const std::string& id);
  std::shared_ptr<GameSession> rebuild(const nlohmann::json& entry, const std::string& id);

  ServiceResponse create(const nlohmann::json& body);
  ServiceResponse import(const nlohmann::json& body);
  ServiceResponse pick(GameSession& s, const nlohmann::json& body);
  ServiceResponse choose(GameSession& s, const nlohmann::json& body);
  ServiceResponse engine_move(GameSession& s);

  ServiceConfig config_;
  Solver solver_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<GameSession>> sessions_;
  std::size_t next_id_ = 1;
};

ServiceResponse error_response(int status, std::string code, std::string message);

}  // namespace pickchoose
