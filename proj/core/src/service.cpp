#include "pickchoose/service.hpp"

#include <fstream>
#include <mutex>
#include <vector>

#include "pickchoose/errors.hpp"

namespace pickchoose {

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
  if (const auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto slash = path.find('/', start);
    const auto part = path.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    if (!part.empty()) parts.push_back(part);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return parts;
}

nlohmann::json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return nlohmann::json::object();
  return nlohmann::json::parse(body);
}

ServiceResponse ok(nlohmann::json body, int status = 200) { return {status, std::move(body)}; }

}  // namespace

ServiceResponse error_response(int status, std::string code, std::string message) {
  return {status, nlohmann::json{{"code", std::move(code)}, {"message", std::move(message)}}};
}

GameService::GameService(ServiceConfig config)
    : config_(config), solver_(SolverConfig{config.ground_set_cap, 0, true}) {}

std::size_t GameService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<GameSession> GameService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<GameSession> GameService::add(CreateGameRequest request, const std::string& id) {
  std::unique_lock lock(sessions_mutex_);
  if (sessions_.size() >= config_.max_sessions) {
    throw CapacityError("session limit of " + std::to_string(config_.max_sessions) + " reached");
  }
  std::string key = id;
  if (key.empty()) {
    do {
      key = "g" + std::to_string(next_id_++);
    } while (sessions_.count(key));
  }
  auto session = std::make_shared<GameSession>(key, std::move(request), solver_);
  sessions_[key] = session;
  return session;
}

std::shared_ptr<GameSession> GameService::rebuild(const nlohmann::json& entry, const std::string& id) {
  if (!entry.is_object() || !entry.contains("request")) throw InputError("snapshot entry needs a \"request\"");
  auto request = parse_create_request(entry["request"], config_.ground_set_cap);
  // Replay on a detached session first so a bad log never leaves a half-built game behind.
  auto session = std::make_shared<GameSession>(id, std::move(request), solver_);
  if (entry.contains("log")) {
    if (!entry["log"].is_array()) throw InputError("snapshot \"log\" must be an array");
    for (const auto& m : entry["log"]) session->replay(move_from_json(m));
  }
  return session;
}

ServiceResponse GameService::create(const nlohmann::json& body) {
  auto session = add(parse_create_request(body, config_.ground_set_cap), "");
  std::lock_guard lock(session->mutex());
  return ok(session->state_json(), 201);
}

ServiceResponse GameService::import(const nlohmann::json& body) {
  std::string id;
  {
    std::unique_lock lock(sessions_mutex_);
    do {
      id = "g" + std::to_string(next_id_++);
    } while (sessions_.count(id));
  }
  auto session = rebuild(body, id);
  {
    std::unique_lock lock(sessions_mutex_);
    if (sessions_.size() >= config_.max_sessions) {
      throw CapacityError("session limit of " + std::to_string(config_.max_sessions) + " reached");
    }
    sessions_[id] = session;
  }
  std::lock_guard lock(session->mutex());
  return ok(session->state_json(), 201);
}

ServiceResponse GameService::pick(GameSession& s, const nlohmann::json& body) {
  const GameState& st = s.state();
  if (st.finished()) return error_response(409, "game_finished", "the game is over");
  if (st.phase() != Phase::AwaitingPick) {
    return error_response(409, "wrong_phase", "awaiting a choice for element " + std::to_string(*st.offered()));
  }
  if (st.picker() != s.request().human) {
    return error_response(409, "not_your_turn", std::string(to_string(st.picker())) + " (engine) is the picker");
  }
  if (!body.contains("element") || !body["element"].is_number_integer()) {
    return error_response(400, "invalid_request", "body needs an integer \"element\"");
  }
  const int element = body["element"].get<int>();
  if (element < 1 || element > st.n() || !st.remaining().contains(element)) {
    return error_response(400, "invalid_element", "element " + std::to_string(element) + " is not on the board");
  }
  s.apply_pick(element);
  return ok(s.state_json());
}

ServiceResponse GameService::choose(GameSession& s, const nlohmann::json& body) {
  const GameState& st = s.state();
  if (st.finished()) return error_response(409, "game_finished", "the game is over");
  if (st.phase() != Phase::AwaitingChoice) return error_response(409, "wrong_phase", "awaiting a pick");
  if (st.chooser() != s.request().human) {
    return error_response(409, "not_your_turn", std::string(to_string(st.chooser())) + " (engine) is the chooser");
  }
  if (!body.contains("recipient")) return error_response(400, "invalid_request", "body needs \"recipient\"");
  s.apply_choice(parse_player(body["recipient"], "recipient"));
  return ok(s.state_json());
}

ServiceResponse GameService::engine_move(GameSession& s) {
  const GameState& st = s.state();
  if (st.finished()) return error_response(409, "game_finished", "the game is over");
  if (st.to_move() != s.engine()) {
    return error_response(409, "not_your_turn", "it is the human's (" + std::string(to_string(st.to_move())) + ") move");
  }
  const MoveRecord m = s.engine_move();
  auto j = s.state_json();
  j["engine_move"] = move_to_json(m);
  return ok(std::move(j));
}

ServiceResponse GameService::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    const auto parts = split_path(path);
    if (parts.empty() || parts[0] != "games") return error_response(404, "not_found", "no route " + std::string(path));

    if (parts.size() == 1) {
      if (method == "POST") return create(parse_body(body));
      if (method == "GET") {
        nlohmann::json ids = nlohmann::json::array();
        std::shared_lock lock(sessions_mutex_);
        for (const auto& [id, _] : sessions_) ids.push_back(id);
        return ok({{"games", ids}});
      }
      return error_response(405, "method_not_allowed", std::string(method) + " " + std::string(path));
    }
    if (parts.size() == 2 && parts[1] == "import") {
      if (method != "POST") return error_response(405, "method_not_allowed", std::string(method) + " " + std::string(path));
      return import(parse_body(body));
    }

    const auto session = find(std::string(parts[1]));
    if (!session) return error_response(404, "not_found", "no game with id " + std::string(parts[1]));
    const std::string_view action = parts.size() >= 3 ? parts[2] : std::string_view();
    if (parts.size() > 3) return error_response(404, "not_found", "no route " + std::string(path));

    struct Route {
      std::string_view method;
      std::string_view action;
    };
    static constexpr Route kRoutes[] = {{"GET", ""},          {"GET", "analysis"},    {"GET", "snapshot"},
                                        {"POST", "pick"},     {"POST", "choose"},     {"POST", "engine-move"}};
    bool known = false;
    bool allowed = false;
    for (const auto& r : kRoutes) {
      if (r.action == action) {
        known = true;
        allowed = allowed || r.method == method;
      }
    }
    if (!known) return error_response(404, "not_found", "no route " + std::string(path));
    if (!allowed) return error_response(405, "method_not_allowed", std::string(method) + " " + std::string(path));

    const nlohmann::json payload = method == "POST" ? parse_body(body) : nlohmann::json::object();
    if (!payload.is_object()) return error_response(400, "invalid_request", "request body must be a JSON object");

    std::lock_guard lock(session->mutex());
    if (action.empty()) return ok(session->state_json());
    if (action == "analysis") return ok(session->analysis_json());
    if (action == "snapshot") {
      nlohmann::json log = nlohmann::json::array();
      for (const auto& m : session->log()) log.push_back(move_to_json(m));
      return ok({{"id", session->id()}, {"request", create_request_to_json(session->request())}, {"log", log}});
    }
    if (action == "pick") return pick(*session, payload);
    if (action == "choose") return choose(*session, payload);
    return engine_move(*session);
  } catch (const nlohmann::json::parse_error& e) {
    return error_response(400, "invalid_json", e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response(400, "invalid_request", e.what());
  } catch (const CapacityError& e) {
    return error_response(413, "capacity_exceeded", e.what());
  } catch (const InputError& e) {
    return error_response(400, "invalid_request", e.what());
  } catch (const StateError& e) {
    return error_response(409, "invalid_state", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

nlohmann::json GameService::snapshot() const {
  std::vector<std::shared_ptr<GameSession>> sessions;
  std::size_t next_id;
  {
    std::shared_lock lock(sessions_mutex_);
    for (const auto& [_, s] : sessions_) sessions.push_back(s);
    next_id = next_id_;
  }
  nlohmann::json games = nlohmann::json::array();
  for (const auto& s : sessions) {
    std::lock_guard lock(s->mutex());
    nlohmann::json log = nlohmann::json::array();
    for (const auto& m : s->log()) log.push_back(move_to_json(m));
    games.push_back({{"id", s->id()}, {"request", create_request_to_json(s->request())}, {"log", log}});
  }
  return {{"version", 1}, {"next_id", next_id}, {"games", games}};
}

void GameService::restore(const nlohmann::json& snap) {
  if (!snap.is_object() || !snap.contains("games") || !snap["games"].is_array()) {
    throw InputError("snapshot needs a \"games\" array");
  }
  std::map<std::string, std::shared_ptr<GameSession>> rebuilt;
  for (const auto& entry : snap["games"]) {
    const std::string id = entry.at("id").get<std::string>();
    rebuilt[id] = rebuild(entry, id);
  }
  std::unique_lock lock(sessions_mutex_);
  sessions_ = std::move(rebuilt);
  next_id_ = snap.value("next_id", sessions_.size() + 1);
}

void GameService::save_snapshot(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write snapshot to " + path);
  out << snapshot().dump(2) << '\n';
}

void GameService::load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read snapshot " + path);
  restore(nlohmann::json::parse(in));
}

}  // namespace pickchoose
