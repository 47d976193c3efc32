#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pickchoose/family.hpp"
#include "pickchoose/football.hpp"
#include "pickchoose/game.hpp"
#include "pickchoose/solver.hpp"

namespace pickchoose {

enum class GameMode { Football, Family };

struct CreateGameRequest {
  GameMode mode = GameMode::Football;
  // Football only.
  std::optional<Board> board;
  // Football: the strict-majority family with Alice as protagonist.
  Family family;
  Player protagonist = Player::Alice;
  // The engine plays the other player.
  Player human = Player::Alice;
};

// {"mode":"football","board":"1,2,3,4","human":"alice"} or
// {"mode":"family","family":{...},"protagonist":"bob","human":"alice"}.
// Throws InputError / CapacityError.
CreateGameRequest parse_create_request(const nlohmann::json& body, int ground_set_cap);
nlohmann::json create_request_to_json(const CreateGameRequest& request);

Player parse_player(const nlohmann::json& value, const char* field);

struct MoveRecord {
  int turn = 0;
  enum class Kind { Pick, Choose } kind = Kind::Pick;
  Player actor = Player::Alice;
  bool by_engine = false;
  int element = 0;                   // pick: offered element; choose: assigned element
  Player recipient = Player::Alice;  // choose only
  // "optimal" or "heuristic-maximal-resistance" for engine moves.
  std::string policy;
};

// A goal the engine plays for, with the position valued as a game on
// `family` whose protagonist is `protagonist`.
struct Objective {
  Family family;
  Player protagonist;
  // True if the engine wants the protagonist to end with a member of family.
  bool engine_wants_member;
  std::string name;
};

// One live game. Not synchronised itself; GameService serialises access
// through mutex().
class GameSession {
 public:
  GameSession(std::string id, CreateGameRequest request, const Solver& solver);

  const std::string& id() const { return id_; }
  const CreateGameRequest& request() const { return request_; }
  const GameState& state() const { return state_; }
  const std::vector<MoveRecord>& log() const { return log_; }
  Player engine() const { return other(request_.human); }
  std::mutex& mutex() const { return mutex_; }

  // `actor` defaults to the human; a pick or choice by anyone but the
  // player to move is refused. Throw StateError / InputError.
  void apply_pick(int element, std::optional<Player> actor = std::nullopt);
  void apply_choice(Player recipient, std::optional<Player> actor = std::nullopt);
  // Plays one decision for the engine and returns its record.
  MoveRecord engine_move();

  // Applies a logged move without turn-ownership checks (replay).
  void replay(const MoveRecord& record);

  nlohmann::json state_json() const;
  nlohmann::json analysis_json() const;

  // "alice", "bob" or "draw" under optimal play from `state`.
  std::string optimal_winner(const GameState& state) const;

 private:
  void record(MoveRecord::Kind kind, Player actor, bool by_engine, int element, Player recipient,
              std::string policy);
  bool achieved(const Objective& objective, const GameState& state) const;
  int refutations(const Objective& objective, const GameState& state, int depth) const;
  std::string actual_winner() const;

  std::string id_;
  CreateGameRequest request_;
  const Solver* solver_;
  GameState state_;
  std::vector<MoveRecord> log_;
  // Engine goals in priority order.
  std::vector<Objective> objectives_;
  mutable std::mutex mutex_;
};

nlohmann::json move_to_json(const MoveRecord& m);
MoveRecord move_from_json(const nlohmann::json& j);

}  // namespace pickchoose
