#include "pickchoose/session.hpp"

#include <algorithm>
#include <limits>

#include "pickchoose/errors.hpp"

namespace pickchoose {

namespace {

constexpr const char* kOptimal = "optimal";
constexpr const char* kHeuristic = "heuristic-maximal-resistance";

std::vector<std::string> score_strings(const Board& board) {
  std::vector<std::string> out;
  for (const auto& s : board.scores()) out.push_back(to_string(s));
  return out;
}

// Residual element j (1-based) is the j-th smallest remaining element.
nlohmann::json relabel(const ElementSet& residual_set, const std::vector<int>& remaining) {
  nlohmann::json out = nlohmann::json::array();
  for (int j : residual_set.elements()) out.push_back(remaining[static_cast<std::size_t>(j - 1)]);
  return out;
}

int outcome_rank(const std::string& winner, Player p) {
  if (winner == "draw") return 1;
  return winner == to_string(p) ? 2 : 0;
}

}  // namespace

Player parse_player(const nlohmann::json& value, const char* field) {
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "alice") return Player::Alice;
    if (s == "bob") return Player::Bob;
  }
  throw InputError(std::string("field \"") + field + "\" must be \"alice\" or \"bob\", got " + value.dump());
}

CreateGameRequest parse_create_request(const nlohmann::json& body, int ground_set_cap) {
  if (!body.is_object()) throw InputError("request body must be a JSON object");
  CreateGameRequest req;
  const std::string mode = body.value("mode", std::string("football"));
  if (body.contains("human")) req.human = parse_player(body["human"], "human");

  if (mode == "football") {
    req.mode = GameMode::Football;
    if (!body.contains("board")) throw InputError("football game needs a \"board\"");
    const auto& b = body["board"];
    if (b.is_string()) {
      req.board = parse_board(b.get<std::string>());
    } else if (b.is_array()) {
      std::vector<Rational> scores;
      for (const auto& v : b) {
        if (v.is_string()) {
          scores.push_back(parse_rational(v.get<std::string>()));
        } else if (v.is_number_integer()) {
          scores.emplace_back(v.get<long long>());
        } else {
          throw InputError("board entries must be integers or exact strings (\"1/2\", \"0.5\"), got " + v.dump());
        }
      }
      req.board = Board(std::move(scores));
    } else {
      throw InputError("\"board\" must be a string or an array");
    }
    if (req.board->size() > ground_set_cap) {
      throw CapacityError("board of " + std::to_string(req.board->size()) + " scores exceeds the service cap of " +
                          std::to_string(ground_set_cap));
    }
    req.family = winning_family(*req.board);
    req.protagonist = Player::Alice;
  } else if (mode == "family") {
    req.mode = GameMode::Family;
    if (!body.contains("family")) throw InputError("family game needs a \"family\"");
    const auto& f = body["family"];
    if (f.is_object()) {
      req.family = family_from_json(f, ground_set_cap);
    } else if (f.is_string()) {
      if (!body.contains("n") || !body["n"].is_number_integer()) {
        throw InputError("compact family needs integer \"n\"");
      }
      std::optional<int> k;
      if (body.contains("k")) k = body["k"].get<int>();
      req.family = parse_family(f.get<std::string>(), body["n"].get<int>(), k, ground_set_cap);
    } else {
      throw InputError("\"family\" must be an object or a compact string");
    }
    if (body.contains("protagonist")) req.protagonist = parse_player(body["protagonist"], "protagonist");
  } else {
    throw InputError("unknown mode \"" + mode + "\" (expected football or family)");
  }
  return req;
}

nlohmann::json create_request_to_json(const CreateGameRequest& request) {
  nlohmann::json j{{"mode", request.mode == GameMode::Football ? "football" : "family"},
                   {"human", to_string(request.human)}};
  if (request.mode == GameMode::Football) {
    j["board"] = score_strings(*request.board);
  } else {
    j["family"] = family_to_json(request.family);
    j["protagonist"] = to_string(request.protagonist);
  }
  return j;
}

nlohmann::json move_to_json(const MoveRecord& m) {
  nlohmann::json j{{"turn", m.turn},
                   {"action", m.kind == MoveRecord::Kind::Pick ? "pick" : "choose"},
                   {"player", to_string(m.actor)},
                   {"by", m.by_engine ? "engine" : "human"},
                   {"element", m.element}};
  if (m.kind == MoveRecord::Kind::Choose) j["recipient"] = to_string(m.recipient);
  if (!m.policy.empty()) j["policy"] = m.policy;
  return j;
}

MoveRecord move_from_json(const nlohmann::json& j) {
  MoveRecord m;
  if (!j.is_object()) throw InputError("move record must be an object");
  m.turn = j.value("turn", 0);
  const std::string action = j.value("action", std::string());
  if (action == "pick") {
    m.kind = MoveRecord::Kind::Pick;
  } else if (action == "choose") {
    m.kind = MoveRecord::Kind::Choose;
    m.recipient = parse_player(j.at("recipient"), "recipient");
  } else {
    throw InputError("unknown move action \"" + action + "\"");
  }
  m.actor = parse_player(j.at("player"), "player");
  m.by_engine = j.value("by", std::string("human")) == "engine";
  m.element = j.at("element").get<int>();
  m.policy = j.value("policy", std::string());
  return m;
}

// --- GameSession ---------------------------------------------------------------------

GameSession::GameSession(std::string id, CreateGameRequest request, const Solver& solver)
    : id_(std::move(id)),
      request_(std::move(request)),
      solver_(&solver),
      state_(request_.family.n(), request_.family.k(), request_.protagonist) {
  if (request_.family.n() > solver.config().ground_set_cap) {
    throw CapacityError("game on n=" + std::to_string(request_.family.n()) + " exceeds the solver cap of " +
                        std::to_string(solver.config().ground_set_cap));
  }
  const Player e = engine();
  if (request_.mode == GameMode::Football) {
    objectives_.push_back({request_.family, e, true, "strict-win"});
    objectives_.push_back({request_.family, other(e), false, "avoid-loss"});
  } else {
    objectives_.push_back({request_.family, request_.protagonist, e == request_.protagonist, "win"});
  }
}

void GameSession::record(MoveRecord::Kind kind, Player actor, bool by_engine, int element, Player recipient,
                         std::string policy) {
  MoveRecord m;
  m.turn = state_.turn();
  m.kind = kind;
  m.actor = actor;
  m.by_engine = by_engine;
  m.element = element;
  m.recipient = recipient;
  m.policy = std::move(policy);
  log_.push_back(std::move(m));
}

void GameSession::apply_pick(int element, std::optional<Player> actor) {
  if (state_.finished()) throw StateError("game is finished");
  if (state_.phase() != Phase::AwaitingPick) throw StateError("wrong phase: awaiting a choice, not a pick");
  const Player who = actor.value_or(request_.human);
  if (who != state_.picker()) {
    throw StateError(std::string(to_string(who)) + " is acting out of turn: " + to_string(state_.picker()) +
                     " is the picker");
  }
  state_.pick(element);
  record(MoveRecord::Kind::Pick, who, false, element, Player::Alice, "");
}

void GameSession::apply_choice(Player recipient, std::optional<Player> actor) {
  if (state_.finished()) throw StateError("game is finished");
  if (state_.phase() != Phase::AwaitingChoice) throw StateError("wrong phase: awaiting a pick, not a choice");
  const Player who = actor.value_or(request_.human);
  if (who != state_.chooser()) {
    throw StateError(std::string(to_string(who)) + " is acting out of turn: " + to_string(state_.chooser()) +
                     " is the chooser");
  }
  const int element = *state_.offered();
  record(MoveRecord::Kind::Choose, who, false, element, recipient, "");
  state_.choose(state_.side_of(recipient));
}

bool GameSession::achieved(const Objective& objective, const GameState& state) const {
  const ElementSet& mine = state.holdings_of(objective.protagonist);
  const ElementSet& theirs = state.holdings_of(other(objective.protagonist));
  bool member;
  if (state.finished()) {
    member = objective.family.contains(mine);
  } else {
    member = evaluate_state(*solver_, reduce_state(objective.family, mine, theirs, state.turn(), objective.protagonist));
  }
  return member == objective.engine_wants_member;
}

// Number of opponent replies at the opponent's next decision after which the
// objective is out of reach. Finished lost games count as 3 (worse than any
// pair of replies).
int GameSession::refutations(const Objective& objective, const GameState& state, int depth) const {
  if (state.finished()) return achieved(objective, state) ? 0 : 3;
  const Player e = engine();
  if (state.to_move() == e) {
    if (depth > 0) return achieved(objective, state) ? 0 : 3;
    int best = std::numeric_limits<int>::max();
    if (state.phase() == Phase::AwaitingPick) {
      for (int x : state.remaining().elements()) {
        GameState next = state;
        next.pick(x);
        best = std::min(best, refutations(objective, next, depth + 1));
      }
    } else {
      for (Player r : {e, other(e)}) {
        GameState next = state;
        next.choose(next.side_of(r));
        best = std::min(best, refutations(objective, next, depth + 1));
      }
    }
    return best;
  }
  int count = 0;
  if (state.phase() == Phase::AwaitingChoice) {
    for (Player r : {Player::Alice, Player::Bob}) {
      GameState next = state;
      next.choose(next.side_of(r));
      if (!achieved(objective, next)) ++count;
    }
  } else {
    for (int x : state.remaining().elements()) {
      bool saved = false;
      for (Player r : {Player::Alice, Player::Bob}) {
        GameState next = state;
        next.pick(x);
        next.choose(next.side_of(r));
        saved = saved || achieved(objective, next);
      }
      if (!saved) ++count;
    }
  }
  return count;
}

MoveRecord GameSession::engine_move() {
  if (state_.finished()) throw StateError("game is finished");
  const Player e = engine();
  if (state_.to_move() != e) throw StateError("it is not the engine's turn");

  const bool picking = state_.phase() == Phase::AwaitingPick;
  const auto remaining = state_.remaining().elements();
  const std::vector<Player> recipients{e, other(e)};

  auto preserves_pick = [&](const Objective& o, int x) {
    for (Player r : {Player::Alice, Player::Bob}) {
      GameState next = state_;
      next.pick(x);
      next.choose(next.side_of(r));
      if (!achieved(o, next)) return false;
    }
    return true;
  };
  auto preserves_choice = [&](const Objective& o, Player r) {
    GameState next = state_;
    next.choose(next.side_of(r));
    return achieved(o, next);
  };

  std::optional<int> pick;
  std::optional<Player> recipient;
  std::string policy = kOptimal;
  for (const auto& o : objectives_) {
    if (!achieved(o, state_)) continue;
    if (picking) {
      for (int x : remaining) {
        if (preserves_pick(o, x)) {
          pick = x;
          break;
        }
      }
    } else {
      for (Player r : recipients) {
        if (preserves_choice(o, r)) {
          recipient = r;
          break;
        }
      }
    }
    break;
  }

  if (!pick && !recipient) {
    policy = kHeuristic;
    const Objective& o = objectives_.back();
    int best = std::numeric_limits<int>::max();
    if (picking) {
      for (int x : remaining) {
        GameState next = state_;
        next.pick(x);
        const int r = refutations(o, next, 0);
        if (r < best) {
          best = r;
          pick = x;
        }
      }
    } else {
      for (Player who : recipients) {
        GameState next = state_;
        next.choose(next.side_of(who));
        const int r = refutations(o, next, 0);
        if (r < best) {
          best = r;
          recipient = who;
        }
      }
    }
  }

  if (picking) {
    state_.pick(*pick);
    record(MoveRecord::Kind::Pick, e, true, *pick, Player::Alice, policy);
  } else {
    const int element = *state_.offered();
    record(MoveRecord::Kind::Choose, e, true, element, *recipient, policy);
    state_.choose(state_.side_of(*recipient));
  }
  return log_.back();
}

void GameSession::replay(const MoveRecord& m) {
  if (m.kind == MoveRecord::Kind::Pick) {
    if (state_.phase() != Phase::AwaitingPick || m.actor != state_.picker()) {
      throw StateError("replayed pick does not fit the position at turn " + std::to_string(state_.turn()));
    }
    state_.pick(m.element);
  } else {
    if (state_.phase() != Phase::AwaitingChoice || m.actor != state_.chooser() || *state_.offered() != m.element) {
      throw StateError("replayed choice does not fit the position at turn " + std::to_string(state_.turn()));
    }
    state_.choose(state_.side_of(m.recipient));
  }
  log_.push_back(m);
}

std::string GameSession::actual_winner() const {
  const ElementSet& a = state_.holdings_of(Player::Alice);
  const ElementSet& b = state_.holdings_of(Player::Bob);
  if (request_.mode == GameMode::Football) {
    const Rational sa = request_.board->sum(a);
    const Rational sb = request_.board->sum(b);
    if (sa > sb) return "alice";
    if (sb > sa) return "bob";
    return "draw";
  }
  const bool member = request_.family.contains(state_.holdings(Side::Protagonist));
  return to_string(member ? request_.protagonist : other(request_.protagonist));
}

std::string GameSession::optimal_winner(const GameState& state) const {
  auto forces = [&](Player protagonist) {
    const Objective o{request_.family, protagonist, true, ""};
    return achieved(o, state);
  };
  if (request_.mode == GameMode::Football) {
    if (forces(Player::Alice)) return "alice";
    if (forces(Player::Bob)) return "bob";
    return "draw";
  }
  return to_string(forces(request_.protagonist) ? request_.protagonist : other(request_.protagonist));
}

nlohmann::json GameSession::state_json() const {
  const bool football = request_.mode == GameMode::Football;
  nlohmann::json j{{"id", id_},
                   {"mode", football ? "football" : "family"},
                   {"n", state_.n()},
                   {"k", state_.k()},
                   {"protagonist", to_string(request_.protagonist)},
                   {"human", to_string(request_.human)},
                   {"engine", to_string(engine())},
                   {"turn", state_.turn()},
                   {"phase", to_string(state_.phase())},
                   {"family", family_to_json(request_.family)},
                   {"remaining", state_.remaining().elements()},
                   {"holdings",
                    {{"alice", state_.holdings_of(Player::Alice).elements()},
                     {"bob", state_.holdings_of(Player::Bob).elements()}}}};
  nlohmann::json log = nlohmann::json::array();
  for (const auto& m : log_) log.push_back(move_to_json(m));
  j["log"] = log;
  if (state_.finished()) {
    j["picker"] = nullptr;
    j["chooser"] = nullptr;
    j["to_move"] = nullptr;
  } else {
    j["picker"] = to_string(state_.picker());
    j["chooser"] = to_string(state_.chooser());
    j["to_move"] = to_string(state_.to_move());
  }
  j["offered"] = state_.offered() ? nlohmann::json(*state_.offered()) : nlohmann::json(nullptr);
  if (football) {
    j["board"] = score_strings(*request_.board);
    j["sums"] = {{"alice", to_string(request_.board->sum(state_.holdings_of(Player::Alice)))},
                 {"bob", to_string(request_.board->sum(state_.holdings_of(Player::Bob)))}};
  }
  if (state_.finished()) {
    j["outcome"] = {{"winner", actual_winner()},
                    {"alice", state_.holdings_of(Player::Alice).elements()},
                    {"bob", state_.holdings_of(Player::Bob).elements()}};
    if (football) j["outcome"]["sums"] = j["sums"];
  } else {
    j["outcome"] = nullptr;
  }
  return j;
}

nlohmann::json GameSession::analysis_json() const {
  const std::string winner = optimal_winner(state_);
  nlohmann::json j{{"id", id_},
                   {"turn", state_.turn()},
                   {"phase", to_string(state_.phase())},
                   {"winner_under_optimal_play", winner},
                   {"summary", winner == "draw" ? std::string("Draw under optimal play")
                                                : std::string(winner == "alice" ? "Alice" : "Bob") +
                                                      " wins under optimal play"}};
  if (request_.mode == GameMode::Football) {
    j["alice_can_force_strict_win"] = winner == "alice";
    j["bob_can_force_strict_win"] = winner == "bob";
  } else {
    j["protagonist_wins"] = winner == to_string(request_.protagonist);
  }

  if (state_.finished()) {
    j["residual"] = nullptr;
    j["margins"] = nullptr;
    j["moves"] = nlohmann::json::array();
    return j;
  }

  const auto remaining = state_.remaining().elements();
  const StateReduction reduction = state_.reduce(request_.family);
  j["residual"] = {{"family", family_to_json(reduction.residual)},
                   {"elements", remaining},
                   {"protagonist_picks_next", reduction.protagonist_picks_next}};
  if (reduction.residual.is_terminal()) {
    j["margins"] = nullptr;
  } else {
    const MarginProfile p = solver_->margin_profile(reduction.residual);
    auto entry = [&](const ElementSet& s) {
      return nlohmann::json{{"elements", relabel(s, remaining)}, {"residual_interval", s.to_interval_string()}};
    };
    j["margins"] = {{"u_a", entry(p.u_a)},
                    {"l_a", entry(p.l_a)},
                    {"u_b", entry(p.u_b)},
                    {"l_b", entry(p.l_b)},
                    {"alice_margin", entry(p.alice_margin())},
                    {"bob_margin", entry(p.bob_margin())}};
  }

  nlohmann::json moves = nlohmann::json::array();
  if (state_.phase() == Phase::AwaitingPick) {
    const Player picker = state_.picker();
    const Player chooser = state_.chooser();
    for (int x : remaining) {
      std::string outcome[2];
      int idx = 0;
      for (Player r : {Player::Alice, Player::Bob}) {
        GameState next = state_;
        next.pick(x);
        next.choose(next.side_of(r));
        outcome[idx++] = optimal_winner(next);
      }
      // The chooser takes whichever assignment is better for them.
      const std::string& result =
          outcome_rank(outcome[0], chooser) >= outcome_rank(outcome[1], chooser) ? outcome[0] : outcome[1];
      moves.push_back({{"element", x},
                       {"if_to_alice", outcome[0]},
                       {"if_to_bob", outcome[1]},
                       {"winner", result},
                       {"winning_for_picker", result == to_string(picker)}});
    }
  } else {
    for (Player r : {Player::Alice, Player::Bob}) {
      GameState next = state_;
      next.choose(next.side_of(r));
      const std::string result = optimal_winner(next);
      moves.push_back({{"recipient", to_string(r)},
                       {"winner", result},
                       {"winning_for_chooser", result == to_string(state_.chooser())}});
    }
  }
  j["moves"] = moves;
  return j;
}

}  // namespace pickchoose
