#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "pickchoose/errors.hpp"
#include "pickchoose/service.hpp"
#include "pickchoose/session.hpp"
#include "pickchoose/verify.hpp"

namespace pickchoose {
namespace {

using nlohmann::json;

json g_json() { return family_to_json(fixture_g()); }

ServiceResponse post(GameService& s, const std::string& path, const json& body = json::object()) {
  return s.handle("POST", path, body.dump());
}
ServiceResponse get(GameService& s, const std::string& path) { return s.handle("GET", path, ""); }

std::string create(GameService& s, const json& body) {
  const auto r = post(s, "/games", body);
  EXPECT_EQ(r.status, 201) << r.body.dump();
  return r.body["id"].get<std::string>();
}

// --- create ---

TEST(Create, FootballHumanAlice) {
  GameService s;
  const auto r = post(s, "/games", {{"mode", "football"}, {"board", "1,2,3,4"}, {"human", "alice"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_EQ(r.body["turn"], 0);
  EXPECT_EQ(r.body["phase"], "awaiting-pick");
  EXPECT_EQ(r.body["to_move"], "alice");
  EXPECT_EQ(r.body["picker"], "alice");
  EXPECT_EQ(r.body["engine"], "bob");
  EXPECT_EQ(r.body["remaining"], json({1, 2, 3, 4}));
  EXPECT_EQ(r.body["board"], json({"1", "2", "3", "4"}));
  EXPECT_TRUE(r.body["outcome"].is_null());
}

TEST(Create, BoardAsArrayWithExactStrings) {
  GameService s;
  const auto r = post(s, "/games", {{"mode", "football"}, {"board", json::array({"0.5", 3, "1/2", 1})}});
  ASSERT_EQ(r.status, 201) << r.body.dump();
  EXPECT_EQ(r.body["board"], json({"1/2", "1/2", "1", "3"}));
}

TEST(Create, FamilyModeG) {
  GameService s;
  const auto r = post(s, "/games", {{"mode", "family"}, {"family", g_json()}, {"protagonist", "bob"}, {"human", "bob"}});
  ASSERT_EQ(r.status, 201) << r.body.dump();
  EXPECT_EQ(r.body["mode"], "family");
  EXPECT_EQ(r.body["protagonist"], "bob");
  EXPECT_EQ(r.body["to_move"], "alice");
}

TEST(Create, CompactFamily) {
  GameService s;
  const auto r = post(s, "/games", {{"mode", "family"}, {"family", "23,24,34"}, {"n", 4}});
  ASSERT_EQ(r.status, 201) << r.body.dump();
  EXPECT_EQ(r.body["k"], 2);
}

TEST(Create, Errors) {
  GameService s;
  auto r = post(s, "/games", {{"mode", "football"}, {"board", "1,2,3"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "invalid_request");
  EXPECT_NE(r.body["message"].get<std::string>().find("odd"), std::string::npos);
  r = post(s, "/games", {{"mode", "football"}, {"board", "1,2,3,4,5,6,7,8,9,10,11,12,13,14"}});
  EXPECT_EQ(r.status, 413);
  EXPECT_EQ(r.body["code"], "capacity_exceeded");
  r = post(s, "/games", {{"mode", "chess"}});
  EXPECT_EQ(r.status, 400);
  r = post(s, "/games", {{"mode", "football"}, {"board", "1,2,3,4"}, {"human", "carol"}});
  EXPECT_EQ(r.status, 400);
  r = s.handle("POST", "/games", "{not json");
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "invalid_json");
  EXPECT_EQ(s.session_count(), 0u);
}

// --- moves ---

TEST(Moves, PickThenChooseAlice) {
  CreateGameRequest req = parse_create_request({{"mode", "football"}, {"board", "1,2,3,4"}}, 12);
  const Solver solver;
  GameSession g("x", req, solver);
  g.apply_pick(4, Player::Alice);
  g.apply_choice(Player::Alice, Player::Bob);
  EXPECT_EQ(g.state().holdings_of(Player::Alice), ElementSet(4, {4}));
  EXPECT_EQ(g.state().turn(), 1);
  EXPECT_EQ(g.state().picker(), Player::Bob);
  EXPECT_EQ(g.log().size(), 2u);
  EXPECT_THROW(g.apply_choice(Player::Alice, Player::Alice), StateError);  // awaiting a pick
  EXPECT_THROW(g.apply_pick(1, Player::Alice), StateError);                // Bob picks now
}

TEST(Moves, ServiceErrorCodes) {
  GameService s;
  const std::string id = create(s, {{"mode", "football"}, {"board", "1,2,3,4"}, {"human", "alice"}});
  const std::string base = "/games/" + id;
  auto r = post(s, base + "/choose", {{"recipient", "alice"}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["code"], "wrong_phase");
  r = post(s, base + "/engine-move");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["code"], "not_your_turn");
  r = post(s, base + "/pick", {{"element", 9}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "invalid_element");
  r = post(s, base + "/pick", {{"element", "two"}});
  EXPECT_EQ(r.status, 400);
  r = post(s, base + "/pick", {{"element", 4}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["phase"], "awaiting-choice");
  EXPECT_EQ(r.body["offered"], 4);
  r = post(s, base + "/pick", {{"element", 3}});
  EXPECT_EQ(r.body["code"], "wrong_phase");
  r = post(s, base + "/choose", {{"recipient", "bob"}});
  EXPECT_EQ(r.body["code"], "not_your_turn");  // Bob (engine) chooses
  r = post(s, base + "/engine-move");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body["engine_move"]["action"], "choose");
  EXPECT_EQ(r.body["engine_move"]["policy"], "optimal");
  EXPECT_EQ(r.body["turn"], 1);
  r = post(s, base + "/pick", {{"element", 4}});
  EXPECT_EQ(r.body["code"], "not_your_turn");  // Bob picks on turn 1
}

TEST(Moves, Routing) {
  GameService s;
  EXPECT_EQ(get(s, "/games/nope").status, 404);
  EXPECT_EQ(get(s, "/nothing").status, 404);
  const std::string id = create(s, {{"board", "1,2,3,4"}});
  EXPECT_EQ(get(s, "/games/" + id + "/bogus").status, 404);
  EXPECT_EQ(s.handle("DELETE", "/games/" + id, "").status, 405);
  EXPECT_EQ(get(s, "/games/" + id + "/pick").status, 405);
  EXPECT_EQ(get(s, "/games/" + id + "?verbose=1").status, 200);
  EXPECT_EQ(get(s, "/games").body["games"], json({id}));
}

TEST(Moves, QuotaAutoFinishes) {
  GameService s;
  const std::string id = create(s, {{"mode", "family"}, {"family", family_to_json(Family::full(4, 2))},
                                    {"human", "alice"}});
  const std::string base = "/games/" + id;
  // Engine Bob assigns each offer; play until finished.
  for (int guard = 0; guard < 10; ++guard) {
    auto st = get(s, base).body;
    if (st["phase"] == "finished") break;
    if (st["to_move"] == "alice" && st["offered"].is_null()) {
      ASSERT_EQ(post(s, base + "/pick", {{"element", st["remaining"][0]}}).status, 200);
    } else if (st["to_move"] == "alice") {
      ASSERT_EQ(post(s, base + "/choose", {{"recipient", "bob"}}).status, 200);
    } else {
      ASSERT_EQ(post(s, base + "/engine-move").status, 200);
    }
  }
  const auto st = get(s, base).body;
  ASSERT_EQ(st["phase"], "finished");
  EXPECT_EQ(st["holdings"]["alice"].size() + st["holdings"]["bob"].size(), 4u);
  EXPECT_EQ(st["outcome"]["winner"], "alice");  // every 2-set is a member
  EXPECT_EQ(post(s, base + "/pick", {{"element", 1}}).body["code"], "game_finished");
  EXPECT_EQ(post(s, base + "/engine-move").body["code"], "game_finished");
  EXPECT_TRUE(get(s, base + "/analysis").body["moves"].empty());
}

TEST(Moves, FootballQuotaGivesRestToOtherPlayer) {
  const Solver solver;
  GameSession g("x", parse_create_request({{"board", "1,2,3,4,5,6"}}, 12), solver);
  g.apply_pick(1, Player::Alice);
  g.apply_choice(Player::Alice, Player::Bob);
  g.apply_pick(2, Player::Bob);
  g.apply_choice(Player::Alice, Player::Alice);
  g.apply_pick(3, Player::Alice);
  g.apply_choice(Player::Alice, Player::Bob);
  EXPECT_TRUE(g.state().finished());
  EXPECT_EQ(g.state().holdings_of(Player::Bob), ElementSet(6, {4, 5, 6}));
  EXPECT_EQ(g.state_json()["outcome"]["winner"], "bob");
  EXPECT_EQ(g.state_json()["sums"]["alice"], "6");
}

// --- engine ---

// Plays every human line against the engine and calls `leaf` on each final
// state. Positions are rebuilt by replaying the log.
void all_lines(const Solver& solver, const CreateGameRequest& req, std::vector<MoveRecord> prefix,
               const std::function<void(const GameSession&)>& leaf) {
  GameSession g("x", req, solver);
  for (const auto& m : prefix) g.replay(m);
  while (!g.state().finished() && g.state().to_move() == g.engine()) {
    g.engine_move();
  }
  if (g.state().finished()) {
    leaf(g);
    return;
  }
  const auto base = g.log();
  const GameState& st = g.state();
  if (st.phase() == Phase::AwaitingPick) {
    for (int x : st.remaining().elements()) {
      GameSession h("x", req, solver);
      for (const auto& m : base) h.replay(m);
      h.apply_pick(x);
      all_lines(solver, req, h.log(), leaf);
    }
  } else {
    for (Player r : {Player::Alice, Player::Bob}) {
      GameSession h("x", req, solver);
      for (const auto& m : base) h.replay(m);
      h.apply_choice(r);
      all_lines(solver, req, h.log(), leaf);
    }
  }
}

TEST(Engine, BobNeverLetsAliceWinFootball) {
  const Solver solver;
  std::mt19937_64 rng(101);
  std::vector<std::string> boards{"1,2,3,4", "0,3,4,5", "0,1,1,10", "1,2,3,4,5,6", "1,1,1,1,1,1"};
  for (int i = 0; i < 6; ++i) {
    std::string b;
    for (int j = 0; j < 6; ++j) b += (j ? "," : "") + std::to_string(static_cast<int>(rng() % 21) - 10);
    boards.push_back(b);
  }
  for (const auto& b : boards) {
    const auto req = parse_create_request({{"mode", "football"}, {"board", b}, {"human", "alice"}}, 12);
    int lines = 0;
    all_lines(solver, req, {}, [&](const GameSession& g) {
      ++lines;
      const auto out = g.state_json()["outcome"];
      ASSERT_NE(out["winner"], "alice") << b << " " << g.state_json()["log"].dump();
      for (const auto& m : g.log()) {
        if (m.by_engine) ASSERT_EQ(m.policy, "optimal");
      }
    });
    EXPECT_GT(lines, 0);
  }
}

TEST(Engine, WinsGAsBobAgainstEveryLine) {
  const Solver solver;
  const auto req = parse_create_request({{"mode", "family"}, {"family", g_json()}, {"human", "alice"}}, 12);
  int lines = 0;
  all_lines(solver, req, {}, [&](const GameSession& g) {
    ++lines;
    ASSERT_EQ(g.state_json()["outcome"]["winner"], "bob");
  });
  EXPECT_GT(lines, 100);
}

TEST(Engine, LostPositionsUseLabelledHeuristic) {
  const Solver solver;
  // Engine plays Alice as protagonist of G, which she cannot win.
  GameSession g("x", parse_create_request({{"mode", "family"}, {"family", g_json()}, {"human", "bob"}}, 12), solver);
  const MoveRecord m = g.engine_move();
  EXPECT_EQ(m.kind, MoveRecord::Kind::Pick);
  EXPECT_EQ(m.policy, "heuristic-maximal-resistance");
  EXPECT_TRUE(m.by_engine);
}

TEST(Engine, LowestIndexAmongWinningPicks) {
  const Solver solver;
  // Full family: every offer wins, so the engine offers 1.
  GameSession g("x",
                parse_create_request({{"mode", "family"}, {"family", family_to_json(Family::full(5, 2))},
                                      {"human", "bob"}},
                                     12),
                solver);
  EXPECT_EQ(g.engine_move().element, 1);
}

// --- analysis ---

TEST(Analysis, GAtTurnZero) {
  GameService s;
  const std::string id =
      create(s, {{"mode", "family"}, {"family", g_json()}, {"protagonist", "bob"}, {"human", "alice"}});
  const auto a = get(s, "/games/" + id + "/analysis").body;
  EXPECT_EQ(a["summary"], "Bob wins under optimal play");
  EXPECT_EQ(a["winner_under_optimal_play"], "bob");
  EXPECT_EQ(a["protagonist_wins"], true);
  EXPECT_EQ(a["moves"].size(), 7u);
}

TEST(Analysis, MiddleOpeningFlaggedOnOddBoards) {
  const Solver solver;
  for (int n : {3, 5}) {
    for (int k = 1; k < n; ++k) {
      enumerate_increasing(n, k, [&](const Family& f) {
        if (!solver.bob(f)) return;
        GameSession g("x",
                      parse_create_request({{"mode", "family"}, {"family", family_to_json(f)}, {"human", "alice"}}, 12),
                      solver);
        const auto a = g.analysis_json();
        const auto& mv = a["moves"][static_cast<std::size_t>(n / 2)];
        ASSERT_EQ(mv["element"], n / 2 + 1);
        ASSERT_EQ(mv["winning_for_picker"], true) << serialize_compact_family(f);
      });
    }
  }
}

TEST(Analysis, FootballOneToFour) {
  GameService s;
  const std::string id = create(s, {{"board", "1,2,3,4"}});
  const auto a = get(s, "/games/" + id + "/analysis").body;
  EXPECT_EQ(a["winner_under_optimal_play"], "draw");
  EXPECT_EQ(a["alice_can_force_strict_win"], false);
  EXPECT_EQ(a["residual"]["elements"], json({1, 2, 3, 4}));
  ASSERT_TRUE(a["margins"].is_object());
  EXPECT_TRUE(a["margins"]["alice_margin"]["elements"].empty());
  for (const auto& m : a["moves"]) EXPECT_EQ(m["winning_for_picker"], false);
}

TEST(Analysis, ConsistentWithSolverAlongRandomLines) {
  const Solver solver;
  std::mt19937_64 rng(103);
  for (int game = 0; game < 60; ++game) {
    const int n = 4 + static_cast<int>(rng() % 4);
    const int k = 1 + static_cast<int>(rng() % (n - 1));
    const Family f = testing::random_family(n, k, rng);
    const Player protagonist = rng() % 2 ? Player::Alice : Player::Bob;
    GameSession g("x",
                  parse_create_request({{"mode", "family"},
                                        {"family", family_to_json(f)},
                                        {"protagonist", to_string(protagonist)},
                                        {"human", rng() % 2 ? "alice" : "bob"}},
                                       12),
                  solver);
    while (!g.state().finished()) {
      const GameState& st = g.state();
      const auto a = g.analysis_json();
      const StateReduction r = reduce_state(f, st.holdings(Side::Protagonist), st.holdings(Side::Antagonist),
                                            st.turn(), protagonist);
      const bool prot_wins = evaluate_state(solver, r);
      ASSERT_EQ(a["winner_under_optimal_play"], to_string(prot_wins ? protagonist : other(protagonist)));
      ASSERT_EQ(a["residual"]["family"], family_to_json(r.residual));
      const auto rem = st.remaining().elements();
      if (st.phase() == Phase::AwaitingPick) {
        const int x = rem[rng() % rem.size()];
        g.apply_pick(x, st.picker());
      } else {
        g.apply_choice(rng() % 2 ? Player::Alice : Player::Bob, st.chooser());
      }
    }
  }
}

TEST(Analysis, MarginsUseOriginalLabels) {
  GameService s;
  const std::string id = create(s, {{"mode", "family"}, {"family", family_to_json(singleton_family(5, 3))},
                                    {"human", "bob"}, {"protagonist", "alice"}});
  // Engine Alice offers; human Bob gives it to Bob (antagonist).
  auto r = post(s, "/games/" + id + "/engine-move");
  ASSERT_EQ(r.status, 200);
  const int offered = r.body["offered"];
  ASSERT_EQ(post(s, "/games/" + id + "/choose", {{"recipient", "bob"}}).status, 200);
  const auto a = get(s, "/games/" + id + "/analysis").body;
  std::vector<int> rem;
  for (int e = 1; e <= 5; ++e) {
    if (e != offered) rem.push_back(e);
  }
  EXPECT_EQ(a["residual"]["elements"], json(rem));
  if (a["margins"].is_object()) {
    for (const auto& e : a["margins"]["u_a"]["elements"]) {
      EXPECT_NE(e.get<int>(), offered);
    }
  }
}

// --- persistence ---

TEST(Snapshot, ImportReplaysToIdenticalState) {
  GameService s;
  std::mt19937_64 rng(107);
  const std::string id = create(s, {{"board", "3,1,4,1,5,9,2,6"}, {"human", "alice"}});
  const std::string base = "/games/" + id;
  while (get(s, base).body["phase"] != "finished") {
    const auto st = get(s, base).body;
    if (st["to_move"] != "alice") {
      ASSERT_EQ(post(s, base + "/engine-move").status, 200);
    } else if (st["phase"] == "awaiting-pick") {
      const auto& rem = st["remaining"];
      ASSERT_EQ(post(s, base + "/pick", {{"element", rem[rng() % rem.size()]}}).status, 200);
    } else {
      ASSERT_EQ(post(s, base + "/choose", {{"recipient", rng() % 2 ? "alice" : "bob"}}).status, 200);
    }
  }
  const auto snap = get(s, base + "/snapshot").body;
  const auto imported = post(s, "/games/import", snap);
  ASSERT_EQ(imported.status, 201) << imported.body.dump();
  auto a = get(s, base).body;
  auto b = imported.body;
  EXPECT_NE(a["id"], b["id"]);
  a.erase("id");
  b.erase("id");
  EXPECT_EQ(a, b);
}

TEST(Snapshot, ImportRejectsBadLog) {
  GameService s;
  const json bad{{"request", {{"mode", "football"}, {"board", json::array({"1", "2", "3", "4"})}, {"human", "alice"}}},
                 {"log", json::array({{{"turn", 0}, {"action", "choose"}, {"player", "bob"}, {"element", 1},
                                       {"recipient", "bob"}}})}};
  const auto r = post(s, "/games/import", bad);
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(s.session_count(), 0u);
}

TEST(Snapshot, FileRoundTrip) {
  GameService s;
  const std::string a = create(s, {{"board", "1,2,3,4"}});
  const std::string b = create(s, {{"mode", "family"}, {"family", g_json()}, {"human", "bob"}});
  ASSERT_EQ(post(s, "/games/" + a + "/pick", {{"element", 2}}).status, 200);
  ASSERT_EQ(post(s, "/games/" + b + "/engine-move").status, 200);
  const auto path = (std::filesystem::temp_directory_path() / "pickchoose_snapshot_test.json").string();
  s.save_snapshot(path);
  GameService t;
  t.load_snapshot(path);
  std::remove(path.c_str());
  EXPECT_EQ(t.session_count(), 2u);
  EXPECT_EQ(get(t, "/games/" + a).body, get(s, "/games/" + a).body);
  EXPECT_EQ(get(t, "/games/" + b).body, get(s, "/games/" + b).body);
  // New ids do not collide with restored ones.
  const std::string c = create(t, {{"board", "1,2"}});
  EXPECT_NE(c, a);
  EXPECT_NE(c, b);
}

// --- concurrency ---

TEST(Concurrency, ParallelSessionsAndSharedSession) {
  GameService s;
  const std::string shared = create(s, {{"mode", "family"}, {"family", g_json()}, {"human", "bob"}});
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      std::mt19937_64 rng(200 + t);
      for (int i = 0; i < 5; ++i) {
        const auto r = post(s, "/games", {{"board", "1,2,3,4,5,6"}, {"human", t % 2 ? "alice" : "bob"}});
        if (r.status != 201) ++failures;
        const std::string base = "/games/" + r.body["id"].get<std::string>();
        for (int step = 0; step < 20; ++step) {
          const auto st = get(s, base).body;
          if (st["phase"] == "finished") break;
          if (st["to_move"] == st["engine"]) {
            if (post(s, base + "/engine-move").status != 200) ++failures;
          } else if (st["phase"] == "awaiting-pick") {
            const auto& rem = st["remaining"];
            if (post(s, base + "/pick", {{"element", rem[rng() % rem.size()]}}).status != 200) ++failures;
          } else {
            if (post(s, base + "/choose", {{"recipient", "alice"}}).status != 200) ++failures;
          }
          get(s, base + "/analysis");
        }
        // Hammer one session from every thread; only legal requests succeed.
        post(s, "/games/" + shared + "/engine-move");
        get(s, "/games/" + shared + "/analysis");
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(failures.load(), 0);
  EXPECT_EQ(s.session_count(), 41u);
  // The shared session log is a legal sequence: replaying it succeeds.
  const auto snap = get(s, "/games/" + shared + "/snapshot").body;
  EXPECT_EQ(post(s, "/games/import", snap).status, 201);
}

}  // namespace
}  // namespace pickchoose
