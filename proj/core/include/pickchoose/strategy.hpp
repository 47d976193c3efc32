#pragma once

#include <optional>

#include "pickchoose/family.hpp"
#include "pickchoose/game.hpp"
#include "pickchoose/solver.hpp"

namespace pickchoose {

enum class PickOrder {
  // Centre of the remaining board first.
  MiddleOut,
  // Lowest remaining element first.
  Ascending,
};

// Move oracle for one player of the game on `root`. Each query recomputes
// the verdicts of the candidate successors through the solver's memo table,
// so no strategy tree is stored.
class Strategy {
 public:
  Strategy(const Solver& solver, Family root, Player protagonist, Side side, PickOrder order);

  Player player() const;
  Side side() const { return side_; }
  const Family& root() const { return root_; }

  // The element to offer. Requires this player to be the picker.
  int pick(const GameState& state) const;
  // The side that receives the pending offer. Requires this player to be
  // the chooser.
  Side choose(const GameState& state) const;
  // Plays whichever decision is pending for this player.
  void play(GameState& state) const;

  // True if this player wins from `state` under optimal play.
  bool winning(const GameState& state) const;

 private:
  const Solver* solver_;
  Family root_;
  Player protagonist_;
  Side side_;
  PickOrder order_;
};

// Builds the oracle for `side` of the game on `f` whose protagonist is
// `protagonist`. Throws StateError if that side does not win.
Strategy extract_strategy(const Solver& solver, const Family& f, Player protagonist, Side side,
                          PickOrder order = PickOrder::MiddleOut);

// Bob's first response in his own game on an increasing family over an even
// board when Alice wins hers: with a a winning first offer for Alice, Bob
// accepts offers x >= a and rejects offers x < a.
struct ThresholdRule {
  int threshold = 0;
  Side respond(int offer) const { return offer >= threshold ? Side::Protagonist : Side::Antagonist; }
};

// The rule built from the smallest element of Alice's margin, or nullopt
// when Alice does not win her game on f.
std::optional<ThresholdRule> threshold_rule(const Solver& solver, const Family& f);

}  // namespace pickchoose
