#pragma once

#include <optional>

#include "pickchoose/element_set.hpp"
#include "pickchoose/family.hpp"
#include "pickchoose/solver.hpp"

namespace pickchoose {

enum class Side { Protagonist, Antagonist };

constexpr Side opposite(Side s) { return s == Side::Protagonist ? Side::Antagonist : Side::Protagonist; }
const char* to_string(Side s);

enum class Phase { AwaitingPick, AwaitingChoice, Finished };
const char* to_string(Phase p);

// Move mechanics on the board [n]: on turn i the picker (Alice for even i)
// names a remaining element, then the chooser gives it to one of the two
// players. As soon as the protagonist holds k elements or the antagonist
// holds n - k, the other side receives everything left and the game ends.
class GameState {
 public:
  GameState(int n, int k, Player protagonist);

  int n() const { return n_; }
  int k() const { return k_; }
  Player protagonist() const { return protagonist_; }
  Player player_of(Side s) const { return s == Side::Protagonist ? protagonist_ : other(protagonist_); }
  Side side_of(Player p) const { return p == protagonist_ ? Side::Protagonist : Side::Antagonist; }

  int turn() const { return turn_; }
  Phase phase() const { return phase_; }
  bool finished() const { return phase_ == Phase::Finished; }
  Player picker() const { return picker_on_turn(turn_); }
  Player chooser() const { return other(picker()); }
  // The player whose decision is pending; undefined when finished.
  Player to_move() const { return phase_ == Phase::AwaitingChoice ? chooser() : picker(); }
  std::optional<int> offered() const { return offered_; }

  const ElementSet& holdings(Side s) const { return s == Side::Protagonist ? protagonist_holdings_ : antagonist_holdings_; }
  const ElementSet& holdings_of(Player p) const { return holdings(side_of(p)); }
  ElementSet remaining() const;

  // Throw StateError on a wrong phase and InputError on an element that is
  // not on the board.
  void pick(int element);
  void choose(Side recipient);

  // The residual game at this position; ignores a pending offer.
  StateReduction reduce(const Family& root) const;

 private:
  void complete_if_quota_filled();

  int n_;
  int k_;
  Player protagonist_;
  int turn_ = 0;
  Phase phase_ = Phase::AwaitingPick;
  std::optional<int> offered_;
  ElementSet protagonist_holdings_;
  ElementSet antagonist_holdings_;
};

}  // namespace pickchoose
