#include "pickchoose/game.hpp"

#include "pickchoose/errors.hpp"

namespace pickchoose {

const char* to_string(Side s) { return s == Side::Protagonist ? "protagonist" : "antagonist"; }

const char* to_string(Phase p) {
  switch (p) {
    case Phase::AwaitingPick:
      return "awaiting-pick";
    case Phase::AwaitingChoice:
      return "awaiting-choice";
    case Phase::Finished:
      return "finished";
  }
  return "unknown";
}

GameState::GameState(int n, int k, Player protagonist)
    : n_(n), k_(k), protagonist_(protagonist), protagonist_holdings_(n, 0), antagonist_holdings_(n, 0) {
  if (k < 0 || k > n) throw InputError("cardinality k outside [0, n]");
  complete_if_quota_filled();
}

ElementSet GameState::remaining() const {
  return ElementSet(n_, ~(protagonist_holdings_.mask() | antagonist_holdings_.mask()) & ElementSet::full(n_).mask());
}

void GameState::pick(int element) {
  if (phase_ != Phase::AwaitingPick) {
    throw StateError(std::string("cannot pick while ") + to_string(phase_));
  }
  if (!remaining().contains(element)) {
    throw InputError("element " + std::to_string(element) + " is not on the board");
  }
  offered_ = element;
  phase_ = Phase::AwaitingChoice;
}

void GameState::choose(Side recipient) {
  if (phase_ != Phase::AwaitingChoice) {
    throw StateError(std::string("cannot choose while ") + to_string(phase_));
  }
  if (recipient == Side::Protagonist) {
    protagonist_holdings_.insert(*offered_);
  } else {
    antagonist_holdings_.insert(*offered_);
  }
  offered_.reset();
  ++turn_;
  phase_ = Phase::AwaitingPick;
  complete_if_quota_filled();
}

void GameState::complete_if_quota_filled() {
  const ElementSet rest = remaining();
  if (protagonist_holdings_.size() == k_) {
    antagonist_holdings_ = antagonist_holdings_ | rest;
    phase_ = Phase::Finished;
  } else if (antagonist_holdings_.size() == n_ - k_) {
    protagonist_holdings_ = protagonist_holdings_ | rest;
    phase_ = Phase::Finished;
  }
}

StateReduction GameState::reduce(const Family& root) const {
  if (root.n() != n_ || root.k() != k_) throw InputError("family shape does not match the game");
  if (finished()) {
    // Holdings are complete; the residual is the 0-element terminal game.
    Family residual(0, 0);
    if (root.contains(protagonist_holdings_)) residual.insert_rank(0);
    return {residual, true};
  }
  return reduce_state(root, protagonist_holdings_, antagonist_holdings_, turn_, protagonist_);
}

}  // namespace pickchoose
