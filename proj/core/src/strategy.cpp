#include "pickchoose/strategy.hpp"

#include "pickchoose/errors.hpp"

namespace pickchoose {

namespace {

bool protagonist_wins(const Solver& solver, const Family& root, const GameState& state) {
  if (state.finished()) return root.contains(state.holdings(Side::Protagonist));
  return evaluate_state(solver, state.reduce(root));
}

}  // namespace

Strategy::Strategy(const Solver& solver, Family root, Player protagonist, Side side, PickOrder order)
    : solver_(&solver), root_(std::move(root)), protagonist_(protagonist), side_(side), order_(order) {}

Player Strategy::player() const { return side_ == Side::Protagonist ? protagonist_ : other(protagonist_); }

bool Strategy::winning(const GameState& state) const {
  const bool p = protagonist_wins(*solver_, root_, state);
  return side_ == Side::Protagonist ? p : !p;
}

int Strategy::pick(const GameState& state) const {
  if (state.phase() != Phase::AwaitingPick || state.picker() != player()) {
    throw StateError(std::string(to_string(player())) + " is not the picker");
  }
  const auto remaining = state.remaining().elements();
  std::vector<int> candidates;
  if (order_ == PickOrder::Ascending) {
    candidates = remaining;
  } else {
    for (int i : middle_out_order(static_cast<int>(remaining.size()))) candidates.push_back(remaining[i - 1]);
  }
  for (int x : candidates) {
    bool holds = true;
    for (Side recipient : {Side::Protagonist, Side::Antagonist}) {
      GameState next = state;
      next.pick(x);
      next.choose(recipient);
      if (!winning(next)) {
        holds = false;
        break;
      }
    }
    if (holds) return x;
  }
  throw StateError("no win-preserving offer: position is lost for " + std::string(to_string(player())));
}

Side Strategy::choose(const GameState& state) const {
  if (state.phase() != Phase::AwaitingChoice || state.chooser() != player()) {
    throw StateError(std::string(to_string(player())) + " is not the chooser");
  }
  // Taking the element oneself is tried first.
  for (Side recipient : {side_, opposite(side_)}) {
    GameState next = state;
    next.choose(recipient);
    if (winning(next)) return recipient;
  }
  throw StateError("no win-preserving assignment: position is lost for " + std::string(to_string(player())));
}

void Strategy::play(GameState& state) const {
  if (state.finished()) throw StateError("game is finished");
  if (state.phase() == Phase::AwaitingPick) {
    state.pick(pick(state));
  } else {
    state.choose(choose(state));
  }
}

Strategy extract_strategy(const Solver& solver, const Family& f, Player protagonist, Side side, PickOrder order) {
  GameState start(f.n(), f.k(), protagonist);
  Strategy strategy(solver, f, protagonist, side, order);
  if (!strategy.winning(start)) {
    throw StateError(std::string("the ") + to_string(side) + " (" + to_string(strategy.player()) +
                     ") does not win this game");
  }
  return strategy;
}

std::optional<ThresholdRule> threshold_rule(const Solver& solver, const Family& f) {
  if (f.is_terminal() || !solver.alice(f)) return std::nullopt;
  const auto margin = solver.best_first_offers(f).elements();
  return ThresholdRule{margin.front()};
}

}  // namespace pickchoose
