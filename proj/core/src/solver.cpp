#include "pickchoose/solver.hpp"

#include <mutex>

#include "pickchoose/errors.hpp"

namespace pickchoose {

const char* to_string(Player p) { return p == Player::Alice ? "alice" : "bob"; }

// --- MemoTable -------------------------------------------------------------------

int MemoTable::find(const Family& f) const {
  const Shard& shard = shards_[f.hash() % kShards];
  std::shared_lock lock(shard.mutex);
  auto it = shard.map.find(f);
  if (it == shard.map.end()) return -1;
  return it->second ? 1 : 0;
}

void MemoTable::insert(const Family& f, bool value) {
  if (capacity_ != 0 && size_.load(std::memory_order_relaxed) >= capacity_) return;
  Shard& shard = shards_[f.hash() % kShards];
  std::unique_lock lock(shard.mutex);
  if (shard.map.try_emplace(f, value).second) size_.fetch_add(1, std::memory_order_relaxed);
}

void MemoTable::clear() {
  for (auto& shard : shards_) {
    std::unique_lock lock(shard.mutex);
    shard.map.clear();
  }
  size_.store(0, std::memory_order_relaxed);
}

// --- Solver ---------------------------------------------------------------------------

std::vector<int> middle_out_order(int n) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  const int centre = n / 2 + 1;
  if (n == 0) return order;
  order.push_back(centre);
  for (int d = 1; static_cast<int>(order.size()) < n; ++d) {
    if (centre - d >= 1) order.push_back(centre - d);
    if (centre + d <= n) order.push_back(centre + d);
  }
  return order;
}

Solver::Solver(SolverConfig config)
    : config_(config),
      alice_memo_(std::make_unique<MemoTable>(config.memo_capacity)),
      bob_memo_(std::make_unique<MemoTable>(config.memo_capacity)) {
  if (config_.ground_set_cap < 0 || config_.ground_set_cap > kHardGroundSetLimit) {
    throw InputError("solver ground-set cap must lie in [0, " + std::to_string(kHardGroundSetLimit) + "]");
  }
}

void Solver::check_cap(const Family& f) const {
  if (f.n() > config_.ground_set_cap) {
    throw CapacityError("family on n=" + std::to_string(f.n()) + " exceeds the solver cap of " +
                        std::to_string(config_.ground_set_cap));
  }
}

bool Solver::alice(const Family& f) const {
  check_cap(f);
  return eval(f, Player::Alice);
}

bool Solver::bob(const Family& f) const {
  check_cap(f);
  return eval(f, Player::Bob);
}

GameStatus Solver::status(const Family& f) const {
  check_cap(f);
  return {eval(f, Player::Alice), eval(f, Player::Bob)};
}

bool Solver::eval(const Family& f, Player role) const {
  nodes_.fetch_add(1, std::memory_order_relaxed);
  // Terminal games, and the two trivial families, have the same verdict for
  // both roles.
  if (f.empty()) return false;
  if (f.is_terminal() || f.is_full()) return true;

  MemoTable& memo = role == Player::Alice ? *alice_memo_ : *bob_memo_;
  if (config_.memoize) {
    const int cached = memo.find(f);
    if (cached >= 0) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return cached == 1;
    }
  }

  bool result;
  if (role == Player::Alice) {
    result = false;
    for (int x : middle_out_order(f.n())) {
      if (eval(section_plus(f, x), Player::Bob) && eval(section_minus(f, x), Player::Bob)) {
        result = true;
        break;
      }
    }
  } else {
    result = true;
    for (int x : middle_out_order(f.n())) {
      if (!eval(section_plus(f, x), Player::Alice) && !eval(section_minus(f, x), Player::Alice)) {
        result = false;
        break;
      }
    }
  }

  if (config_.memoize) memo.insert(f, result);
  return result;
}

MarginProfile Solver::margin_profile(const Family& f) const {
  check_cap(f);
  if (f.is_terminal()) {
    throw InputError("margin profile needs 1 <= k <= n-1, got n=" + std::to_string(f.n()) +
                     ", k=" + std::to_string(f.k()));
  }
  const int n = f.n();
  MarginProfile p{ElementSet(n, 0), ElementSet(n, 0), ElementSet(n, 0), ElementSet(n, 0)};
  for (int x = 1; x <= n; ++x) {
    const Family plus = section_plus(f, x);
    const Family minus = section_minus(f, x);
    if (eval(plus, Player::Bob)) p.u_a.insert(x);
    if (eval(minus, Player::Bob)) p.l_a.insert(x);
    if (eval(plus, Player::Alice)) p.u_b.insert(x);
    if (eval(minus, Player::Alice)) p.l_b.insert(x);
  }
  return p;
}

ElementSet Solver::best_first_offers(const Family& f) const { return margin_profile(f).alice_margin(); }

SolverStats Solver::stats() const {
  return {nodes_.load(std::memory_order_relaxed), hits_.load(std::memory_order_relaxed)};
}

void Solver::clear() {
  alice_memo_->clear();
  bob_memo_->clear();
}

// --- Mid-game positions ----------------------------------------------------------------

StateReduction reduce_state(const Family& root, const ElementSet& protagonist_holdings,
                            const ElementSet& antagonist_holdings, int turn_index, Player protagonist) {
  const int n = root.n();
  if (protagonist_holdings.n() != n || antagonist_holdings.n() != n) {
    throw InputError("holdings must live on the root ground set [" + std::to_string(n) + "]");
  }
  if ((protagonist_holdings.mask() & antagonist_holdings.mask()) != 0) {
    throw InputError("holdings overlap: " + (protagonist_holdings & antagonist_holdings).to_string());
  }
  if (protagonist_holdings.size() > root.k()) {
    throw InputError("protagonist holds " + std::to_string(protagonist_holdings.size()) +
                     " elements, quota is " + std::to_string(root.k()));
  }
  if (antagonist_holdings.size() > n - root.k()) {
    throw InputError("antagonist holds " + std::to_string(antagonist_holdings.size()) + " elements, quota is " +
                     std::to_string(n - root.k()));
  }
  const int assigned = protagonist_holdings.size() + antagonist_holdings.size();
  if (turn_index != assigned) {
    throw InputError("turn index " + std::to_string(turn_index) + " does not match " + std::to_string(assigned) +
                     " assigned elements");
  }

  // Sectioning from the top down leaves the labels of smaller elements intact.
  Family residual = root;
  for (int x = n; x >= 1; --x) {
    if (protagonist_holdings.contains(x)) {
      residual = section_plus(residual, x);
    } else if (antagonist_holdings.contains(x)) {
      residual = section_minus(residual, x);
    }
  }
  return {std::move(residual), picker_on_turn(turn_index) == protagonist};
}

bool evaluate_state(const Solver& solver, const StateReduction& state) {
  return state.protagonist_picks_next ? solver.alice(state.residual) : solver.bob(state.residual);
}

}  // namespace pickchoose
