#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "pickchoose/element_set.hpp"
#include "pickchoose/family.hpp"

namespace pickchoose {

enum class Player { Alice, Bob };

constexpr Player other(Player p) { return p == Player::Alice ? Player::Bob : Player::Alice; }
const char* to_string(Player p);

// Alice picks on even (0-based) turns, Bob on odd turns.
constexpr Player picker_on_turn(int turn) { return turn % 2 == 0 ? Player::Alice : Player::Bob; }

// Outcome of both games on a family: alice = "Alice wins her F-game" (the
// protagonist picks first), bob = "Bob wins his F-game" (the protagonist
// chooses first).
struct GameStatus {
  bool alice = false;
  bool bob = false;
  bool operator==(const GameStatus&) const = default;
};

// First-offer analysis of a nonterminal family.
//   u_a = {x : Bob(F_x^+)}    l_a = {x : Bob(F_x^-)}
//   u_b = {x : Alice(F_x^+)}  l_b = {x : Alice(F_x^-)}
struct MarginProfile {
  ElementSet u_a;
  ElementSet l_a;
  ElementSet u_b;
  ElementSet l_b;

  // Alice's winning first offers.
  ElementSet alice_margin() const { return u_a & l_a; }
  // Offers Bob can answer either way and still win.
  ElementSet bob_margin() const { return u_b & l_b; }
  bool alice_wins() const { return !alice_margin().empty(); }
  bool bob_wins() const { return (u_b | l_b) == ElementSet::full(u_b.n()); }
};

struct SolverConfig {
  // Families with n above this are refused with CapacityError.
  int ground_set_cap = kDefaultGroundSetCap;
  // Maximum entries per memo table; 0 means unbounded. A full table stops
  // accepting new entries but never evicts.
  std::size_t memo_capacity = 0;
  bool memoize = true;
};

struct SolverStats {
  std::uint64_t nodes = 0;
  std::uint64_t memo_hits = 0;
};

// Write-once concurrent cache from families to verdicts. Reads take a shared
// lock on one shard; inserts an exclusive lock. Values never change once
// stored, so racing writers store the same value.
class MemoTable {
 public:
  explicit MemoTable(std::size_t capacity = 0) : capacity_(capacity) {}

  // 0 = false, 1 = true, -1 = absent.
  int find(const Family& f) const;
  void insert(const Family& f, bool value);
  std::size_t size() const { return size_.load(std::memory_order_relaxed); }
  void clear();

 private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<Family, bool, FamilyHash> map;
  };
  std::size_t capacity_;
  std::atomic<std::size_t> size_{0};
  std::array<Shard, kShards> shards_;
};

// Exact evaluator for picker-chooser games via
//   Alice(F) <=> exists x : Bob(F_x^+) and Bob(F_x^-)
//   Bob(F)   <=> for all x : Alice(F_x^+) or Alice(F_x^-)
// with terminal families (k = 0 or k = n) decided by membership of the
// unique final set. Safe to call concurrently from several threads.
class Solver {
 public:
  explicit Solver(SolverConfig config = {});

  bool alice(const Family& f) const;
  bool bob(const Family& f) const;
  // Verdict of `protagonist`'s F-game: alice(f) for Alice, bob(f) for Bob.
  bool wins(const Family& f, Player protagonist) const {
    return protagonist == Player::Alice ? alice(f) : bob(f);
  }
  GameStatus status(const Family& f) const;

  // Throws InputError for terminal families.
  MarginProfile margin_profile(const Family& f) const;
  // Alice's margin: her winning first offers. Nonempty iff alice(f).
  ElementSet best_first_offers(const Family& f) const;

  const SolverConfig& config() const { return config_; }
  std::size_t memo_size() const { return alice_memo_->size() + bob_memo_->size(); }
  SolverStats stats() const;
  void clear();

 private:
  void check_cap(const Family& f) const;
  bool eval(const Family& f, Player role) const;

  SolverConfig config_;
  std::unique_ptr<MemoTable> alice_memo_;
  std::unique_ptr<MemoTable> bob_memo_;
  mutable std::atomic<std::uint64_t> nodes_{0};
  mutable std::atomic<std::uint64_t> hits_{0};
};

// Elements of [n] ordered from the centre outwards: c, c-1, c+1, c-2, ...
// with c = floor(n/2) + 1.
std::vector<int> middle_out_order(int n);

// --- Mid-game positions ------------------------------------------------------

struct StateReduction {
  // Root family sectioned + at the protagonist's elements and - at the
  // antagonist's, standardised onto the remaining board.
  Family residual;
  bool protagonist_picks_next = false;
};

// Reduces a position of the game on `root` (protagonist = `protagonist`) to
// the residual game. `turn_index` must equal the number of elements assigned
// so far. Throws InputError on overlapping holdings, holdings over quota
// (k for the protagonist, n - k for the antagonist) or a bad turn index.
StateReduction reduce_state(const Family& root, const ElementSet& protagonist_holdings,
                            const ElementSet& antagonist_holdings, int turn_index, Player protagonist);

// Whether the protagonist wins the reduced position under optimal play.
bool evaluate_state(const Solver& solver, const StateReduction& state);

}  // namespace pickchoose
