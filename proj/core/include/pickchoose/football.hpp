#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json_fwd.hpp>

#include "pickchoose/family.hpp"
#include "pickchoose/solver.hpp"

namespace pickchoose {

using Rational = boost::multiprecision::cpp_rational;

// Exact rational from "7", "-3", "0.25", "5/4". Throws InputError on
// anything else (exponents, q = 0, empty tokens).
Rational parse_rational(std::string_view token);
// "7", "-1/2".
std::string to_string(const Rational& q);

// 2m exact scores in ascending order; element i of [2m] is the i-th
// smallest score (stable for equal scores).
class Board {
 public:
  // Throws InputError for an odd or zero count.
  explicit Board(std::vector<Rational> scores);

  int m() const { return static_cast<int>(scores_.size() / 2); }
  int size() const { return static_cast<int>(scores_.size()); }
  const std::vector<Rational>& scores() const { return scores_; }
  // Score of element i in [1, 2m].
  const Rational& score(int element) const { return scores_.at(static_cast<std::size_t>(element - 1)); }
  Rational total() const;
  Rational sum(const ElementSet& s) const;

  std::string to_string() const;
  bool operator==(const Board&) const = default;

 private:
  std::vector<Rational> scores_;
};

// Comma-separated scores, e.g. "1,2,3,4" or "0.5,1/2,1,1".
Board parse_board(std::string_view text);

// {S in C([2m], m) : 2 * sum_S > total}: the m-sets whose holder wins
// outright.
Family winning_family(const Board& board);

struct FootballAnalysis {
  // Alice as protagonist: she wins with a strictly larger sum.
  Family alice_family;
  bool alice_wins = false;
  // Bob's strict-win family. With equal team sizes the strict-majority
  // family is the same for either holder, so this equals alice_family; it
  // is evaluated in Bob's game.
  Family bob_strict_family;
  bool bob_wins = false;
  // Neither side can force a strict win, so optimal play ends level.
  bool draw_possible = false;
};

// Throws CapacityError when 2m exceeds the solver's ground-set cap.
FootballAnalysis analyze(const Solver& solver, const Board& board);
nlohmann::json analysis_to_json(const Board& board, const FootballAnalysis& a);

// Bob's plan on a four-element board: keep x4 away from Alice when
// x1 + x4 >= x2 + x3, otherwise make sure Alice ends up with x1.
enum class FourElementRule { KeepTop, ForceBottom };
const char* to_string(FourElementRule r);

// Throws InputError unless the board has exactly four scores.
FourElementRule four_element_rule(const Board& board);

// The family of Alice's 2-sets that Bob must keep her out of under `rule`:
// sets containing 4 (KeepTop) or sets avoiding 1 (ForceBottom). Bob
// achieves the objective iff Alice does not win her game on this family.
Family four_element_objective(FourElementRule rule);

}  // namespace pickchoose
