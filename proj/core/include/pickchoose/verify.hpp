#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pickchoose/family.hpp"
#include "pickchoose/solver.hpp"

namespace pickchoose {

// --- Fixtures ------------------------------------------------------------------

// Non-increasing families on C([7],3) (17 members) and C([8],4) (35
// members) for which the parity implications fail. Throw StateError if the
// embedded listing does not have the expected member count.
Family fixture_g();
Family fixture_h();

// --- Increasing families --------------------------------------------------------

inline constexpr int kDefaultExhaustiveCap = 6;

// Visits every increasing family in C([n], k) exactly once, including the
// empty and the full family. Sets are decided from the top of the colex
// order down; a set may join only if all of its covers already have.
// Returns the number of families visited. Throws CapacityError when n
// exceeds `exhaustive_cap`.
std::uint64_t enumerate_increasing(int n, int k, const std::function<void(const Family&)>& visit,
                                   int exhaustive_cap = kDefaultExhaustiveCap);
std::vector<Family> increasing_families(int n, int k, int exhaustive_cap = kDefaultExhaustiveCap);

// Upward closure of a random generator set that holds each k-set
// independently with `probability`. Deterministic per seed. Not uniform
// over increasing families.
Family sample_increasing(int n, int k, std::uint64_t seed, double probability);

// A family holding each k-set independently with `probability`.
Family sample_arbitrary(int n, int k, std::uint64_t seed, double probability);

// Seed for the index-th sample at board size n, independent of the number
// of workers that process the samples.
std::uint64_t derive_seed(std::uint64_t seed, int n, std::uint64_t index);

// --- Reports ----------------------------------------------------------------------

enum class Mode { Exhaustive, Sampled };
const char* to_string(Mode m);

struct VerifyRange {
  int n_min = 1;
  int n_max = 6;
  // Fixed k, or every k the check applies to.
  std::optional<int> k;
  Mode mode = Mode::Exhaustive;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 20150101;
  int threads = 0;  // 0 = hardware concurrency
  int exhaustive_cap = kDefaultExhaustiveCap;
};

struct Violation {
  Family family;
  std::string detail;
};

struct VerificationReport {
  std::string theorem;
  VerifyRange range;
  std::uint64_t families_checked = 0;
  std::vector<Violation> violations;
  double elapsed_seconds = 0.0;
  // Search results (empty-margin only).
  std::optional<Family> witness;

  bool passed() const { return violations.empty(); }
  // Deterministic for a fixed theorem and range unless include_timing.
  nlohmann::json to_json(bool include_timing = false) const;
  std::string summary() const;
};

// Per-family checks behind the reports; each returns a description of the
// violation, if any. They do not test whether f is increasing.
std::optional<std::string> parity_violation(const Solver& solver, const Family& f);
std::optional<std::string> central_violation(const Solver& solver, const Family& f);
std::optional<std::string> duality_violation(const Solver& solver, const Family& f);
std::optional<std::string> interval_violation(const Solver& solver, const Family& f);
std::optional<std::string> threshold_violation(const Solver& solver, const Family& f);
std::optional<std::string> strategy_violation(const Solver& solver, const Family& f);
// Runs the per-family check of `theorem` (parity, central, duality,
// intervals, threshold, strategy, football) on f, e.g. to replay a
// violation file. Throws InputError for other ids.
std::optional<std::string> check_family(const std::string& theorem, const Solver& solver, const Family& f);
// Bob wins on f while his margin is empty (f nonterminal).
bool has_empty_margin_bob_win(const Solver& solver, const Family& f);

// n even: Alice(F) => Bob(F); n odd: Bob(F) => Alice(F); increasing F.
VerificationReport verify_parity(const VerifyRange& range);
// Middle-element statements for increasing F with 0 < k < n.
VerificationReport verify_central(const VerifyRange& range);
// Alice(T_n(t)) <=> t <= ceil(n/2) and Bob(T_n(t)) <=> t <= floor(n/2)+1
// for 1 <= n <= n_max (at most 12).
VerificationReport verify_k1_formulas(int n_max);
// Verdicts and non-monotonicity of the two fixtures.
VerificationReport verify_counterexamples();
// Alice(F) = !Bob(dual F) and Bob(F) = !Alice(dual F) over arbitrary
// families: every family of C([n], k) in exhaustive mode (C(n,k) <= 20),
// random families in sampled mode.
VerificationReport verify_duality(const VerifyRange& range);
// U_A, U_B upper intervals and L_A, L_B lower intervals for increasing F,
// together with the margin characterisations of both verdicts.
VerificationReport verify_intervals(const VerifyRange& range);
// F subset of G (both increasing) => Alice(F) => Alice(G), Bob(F) => Bob(G).
// Exhaustive mode checks all pairs; sampled mode random nested pairs.
VerificationReport verify_monotonicity(const VerifyRange& range);
// Bob's threshold response on even boards: for every winning first offer a
// of Alice, Alice(F_x^-) for x <= a and Alice(F_x^+) for x >= a.
VerificationReport verify_threshold(const VerifyRange& range);
// The extracted strategy of the winning side of both games wins against
// every line of the opponent (full-tree traversal), increasing F.
VerificationReport verify_strategy(const VerifyRange& range);
// Alice never wins football: `boards` random integer boards with 2m drawn
// from {4, 6, 8, 10} and scores in [-score_bound, score_bound], plus the
// natural boards [1..2m].
VerificationReport verify_football(std::uint64_t boards, std::uint64_t seed, int score_bound = 20,
                                   int threads = 0);

struct EmptyMarginSearch {
  std::optional<Family> witness;
  std::uint64_t families_checked = 0;
};

// First increasing family (n ascending, then k, then enumeration order)
// with Bob(F) true and Bob's margin empty. interior_only restricts the
// search to 2 <= k <= n - 2, where no first section is terminal.
EmptyMarginSearch find_empty_margin_bob_win(int n_max, bool interior_only = false,
                                            int exhaustive_cap = kDefaultExhaustiveCap);

// Dispatch by id: parity, central, k1, counterexamples, duality, intervals,
// monotonicity, threshold, strategy, empty-margin. Throws InputError on an
// unknown id.
VerificationReport run_verification(const std::string& theorem, const VerifyRange& range);
std::vector<std::string> verification_ids();

}  // namespace pickchoose
