#include "pickchoose/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "pickchoose/errors.hpp"
#include "pickchoose/football.hpp"
#include "pickchoose/game.hpp"
#include "pickchoose/strategy.hpp"

namespace pickchoose {

namespace {

constexpr const char* kFixtureG = "123,124,127,136,137,146,147,157,167,234,245,246,247,257,267,345,457";
constexpr const char* kFixtureH =
    "1235,1237,1238,1257,1258,1267,1345,1346,1348,1356,1357,1358,1367,1378,1457,1458,1467,1478,"
    "1567,1568,1578,2345,2357,2378,2457,2568,3456,3457,3478,3567,3568,3578,3678,4578,5678";

// Per-worker memo tables are dropped once they grow past this many entries.
constexpr std::size_t kWorkerMemoLimit = 2'000'000;

using Clock = std::chrono::steady_clock;
using Check = std::function<std::optional<std::string>(const Solver&, const Family&)>;
using Applies = std::function<bool(int n, int k)>;

int worker_count(int requested, std::size_t tasks) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(threads, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(tasks, 1)));
}

// Runs fn(index, worker) for index in [0, count) across `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t, int)>& fn) {
  const int workers = worker_count(threads, count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i, w);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct IndexedViolation {
  std::size_t index;
  Violation violation;
};

class ViolationSink {
 public:
  void add(std::size_t index, const Family& f, std::string detail) {
    std::lock_guard lock(mutex_);
    items_.push_back({index, {f, std::move(detail)}});
  }
  std::vector<Violation> sorted() {
    std::sort(items_.begin(), items_.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    std::vector<Violation> out;
    for (auto& item : items_) out.push_back(std::move(item.violation));
    return out;
  }

 private:
  std::mutex mutex_;
  std::vector<IndexedViolation> items_;
};

std::vector<int> applicable_ks(const VerifyRange& range, int n, const Applies& applies) {
  std::vector<int> ks;
  for (int k = 0; k <= n; ++k) {
    if (range.k && *range.k != k) continue;
    if (applies(n, k)) ks.push_back(k);
  }
  return ks;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_range(const VerifyRange& range) {
  if (range.n_min < 0 || range.n_max < range.n_min) throw InputError("empty or negative n range");
  if (range.n_max > kHardGroundSetLimit) throw CapacityError("n range exceeds the hard ground-set limit");
  if (range.mode == Mode::Exhaustive && range.n_max > range.exhaustive_cap) {
    throw CapacityError("exhaustive range n <= " + std::to_string(range.n_max) + " exceeds the cap of " +
                        std::to_string(range.exhaustive_cap));
  }
}

// Generator inclusion probability for a sample: log-uniform between
// roughly one expected generator and one half.
double sample_probability(std::mt19937_64& rng, int n, int k) {
  const double lo = std::log(0.5 / static_cast<double>(std::max<std::uint64_t>(binomial(n, k), 1)));
  const double hi = std::log(0.5);
  if (lo >= hi) return 0.5;
  return std::exp(std::uniform_real_distribution<double>(lo, hi)(rng));
}

// Drives `check` over increasing families: all of them (exhaustive) or
// range.samples seeded samples per n (sampled).
VerificationReport run_on_increasing(const std::string& theorem, const VerifyRange& range, const Applies& applies,
                                     const Check& check) {
  check_range(range);
  const auto start = Clock::now();
  VerificationReport report{theorem, range, 0, {}, 0.0, std::nullopt};
  ViolationSink sink;

  if (range.mode == Mode::Exhaustive) {
    std::vector<Family> families;
    for (int n = range.n_min; n <= range.n_max; ++n) {
      for (int k : applicable_ks(range, n, applies)) {
        enumerate_increasing(n, k, [&](const Family& f) { families.push_back(f); }, range.exhaustive_cap);
      }
    }
    const Solver solver;
    parallel_for(families.size(), range.threads, [&](std::size_t i, int) {
      if (auto v = check(solver, families[i])) sink.add(i, families[i], *v);
    });
    report.families_checked = families.size();
  } else {
    struct Task {
      int n;
      std::uint64_t index;
    };
    std::vector<Task> tasks;
    for (int n = range.n_min; n <= range.n_max; ++n) {
      if (applicable_ks(range, n, applies).empty()) continue;
      for (std::uint64_t i = 0; i < range.samples; ++i) tasks.push_back({n, i});
    }
    const int workers = worker_count(range.threads, tasks.size());
    std::vector<std::unique_ptr<Solver>> solvers;
    for (int w = 0; w < workers; ++w) solvers.push_back(std::make_unique<Solver>());
    parallel_for(tasks.size(), workers, [&](std::size_t i, int w) {
      const Task& t = tasks[i];
      std::mt19937_64 rng(derive_seed(range.seed, t.n, t.index));
      const auto ks = applicable_ks(range, t.n, applies);
      const int k = ks[std::uniform_int_distribution<std::size_t>(0, ks.size() - 1)(rng)];
      const double p = sample_probability(rng, t.n, k);
      const Family f = sample_increasing(t.n, k, rng(), p);
      Solver& solver = *solvers[static_cast<std::size_t>(w)];
      if (solver.memo_size() > kWorkerMemoLimit) solver.clear();
      if (auto v = check(solver, f)) sink.add(i, f, *v);
    });
    report.families_checked = tasks.size();
  }

  report.violations = sink.sorted();
  report.elapsed_seconds = seconds_since(start);
  return report;
}

bool nonterminal(int n, int k) { return k > 0 && k < n; }

std::string status_string(const GameStatus& s) {
  return std::string("alice=") + (s.alice ? "true" : "false") + " bob=" + (s.bob ? "true" : "false");
}

// Walks every line of play from `state`, following `strategy` on its
// player's decisions and branching on all of the opponent's. Returns false
// at the first line the strategy's player loses.
bool wins_every_line(const Strategy& strategy, const GameState& state, std::uint64_t& lines) {
  if (state.finished()) {
    ++lines;
    const bool protagonist_won = strategy.root().contains(state.holdings(Side::Protagonist));
    return protagonist_won == (strategy.side() == Side::Protagonist);
  }
  if (state.to_move() == strategy.player()) {
    GameState next = state;
    strategy.play(next);
    return wins_every_line(strategy, next, lines);
  }
  if (state.phase() == Phase::AwaitingPick) {
    for (int x : state.remaining().elements()) {
      GameState next = state;
      next.pick(x);
      if (!wins_every_line(strategy, next, lines)) return false;
    }
    return true;
  }
  for (Side recipient : {Side::Protagonist, Side::Antagonist}) {
    GameState next = state;
    next.choose(recipient);
    if (!wins_every_line(strategy, next, lines)) return false;
  }
  return true;
}

}  // namespace

// --- Fixtures ------------------------------------------------------------------------

Family fixture_g() {
  Family g = parse_compact_family(kFixtureG, 7, 3);
  if (g.size() != 17) throw StateError("fixture G corrupted: expected 17 members");
  return g;
}

Family fixture_h() {
  Family h = parse_compact_family(kFixtureH, 8, 4);
  if (h.size() != 35) throw StateError("fixture H corrupted: expected 35 members");
  return h;
}

// --- Increasing families ---------------------------------------------------------------

std::uint64_t enumerate_increasing(int n, int k, const std::function<void(const Family&)>& visit, int exhaustive_cap) {
  if (n > exhaustive_cap) {
    throw CapacityError("exhaustive enumeration at n=" + std::to_string(n) + " exceeds the cap of " +
                        std::to_string(exhaustive_cap));
  }
  Family current(n, k);
  const std::uint64_t total = current.universe_size();
  const auto& masks = colex_masks(n, k);

  // Up-covers of each set, as colex ranks.
  std::vector<std::vector<std::uint64_t>> covers(total);
  for (std::uint64_t r = 0; r < total; ++r) {
    const std::uint32_t mask = masks[r];
    for (int i = 0; i + 1 < n; ++i) {
      const std::uint32_t bit = std::uint32_t{1} << i;
      const std::uint32_t next = bit << 1;
      if ((mask & bit) && !(mask & next)) covers[r].push_back(rank(KSet(n, (mask & ~bit) | next)));
    }
  }

  std::uint64_t count = 0;
  // Decide ranks total-1 down to 0; a set may be included only if all of
  // its covers (which have larger rank) already are.
  std::function<void(std::int64_t)> descend = [&](std::int64_t r) {
    if (r < 0) {
      ++count;
      visit(current);
      return;
    }
    const auto ur = static_cast<std::uint64_t>(r);
    descend(r - 1);
    const bool allowed = std::all_of(covers[ur].begin(), covers[ur].end(),
                                     [&](std::uint64_t c) { return current.contains_rank(c); });
    if (allowed) {
      current.insert_rank(ur);
      descend(r - 1);
      current.erase_rank(ur);
    }
  };
  descend(static_cast<std::int64_t>(total) - 1);
  return count;
}

std::vector<Family> increasing_families(int n, int k, int exhaustive_cap) {
  std::vector<Family> out;
  enumerate_increasing(n, k, [&](const Family& f) { out.push_back(f); }, exhaustive_cap);
  return out;
}

Family sample_arbitrary(int n, int k, std::uint64_t seed, double probability) {
  Family f(n, k);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(std::clamp(probability, 0.0, 1.0));
  for (std::uint64_t r = 0; r < f.universe_size(); ++r) {
    if (coin(rng)) f.insert_rank(r);
  }
  return f;
}

Family sample_increasing(int n, int k, std::uint64_t seed, double probability) {
  return upward_closure(sample_arbitrary(n, k, seed, probability));
}

std::uint64_t derive_seed(std::uint64_t seed, int n, std::uint64_t index) {
  // splitmix64 over the combined inputs.
  std::uint64_t z = seed ^ (static_cast<std::uint64_t>(n) * 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// --- Reports -----------------------------------------------------------------------------

const char* to_string(Mode m) { return m == Mode::Exhaustive ? "exhaustive" : "sampled"; }

nlohmann::json VerificationReport::to_json(bool include_timing) const {
  nlohmann::json violations_json = nlohmann::json::array();
  for (const auto& v : violations) {
    violations_json.push_back({{"family", family_to_json(v.family)}, {"detail", v.detail}});
  }
  nlohmann::json j{{"theorem", theorem},
                   {"mode", to_string(range.mode)},
                   {"n_min", range.n_min},
                   {"n_max", range.n_max},
                   {"k", range.k ? nlohmann::json(*range.k) : nlohmann::json(nullptr)},
                   {"families_checked", families_checked},
                   {"violations", violations_json},
                   {"passed", passed()}};
  if (range.mode == Mode::Sampled) {
    j["samples"] = range.samples;
    j["seed"] = range.seed;
  }
  if (theorem == "empty-margin") {
    j["witness"] = witness ? family_to_json(*witness) : nlohmann::json(nullptr);
  }
  if (include_timing) j["elapsed_seconds"] = elapsed_seconds;
  return j;
}

std::string VerificationReport::summary() const {
  std::ostringstream out;
  out << theorem << ": " << (passed() ? "PASS" : "FAIL") << " (" << to_string(range.mode) << ", n in ["
      << range.n_min << ", " << range.n_max << "]";
  if (range.k) out << ", k=" << *range.k;
  if (range.mode == Mode::Sampled) out << ", " << range.samples << " samples per n, seed " << range.seed;
  out << "): " << families_checked << " checked, " << violations.size() << " violation"
      << (violations.size() == 1 ? "" : "s");
  if (theorem == "empty-margin") {
    out << "\n  witness: " << (witness ? serialize_structured_family(*witness) : std::string("not found"));
  }
  for (const auto& v : violations) {
    out << "\n  " << serialize_structured_family(v.family) << "  " << v.detail;
  }
  return out.str();
}

// --- Checks ----------------------------------------------------------------------------------

std::optional<std::string> parity_violation(const Solver& solver, const Family& f) {
  const GameStatus s = solver.status(f);
  if (f.n() % 2 == 0 && s.alice && !s.bob) {
    return "even n: Alice wins but Bob does not (" + status_string(s) + ")";
  }
  if (f.n() % 2 == 1 && s.bob && !s.alice) {
    return "odd n: Bob wins but Alice does not (" + status_string(s) + ")";
  }
  return std::nullopt;
}

std::optional<std::string> central_violation(const Solver& solver, const Family& f) {
  const int n = f.n();
  if (f.is_terminal()) return std::nullopt;
  const int m = n / 2;
  if (n % 2 == 1) {
    if (!solver.bob(f)) return std::nullopt;
    if (!solver.bob(section_plus(f, m + 1)) || !solver.bob(section_minus(f, m + 1))) {
      return "odd n: Bob(F) holds but a section at the middle element " + std::to_string(m + 1) +
             " is not Bob-winning";
    }
    return std::nullopt;
  }
  if (!solver.alice(f)) return std::nullopt;
  for (int x : {m, m + 1}) {
    if (!solver.alice(section_plus(f, x)) || !solver.alice(section_minus(f, x))) {
      return "even n: Alice(F) holds but a section at middle element " + std::to_string(x) +
             " is not Alice-winning";
    }
  }
  return std::nullopt;
}

bool has_empty_margin_bob_win(const Solver& solver, const Family& f) {
  return !f.is_terminal() && solver.bob(f) && solver.margin_profile(f).bob_margin().empty();
}

std::optional<std::string> duality_violation(const Solver& solver, const Family& f) {
  const GameStatus s = solver.status(f);
  const GameStatus d = solver.status(dual(f));
  if (s.alice != !d.bob || s.bob != !d.alice) {
    return "F " + status_string(s) + ", dual(F) " + status_string(d);
  }
  return std::nullopt;
}

std::optional<std::string> interval_violation(const Solver& solver, const Family& f) {
  if (f.is_terminal()) return std::nullopt;
  const MarginProfile p = solver.margin_profile(f);
  std::string problems;
  if (!p.u_a.is_upper_interval()) problems += " U_A=" + p.u_a.to_string() + " not an upper interval;";
  if (!p.u_b.is_upper_interval()) problems += " U_B=" + p.u_b.to_string() + " not an upper interval;";
  if (!p.l_a.is_lower_interval()) problems += " L_A=" + p.l_a.to_string() + " not a lower interval;";
  if (!p.l_b.is_lower_interval()) problems += " L_B=" + p.l_b.to_string() + " not a lower interval;";
  const GameStatus s = solver.status(f);
  if (p.alice_wins() != s.alice) problems += " Alice verdict differs from nonempty Alice margin;";
  if (p.bob_wins() != s.bob) problems += " Bob verdict differs from U_B union L_B = [n];";
  if (problems.empty()) return std::nullopt;
  return problems.substr(1);
}

std::optional<std::string> threshold_violation(const Solver& solver, const Family& f) {
  if (f.is_terminal() || !solver.alice(f)) return std::nullopt;
  for (int a : solver.best_first_offers(f).elements()) {
    for (int x = 1; x <= f.n(); ++x) {
      if (x <= a && !solver.alice(section_minus(f, x))) {
        return "offer a=" + std::to_string(a) + ": rejecting x=" + std::to_string(x) + " loses";
      }
      if (x >= a && !solver.alice(section_plus(f, x))) {
        return "offer a=" + std::to_string(a) + ": accepting x=" + std::to_string(x) + " loses";
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> strategy_violation(const Solver& solver, const Family& f) {
  for (Player protagonist : {Player::Alice, Player::Bob}) {
    const bool protagonist_wins = solver.wins(f, protagonist);
    const Side winner = protagonist_wins ? Side::Protagonist : Side::Antagonist;
    const Strategy strategy = extract_strategy(solver, f, protagonist, winner);
    std::uint64_t lines = 0;
    if (!wins_every_line(strategy, GameState(f.n(), f.k(), protagonist), lines)) {
      return std::string("strategy of the ") + to_string(winner) + " in " + to_string(protagonist) +
             "'s game loses a line";
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_family(const std::string& theorem, const Solver& solver, const Family& f) {
  if (theorem == "parity") return parity_violation(solver, f);
  if (theorem == "central") return central_violation(solver, f);
  if (theorem == "duality") return duality_violation(solver, f);
  if (theorem == "intervals") return interval_violation(solver, f);
  if (theorem == "threshold") return threshold_violation(solver, f);
  if (theorem == "strategy") return strategy_violation(solver, f);
  if (theorem == "football") {
    if (solver.alice(f)) return std::string("Alice wins her game on this family");
    return std::nullopt;
  }
  throw InputError("theorem \"" + theorem + "\" cannot be checked on a single family");
}

VerificationReport verify_parity(const VerifyRange& range) {
  return run_on_increasing("parity", range, [](int, int) { return true; }, parity_violation);
}

VerificationReport verify_central(const VerifyRange& range) {
  return run_on_increasing("central", range, nonterminal, central_violation);
}

VerificationReport verify_k1_formulas(int n_max) {
  if (n_max < 1 || n_max > 12) throw InputError("k = 1 formula check needs 1 <= n_max <= 12");
  const auto start = Clock::now();
  VerifyRange range;
  range.n_min = 1;
  range.n_max = n_max;
  range.k = 1;
  VerificationReport report{"k1", range, 0, {}, 0.0, std::nullopt};
  const Solver solver;
  for (int n = 1; n <= n_max; ++n) {
    for (int t = 1; t <= n + 1; ++t) {
      const Family f = singleton_family(n, t);
      const GameStatus s = solver.status(f);
      const bool alice_expected = t <= (n + 1) / 2;
      const bool bob_expected = t <= n / 2 + 1;
      ++report.families_checked;
      if (s.alice != alice_expected || s.bob != bob_expected) {
        report.violations.push_back({f, "T_" + std::to_string(n) + "(" + std::to_string(t) + "): solver " +
                                            status_string(s) + ", closed form " +
                                            status_string({alice_expected, bob_expected})});
      }
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

VerificationReport verify_counterexamples() {
  const auto start = Clock::now();
  VerifyRange range;
  range.n_min = 7;
  range.n_max = 8;
  VerificationReport report{"counterexamples", range, 0, {}, 0.0, std::nullopt};
  const Solver solver;
  struct Expected {
    Family family;
    GameStatus status;
    const char* name;
  };
  for (const auto& e : {Expected{fixture_g(), {false, true}, "G"}, Expected{fixture_h(), {true, false}, "H"}}) {
    ++report.families_checked;
    const GameStatus s = solver.status(e.family);
    if (!(s == e.status)) {
      report.violations.push_back(
          {e.family, std::string(e.name) + ": solver " + status_string(s) + ", expected " + status_string(e.status)});
    }
    if (is_increasing(e.family)) {
      report.violations.push_back({e.family, std::string(e.name) + " is unexpectedly increasing"});
    }
  }
  report.elapsed_seconds = seconds_since(start);
  return report;
}

VerificationReport verify_duality(const VerifyRange& range) {
  check_range(range);
  const auto start = Clock::now();
  VerificationReport report{"duality", range, 0, {}, 0.0, std::nullopt};
  ViolationSink sink;
  const auto check = duality_violation;

  struct Task {
    int n;
    int k;
    std::uint64_t index;  // family bit pattern (exhaustive) or sample index
  };
  std::vector<Task> tasks;
  for (int n = range.n_min; n <= range.n_max; ++n) {
    for (int k = 0; k <= n; ++k) {
      if (range.k && *range.k != k) continue;
      if (range.mode == Mode::Exhaustive) {
        const std::uint64_t c = binomial(n, k);
        if (c > 20) throw CapacityError("exhaustive duality needs C(n,k) <= 20");
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << c); ++bits) tasks.push_back({n, k, bits});
      }
    }
    if (range.mode == Mode::Sampled) {
      for (std::uint64_t i = 0; i < range.samples; ++i) tasks.push_back({n, -1, i});
    }
  }

  const int workers = worker_count(range.threads, tasks.size());
  const Solver shared;
  std::vector<std::unique_ptr<Solver>> solvers;
  for (int w = 0; w < workers; ++w) solvers.push_back(std::make_unique<Solver>());
  parallel_for(tasks.size(), workers, [&](std::size_t i, int w) {
    const Task& t = tasks[i];
    Family f(t.n, std::max(t.k, 0));
    if (range.mode == Mode::Exhaustive) {
      for (std::uint64_t r = 0; r < f.universe_size(); ++r) {
        if ((t.index >> r) & 1U) f.insert_rank(r);
      }
      if (auto v = check(shared, f)) sink.add(i, f, *v);
      return;
    }
    std::mt19937_64 rng(derive_seed(range.seed, t.n, t.index));
    const int k = range.k ? *range.k : std::uniform_int_distribution<int>(0, t.n)(rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    f = sample_arbitrary(t.n, k, rng(), p);
    Solver& solver = *solvers[static_cast<std::size_t>(w)];
    if (solver.memo_size() > kWorkerMemoLimit) solver.clear();
    if (auto v = check(solver, f)) sink.add(i, f, *v);
  });
  report.families_checked = tasks.size();
  report.violations = sink.sorted();
  report.elapsed_seconds = seconds_since(start);
  return report;
}

VerificationReport verify_intervals(const VerifyRange& range) {
  return run_on_increasing("intervals", range, nonterminal, interval_violation);
}

VerificationReport verify_monotonicity(const VerifyRange& range) {
  check_range(range);
  const auto start = Clock::now();
  VerificationReport report{"monotonicity", range, 0, {}, 0.0, std::nullopt};
  ViolationSink sink;
  auto compare = [](const Family& f, const GameStatus& sf, const Family&,
                    const GameStatus& sg) -> std::optional<std::string> {
    if ((sf.alice && !sg.alice) || (sf.bob && !sg.bob)) {
      return "subfamily " + serialize_structured_family(f) + " has " + status_string(sf) + " but superfamily has " +
             status_string(sg);
    }
    return std::nullopt;
  };

  const Solver solver;
  std::size_t index = 0;
  if (range.mode == Mode::Exhaustive) {
    for (int n = range.n_min; n <= range.n_max; ++n) {
      for (int k = 0; k <= n; ++k) {
        if (range.k && *range.k != k) continue;
        const auto families = increasing_families(n, k, range.exhaustive_cap);
        std::vector<GameStatus> status(families.size());
        parallel_for(families.size(), range.threads,
                     [&](std::size_t i, int) { status[i] = solver.status(families[i]); });
        for (std::size_t i = 0; i < families.size(); ++i) {
          for (std::size_t j = 0; j < families.size(); ++j, ++index) {
            if (i == j || !families[i].is_subfamily_of(families[j])) continue;
            ++report.families_checked;
            if (auto v = compare(families[i], status[i], families[j], status[j])) sink.add(index, families[j], *v);
          }
        }
      }
    }
  } else {
    for (int n = range.n_min; n <= range.n_max; ++n) {
      const std::size_t base = index;
      parallel_for(range.samples, range.threads, [&](std::size_t i, int) {
        std::mt19937_64 rng(derive_seed(range.seed, n, i));
        const int k = range.k ? *range.k : std::uniform_int_distribution<int>(1, std::max(n - 1, 1))(rng);
        if (k > n) return;
        const Family f = sample_increasing(n, k, rng(), sample_probability(rng, n, k));
        Family g = upward_closure(sample_arbitrary(n, k, rng(), sample_probability(rng, n, k)));
        for (std::uint64_t r = 0; r < f.universe_size(); ++r) {
          if (f.contains_rank(r)) g.insert_rank(r);
        }
        if (auto v = compare(f, solver.status(f), g, solver.status(g))) sink.add(base + i, g, *v);
      });
      index += range.samples;
      report.families_checked += range.samples;
    }
  }
  report.violations = sink.sorted();
  report.elapsed_seconds = seconds_since(start);
  return report;
}

VerificationReport verify_threshold(const VerifyRange& range) {
  return run_on_increasing(
      "threshold", range, [](int n, int k) { return n % 2 == 0 && nonterminal(n, k); }, threshold_violation);
}

VerificationReport verify_strategy(const VerifyRange& range) {
  return run_on_increasing("strategy", range, [](int, int) { return true; }, strategy_violation);
}

VerificationReport verify_football(std::uint64_t boards, std::uint64_t seed, int score_bound, int threads) {
  const auto start = Clock::now();
  VerifyRange range;
  range.n_min = 4;
  range.n_max = 10;
  range.mode = Mode::Sampled;
  range.samples = boards;
  range.seed = seed;
  range.threads = threads;
  VerificationReport report{"football", range, 0, {}, 0.0, std::nullopt};
  ViolationSink sink;

  const std::size_t natural = 4;  // [1..2m] for m = 2..5
  const std::size_t total = boards + natural;
  const int workers = worker_count(threads, total);
  std::vector<std::unique_ptr<Solver>> solvers;
  for (int w = 0; w < workers; ++w) solvers.push_back(std::make_unique<Solver>());
  parallel_for(total, workers, [&](std::size_t i, int w) {
    std::vector<Rational> scores;
    if (i < boards) {
      std::mt19937_64 rng(derive_seed(seed, 0, i));
      const int m = std::uniform_int_distribution<int>(2, 5)(rng);
      std::uniform_int_distribution<int> value(-score_bound, score_bound);
      for (int j = 0; j < 2 * m; ++j) scores.emplace_back(value(rng));
    } else {
      const int m = static_cast<int>(i - boards) + 2;
      for (int j = 1; j <= 2 * m; ++j) scores.emplace_back(j);
    }
    const Board board(std::move(scores));
    Solver& solver = *solvers[static_cast<std::size_t>(w)];
    if (solver.memo_size() > kWorkerMemoLimit) solver.clear();
    const FootballAnalysis a = analyze(solver, board);
    if (a.alice_wins) sink.add(i, a.alice_family, "Alice wins football on board " + board.to_string());
  });
  report.families_checked = total;
  report.violations = sink.sorted();
  report.elapsed_seconds = seconds_since(start);
  return report;
}

EmptyMarginSearch find_empty_margin_bob_win(int n_max, bool interior_only, int exhaustive_cap) {
  EmptyMarginSearch result;
  const Solver solver;
  const int k_margin = interior_only ? 2 : 1;
  for (int n = 2; n <= n_max; ++n) {
    for (int k = k_margin; k <= n - k_margin; ++k) {
      for (const Family& f : increasing_families(n, k, exhaustive_cap)) {
        ++result.families_checked;
        if (has_empty_margin_bob_win(solver, f)) {
          result.witness = f;
          return result;
        }
      }
    }
  }
  return result;
}

std::vector<std::string> verification_ids() {
  return {"parity",       "central",   "k1",       "counterexamples", "duality", "intervals",
          "monotonicity", "threshold", "strategy", "football",        "empty-margin"};
}

VerificationReport run_verification(const std::string& theorem, const VerifyRange& range) {
  if (theorem == "parity") return verify_parity(range);
  if (theorem == "central") return verify_central(range);
  if (theorem == "k1") return verify_k1_formulas(range.n_max);
  if (theorem == "counterexamples") return verify_counterexamples();
  if (theorem == "duality") return verify_duality(range);
  if (theorem == "intervals") return verify_intervals(range);
  if (theorem == "monotonicity") return verify_monotonicity(range);
  if (theorem == "threshold") return verify_threshold(range);
  if (theorem == "strategy") return verify_strategy(range);
  if (theorem == "football") return verify_football(range.samples, range.seed, 20, range.threads);
  if (theorem == "empty-margin") {
    // A missing witness is reported as witness = null, not as a violation.
    const auto start = Clock::now();
    const EmptyMarginSearch search = find_empty_margin_bob_win(range.n_max, false, range.exhaustive_cap);
    VerificationReport report{"empty-margin", range, search.families_checked, {}, 0.0, std::nullopt};
    report.range.mode = Mode::Exhaustive;
    report.witness = search.witness;
    report.elapsed_seconds = seconds_since(start);
    return report;
  }
  throw InputError("unknown theorem id \"" + theorem + "\"");
}

}  // namespace pickchoose
