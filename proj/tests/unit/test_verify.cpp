#include <gtest/gtest.h>

#include <set>

#include <nlohmann/json.hpp>

#include "brute_force.hpp"
#include "oracles.hpp"
#include "pickchoose/errors.hpp"
#include "pickchoose/verify.hpp"

namespace pickchoose {
namespace {

VerifyRange exhaustive(int n_max, int n_min = 1) {
  VerifyRange r;
  r.n_min = n_min;
  r.n_max = n_max;
  return r;
}

VerifyRange sampled(int n_min, int n_max, std::uint64_t samples) {
  VerifyRange r;
  r.n_min = n_min;
  r.n_max = n_max;
  r.mode = Mode::Sampled;
  r.samples = samples;
  return r;
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_increasing(2, 1, [](const Family&) {}), 3u);
  EXPECT_EQ(enumerate_increasing(3, 1, [](const Family&) {}), 4u);
  EXPECT_EQ(enumerate_increasing(4, 2, [](const Family&) {}), 8u);
  const auto fams = increasing_families(2, 1);
  const std::set<std::string> got{serialize_compact_family(fams[0]), serialize_compact_family(fams[1]),
                                  serialize_compact_family(fams[2])};
  EXPECT_EQ(got, (std::set<std::string>{"", "2", "1,2"}));
}

TEST(Enumerate, MatchesFilterOracle) {
  for (int n = 0; n <= 4; ++n) {
    for (int k = 0; k <= n; ++k) {
      std::set<std::vector<std::uint32_t>> expected;
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << binomial(n, k)); ++i) {
        const Family f = testing::family_by_index(n, k, i);
        if (testing::naive_is_increasing(f)) expected.insert(testing::member_masks(f));
      }
      std::set<std::vector<std::uint32_t>> got;
      std::uint64_t visits = 0;
      enumerate_increasing(n, k, [&](const Family& f) {
        ++visits;
        got.insert(testing::member_masks(f));
      });
      EXPECT_EQ(visits, got.size()) << "duplicates at n=" << n << " k=" << k;
      EXPECT_EQ(got, expected) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Enumerate, AllIncreasingUpToSix) {
  for (int n = 5; n <= 6; ++n) {
    for (int k = 0; k <= n; ++k) {
      enumerate_increasing(n, k, [](const Family& f) { ASSERT_TRUE(is_increasing(f)); });
    }
  }
  EXPECT_EQ(enumerate_increasing(6, 3, [](const Family&) {}), 66u);
}

TEST(Enumerate, RespectsCap) {
  EXPECT_THROW(enumerate_increasing(7, 3, [](const Family&) {}), CapacityError);
  EXPECT_NO_THROW(enumerate_increasing(7, 1, [](const Family&) {}, 7));
}

TEST(Sample, Extremes) {
  EXPECT_TRUE(sample_increasing(7, 3, 1, 0.0).empty());
  EXPECT_TRUE(sample_increasing(7, 3, 1, 1.0).is_full());
  EXPECT_EQ(sample_increasing(7, 3, 99, 0.2), sample_increasing(7, 3, 99, 0.2));
}

TEST(Sample, AlwaysIncreasing) {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const int k = 1 + static_cast<int>(i % 6);
    ASSERT_TRUE(is_increasing(sample_increasing(7, k, derive_seed(5, 7, i), 0.05 + 0.1 * (i % 5))));
  }
}

TEST(Parity, ExhaustiveUpToFive) {
  const auto r = verify_parity(exhaustive(5));
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_GT(r.families_checked, 0u);
}

TEST(Parity, SampledSmall) {
  const auto r = verify_parity(sampled(7, 8, 300));
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_EQ(r.families_checked, 600u);
}

TEST(Parity, DetectsInjectedFixtures) {
  const Solver solver;
  const auto g = parity_violation(solver, fixture_g());
  ASSERT_TRUE(g.has_value());
  EXPECT_NE(g->find("odd n"), std::string::npos);
  const auto h = parity_violation(solver, fixture_h());
  ASSERT_TRUE(h.has_value());
  EXPECT_NE(h->find("even n"), std::string::npos);
}

TEST(Central, ExhaustiveUpToFive) {
  const auto r = verify_central(exhaustive(5));
  EXPECT_TRUE(r.passed()) << r.summary();
}

TEST(Central, SingletonMiddle) {
  const Solver solver;
  const Family t = singleton_family(5, 3);
  EXPECT_TRUE(solver.bob(t));
  EXPECT_TRUE(solver.bob(section_plus(t, 3)));
  EXPECT_TRUE(section_plus(t, 3).is_terminal() && section_plus(t, 3).is_full());
  EXPECT_TRUE(solver.bob(section_minus(t, 3)));
  EXPECT_FALSE(central_violation(solver, t).has_value());
}

TEST(K1, FormulasUpToTwelve) {
  const auto r = verify_k1_formulas(12);
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_EQ(r.families_checked, 90u);  // sum of (n + 1) for n = 1..12
  EXPECT_THROW(verify_k1_formulas(13), InputError);
}

TEST(K1, EdgeValues) {
  const Solver solver;
  for (int n = 1; n <= 12; ++n) {
    EXPECT_EQ(solver.status(singleton_family(n, n + 1)), (GameStatus{false, false}));
    EXPECT_EQ(solver.status(singleton_family(n, 1)), (GameStatus{true, true}));
  }
  EXPECT_TRUE(solver.alice(singleton_family(4, 2)));
  EXPECT_EQ(solver.status(singleton_family(4, 3)), (GameStatus{false, true}));
  EXPECT_EQ(solver.status(singleton_family(5, 3)), (GameStatus{true, true}));
}

TEST(Counterexamples, Pass) {
  const auto r = verify_counterexamples();
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_EQ(fixture_g().size(), 17u);
  EXPECT_EQ(fixture_h().size(), 35u);
}

TEST(Duality, ExhaustiveAndSampled) {
  const auto e = verify_duality(exhaustive(4));
  EXPECT_TRUE(e.passed()) << e.summary();
  const auto s = verify_duality(sampled(5, 6, 300));
  EXPECT_TRUE(s.passed()) << s.summary();
}

TEST(Intervals, ExhaustiveUpToFive) {
  const auto r = verify_intervals(exhaustive(5));
  EXPECT_TRUE(r.passed()) << r.summary();
}

TEST(Monotonicity, ExhaustiveAndSampled) {
  const auto e = verify_monotonicity(exhaustive(4));
  EXPECT_TRUE(e.passed()) << e.summary();
  const auto s = verify_monotonicity(sampled(6, 6, 200));
  EXPECT_TRUE(s.passed()) << s.summary();
}

TEST(Threshold, EvenBoardsUpToSix) {
  const auto r = verify_threshold(exhaustive(6));
  EXPECT_TRUE(r.passed()) << r.summary();
}

TEST(StrategyReport, UpToFour) {
  const auto r = verify_strategy(exhaustive(4));
  EXPECT_TRUE(r.passed()) << r.summary();
}

TEST(FootballReport, SmallRun) {
  const auto r = verify_football(100, 7, 20, 2);
  EXPECT_TRUE(r.passed()) << r.summary();
  EXPECT_GE(r.families_checked, 100u);
}

// The search runs n ascending; T_2(2) = {{2}} is the first hit and in
// general T_n(floor(n/2) + 1) qualifies.
TEST(EmptyMargin, SingletonWitnesses) {
  const Solver solver;
  const auto search = find_empty_margin_bob_win(6);
  ASSERT_TRUE(search.witness.has_value());
  EXPECT_EQ(*search.witness, singleton_family(2, 2));
  for (int n = 2; n <= 8; ++n) {
    EXPECT_TRUE(has_empty_margin_bob_win(solver, singleton_family(n, n / 2 + 1))) << n;
  }
}

TEST(EmptyMargin, WitnessCheckedByGameTree) {
  for (const Family& f : {singleton_family(2, 2), testing::family_of(4, 2, {{2, 3}, {2, 4}, {3, 4}})}) {
    ASSERT_TRUE(testing::brute_bob(f));
    for (int x = 1; x <= f.n(); ++x) {
      const bool both = testing::brute_alice(section_plus(f, x)) && testing::brute_alice(section_minus(f, x));
      EXPECT_FALSE(both) << "offer " << x;
    }
  }
}

TEST(EmptyMargin, InteriorWitness) {
  const auto search = find_empty_margin_bob_win(6, true);
  ASSERT_TRUE(search.witness.has_value());
  EXPECT_EQ(*search.witness, testing::family_of(4, 2, {{2, 3}, {2, 4}, {3, 4}}));
}

TEST(EmptyMargin, FullFamilyDoesNotQualify) {
  const Solver solver;
  EXPECT_FALSE(has_empty_margin_bob_win(solver, Family::full(5, 2)));
  EXPECT_EQ(solver.margin_profile(Family::full(5, 2)).bob_margin(), ElementSet::full(5));
}

TEST(Reports, DeterministicJson) {
  auto r = sampled(7, 7, 200);
  r.seed = 12345;
  r.threads = 4;
  const auto a = verify_parity(r).to_json().dump();
  r.threads = 1;
  const auto b = verify_parity(r).to_json().dump();
  EXPECT_EQ(a, b);
  const auto j = nlohmann::json::parse(a);
  EXPECT_FALSE(j.contains("elapsed_seconds"));
  EXPECT_EQ(j["seed"], 12345);
  EXPECT_TRUE(verify_parity(r).to_json(true).contains("elapsed_seconds"));
}

TEST(Reports, DispatchById) {
  for (const auto& id : verification_ids()) {
    VerifyRange r = exhaustive(4);
    r.samples = 20;
    const auto report = run_verification(id, r);
    EXPECT_EQ(report.theorem, id);
    EXPECT_TRUE(report.passed()) << report.summary();
  }
  EXPECT_THROW(run_verification("nope", exhaustive(3)), InputError);
}

}  // namespace
}  // namespace pickchoose
