#include <gtest/gtest.h>

#include <map>

#include "ggs/selection.hpp"
#include "oracles.hpp"

using namespace ggs;

namespace {

Vectord vec(std::initializer_list<double> v) {
  Vectord out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<Index> idx(std::initializer_list<Index> v) { return v; }

}  // namespace

TEST(GgsSelect, WorkedSystem) {
  const auto sel = ggs_select(vec({1, 4}), vec({1, 4}), 1e-12);
  EXPECT_EQ(sel.index, 1);
  EXPECT_EQ(sel.candidates, idx({1}));
}

TEST(GgsSelect, FullTieGoesToLowestIndex) {
  const auto sel = ggs_select(vec({1, 1}), vec({1, 1}), 1e-12);
  EXPECT_EQ(sel.index, 0);
  EXPECT_EQ(sel.candidates, idx({0, 1}));
}

TEST(GgsSelect, SecondStageUsesRatio) {
  const auto sel = ggs_select(vec({2, 2}), vec({4, 1}), 1e-12);
  EXPECT_EQ(sel.index, 1);
  EXPECT_EQ(sel.candidates, idx({0, 1}));
}

TEST(GgsSelect, SignDoesNotMatter) {
  const auto sel = ggs_select(vec({-3, 3, 1}), vec({2, 1, 1}), 1e-12);
  EXPECT_EQ(sel.candidates, idx({0, 1}));
  EXPECT_EQ(sel.index, 1);
}

TEST(GgsSelect, TieToleranceWidensCandidateSet) {
  const Vectord s = vec({1.0, 1.0 - 1e-9, 0.5});
  EXPECT_EQ(ggs_select(s, vec({1, 1, 1}), 1e-12).candidates, idx({0}));
  EXPECT_EQ(ggs_select(s, vec({1, 1, 1}), 1e-6).candidates, idx({0, 1}));
}

TEST(GgsSelect, Errors) {
  EXPECT_THROW(ggs_select(vec({0, 0}), vec({1, 1}), 1e-12), Error);
  EXPECT_THROW(ggs_select(vec({1, 0}), vec({0, 1}), 1e-12), Error);
  EXPECT_THROW(ggs_select(vec({1, 0}), vec({1}), 1e-12), Error);
  try {
    ggs_select(vec({0, 0}), vec({1, 1}), 1e-12);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllZeroGradient);
  }
}

TEST(GgsSelect, MatchesExactOracleOnIntegerData) {
  Rng rng(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(50));
    std::vector<std::int64_t> si(n), wi(n);
    Vectord s(n), w(n);
    bool nonzero = false;
    for (Index j = 0; j < n; ++j) {
      si[j] = static_cast<std::int64_t>(rng.below(7)) - 3;
      wi[j] = 1 + static_cast<std::int64_t>(rng.below(5));
      s[j] = static_cast<double>(si[j]);
      w[j] = static_cast<double>(wi[j]);
      nonzero |= si[j] != 0;
    }
    if (!nonzero) continue;
    const auto expected = oracle::greedy_exact(si, wi);
    const auto got = ggs_select(s, w, 1e-12);
    ASSERT_EQ(got.candidates, expected.candidates) << "trial " << trial;
    ASSERT_EQ(got.index, expected.index) << "trial " << trial;
  }
}

TEST(GgsSelect, MatchesScanOnRealData) {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + static_cast<Index>(rng.below(50));
    Vectord s(n), w(n);
    for (Index j = 0; j < n; ++j) {
      s[j] = rng.normal();
      w[j] = 0.1 + rng.uniform() * 10;
    }
    const auto expected = oracle::greedy_scan(s, w, 1e-12);
    const auto got = ggs_select(s, w, 1e-12);
    ASSERT_EQ(got.candidates, expected.candidates);
    ASSERT_EQ(got.index, expected.index);
  }
}

TEST(GgsRandomizedSelect, SingletonMatchesDeterministicRule) {
  Rng rng(3);
  const auto sel = ggs_randomized_select(vec({1, 4}), vec({1, 4}), 1e-12, rng);
  EXPECT_EQ(sel.index, 1);
  EXPECT_EQ(sel.candidates, idx({1}));
}

TEST(GgsRandomizedSelect, RatioWeightedFrequencies) {
  Rng rng(11);
  const int draws = 10000;
  long hits = 0;
  for (int i = 0; i < draws; ++i) hits += ggs_randomized_select(vec({2, 2}), vec({4, 1}), 1e-12, rng).index == 1;
  EXPECT_LE(std::abs(oracle::binomial_z(hits, draws, 0.8L)), 3.0);
}

TEST(GgsRandomizedSelect, SymmetricTieIsUniform) {
  Rng rng(12);
  const int draws = 10000;
  std::vector<long> counts(4, 0);
  for (int i = 0; i < draws; ++i) ++counts[ggs_randomized_select(vec({1, -1, 1, -1}), vec({1, 1, 1, 1}), 1e-12, rng).index];
  for (long c : counts) EXPECT_LE(std::abs(oracle::binomial_z(c, draws, 0.25L)), 3.0);
}

TEST(GrcdSelect, WorkedSystem) {
  Rng rng(5);
  const auto sel = grcd_select(vec({1, 4}), vec({1, 4}), 5.0, rng);
  EXPECT_NEAR(sel.delta, 0.5 * (4.0 / 17 + 1.0 / 5), 1e-15);
  EXPECT_NEAR(sel.delta, 0.217647, 1e-6);
  EXPECT_EQ(sel.candidates, idx({1}));
  EXPECT_EQ(sel.index, 1);
}

TEST(GrcdSelect, SymmetricGradientKeepsEveryColumn) {
  for (Index n : {2, 3, 5, 7, 10, 16}) {
    Rng rng(static_cast<std::uint64_t>(n));
    const Vectord s = Vectord::Constant(n, 0.7);
    const Vectord w = Vectord::Ones(n);
    const auto sel = grcd_select(s, w, static_cast<double>(n), rng);
    EXPECT_EQ(static_cast<Index>(sel.candidates.size()), n) << "n = " << n;
  }
}

TEST(GrcdSelect, SingleColumn) {
  Rng rng(1);
  const auto sel = grcd_select(vec({-2.5}), vec({3}), 3.0, rng);
  EXPECT_EQ(sel.index, 0);
  EXPECT_EQ(sel.candidates, idx({0}));
}

TEST(GrcdSelect, MatchesScanOracle) {
  Rng data(31337);
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + static_cast<Index>(data.below(50));
    Vectord s(n), w(n);
    for (Index j = 0; j < n; ++j) {
      s[j] = data.normal();
      w[j] = 0.1 + data.uniform() * 10;
    }
    const auto expected = oracle::grcd_scan(s, w);
    const auto got = grcd_select(s, w, w.sum(), rng);
    ASSERT_EQ(got.candidates, expected.candidates) << "trial " << trial;
    ASSERT_NEAR(got.delta, static_cast<double>(expected.delta), 1e-12 * static_cast<double>(expected.delta));
    ASSERT_TRUE(std::find(got.candidates.begin(), got.candidates.end(), got.index) != got.candidates.end());
    ASSERT_TRUE(std::find(got.candidates.begin(), got.candidates.end(), expected.maximizer) !=
                got.candidates.end());
  }
}

TEST(GrcdSelect, SamplingFrequencies) {
  const Vectord s = vec({3, -2.9, 2.95, 0.1, -2.8});
  const Vectord w = vec({1, 1, 1, 1, 1});
  const auto expected = oracle::grcd_scan(s, w);
  ASSERT_GE(expected.candidates.size(), 3u);
  Rng rng(8);
  const int draws = 10000;
  std::map<Index, long> counts;
  for (int i = 0; i < draws; ++i) ++counts[grcd_select(s, w, w.sum(), rng).index];
  for (std::size_t k = 0; k < expected.candidates.size(); ++k) {
    const Index j = expected.candidates[k];
    EXPECT_LE(std::abs(oracle::binomial_z(counts[j], draws, expected.probabilities[k])), 3.0) << "column " << j;
  }
  long in_set = 0;
  for (Index j : expected.candidates) in_set += counts[j];
  EXPECT_EQ(in_set, draws);
}

TEST(RgsSelect, ProportionalToColumnNorms) {
  Rng rng(21);
  const int draws = 10000;
  long hits = 0;
  for (int i = 0; i < draws; ++i) hits += rgs_select(vec({1, 3}), 4.0, rng) == 1;
  EXPECT_LE(std::abs(oracle::binomial_z(hits, draws, 0.75L)), 3.0);
}

TEST(RgsSelect, EqualNormsAreUniform) {
  Rng rng(22);
  const int draws = 10000;
  const Index n = 5;
  std::vector<long> counts(n, 0);
  for (int i = 0; i < draws; ++i) ++counts[rgs_select(Vectord::Constant(n, 2.0).eval(), 10.0, rng)];
  for (long c : counts) EXPECT_LE(std::abs(oracle::binomial_z(c, draws, 0.2L)), 3.0);
}

TEST(RgsSelect, SingleColumn) {
  Rng rng(0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(rgs_select(vec({2}), 2.0, rng), 0);
}
