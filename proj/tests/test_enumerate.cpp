#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mgimpl/enumerate.hpp"
#include "mgimpl/io/fixtures.hpp"
#include "support/golden.hpp"
#include "support/oracles.hpp"
#include "support/poly_text.hpp"

using namespace mgimpl;
using testutil::poly;

namespace {

GradingMatrix published_gr24() {
  auto g = GradingMatrix::from_domain_rows(golden::gr24_domain_rows(), 6);
  g.positive_weight = find_positive_weight(g.domain);
  return g;
}

void expect_partition(const GradingMatrix& g, const DegreeLevel& level) {
  std::set<std::vector<std::uint32_t>> seen;
  std::size_t total = 0;
  for (const auto& [beta, basis] : level.components) {
    total += basis.size();
    std::set<std::uint32_t> support;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Monomial& a = basis.monomials[k];
      ASSERT_EQ(multidegree_of(g, a).beta, beta);
      ASSERT_EQ(multidegree_of(g, a).weighted_degree, level.degree);
      ASSERT_TRUE(seen.insert(a.to_dense(g.num_vars())).second) << "duplicate monomial";
      if (k > 0) ASSERT_TRUE(grlex_less(a, basis.monomials[k - 1]));
      for (const auto& f : a.factors()) support.insert(f.var);
    }
    ASSERT_EQ(basis.support, std::vector<std::uint32_t>(support.begin(), support.end()));
  }
  ASSERT_EQ(total, level.monomial_count);
  ASSERT_EQ(level.keys.size(), level.components.size());
  ASSERT_TRUE(std::is_sorted(level.keys.begin(), level.keys.end()));
}

}  // namespace

TEST(EnumerateLevel, Grassmannian24DegreeTwo) {
  const GradingMatrix g = published_gr24();
  const DegreeLevel level = enumerate_level(g, 2);
  EXPECT_EQ(level.monomial_count, 21u);
  EXPECT_EQ(level.component_count(), 19u);
  std::size_t big = 0;
  for (const auto& [beta, basis] : level.components) {
    if (basis.size() > 1) {
      ++big;
      EXPECT_EQ(beta, (IntVector{2, 1, 1, 1, -1}));
      EXPECT_EQ(basis.size(), 3u);
    }
  }
  EXPECT_EQ(big, 1u);
  expect_partition(g, level);

  // same partition under the computed grading
  const DegreeLevel computed = enumerate_level(compute_grading(io::gen_grassmannian(4)), 2);
  EXPECT_EQ(computed.component_count(), 19u);
  auto blocks = [](const DegreeLevel& lv) {
    std::set<std::set<std::vector<std::uint32_t>>> out;
    for (const auto& [beta, basis] : lv.components) {
      std::set<std::vector<std::uint32_t>> block;
      for (const auto& m : basis.monomials) block.insert(m.to_dense(6));
      out.insert(block);
    }
    return out;
  };
  EXPECT_EQ(blocks(level), blocks(computed));
}

TEST(EnumerateLevel, SunletDegreeTwoCount) {
  const DegreeLevel level = enumerate_level(compute_grading(io::gen_sunlet_k3p()), 2);
  EXPECT_EQ(level.monomial_count, 2080u);
  std::size_t total = 0;
  for (const auto& [beta, basis] : level.components) total += basis.size();
  EXPECT_EQ(total, 2080u);
}

TEST(EnumerateLevel, SunletDegreeThreeCount) {
  const DegreeLevel level = enumerate_level(compute_grading(io::gen_sunlet_k3p()), 3);
  EXPECT_EQ(level.monomial_count, 45760u);
}

TEST(EnumerateLevel, SingleVariable) {
  const GradingMatrix g = GradingMatrix::total_degree(1);
  const DegreeLevel level = enumerate_level(g, 3);
  ASSERT_EQ(level.component_count(), 1u);
  const MonomialBasis& b = level.components.begin()->second;
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.monomials[0], Monomial::variable(0, 3));
}

TEST(EnumerateLevel, Preconditions) {
  auto g = GradingMatrix::from_domain_rows({{1, 1}}, 2);
  EXPECT_THROW(enumerate_level(g, 2), std::invalid_argument);
  g.positive_weight = IntVector{1, 1};
  EXPECT_THROW(enumerate_level(g, 0), std::invalid_argument);
  auto huge = GradingMatrix::from_domain_rows({{std::int64_t(1) << 62, 1}}, 2);
  huge.positive_weight = IntVector{1, 1};
  EXPECT_THROW(enumerate_level(huge, 3), std::overflow_error);
}

TEST(LookupBasis, Examples) {
  const GradingMatrix g = published_gr24();
  LevelStore store(g);
  const DegreeLevel& two = store.level(2);
  const RingMap gr = io::gen_grassmannian(4);
  const auto& names = gr.domain_names();
  auto mono = [&](const std::string& s) { return poly(s, names).leading_term().first; };
  const MonomialBasis& b = lookup_basis(two, {2, 1, 1, 1, -1});
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.monomials[0], mono("p_1_2*p_3_4"));
  EXPECT_EQ(b.monomials[1], mono("p_1_3*p_2_4"));
  EXPECT_EQ(b.monomials[2], mono("p_2_3*p_1_4"));
  EXPECT_TRUE(lookup_basis(two, {9, 9, 9, 9, 9}).empty());

  const DegreeLevel& one = store.level(1);
  const MonomialBasis& p12 = lookup_basis(one, multidegree_of(g, mono("p_1_2")).beta);
  ASSERT_EQ(p12.size(), 1u);
  EXPECT_EQ(p12.monomials[0], mono("p_1_2"));
  EXPECT_EQ(store.find(1), &one);
  EXPECT_EQ(store.find(3), nullptr);
}

// ---- randomized invariants ----

TEST(EnumerateProperty, LevelSumsMatchBinomialCounts) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const std::int64_t d = 1 + (trial / 6) % 4;
    // random extra rows on top of total degree
    std::vector<IntVector> rows{IntVector(n, 1)};
    std::uniform_int_distribution<int> e(-2, 2);
    for (int r = 0; r < trial % 3; ++r) {
      IntVector row(n);
      for (auto& x : row) x = e(rng);
      rows.push_back(row);
    }
    auto g = GradingMatrix::from_domain_rows(rows, n);
    g.positive_weight = IntVector(n, 1);
    const DegreeLevel level = enumerate_level(g, d);
    ASSERT_EQ(level.monomial_count, oracle::multichoose(n, static_cast<std::uint64_t>(d)));
    expect_partition(g, level);
  }
}

TEST(EnumerateProperty, WeightedLevelsMatchBruteForce) {
  std::mt19937_64 rng(321);
  std::uniform_int_distribution<int> w(1, 3);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 5;
    IntVector a(n);
    for (auto& x : a) x = w(rng);
    auto g = GradingMatrix::from_domain_rows({a}, n);
    g.positive_weight = a;
    const std::int64_t d = 1 + trial % 6;
    const DegreeLevel level = enumerate_level(g, d);
    ASSERT_EQ(level.monomial_count, oracle::count_weighted(a, d));
    expect_partition(g, level);
  }
}
