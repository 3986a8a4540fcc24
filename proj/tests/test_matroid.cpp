#include <gtest/gtest.h>

#include <random>

#include "mgimpl/enumerate.hpp"
#include "mgimpl/io/fixtures.hpp"
#include "mgimpl/matroid.hpp"
#include "support/oracles.hpp"
#include "support/poly_text.hpp"

using namespace mgimpl;
using testutil::poly;

namespace {

const PrimeField kField{};

QPolynomial image_of(const RingMap& phi, const Monomial& a) {
  QPolynomial img = QPolynomial::one(RationalField{}, phi.codomain_size());
  for (const auto& f : a.factors())
    for (std::uint32_t e = 0; e < f.exp; ++e) img = img * phi.image(f.var);
  return img;
}

// rank over Q of the coefficient matrix of phi(x^alpha), alpha in `mons`
std::size_t image_rank(const RingMap& phi, const std::vector<Monomial>& mons) {
  std::vector<QPolynomial> imgs;
  std::map<Monomial, std::size_t, GrlexDescending> rows;
  for (const auto& a : mons) {
    imgs.push_back(image_of(phi, a));
    for (const auto& [g, c] : imgs.back().terms()) rows.emplace(g, rows.size());
  }
  oracle::RMatrix m(rows.size(), std::vector<Rational>(mons.size()));
  for (std::size_t k = 0; k < imgs.size(); ++k)
    for (const auto& [g, c] : imgs[k].terms()) m[rows.at(g)][k] = c;
  return oracle::rank_q(m);
}

}  // namespace

TEST(Jacobian, CuspColumn) {
  const RingMap cusp = io::gen_cusp();
  const auto jac = build_jacobian(cusp, kField, 7);
  ASSERT_EQ(jac.entries.rows(), 2u);
  ASSERT_EQ(jac.entries.cols(), 3u);
  const auto a = jac.point[0], b = jac.point[1];
  const auto s = kField.mul(2, kField.add(a, b));
  EXPECT_EQ(jac.entries(0, 0), s);
  EXPECT_EQ(jac.entries(1, 0), s);
  // d(a^2 - b^2) = (2a, -2b)
  EXPECT_EQ(jac.entries(0, 1), kField.mul(2, a));
  EXPECT_EQ(jac.entries(1, 1), kField.neg(kField.mul(2, b)));
}

TEST(Jacobian, MonomialPower) {
  const RingMap phi({"x"}, {"t"}, {poly("t^5", {"t"})});
  const auto jac = build_jacobian(phi, kField, 3);
  const auto t = jac.point[0];
  EXPECT_EQ(jac.entries(0, 0), kField.mul(5, kField.pow(t, 4)));
}

TEST(Jacobian, SeedDeterminesPoint) {
  const RingMap gr = io::gen_grassmannian(4);
  EXPECT_EQ(build_jacobian(gr, kField, 11).entries, build_jacobian(gr, kField, 11).entries);
  EXPECT_NE(build_jacobian(gr, kField, 11).point, build_jacobian(gr, kField, 12).point);
}

TEST(Jacobian, BadPrime) {
  const RingMap phi({"x"}, {"t"}, {poly("t/7", {"t"})});
  EXPECT_THROW(build_jacobian(phi, PrimeField(7), 1), BadPrime);
}

TEST(Jacobian, Grassmannian24RankFive) {
  const RingMap gr = io::gen_grassmannian(4);
  const auto jac = build_jacobian(gr, kField, 1);
  ASSERT_EQ(jac.entries.rows(), 8u);
  ASSERT_EQ(jac.entries.cols(), 6u);
  EXPECT_EQ(rank_mod_p(jac.entries, kField), 5u);

  // exact Jacobian at an integer point has rank at least 5
  std::vector<Rational> pt{2, -1, 3, 5, 1, -4, 7, 2};
  oracle::RMatrix exact(8, std::vector<Rational>(6));
  for (std::uint32_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      exact[i][j] = evaluate(partial_derivative(gr.image(j), i), std::span<const Rational>(pt));
  EXPECT_GE(oracle::rank_q(exact), 5u);

  // symbolic certificate of rank <= 5: the gradient of the Plucker relation,
  // pulled back along phi, annihilates every row of J
  const auto& names = gr.domain_names();
  const QPolynomial f = poly("p_1_2*p_3_4 - p_1_3*p_2_4 + p_2_3*p_1_4", names);
  for (std::uint32_t i = 0; i < 8; ++i) {
    QPolynomial sum(RationalField{}, 8);
    for (std::uint32_t j = 0; j < 6; ++j)
      sum += apply_map(gr, partial_derivative(f, j)) * partial_derivative(gr.image(j), i);
    EXPECT_TRUE(sum.is_zero()) << "row " << i;
  }
}

TEST(CanSkip, Grassmannian24Supports) {
  const RingMap gr = io::gen_grassmannian(4);
  const auto jac = build_jacobian(gr, kField, 1);
  SkipCache cache;
  EXPECT_TRUE(can_skip(jac, {0, 1}, cache));
  EXPECT_FALSE(can_skip(jac, {0, 1, 2, 3, 4, 5}, cache));
  EXPECT_TRUE(can_skip(jac, {}, cache));
  // any five Plucker coordinates are algebraically independent
  for (std::uint32_t drop = 0; drop < 6; ++drop) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t v = 0; v < 6; ++v)
      if (v != drop) s.push_back(v);
    EXPECT_TRUE(can_skip(jac, s, cache));
  }
}

TEST(CanSkip, MoreVariablesThanRows) {
  const RingMap phi({"x", "y"}, {"t"}, {poly("t", {"t"}), poly("t^2", {"t"})});
  const auto jac = build_jacobian(phi, kField, 1);
  SkipCache cache;
  EXPECT_TRUE(can_skip(jac, {0}, cache));
  EXPECT_FALSE(can_skip(jac, {0, 1}, cache));
}

TEST(SkipCache, ConsistentAnswers) {
  const RingMap gr = io::gen_grassmannian(5);
  const auto jac = build_jacobian(gr, kField, 5);
  SkipCache cache;
  std::mt19937_64 rng(5);
  std::vector<std::pair<std::vector<std::uint32_t>, bool>> seen;
  for (int k = 0; k < 200; ++k) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t v = 0; v < 10; ++v)
      if (rng() % 2) s.push_back(v);
    seen.emplace_back(s, can_skip(jac, s, cache));
  }
  for (const auto& [s, ans] : seen) {
    SkipCache fresh;
    EXPECT_EQ(can_skip(jac, s, cache), ans);
    EXPECT_EQ(can_skip(jac, s, fresh), ans);
  }
  EXPECT_LE(cache.size(), seen.size());
}

// ---- randomized invariants ----

TEST(MatroidProperty, SkipIsMonotoneUnderSubsets) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 5, m = 1 + trial % 4;
    const RingMap phi = oracle::random_map(rng, n, m, 3, 3);
    const auto jac = build_jacobian(phi, kField, trial);
    SkipCache cache;
    std::vector<std::uint32_t> t, s;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (rng() % 3 == 0) continue;
      t.push_back(v);
      if (rng() % 2) s.push_back(v);
    }
    if (can_skip(jac, t, cache)) ASSERT_TRUE(can_skip(jac, s, cache)) << "trial " << trial;
  }
}

TEST(MatroidProperty, SkippedComponentsHaveTrivialKernel) {
  std::mt19937_64 rng(2024);
  std::size_t skipped = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 5, m = 2 + trial % 3;
    const RingMap phi = oracle::random_monomial_map(rng, n, m, 1 + trial % 2);
    const GradingMatrix g = compute_grading(phi);
    const auto jac = build_jacobian(phi, kField, trial);
    SkipCache cache;
    const DegreeLevel level = enumerate_level(g, 2);
    for (const auto& [beta, basis] : level.components) {
      if (!can_skip(jac, basis.support, cache)) continue;
      ++skipped;
      ASSERT_EQ(image_rank(phi, basis.monomials), basis.size()) << "trial " << trial;
    }
  }
  EXPECT_GT(skipped, 0u);
}
