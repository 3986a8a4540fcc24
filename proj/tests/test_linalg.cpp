#include <gtest/gtest.h>

#include <random>

#include "mgimpl/linalg/elimination.hpp"
#include "support/golden.hpp"
#include "support/oracles.hpp"

using namespace mgimpl;

namespace {

template <class Int>
Matrix<Rational> qmatrix(const std::vector<std::vector<Int>>& rows) {
  const auto r = oracle::to_rational(rows);
  return Matrix<Rational>::from_rows(r, r.empty() ? 0 : r[0].size());
}

oracle::RMatrix to_rows(const Matrix<Rational>& m) {
  oracle::RMatrix out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

bool annihilates(const Matrix<Rational>& l, const std::vector<Integer>& v) {
  for (std::size_t i = 0; i < l.rows(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < l.cols(); ++j) s += l(i, j) * Rational(v[j]);
    if (sgn(s) != 0) return false;
  }
  return true;
}

std::vector<Integer> ints(std::initializer_list<long> xs) {
  std::vector<Integer> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

Matrix<Rational> random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int zero_bias) {
  Matrix<Rational> m(rows, cols, Rational(0));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (static_cast<int>(rng() % 10) >= zero_bias) m(i, j) = oracle::random_rational(rng, 4, 3);
  return m;
}

}  // namespace

TEST(ExactKernel, ComponentMatrixExample) {
  const auto l = qmatrix(golden::kComponentMatrix);
  const KernelBasis kb = exact_kernel(l);
  ASSERT_EQ(kb.dimension(), 1u);
  EXPECT_EQ(kb.vectors[0], ints({1, -1, 1}));
  EXPECT_FALSE(prescreen_trivial(l, PrimeField{}));
  EXPECT_EQ(rank_mod_p(reduce_mod_p(l, PrimeField(101)), PrimeField(101)), 2u);
  EXPECT_EQ(rational_rank(l), 2u);
}

TEST(ExactKernel, LiftSystem) {
  const auto l = qmatrix(golden::kLiftSystemT).transposed();
  ASSERT_EQ(l.rows(), 10u);
  const KernelBasis kb = exact_kernel(l);
  ASSERT_EQ(kb.dimension(), 1u);
  EXPECT_EQ(kb.vectors[0], ints({1, -1, 1}));
  // dropping the lifted column leaves no kernel
  const std::vector<std::size_t> keep{1, 2};
  const auto trimmed = l.select_columns(keep);
  EXPECT_TRUE(exact_kernel(trimmed).trivial());
  EXPECT_TRUE(prescreen_trivial(trimmed, PrimeField{}));
}

TEST(ExactKernel, SmallCases) {
  Matrix<Rational> id(3, 3, Rational(0));
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1;
  EXPECT_TRUE(prescreen_trivial(id, PrimeField{}));
  EXPECT_TRUE(exact_kernel(id).trivial());

  const Matrix<Rational> zero(1, 1, Rational(0));
  EXPECT_FALSE(prescreen_trivial(zero, PrimeField{}));
  const KernelBasis kz = exact_kernel(zero);
  ASSERT_EQ(kz.dimension(), 1u);
  EXPECT_EQ(kz.vectors[0], ints({1}));

  // more columns than rows can never be certified
  EXPECT_FALSE(prescreen_trivial(Matrix<Rational>(1, 2, Rational(1)), PrimeField{}));
  EXPECT_TRUE(prescreen_trivial(Matrix<Rational>(0, 0), PrimeField{}));
}

TEST(ExactKernel, RationalEntries) {
  Matrix<Rational> l(1, 2);
  l(0, 0) = Rational(1, 2);
  l(0, 1) = Rational(-1, 3);
  const KernelBasis kb = exact_kernel(l);
  ASSERT_EQ(kb.dimension(), 1u);
  EXPECT_EQ(kb.vectors[0], ints({2, 3}));
}

TEST(Prescreen, BadPrimePropagates) {
  Matrix<Rational> l(1, 1);
  l(0, 0) = Rational(1, 5);
  EXPECT_THROW(prescreen_trivial(l, PrimeField(5)), BadPrime);
}

TEST(NormalizePrimitive, Examples) {
  const std::vector<Rational> v{Rational(-2, 3), 0, Rational(4, 9)};
  EXPECT_EQ(normalize_primitive(std::span<const Rational>(v)), ints({3, 0, -2}));
  const std::vector<Rational> z{0, 0};
  EXPECT_EQ(normalize_primitive(std::span<const Rational>(z)), ints({0, 0}));
}

TEST(FractionFreeEchelon, PivotColumns) {
  const auto l = clear_row_denominators(qmatrix(std::vector<std::vector<int>>{{0, 2, 4}, {0, 1, 2}, {0, 0, 3}}));
  const Echelon e = fraction_free_echelon(l);
  EXPECT_EQ(e.pivots, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(e.echelon.rows(), 2u);
}

// ---- randomized invariants ----

TEST(LinalgProperty, KernelMatchesReferenceElimination) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = 1 + rng() % 7, cols = 1 + rng() % 7;
    Matrix<Rational> l = random_matrix(rng, rows, cols, trial % 8);
    // plant dependent columns now and then
    if (cols > 2 && trial % 3 == 0)
      for (std::size_t i = 0; i < rows; ++i) l(i, cols - 1) = l(i, 0) * 2 - l(i, 1);
    const auto ref = to_rows(l);
    const std::size_t r = oracle::rank_q(ref);
    ASSERT_EQ(rational_rank(l), r);
    const KernelBasis kb = exact_kernel(l);
    ASSERT_EQ(kb.dimension() + r, cols) << "rank-nullity, trial " << trial;
    for (const auto& v : kb.vectors) {
      ASSERT_TRUE(annihilates(l, v));
      ASSERT_EQ(normalize_primitive(std::span<const Integer>(v)), v);
    }
    // the normalized basis is unique, so it must equal the normalized RREF basis
    const auto want = oracle::kernel_q(ref, cols);
    ASSERT_EQ(want.size(), kb.dimension());
    for (std::size_t k = 0; k < want.size(); ++k)
      ASSERT_EQ(normalize_primitive(std::span<const Rational>(want[k])), kb.vectors[k]) << "trial " << trial;
  }
}

TEST(LinalgProperty, PrescreenIsSound) {
  std::mt19937_64 rng(11);
  const std::uint64_t primes[] = {2, 3, 5, 7, 101, PrimeField::kDefaultPrime};
  std::size_t certified = 0, missed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t cols = 1 + rng() % 5, rows = cols + rng() % 4;
    const Matrix<Rational> l = random_matrix(rng, rows, cols, trial % 7);
    const PrimeField fp(primes[trial % 6]);
    bool says_trivial = false;
    try {
      says_trivial = prescreen_trivial(l, fp);
    } catch (const BadPrime&) {
      continue;
    }
    const bool trivial = oracle::rank_q(to_rows(l)) == cols;
    if (says_trivial) {
      ASSERT_TRUE(trivial) << "trial " << trial;
      ++certified;
    } else if (trivial) {
      ++missed;
    }
    // rank mod p never exceeds rank over Q
    ASSERT_LE(rank_mod_p(reduce_mod_p(l, fp), fp), oracle::rank_q(to_rows(l)));
  }
  EXPECT_GT(certified, 100u);
  EXPECT_GT(missed, 0u);
}

TEST(LinalgProperty, RowScalingPreservesKernel) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
    const Matrix<Rational> l = random_matrix(rng, rows, cols, 3);
    const Matrix<Integer> z = clear_row_denominators(l);
    for (std::size_t i = 0; i < rows; ++i) {
      ASSERT_TRUE(oracle::same_row_space({to_rows(l)[i]}, {std::vector<Rational>(z.row(i).begin(), z.row(i).end())}));
    }
    ASSERT_EQ(exact_kernel(l).vectors, exact_kernel(z).vectors);
  }
}
