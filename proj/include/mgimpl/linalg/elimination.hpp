#pragma once

// Exact elimination kernels: rank over GF(p), fraction-free (Bareiss) echelon
// form over Z, and normalized rational kernels.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mgimpl/linalg/matrix.hpp"
#include "mgimpl/polyring/field.hpp"

namespace mgimpl {

/// Rank over GF(p) by Gaussian elimination (destroys its argument).
inline std::size_t rank_mod_p(Matrix<std::uint64_t> m, const PrimeField& fp) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, rank);
    const std::uint64_t inv = fp.inv(m(rank, c));
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const std::uint64_t f = fp.mul(m(i, c), inv);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = fp.sub(m(i, j), fp.mul(f, m(rank, j)));
    }
    ++rank;
  }
  return rank;
}

/// Entry-wise image in GF(p); throws BadPrime when p divides a denominator.
inline Matrix<std::uint64_t> reduce_mod_p(const Matrix<Rational>& m, const PrimeField& fp) {
  Matrix<std::uint64_t> out(m.rows(), m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (sgn(m(i, j)) != 0) out(i, j) = fp.from_rational(m(i, j));
    }
  }
  return out;
}

/// Scales every row by the lcm of its denominators. Row scaling preserves
/// the row space and hence the kernel.
inline Matrix<Integer> clear_row_denominators(const Matrix<Rational>& m) {
  Matrix<Integer> out(m.rows(), m.cols(), Integer(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (const Rational& x : m.row(i)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_num() * (l / m(i, j).get_den());
  }
  return out;
}

/// Row echelon form from fraction-free elimination. pivots[k] is the column
/// of the k-th pivot; rows() of `echelon` equals pivots.size().
struct Echelon {
  Matrix<Integer> echelon;
  std::vector<std::size_t> pivots;

  std::size_t rank() const noexcept { return pivots.size(); }
};

/// Bareiss elimination processing columns left to right. Among the candidate
/// rows for a pivot, the one with the smallest bit length wins; the set of
/// pivot columns depends only on the column order, never on that choice.
inline Echelon fraction_free_echelon(Matrix<Integer> m) {
  Echelon out;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::optional<std::size_t> best;
    std::size_t best_bits = 0;
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (sgn(m(i, c)) == 0) continue;
      std::size_t bits = mpz_sizeinbase(m(i, c).get_mpz_t(), 2);
      if (!best || bits < best_bits) {
        best = i;
        best_bits = bits;
      }
    }
    if (!best) continue;
    m.swap_rows(*best, r);
    const Integer& p = m(r, c);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const Integer lead = m(i, c);
      for (std::size_t j = c + 1; j < m.cols(); ++j) {
        Integer v = p * m(i, j) - lead * m(r, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = std::move(v);
      }
      m(i, c) = 0;
    }
    prev = p;
    out.pivots.push_back(c);
    ++r;
  }
  out.echelon = Matrix<Integer>(r, m.cols(), Integer(0));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out.echelon(i, j) = m(i, j);
  }
  return out;
}

inline std::size_t integer_rank(const Matrix<Integer>& m) { return fraction_free_echelon(m).rank(); }
inline std::size_t rational_rank(const Matrix<Rational>& m) { return integer_rank(clear_row_denominators(m)); }

/// Scales a rational vector to integers with content 1 and a positive first
/// nonzero entry. The zero vector maps to zeros.
inline std::vector<Integer> normalize_primitive(std::span<const Rational> v) {
  Integer l = 1;
  for (const Rational& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> out;
  out.reserve(v.size());
  Integer g = 0;
  for (const Rational& x : v) {
    out.push_back(x.get_num() * (l / x.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  if (sgn(g) == 0) return out;
  int sign = 0;
  for (const Integer& x : out) {
    if (sgn(x) != 0) {
      sign = sgn(x);
      break;
    }
  }
  if (sign < 0) g = -g;
  for (Integer& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return out;
}

inline std::vector<Integer> normalize_primitive(std::span<const Integer> v) {
  std::vector<Rational> q(v.begin(), v.end());
  return normalize_primitive(std::span<const Rational>(q));
}

/// Basis of ker(L) over Q. Each vector is the unique kernel element that is 1
/// on one free column and 0 on the others, then scaled to a primitive integer
/// vector with positive leading entry; this makes the basis independent of
/// pivot strategy.
struct KernelBasis {
  std::size_t columns = 0;
  std::vector<std::vector<Integer>> vectors;
  bool normalized = true;

  std::size_t dimension() const noexcept { return vectors.size(); }
  bool trivial() const noexcept { return vectors.empty(); }
};

inline KernelBasis kernel_from_echelon(const Echelon& e, std::size_t cols) {
  KernelBasis kb;
  kb.columns = cols;
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t k = e.rank(); k-- > 0;) {
      const std::size_t pc = e.pivots[k];
      Rational s = 0;
      for (std::size_t j = pc + 1; j < cols; ++j) {
        if (sgn(v[j]) != 0 && sgn(e.echelon(k, j)) != 0) s += Rational(e.echelon(k, j)) * v[j];
      }
      v[pc] = -s / Rational(e.echelon(k, pc));
      v[pc].canonicalize();
    }
    kb.vectors.push_back(normalize_primitive(std::span<const Rational>(v)));
  }
  return kb;
}

inline KernelBasis exact_kernel(const Matrix<Integer>& l) { return kernel_from_echelon(fraction_free_echelon(l), l.cols()); }
inline KernelBasis exact_kernel(const Matrix<Rational>& l) { return exact_kernel(clear_row_denominators(l)); }

/// True certifies ker(L) = 0 over Q: the rank mod p never exceeds the rank
/// over Q. A false answer proves nothing.
inline bool prescreen_trivial(const Matrix<Rational>& l, const PrimeField& fp) {
  if (l.cols() == 0) return true;
  if (l.rows() < l.cols()) return false;
  return rank_mod_p(reduce_mod_p(l, fp), fp) == l.cols();
}

}  // namespace mgimpl
