#pragma once

// Multigradings of ker(phi) read off the homogeneity space of the elimination
// ideal <x_i - phi(x_i)>.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgimpl/linalg/elimination.hpp"
#include "mgimpl/linalg/matrix.hpp"
#include "mgimpl/polyring/ring_map.hpp"

namespace mgimpl {

using IntVector = std::vector<std::int64_t>;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multidegree arithmetic");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multidegree arithmetic");
  return r;
}

inline std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("grading entry does not fit in 64 bits: " + z.get_str());
  return z.get_si();
}

}  // namespace detail

/// Integer basis of the homogeneity space of <x_i - phi(x_i)>, domain
/// coordinates first, then codomain coordinates.
struct HomogeneityBasis {
  std::size_t domain_size = 0;
  std::size_t codomain_size = 0;
  std::vector<IntVector> full_vectors;
  std::size_t constraint_rank = 0;
};

struct GradingMatrix {
  Matrix<std::int64_t> domain;  // A: r x n
  Matrix<std::int64_t> full;    // A_full: r x (n+m); 0 columns for user-supplied gradings
  std::optional<IntVector> positive_weight;
  std::vector<std::size_t> zero_image_vars;

  std::size_t rank() const noexcept { return domain.rows(); }
  std::size_t num_vars() const noexcept { return domain.cols(); }

  /// A grading given directly on the domain. Rows need not be independent.
  static GradingMatrix from_domain_rows(const std::vector<IntVector>& rows, std::size_t n) {
    GradingMatrix g;
    g.domain = Matrix<std::int64_t>(0, n);
    for (const IntVector& row : rows) g.domain.append_row(row);
    return g;
  }

  /// The rank-one grading by total degree.
  static GradingMatrix total_degree(std::size_t n) {
    GradingMatrix g = from_domain_rows({IntVector(n, 1)}, n);
    g.positive_weight = IntVector(n, 1);
    return g;
  }
};

/// One row per (i, term t^gamma of phi(x_i)): w_{x_i} - gamma . w_t = 0.
inline Matrix<Integer> build_constraints(const RingMap& phi) {
  const std::size_t n = phi.domain_size();
  const std::size_t m = phi.codomain_size();
  Matrix<Integer> rows(0, n + m);
  std::vector<Integer> row(n + m);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [gamma, c] : phi.image(i).terms()) {
      std::fill(row.begin(), row.end(), Integer(0));
      row[i] = 1;
      for (const auto& f : gamma.factors()) row[n + f.var] -= f.exp;
      rows.append_row(row);
    }
  }
  return rows;
}

inline HomogeneityBasis homogeneity_space(const RingMap& phi) {
  HomogeneityBasis hb;
  hb.domain_size = phi.domain_size();
  hb.codomain_size = phi.codomain_size();
  const Matrix<Integer> constraints = build_constraints(phi);
  const KernelBasis kb = exact_kernel(constraints);
  for (const auto& v : kb.vectors) {
    IntVector iv;
    iv.reserve(v.size());
    for (const Integer& z : v) iv.push_back(detail::to_int64(z));
    hb.full_vectors.push_back(std::move(iv));
  }
  hb.constraint_rank = hb.domain_size + hb.codomain_size - hb.full_vectors.size();
  return hb;
}

/// Rank of a stack of integer rows.
inline std::size_t int_rows_rank(const std::vector<IntVector>& rows, std::size_t cols) {
  Matrix<Integer> m(rows.size(), cols, Integer(0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = static_cast<long>(rows[i][j]);
  }
  return integer_rank(m);
}

inline std::vector<IntVector> matrix_rows(const Matrix<std::int64_t>& m) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

/// Projects to the domain coordinates and keeps a maximal independent subset,
/// scanning vectors ordered by (max |entry|, lexicographic) on the projection.
inline GradingMatrix domain_grading(const HomogeneityBasis& basis) {
  const std::size_t n = basis.domain_size;
  const std::size_t total = n + basis.codomain_size;
  struct Candidate {
    IntVector projected;
    const IntVector* full;
    std::int64_t max_abs;
  };
  std::vector<Candidate> cands;
  for (const IntVector& v : basis.full_vectors) {
    Candidate c{IntVector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)), &v, 0};
    for (std::int64_t x : c.projected) c.max_abs = std::max(c.max_abs, std::abs(x));
    cands.push_back(std::move(c));
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.max_abs != b.max_abs) return a.max_abs < b.max_abs;
    if (a.projected != b.projected) return a.projected < b.projected;
    return *a.full < *b.full;
  });

  GradingMatrix g;
  g.domain = Matrix<std::int64_t>(0, n);
  g.full = Matrix<std::int64_t>(0, total);
  std::vector<IntVector> kept;
  for (const Candidate& c : cands) {
    if (c.max_abs == 0) continue;
    kept.push_back(c.projected);
    if (int_rows_rank(kept, n) < kept.size()) {
      kept.pop_back();
      continue;
    }
    g.domain.append_row(c.projected);
    g.full.append_row(*c.full);
  }
  return g;
}

namespace detail {

struct Inequality {
  std::vector<Rational> coef;  // coef . u >= rhs
  Rational rhs;
};

// Divides by |first nonzero coefficient| so parallel constraints compare equal.
inline void normalize_inequality(Inequality& q) {
  for (const Rational& c : q.coef) {
    if (sgn(c) != 0) {
      Rational s = abs(c);
      for (Rational& x : q.coef) x /= s;
      q.rhs /= s;
      return;
    }
  }
}

// Drops trivially-true rows and keeps only the strongest of parallel rows.
// Returns false if some row reads 0 >= positive.
inline bool tidy(std::vector<Inequality>& sys) {
  std::map<std::vector<Rational>, Rational> strongest;
  for (Inequality& q : sys) {
    normalize_inequality(q);
    bool zero = std::all_of(q.coef.begin(), q.coef.end(), [](const Rational& c) { return sgn(c) == 0; });
    if (zero) {
      if (sgn(q.rhs) > 0) return false;
      continue;
    }
    auto [it, inserted] = strongest.try_emplace(q.coef, q.rhs);
    if (!inserted && q.rhs > it->second) it->second = q.rhs;
  }
  sys.clear();
  for (auto& [coef, rhs] : strongest) sys.push_back({coef, rhs});
  return true;
}

}  // namespace detail

/// A strictly positive integer vector in rowspan(A). Returns the all-ones
/// vector when it lies in the rational row span; otherwise solves
/// u^T A >= 1 by Fourier-Motzkin elimination and returns the primitive
/// integer multiple of u^T A.
inline std::optional<IntVector> find_positive_weight(const Matrix<std::int64_t>& a) {
  const std::size_t r = a.rows();
  const std::size_t n = a.cols();
  if (r == 0 || n == 0) return std::nullopt;
  std::vector<IntVector> rows = matrix_rows(a);
  const std::size_t base_rank = int_rows_rank(rows, n);
  rows.emplace_back(n, 1);
  if (int_rows_rank(rows, n) == base_rank) return IntVector(n, 1);

  using detail::Inequality;
  std::vector<std::vector<Inequality>> stages;
  std::vector<Inequality> sys;
  for (std::size_t j = 0; j < n; ++j) {
    Inequality q{std::vector<Rational>(r), Rational(1)};
    for (std::size_t k = 0; k < r; ++k) q.coef[k] = static_cast<long>(a(k, j));
    sys.push_back(std::move(q));
  }
  if (!detail::tidy(sys)) return std::nullopt;
  // stages[k] holds the system in variables 0..k, before eliminating k.
  stages.resize(r);
  for (std::size_t k = r; k-- > 0;) {
    stages[k] = sys;
    std::vector<Inequality> next;
    std::vector<const Inequality*> pos, neg;
    for (const Inequality& q : sys) {
      int s = sgn(q.coef[k]);
      if (s > 0) {
        pos.push_back(&q);
      } else if (s < 0) {
        neg.push_back(&q);
      } else {
        next.push_back(q);
      }
    }
    for (const Inequality* p : pos) {
      for (const Inequality* q : neg) {
        // positive combination cancelling u_k
        Rational sp = p->coef[k], sq = -q->coef[k];
        Inequality comb{std::vector<Rational>(r), p->rhs * sq + q->rhs * sp};
        for (std::size_t t = 0; t < r; ++t) comb.coef[t] = p->coef[t] * sq + q->coef[t] * sp;
        comb.coef[k] = 0;
        next.push_back(std::move(comb));
      }
    }
    sys = std::move(next);
    if (!detail::tidy(sys)) return std::nullopt;
  }

  std::vector<Rational> u(r, Rational(0));
  for (std::size_t k = 0; k < r; ++k) {
    std::optional<Rational> lo, hi;
    for (const Inequality& q : stages[k]) {
      if (sgn(q.coef[k]) == 0) continue;
      Rational rest = q.rhs;
      for (std::size_t t = 0; t < k; ++t) rest -= q.coef[t] * u[t];
      Rational bound = rest / q.coef[k];
      if (sgn(q.coef[k]) > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (lo) {
      u[k] = *lo;
    } else if (hi) {
      u[k] = *hi;
    }
    if (lo && hi && *lo > *hi) return std::nullopt;  // unreachable when elimination reported feasible
  }
  std::vector<Rational> w(n, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < r; ++k) w[j] += u[k] * static_cast<long>(a(k, j));
    if (sgn(w[j]) <= 0) return std::nullopt;
  }
  IntVector out;
  for (const Integer& z : normalize_primitive(std::span<const Rational>(w))) out.push_back(detail::to_int64(z));
  return out;
}

struct Multidegree {
  IntVector beta;
  std::int64_t weighted_degree = 0;

  friend bool operator==(const Multidegree&, const Multidegree&) = default;
};

/// beta = A alpha, plus a . alpha when a positive weight is known.
inline Multidegree multidegree_of(const GradingMatrix& g, const Monomial& alpha) {
  if (alpha.var_bound() > g.num_vars()) throw std::invalid_argument("monomial outside the graded ring");
  Multidegree md;
  md.beta.assign(g.rank(), 0);
  for (const auto& f : alpha.factors()) {
    for (std::size_t k = 0; k < g.rank(); ++k) {
      md.beta[k] = detail::checked_add(md.beta[k], detail::checked_mul(g.domain(k, f.var), f.exp));
    }
    if (g.positive_weight) {
      md.weighted_degree =
          detail::checked_add(md.weighted_degree, detail::checked_mul((*g.positive_weight)[f.var], f.exp));
    }
  }
  return md;
}

/// Computes the homogeneity basis, the domain grading and a positive weight.
inline GradingMatrix compute_grading(const RingMap& phi) {
  GradingMatrix g = domain_grading(homogeneity_space(phi));
  for (std::size_t i = 0; i < phi.domain_size(); ++i) {
    if (phi.image(i).is_zero()) g.zero_image_vars.push_back(i);
  }
  g.positive_weight = find_positive_weight(g.domain);
  return g;
}

/// Text export: header "r n", then one space-separated row per line.
inline void write_grading(std::ostream& os, const Matrix<std::int64_t>& a) {
  os << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j);
    os << '\n';
  }
}

}  // namespace mgimpl
