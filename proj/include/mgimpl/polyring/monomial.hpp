#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace mgimpl {

/// Sparse exponent vector: (variable, exponent) pairs with strictly increasing
/// variable index and no zero exponents. The empty monomial is 1.
class Monomial {
 public:
  struct Factor {
    std::uint32_t var;
    std::uint32_t exp;
    friend bool operator==(const Factor&, const Factor&) = default;
  };

  Monomial() = default;

  static Monomial variable(std::uint32_t var, std::uint32_t exp = 1) {
    Monomial m;
    if (exp > 0) {
      m.factors_.push_back({var, exp});
      m.degree_ = exp;
    }
    return m;
  }

  /// Accepts factors in any order; repeated variables are merged and zero
  /// exponents dropped.
  static Monomial from_factors(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end(), [](const Factor& a, const Factor& b) { return a.var < b.var; });
    Monomial m;
    for (const Factor& f : factors) {
      if (f.exp == 0) continue;
      if (!m.factors_.empty() && m.factors_.back().var == f.var) {
        m.factors_.back().exp += f.exp;
      } else {
        m.factors_.push_back(f);
      }
      m.degree_ += f.exp;
    }
    return m;
  }

  static Monomial from_dense(std::span<const std::uint32_t> exps) {
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      m.factors_.push_back({static_cast<std::uint32_t>(i), exps[i]});
      m.degree_ += exps[i];
    }
    return m;
  }

  std::span<const Factor> factors() const noexcept { return factors_; }
  std::size_t support_size() const noexcept { return factors_.size(); }
  bool is_one() const noexcept { return factors_.empty(); }
  std::uint64_t total_degree() const noexcept { return degree_; }

  std::uint32_t exponent(std::uint32_t var) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), var,
                               [](const Factor& f, std::uint32_t v) { return f.var < v; });
    return (it != factors_.end() && it->var == var) ? it->exp : 0;
  }

  /// One past the largest variable index, or 0 for the unit monomial.
  std::uint32_t var_bound() const noexcept { return factors_.empty() ? 0 : factors_.back().var + 1; }

  std::vector<std::uint32_t> to_dense(std::size_t num_vars) const {
    std::vector<std::uint32_t> out(num_vars, 0);
    for (const Factor& f : factors_) out.at(f.var) = f.exp;
    return out;
  }

  /// Weighted degree w . alpha, for any arithmetic weight type.
  template <class W>
  W weighted_degree(std::span<const W> weights) const {
    W acc(0);
    for (const Factor& f : factors_) acc += weights[f.var] * W(f.exp);
    return acc;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() || j != b.factors_.end()) {
      if (j == b.factors_.end() || (i != a.factors_.end() && i->var < j->var)) {
        m.factors_.push_back(*i++);
      } else if (i == a.factors_.end() || j->var < i->var) {
        m.factors_.push_back(*j++);
      } else {
        m.factors_.push_back({i->var, i->exp + j->exp});
        ++i;
        ++j;
      }
    }
    m.degree_ = a.degree_ + b.degree_;
    return m;
  }

  /// x^alpha / x_var, requires exponent(var) > 0.
  Monomial divide_by_variable(std::uint32_t var) const {
    Monomial m = *this;
    auto it = std::find_if(m.factors_.begin(), m.factors_.end(), [var](const Factor& f) { return f.var == var; });
    if (it == m.factors_.end()) throw std::invalid_argument("monomial not divisible by variable");
    if (--it->exp == 0) m.factors_.erase(it);
    --m.degree_;
    return m;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }

  std::size_t hash() const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const Factor& f : factors_) {
      h ^= (static_cast<std::size_t>(f.var) << 32 | f.exp) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  std::vector<Factor> factors_;
  std::uint64_t degree_ = 0;
};

/// Graded lexicographic order with x_0 > x_1 > ... : compare total degree,
/// then the first variable where the exponents differ.
inline bool grlex_less(const Monomial& a, const Monomial& b) {
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
  auto fa = a.factors();
  auto fb = b.factors();
  std::size_t i = 0;
  for (; i < fa.size() && i < fb.size(); ++i) {
    if (fa[i].var != fb[i].var) return fa[i].var > fb[i].var;  // a lacks fb[i].var's smaller index
    if (fa[i].exp != fb[i].exp) return fa[i].exp < fb[i].exp;
  }
  // equal degree and equal prefix means equal monomials
  return false;
}

/// Leading-first iteration order used everywhere for canonical output.
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

}  // namespace mgimpl
