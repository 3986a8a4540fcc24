#pragma once

// Monomials of a fixed weighted degree, bucketed by multidegree.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mgimpl/grading.hpp"
#include "mgimpl/polyring/monomial.hpp"

namespace mgimpl {

struct IntVectorHash {
  std::size_t operator()(const IntVector& v) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::int64_t x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// M_beta: members in graded-lex descending order, plus their variable support.
struct MonomialBasis {
  std::vector<Monomial> monomials;
  std::vector<std::uint32_t> support;

  std::size_t size() const noexcept { return monomials.size(); }
  bool empty() const noexcept { return monomials.empty(); }
};

/// All monomials alpha with a . alpha = degree, partitioned by beta = A alpha.
struct DegreeLevel {
  std::int64_t degree = 0;
  std::size_t monomial_count = 0;
  std::unordered_map<IntVector, MonomialBasis, IntVectorHash> components;
  std::vector<IntVector> keys;  // lexicographically sorted

  std::size_t component_count() const noexcept { return components.size(); }
};

namespace detail {

class LevelBuilder {
 public:
  LevelBuilder(const GradingMatrix& g, std::int64_t target, DegreeLevel& out)
      : g_(g), weight_(*g.positive_weight), target_(target), out_(out), beta_(g.rank(), 0), exps_(g.num_vars(), 0) {}

  void run() { visit(0, target_); }

 private:
  void visit(std::size_t var, std::int64_t remaining) {
    if (remaining == 0) {
      emit();
      return;
    }
    if (var == exps_.size()) return;
    const std::int64_t w = weight_[var];
    const std::int64_t max_e = remaining / w;
    // Highest exponent first so buckets fill roughly in descending grlex order.
    for (std::int64_t e = max_e; e >= 0; --e) {
      if (e > 0) shift(var, e);
      exps_[var] = static_cast<std::uint32_t>(e);
      visit(var + 1, remaining - e * w);
      exps_[var] = 0;
      if (e > 0) shift(var, -e);
    }
  }

  void shift(std::size_t var, std::int64_t e) {
    for (std::size_t k = 0; k < beta_.size(); ++k) {
      beta_[k] = checked_add(beta_[k], checked_mul(g_.domain(k, var), e));
    }
  }

  void emit() {
    auto& basis = out_.components[beta_];
    basis.monomials.push_back(Monomial::from_dense(exps_));
    ++out_.monomial_count;
  }

  const GradingMatrix& g_;
  const IntVector& weight_;
  std::int64_t target_;
  DegreeLevel& out_;
  IntVector beta_;
  std::vector<std::uint32_t> exps_;
};

}  // namespace detail

/// Depth-first enumeration of {alpha : a . alpha = degree}. Requires a
/// positive weight; multidegree arithmetic is overflow-checked.
inline DegreeLevel enumerate_level(const GradingMatrix& g, std::int64_t degree) {
  if (!g.positive_weight) throw std::invalid_argument("enumerate_level needs a positive weight vector");
  if (degree < 1) throw std::invalid_argument("enumerate_level needs degree >= 1");
  for (std::int64_t w : *g.positive_weight) {
    if (w <= 0) throw std::invalid_argument("weight vector is not strictly positive");
  }
  DegreeLevel level;
  level.degree = degree;
  detail::LevelBuilder(g, degree, level).run();
  level.keys.reserve(level.components.size());
  for (auto& [beta, basis] : level.components) {
    std::sort(basis.monomials.begin(), basis.monomials.end(), GrlexDescending{});
    std::vector<bool> seen(g.num_vars(), false);
    for (const Monomial& m : basis.monomials) {
      for (const auto& f : m.factors()) seen[f.var] = true;
    }
    for (std::uint32_t v = 0; v < seen.size(); ++v) {
      if (seen[v]) basis.support.push_back(v);
    }
    level.keys.push_back(beta);
  }
  std::sort(level.keys.begin(), level.keys.end());
  return level;
}

/// M_beta from a computed level; empty when beta does not occur.
inline const MonomialBasis& lookup_basis(const DegreeLevel& level, const IntVector& beta) {
  static const MonomialBasis empty;
  auto it = level.components.find(beta);
  return it == level.components.end() ? empty : it->second;
}

/// Levels 1..d computed on demand and retained for lift lookups.
class LevelStore {
 public:
  explicit LevelStore(const GradingMatrix& g) : g_(&g) {}
  explicit LevelStore(GradingMatrix&&) = delete;

  const DegreeLevel& level(std::int64_t degree) {
    if (degree < 1) throw std::invalid_argument("levels start at degree 1");
    if (static_cast<std::size_t>(degree) > levels_.size()) levels_.resize(static_cast<std::size_t>(degree));
    auto& slot = levels_[static_cast<std::size_t>(degree - 1)];
    if (!slot) slot = std::make_unique<DegreeLevel>(enumerate_level(*g_, degree));
    return *slot;
  }

  /// Read-only access for levels already computed; nullptr otherwise.
  const DegreeLevel* find(std::int64_t degree) const {
    if (degree < 1 || static_cast<std::size_t>(degree) > levels_.size()) return nullptr;
    return levels_[static_cast<std::size_t>(degree - 1)].get();
  }

 private:
  const GradingMatrix* g_;
  std::vector<std::unique_ptr<DegreeLevel>> levels_;
};

}  // namespace mgimpl
