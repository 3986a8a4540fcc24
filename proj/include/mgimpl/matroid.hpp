#pragma once

// Component skipping through the algebraic matroid of ker(phi): if the
// Jacobian columns of the variables in supp(M_beta) are independent, no
// kernel element is supported there. Evaluation at a random point can only
// lower the rank, so a positive answer stays sound.

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <span>
#include <vector>

#include "mgimpl/linalg/elimination.hpp"
#include "mgimpl/linalg/matrix.hpp"
#include "mgimpl/polyring/ring_map.hpp"

namespace mgimpl {

struct EvaluatedJacobian {
  Matrix<std::uint64_t> entries;  // m x n: d phi(x_j) / d t_i at `point`
  std::vector<std::uint64_t> point;
  PrimeField field;
};

/// Jacobian of phi evaluated at a seeded uniform point of GF(p)^m. Throws
/// BadPrime when p divides a coefficient denominator.
inline EvaluatedJacobian build_jacobian(const RingMap& phi, const PrimeField& fp, std::uint64_t seed) {
  const std::size_t n = phi.domain_size();
  const std::size_t m = phi.codomain_size();
  EvaluatedJacobian jac{Matrix<std::uint64_t>(m, n, 0), std::vector<std::uint64_t>(m), fp};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, fp.prime() - 1);
  for (auto& x : jac.point) x = dist(rng);
  for (std::size_t j = 0; j < n; ++j) {
    const FpPolynomial image = reduce_mod_p(phi.image(j), fp);
    for (std::size_t i = 0; i < m; ++i) {
      jac.entries(i, j) = evaluate(partial_derivative(image, static_cast<std::uint32_t>(i)),
                                   std::span<const std::uint64_t>(jac.point));
    }
  }
  return jac;
}

/// Memoized skip decisions keyed by support set. Racing writers store the
/// same value, so duplicated work is harmless.
class SkipCache {
 public:
  std::optional<bool> find(const std::vector<std::uint32_t>& support) const {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(support);
    if (it == cache_.end()) return std::nullopt;
    return it->second;
  }
  void store(const std::vector<std::uint32_t>& support, bool skip) {
    std::unique_lock lock(mutex_);
    cache_.emplace(support, skip);
  }
  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::vector<std::uint32_t>, bool> cache_;
};

/// True iff the Jacobian columns indexed by `support` have full rank.
inline bool can_skip(const EvaluatedJacobian& jac, const std::vector<std::uint32_t>& support, SkipCache& cache) {
  if (support.empty()) return true;
  if (auto hit = cache.find(support)) return *hit;
  bool skip = false;
  if (support.size() <= jac.entries.rows()) {
    std::vector<std::size_t> cols(support.begin(), support.end());
    skip = rank_mod_p(jac.entries.select_columns(cols), jac.field) == support.size();
  }
  cache.store(support, skip);
  return skip;
}

}  // namespace mgimpl
