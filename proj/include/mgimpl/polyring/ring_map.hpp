#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <queue>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "mgimpl/polyring/polynomial.hpp"

namespace mgimpl {

/// A homomorphism K[x_1..x_n] -> K[t_1..t_m] given by the images of the x_i.
class RingMap {
 public:
  RingMap(std::vector<std::string> domain_names, std::vector<std::string> codomain_names,
          std::vector<QPolynomial> images)
      : domain_names_(std::move(domain_names)),
        codomain_names_(std::move(codomain_names)),
        images_(std::move(images)) {
    if (images_.empty()) throw std::invalid_argument("ring map has no images");
    if (images_.size() != domain_names_.size()) {
      throw std::invalid_argument("ring map: " + std::to_string(images_.size()) + " images for " +
                                  std::to_string(domain_names_.size()) + " domain variables");
    }
    for (const QPolynomial& img : images_) {
      if (img.num_vars() != codomain_names_.size()) {
        throw std::invalid_argument("ring map image does not live in the codomain ring");
      }
    }
    check_unique(domain_names_, "domain");
    check_unique(codomain_names_, "codomain");
  }

  std::size_t domain_size() const noexcept { return images_.size(); }
  std::size_t codomain_size() const noexcept { return codomain_names_.size(); }
  const std::vector<QPolynomial>& images() const noexcept { return images_; }
  const QPolynomial& image(std::size_t i) const { return images_.at(i); }
  const std::vector<std::string>& domain_names() const noexcept { return domain_names_; }
  const std::vector<std::string>& codomain_names() const noexcept { return codomain_names_; }

  friend bool operator==(const RingMap&, const RingMap&) = default;

 private:
  static void check_unique(const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
      if (!seen.insert(n).second) throw std::invalid_argument(std::string("duplicate ") + what + " variable '" + n + "'");
    }
  }

  std::vector<std::string> domain_names_;
  std::vector<std::string> codomain_names_;
  std::vector<QPolynomial> images_;
};

/// Applies a RingMap to domain monomials and polynomials, caching the powers
/// phi(x_i)^k. The cache is guarded by a shared mutex; readers dominate.
class MapEvaluator {
 public:
  explicit MapEvaluator(const RingMap& map) : map_(&map), powers_(map.domain_size()) {}

  const RingMap& map() const noexcept { return *map_; }

  /// Fills the cache up to exponent k for every variable; afterwards lookups
  /// at or below k never take the exclusive lock.
  void precompute(std::uint32_t k) {
    for (std::uint32_t v = 0; v < powers_.size(); ++v) (void)power(v, k);
  }

  /// phi(x^alpha), combining factor powers pairwise smallest-first.
  QPolynomial image_of(const Monomial& alpha) const {
    const RingMap& phi = *map_;
    std::size_t m = phi.codomain_size();
    if (alpha.var_bound() > phi.domain_size()) throw std::invalid_argument("monomial outside the domain ring");
    if (alpha.is_one()) return QPolynomial::one(RationalField{}, m);
    if (alpha.support_size() == 1) {
      const auto& f = alpha.factors()[0];
      return power(f.var, f.exp);
    }
    auto bigger = [](const QPolynomial& a, const QPolynomial& b) { return a.size() > b.size(); };
    std::priority_queue<QPolynomial, std::vector<QPolynomial>, decltype(bigger)> heap(bigger);
    for (const auto& f : alpha.factors()) heap.push(power(f.var, f.exp));
    while (heap.size() > 1) {
      QPolynomial a = heap.top();
      heap.pop();
      QPolynomial b = heap.top();
      heap.pop();
      heap.push(a * b);
    }
    return heap.top();
  }

  QPolynomial apply(const QPolynomial& f) const {
    if (f.num_vars() != map_->domain_size()) {
      throw std::invalid_argument("apply_map: polynomial has " + std::to_string(f.num_vars()) +
                                  " variables, map domain has " + std::to_string(map_->domain_size()));
    }
    QPolynomial out(RationalField{}, map_->codomain_size());
    for (const auto& [m, c] : f.terms()) out += image_of(m).scaled(c);
    return out;
  }

 private:
  const QPolynomial& power(std::uint32_t var, std::uint32_t k) const {
    {
      std::shared_lock lock(mutex_);
      const auto& cache = powers_[var];
      if (k < cache.size()) return cache[k];
    }
    std::unique_lock lock(mutex_);
    auto& cache = powers_[var];
    if (cache.empty()) cache.push_back(QPolynomial::one(RationalField{}, map_->codomain_size()));
    while (cache.size() <= k) cache.push_back(cache.back() * map_->image(var));
    return cache[k];
  }

  const RingMap* map_;
  // deque: growth never invalidates references handed out earlier
  mutable std::vector<std::deque<QPolynomial>> powers_;
  mutable std::shared_mutex mutex_;
};

/// phi(f), expanded and collected.
inline QPolynomial apply_map(const RingMap& phi, const QPolynomial& f) { return MapEvaluator(phi).apply(f); }

}  // namespace mgimpl
