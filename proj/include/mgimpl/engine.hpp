#pragma once

// Degree-by-degree computation of minimal kernel generators, one exact linear
// system per multidegree component.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mgimpl/enumerate.hpp"
#include "mgimpl/grading.hpp"
#include "mgimpl/linalg/elimination.hpp"
#include "mgimpl/matroid.hpp"
#include "mgimpl/parallel.hpp"
#include "mgimpl/polyring/ring_map.hpp"

namespace mgimpl {

class NoPositiveGrading : public std::runtime_error {
 public:
  NoPositiveGrading() : std::runtime_error("no strictly positive weight vector in the row space of the grading") {}
};

class NaiveCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct EngineOptions {
  std::int64_t max_degree = 2;
  unsigned threads = 0;  // 0: all hardware threads
  std::uint64_t seed = 1;
  std::uint64_t prime = PrimeField::kDefaultPrime;
  bool skip = true;
  bool trim = true;
  bool prescreen = true;
  std::optional<GradingMatrix> grading;  // replaces the computed grading
};

enum class ComponentStatus { kSkippedMatroid, kSkippedPrescreen, kSolved };

inline const char* to_string(ComponentStatus s) {
  switch (s) {
    case ComponentStatus::kSkippedMatroid: return "skipped-matroid";
    case ComponentStatus::kSkippedPrescreen: return "skipped-prescreen";
    case ComponentStatus::kSolved: return "solved";
  }
  return "?";
}

/// One multidegree component and what happened to it.
struct ComponentTask {
  IntVector beta;
  std::int64_t degree = 0;
  const MonomialBasis* basis = nullptr;
  std::vector<std::size_t> columns;  // V_beta as indices into basis->monomials
  ComponentStatus status = ComponentStatus::kSolved;
  std::size_t lift_rank = 0;
  std::size_t kernel_dim = 0;
};

struct Generator {
  QPolynomial poly;
  IntVector beta;
  std::int64_t degree = 0;
  std::size_t basis_size = 0;    // |M_beta|
  std::size_t trimmed_size = 0;  // |V_beta|
};

/// Generators sorted by (degree, beta, leading monomial, remaining terms).
struct GeneratorSet {
  std::vector<Generator> generators;

  std::size_t size() const noexcept { return generators.size(); }
  std::size_t count_of_degree(std::int64_t d) const {
    return static_cast<std::size_t>(
        std::count_if(generators.begin(), generators.end(), [d](const Generator& g) { return g.degree == d; }));
  }
};

struct LevelReport {
  std::int64_t degree = 0;
  std::size_t monomials = 0;
  std::size_t multidegrees = 0;
  std::size_t skipped_matroid = 0;
  std::size_t skipped_prescreen = 0;
  std::size_t solved = 0;
  std::size_t generators = 0;
  double seconds = 0.0;
};

struct ComponentRecord {
  IntVector beta;
  std::int64_t degree = 0;
  std::size_t basis_size = 0;
  std::size_t trimmed_size = 0;
  std::size_t lift_rank = 0;
  std::size_t kernel_dim = 0;
  ComponentStatus status = ComponentStatus::kSolved;
};

struct KernelResult {
  GradingMatrix grading;
  GeneratorSet generators;
  std::vector<LevelReport> levels;
  std::vector<ComponentRecord> components;  // per level, beta-sorted
  std::uint64_t jacobian_prime = 0;
};

/// Codomain monomials x entries: column k holds the coefficients of
/// phi(x^{alpha_k}). Rows are graded-lex descending; no row is all zero.
struct ComponentMatrix {
  std::vector<Monomial> row_monomials;
  Matrix<Rational> entries;
};

namespace detail {

inline bool term_sequence_less(const QPolynomial& a, const QPolynomial& b) {
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    if (!(ia->first == ib->first)) return GrlexDescending{}(ia->first, ib->first);
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.terms().end() && ib != b.terms().end();
}

inline bool generator_less(const Generator& a, const Generator& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  if (a.beta != b.beta) return a.beta < b.beta;
  return term_sequence_less(a.poly, b.poly);
}

}  // namespace detail

/// Columns of M_beta complementary to Lift(G): every x^gamma * g with g of
/// weighted degree below `degree` and A gamma = beta - deg_A(g) is written in
/// the M_beta coordinates, the stack is row-reduced, and the non-pivot
/// columns are returned. `lift_rank` receives the rank of the stack.
inline std::vector<std::size_t> trim_basis(const GeneratorSet& lower, const IntVector& beta, std::int64_t degree,
                                           const MonomialBasis& basis, const LevelStore& levels,
                                           std::size_t* lift_rank = nullptr) {
  std::vector<std::size_t> all(basis.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  if (lift_rank) *lift_rank = 0;
  if (lower.generators.empty() || basis.empty()) return all;

  std::unordered_map<Monomial, std::size_t, MonomialHash> column_of;
  column_of.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) column_of.emplace(basis.monomials[k], k);

  Matrix<Integer> lifts(0, basis.size());
  std::vector<Integer> row(basis.size());
  IntVector shift(beta.size());
  for (const Generator& g : lower.generators) {
    if (g.degree >= degree) continue;
    const DegreeLevel* level = levels.find(degree - g.degree);
    if (!level) throw InvariantViolation("lift level " + std::to_string(degree - g.degree) + " not computed");
    for (std::size_t k = 0; k < beta.size(); ++k) shift[k] = detail::checked_add(beta[k], -g.beta[k]);
    const MonomialBasis& gammas = lookup_basis(*level, shift);
    for (const Monomial& gamma : gammas.monomials) {
      std::fill(row.begin(), row.end(), Integer(0));
      for (const auto& [mono, coef] : g.poly.terms()) {
        auto it = column_of.find(mono * gamma);
        if (it == column_of.end()) throw InvariantViolation("lifted generator leaves its multidegree component");
        row[it->second] = coef.get_num();
      }
      lifts.append_row(row);
    }
  }
  if (lifts.rows() == 0) return all;
  const Echelon e = fraction_free_echelon(std::move(lifts));
  if (lift_rank) *lift_rank = e.rank();
  std::vector<bool> pivot(basis.size(), false);
  for (std::size_t c : e.pivots) pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (!pivot[k]) free.push_back(k);
  }
  return free;
}

inline ComponentMatrix assemble_component(const MapEvaluator& eval, std::span<const Monomial> columns) {
  std::vector<QPolynomial> images;
  images.reserve(columns.size());
  std::map<Monomial, std::size_t, GrlexDescending> rows;
  for (const Monomial& alpha : columns) {
    images.push_back(eval.image_of(alpha));
    for (const auto& [gamma, c] : images.back().terms()) rows.emplace(gamma, 0);
  }
  ComponentMatrix cm;
  cm.row_monomials.reserve(rows.size());
  std::size_t r = 0;
  for (auto& [gamma, idx] : rows) {
    idx = r++;
    cm.row_monomials.push_back(gamma);
  }
  cm.entries = Matrix<Rational>(rows.size(), columns.size(), Rational(0));
  for (std::size_t k = 0; k < images.size(); ++k) {
    for (const auto& [gamma, c] : images[k].terms()) cm.entries(rows.at(gamma), k) = c;
  }
  return cm;
}

inline bool prescreen_trivial(const ComponentMatrix& l, const PrimeField& fp) {
  return prescreen_trivial(l.entries, fp);
}

namespace detail {

struct TaskOutcome {
  ComponentStatus status = ComponentStatus::kSolved;
  std::vector<std::size_t> columns;
  std::size_t lift_rank = 0;
  std::vector<Generator> generators;
};

inline std::optional<EvaluatedJacobian> jacobian_with_retry(const RingMap& phi, std::uint64_t prime,
                                                            std::uint64_t seed) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    try {
      return build_jacobian(phi, PrimeField(prime), seed);
    } catch (const BadPrime&) {
      prime = previous_prime(prime);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Minimal generators of ker(phi) of weighted degree <= options.max_degree.
inline KernelResult components_of_kernel(const RingMap& phi, const EngineOptions& options) {
  if (options.max_degree < 1) throw std::invalid_argument("degree bound must be at least 1");
  KernelResult result;
  result.grading = options.grading ? *options.grading : compute_grading(phi);
  GradingMatrix& grading = result.grading;
  if (grading.num_vars() != phi.domain_size()) throw std::invalid_argument("grading has the wrong number of columns");
  if (!grading.positive_weight) grading.positive_weight = find_positive_weight(grading.domain);
  if (!grading.positive_weight) throw NoPositiveGrading();

  MapEvaluator eval(phi);
  eval.precompute(static_cast<std::uint32_t>(options.max_degree));

  std::optional<EvaluatedJacobian> jac;
  if (options.skip) {
    jac = detail::jacobian_with_retry(phi, options.prime, options.seed);
    if (jac) result.jacobian_prime = jac->field.prime();
  }
  const PrimeField screen_field(options.prime);
  SkipCache skip_cache;
  LevelStore levels(grading);

  for (std::int64_t degree = 1; degree <= options.max_degree; ++degree) {
    const auto t0 = std::chrono::steady_clock::now();
    const DegreeLevel& level = levels.level(degree);

    std::vector<ComponentTask> tasks;
    tasks.reserve(level.keys.size());
    for (const IntVector& beta : level.keys) {
      ComponentTask t;
      t.beta = beta;
      t.degree = degree;
      t.basis = &level.components.at(beta);
      tasks.push_back(std::move(t));
    }
    // dispatch order: biggest components first
    std::vector<std::size_t> order(tasks.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return tasks[a].basis->size() > tasks[b].basis->size(); });

    std::vector<detail::TaskOutcome> outcomes(tasks.size());
    const GeneratorSet& lower = result.generators;
    parallel_for(order.size(), options.threads, [&](std::size_t slot) {
      const std::size_t idx = order[slot];
      const ComponentTask& task = tasks[idx];
      detail::TaskOutcome& out = outcomes[idx];
      const MonomialBasis& basis = *task.basis;
      if (jac && can_skip(*jac, basis.support, skip_cache)) {
        out.status = ComponentStatus::kSkippedMatroid;
        return;
      }
      if (options.trim) {
        out.columns = trim_basis(lower, task.beta, degree, basis, levels, &out.lift_rank);
      } else {
        out.columns.resize(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) out.columns[k] = k;
      }
      out.status = ComponentStatus::kSolved;
      if (out.columns.empty()) return;
      std::vector<Monomial> cols;
      cols.reserve(out.columns.size());
      for (std::size_t k : out.columns) cols.push_back(basis.monomials[k]);
      const ComponentMatrix cm = assemble_component(eval, cols);
      if (options.prescreen) {
        try {
          if (prescreen_trivial(cm, screen_field)) {
            out.status = ComponentStatus::kSkippedPrescreen;
            return;
          }
        } catch (const BadPrime&) {
          // no certificate from this prime; the exact solve below decides
        }
      }
      const KernelBasis kb = exact_kernel(cm.entries);
      for (const auto& v : kb.vectors) {
        Generator g;
        g.poly = QPolynomial(RationalField{}, phi.domain_size());
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (sgn(v[k]) != 0) g.poly.add_term(cols[k], Rational(v[k]));
        }
        g.beta = task.beta;
        g.degree = degree;
        g.basis_size = basis.size();
        g.trimmed_size = cols.size();
        out.generators.push_back(std::move(g));
      }
    });

    LevelReport rep;
    rep.degree = degree;
    rep.monomials = level.monomial_count;
    rep.multidegrees = level.component_count();
    std::vector<Generator> fresh;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      detail::TaskOutcome& out = outcomes[k];
      switch (out.status) {
        case ComponentStatus::kSkippedMatroid: ++rep.skipped_matroid; break;
        case ComponentStatus::kSkippedPrescreen: ++rep.skipped_prescreen; break;
        case ComponentStatus::kSolved: ++rep.solved; break;
      }
      ComponentRecord rec;
      rec.beta = tasks[k].beta;
      rec.degree = degree;
      rec.basis_size = tasks[k].basis->size();
      rec.trimmed_size = out.status == ComponentStatus::kSkippedMatroid ? rec.basis_size : out.columns.size();
      rec.lift_rank = out.lift_rank;
      rec.kernel_dim = out.generators.size();
      rec.status = out.status;
      result.components.push_back(std::move(rec));
      for (Generator& g : out.generators) fresh.push_back(std::move(g));
    }
    std::sort(fresh.begin(), fresh.end(), detail::generator_less);
    rep.generators = fresh.size();
    for (Generator& g : fresh) result.generators.generators.push_back(std::move(g));
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.levels.push_back(rep);
  }
  return result;
}

inline KernelResult components_of_kernel(const RingMap& phi, std::int64_t max_degree, EngineOptions options = {}) {
  options.max_degree = max_degree;
  return components_of_kernel(phi, options);
}

namespace detail {

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

/// Single-matrix-per-total-degree oracle: grading by total degree only, no
/// matroid skip and no prescreen, lower-degree trimming kept. Assumes
/// ker(phi) is homogeneous for the standard grading.
inline KernelResult naive_total_degree_kernel(const RingMap& phi, std::int64_t max_degree, std::size_t cap = 5000,
                                              unsigned threads = 1) {
  if (max_degree < 1) throw std::invalid_argument("degree bound must be at least 1");
  const std::size_t n = phi.domain_size();
  for (std::int64_t d = 1; d <= max_degree; ++d) {
    const double count = detail::binomial(n + static_cast<std::size_t>(d) - 1, static_cast<std::size_t>(d));
    if (count > static_cast<double>(cap)) {
      throw NaiveCapExceeded("naive method needs " + std::to_string(static_cast<long long>(count)) +
                             " monomials in degree " + std::to_string(d) + " (cap " + std::to_string(cap) + ")");
    }
  }
  EngineOptions opts;
  opts.max_degree = max_degree;
  opts.threads = threads;
  opts.skip = false;
  opts.prescreen = false;
  opts.trim = true;
  opts.grading = GradingMatrix::total_degree(n);
  return components_of_kernel(phi, opts);
}

/// Exact post-conditions on a result: every generator maps to zero, is
/// homogeneous for every grading row with the recorded multidegree, and the
/// per-level counts reconcile. Returns human-readable violations.
inline std::vector<std::string> check_result(const RingMap& phi, const KernelResult& res) {
  std::vector<std::string> problems;
  MapEvaluator eval(phi);
  const GradingMatrix& g = res.grading;
  for (std::size_t k = 0; k < res.generators.generators.size(); ++k) {
    const Generator& gen = res.generators.generators[k];
    if (!eval.apply(gen.poly).is_zero()) problems.push_back("generator " + std::to_string(k) + " does not map to 0");
    for (const auto& [m, c] : gen.poly.terms()) {
      Multidegree md = multidegree_of(g, m);
      if (md.beta != gen.beta || md.weighted_degree != gen.degree) {
        problems.push_back("generator " + std::to_string(k) + " is not homogeneous of its recorded degree");
        break;
      }
    }
  }
  for (const LevelReport& lr : res.levels) {
    if (lr.multidegrees != lr.skipped_matroid + lr.skipped_prescreen + lr.solved) {
      problems.push_back("level " + std::to_string(lr.degree) + " counts do not reconcile");
    }
  }
  return problems;
}

}  // namespace mgimpl
