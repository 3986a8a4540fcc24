#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mgimpl/polyring/field.hpp"
#include "mgimpl/polyring/monomial.hpp"

namespace mgimpl {

/// Sparse polynomial over Field in a fixed number of variables. Terms are kept
/// in graded-lex descending order and never carry a zero coefficient.
template <class Field>
class Polynomial {
 public:
  using Element = typename Field::Element;
  using TermMap = std::map<Monomial, Element, GrlexDescending>;

  Polynomial() = default;
  Polynomial(Field field, std::size_t num_vars) : field_(std::move(field)), num_vars_(num_vars) {}

  static Polynomial constant(Field field, std::size_t num_vars, Element c) {
    Polynomial p(std::move(field), num_vars);
    p.add_term(Monomial{}, std::move(c));
    return p;
  }
  static Polynomial one(Field field, std::size_t num_vars) {
    Element c = field.one();
    return constant(std::move(field), num_vars, std::move(c));
  }
  static Polynomial variable(Field field, std::size_t num_vars, std::uint32_t var) {
    if (var >= num_vars) throw std::out_of_range("variable index out of range");
    Polynomial p(std::move(field), num_vars);
    p.add_term(Monomial::variable(var), p.field_.one());
    return p;
  }
  static Polynomial monomial(Field field, std::size_t num_vars, const Monomial& m, Element c) {
    Polynomial p(std::move(field), num_vars);
    p.add_term(m, std::move(c));
    return p;
  }

  const Field& field() const noexcept { return field_; }
  std::size_t num_vars() const noexcept { return num_vars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Leading (graded-lex largest) term; the polynomial must be nonzero.
  const std::pair<const Monomial, Element>& leading_term() const {
    if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
    return *terms_.begin();
  }

  Element coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? field_.zero() : it->second;
  }

  std::uint64_t total_degree() const {
    std::uint64_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
  }

  /// Accumulates c * m, dropping the term if it cancels.
  void add_term(const Monomial& m, Element c) {
    if (m.var_bound() > num_vars_) throw std::out_of_range("monomial uses variable outside the ring");
    if (Field::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (Field::is_zero(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& g) {
    check_compatible(g);
    for (const auto& [m, c] : g.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& g) {
    check_compatible(g);
    for (const auto& [m, c] : g.terms_) add_term(m, field_.neg(c));
    return *this;
  }

  friend Polynomial operator+(Polynomial f, const Polynomial& g) { return f += g; }
  friend Polynomial operator-(Polynomial f, const Polynomial& g) { return f -= g; }
  friend Polynomial operator-(const Polynomial& f) {
    Polynomial r(f.field_, f.num_vars_);
    for (const auto& [m, c] : f.terms_) r.terms_.emplace_hint(r.terms_.end(), m, f.field_.neg(c));
    return r;
  }

  friend Polynomial operator*(const Polynomial& f, const Polynomial& g) {
    f.check_compatible(g);
    Polynomial r(f.field_, f.num_vars_);
    const Polynomial& outer = f.size() <= g.size() ? f : g;
    const Polynomial& inner = f.size() <= g.size() ? g : f;
    for (const auto& [ma, ca] : outer.terms_) {
      for (const auto& [mb, cb] : inner.terms_) r.add_term(ma * mb, f.field_.mul(ca, cb));
    }
    return r;
  }
  Polynomial& operator*=(const Polynomial& g) { return *this = *this * g; }

  Polynomial scaled(const Element& s) const {
    Polynomial r(field_, num_vars_);
    if (Field::is_zero(s)) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field_.mul(c, s));
    return r;
  }

  /// Multiplies every term by the monomial x^gamma.
  Polynomial shifted(const Monomial& gamma) const {
    if (gamma.var_bound() > num_vars_) throw std::out_of_range("shift uses variable outside the ring");
    Polynomial r(field_, num_vars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * gamma, c);
    return r;
  }

  friend bool operator==(const Polynomial& f, const Polynomial& g) {
    return f.num_vars_ == g.num_vars_ && f.terms_ == g.terms_;
  }

 private:
  void check_compatible(const Polynomial& g) const {
    if (num_vars_ != g.num_vars_) {
      throw std::invalid_argument("polynomials live in rings with different variable counts (" +
                                  std::to_string(num_vars_) + " vs " + std::to_string(g.num_vars_) + ")");
    }
  }

  [[no_unique_address]] Field field_{};
  std::size_t num_vars_ = 0;
  TermMap terms_;
};

using QPolynomial = Polynomial<RationalField>;
using FpPolynomial = Polynomial<PrimeField>;

template <class Field>
Polynomial<Field> add(const Polynomial<Field>& f, const Polynomial<Field>& g) {
  return f + g;
}

template <class Field>
Polynomial<Field> mul(const Polynomial<Field>& f, const Polynomial<Field>& g) {
  return f * g;
}

/// f^k by repeated squaring; f^0 = 1.
template <class Field>
Polynomial<Field> pow(const Polynomial<Field>& f, std::uint64_t k) {
  Polynomial<Field> result = Polynomial<Field>::one(f.field(), f.num_vars());
  if (k == 0) return result;
  Polynomial<Field> base = f;
  for (;;) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k == 0) break;
    base *= base;
  }
  return result;
}

/// Sum of the terms of f whose weight w . alpha is minimal.
template <class Field, class W>
Polynomial<Field> initial_form(const Polynomial<Field>& f, std::span<const W> weight) {
  if (weight.size() != f.num_vars()) throw std::invalid_argument("weight length does not match variable count");
  Polynomial<Field> r(f.field(), f.num_vars());
  if (f.is_zero()) return r;
  std::optional<W> best;
  for (const auto& [m, c] : f.terms()) {
    W w = m.template weighted_degree<W>(weight);
    if (!best || w < *best) best = w;
  }
  for (const auto& [m, c] : f.terms()) {
    if (m.template weighted_degree<W>(weight) == *best) r.add_term(m, c);
  }
  return r;
}

/// True iff w . alpha is constant on the support of f.
template <class Field, class W>
bool is_homogeneous(const Polynomial<Field>& f, std::span<const W> weight) {
  if (weight.size() != f.num_vars()) throw std::invalid_argument("weight length does not match variable count");
  std::optional<W> first;
  for (const auto& [m, c] : f.terms()) {
    W w = m.template weighted_degree<W>(weight);
    if (!first) {
      first = w;
    } else if (w != *first) {
      return false;
    }
  }
  return true;
}

template <class Field>
Polynomial<Field> partial_derivative(const Polynomial<Field>& f, std::uint32_t var) {
  if (var >= f.num_vars()) throw std::out_of_range("derivative variable out of range");
  const Field& k = f.field();
  Polynomial<Field> r(k, f.num_vars());
  for (const auto& [m, c] : f.terms()) {
    std::uint32_t e = m.exponent(var);
    if (e == 0) continue;
    r.add_term(m.divide_by_variable(var), k.mul(c, k.from_integer(static_cast<std::int64_t>(e))));
  }
  return r;
}

/// Coefficient-wise image in GF(p). Throws BadPrime if p divides a denominator.
inline FpPolynomial reduce_mod_p(const QPolynomial& f, const PrimeField& fp) {
  FpPolynomial r(fp, f.num_vars());
  for (const auto& [m, c] : f.terms()) r.add_term(m, fp.from_rational(c));
  return r;
}

/// Evaluates f at a point given as one field element per variable.
template <class Field>
typename Field::Element evaluate(const Polynomial<Field>& f, std::span<const typename Field::Element> point) {
  if (point.size() != f.num_vars()) throw std::invalid_argument("evaluation point has wrong length");
  const Field& k = f.field();
  auto acc = k.zero();
  for (const auto& [m, c] : f.terms()) {
    auto t = c;
    for (const auto& fac : m.factors()) {
      for (std::uint32_t e = 0; e < fac.exp; ++e) t = k.mul(t, point[fac.var]);
    }
    acc = k.add(acc, t);
  }
  return acc;
}

/// Infix rendering with the given variable names, e.g. "x*z - y^2".
template <class Field>
std::string to_string(const Polynomial<Field>& f, std::span<const std::string> names) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    std::string coef = Field::to_string(c);
    bool negative = !coef.empty() && coef.front() == '-';
    if (negative) coef.erase(0, 1);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (const auto& fac : m.factors()) {
      if (!mono.empty()) mono += "*";
      mono += fac.var < names.size() ? names[fac.var] : "x" + std::to_string(fac.var);
      if (fac.exp > 1) mono += "^" + std::to_string(fac.exp);
    }
    if (mono.empty()) {
      out += coef;
    } else if (coef == "1") {
      out += mono;
    } else {
      out += coef + "*" + mono;
    }
  }
  return out;
}

}  // namespace mgimpl
