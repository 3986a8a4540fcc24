#pragma once

// Coefficient fields. A field is a small value type that owns the arithmetic
// for its Element type; polynomials and matrices carry a copy of it.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mgimpl {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when a rational cannot be mapped into GF(p) because p divides a
/// denominator. Callers retry with another prime.
class BadPrime : public std::runtime_error {
 public:
  explicit BadPrime(std::uint64_t p)
      : std::runtime_error("prime " + std::to_string(p) + " divides a denominator"), prime_(p) {}
  std::uint64_t prime() const noexcept { return prime_; }

 private:
  std::uint64_t prime_;
};

/// Exact rationals. mpq_class keeps values canonical (lowest terms, positive
/// denominator) as long as every constructed value goes through canonicalize().
struct RationalField {
  using Element = Rational;

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  static bool is_zero(const Element& a) { return sgn(a) == 0; }
  static bool is_one(const Element& a) { return a == 1; }

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element neg(const Element& a) const { return -a; }
  Element inv(const Element& a) const {
    if (is_zero(a)) throw std::domain_error("inverse of zero");
    return Element(1) / a;
  }
  Element from_integer(std::int64_t v) const { return Element(static_cast<long>(v)); }
  Element from_rational(const Rational& r) const { return r; }

  static std::string to_string(const Element& a) { return a.get_str(); }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Smallest prime strictly below n (n > 2). Used to pick a fresh prime after BadPrime.
inline std::uint64_t previous_prime(std::uint64_t n) {
  if (n <= 3) throw std::domain_error("no prime below " + std::to_string(n));
  std::uint64_t c = n - 1;
  while (!is_prime_u64(c)) --c;
  return c;
}

/// GF(p) for a prime p < 2^63. Elements are canonical residues in [0, p).
class PrimeField {
 public:
  using Element = std::uint64_t;

  static constexpr std::uint64_t kDefaultPrime = (1ULL << 61) - 1;

  explicit PrimeField(std::uint64_t p = kDefaultPrime) : p_(p) {
    if (p >= (1ULL << 63) || !is_prime_u64(p)) {
      throw std::invalid_argument("not a prime below 2^63: " + std::to_string(p));
    }
  }

  std::uint64_t prime() const noexcept { return p_; }

  Element zero() const { return 0; }
  Element one() const { return 1; }
  static bool is_zero(Element a) { return a == 0; }
  static bool is_one(Element a) { return a == 1; }

  Element add(Element a, Element b) const {
    Element s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const { return a >= b ? a - b : a + (p_ - b); }
  Element mul(Element a, Element b) const { return detail::mulmod(a, b, p_); }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  Element inv(Element a) const {
    if (a == 0) throw std::domain_error("inverse of zero in GF(p)");
    return detail::powmod(a, p_ - 2, p_);
  }
  Element pow(Element a, std::uint64_t e) const { return detail::powmod(a, e, p_); }

  Element from_integer(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return r < 0 ? static_cast<Element>(r + static_cast<std::int64_t>(p_)) : static_cast<Element>(r);
  }
  Element from_integer(const Integer& v) const {
    static_assert(sizeof(unsigned long) == 8, "GF(p) reduction assumes LP64");
    // floor remainder, always in [0, p)
    return mpz_fdiv_ui(v.get_mpz_t(), p_);
  }
  /// Throws BadPrime if p divides the denominator.
  Element from_rational(const Rational& r) const {
    Element den = from_integer(r.get_den());
    if (den == 0) throw BadPrime(p_);
    return mul(from_integer(r.get_num()), inv(den));
  }

  static std::string to_string(Element a) { return std::to_string(a); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::uint64_t p_;
};

}  // namespace mgimpl
