#pragma once

// Built-in ring maps used by the examples subcommand and the test suites.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgimpl/polyring/ring_map.hpp"

namespace mgimpl::io {

/// Plücker map of Gr(2,n) for any n >= 2: p_i_j -> x_1_i x_2_j - x_1_j x_2_i.
/// Domain variables are listed column by column, (1,2),(1,3),(2,3),(1,4),...;
/// codomain variables row by row, x_1_1..x_1_n, x_2_1..x_2_n.
inline RingMap plucker_map(std::size_t n) {
  if (n < 2) throw std::invalid_argument("Plücker map needs n >= 2");
  std::vector<std::string> codomain;
  for (std::size_t row = 1; row <= 2; ++row) {
    for (std::size_t col = 1; col <= n; ++col) codomain.push_back("x_" + std::to_string(row) + "_" + std::to_string(col));
  }
  auto x = [n](std::size_t row, std::size_t col) { return static_cast<std::uint32_t>((row - 1) * n + (col - 1)); };
  std::vector<std::string> domain;
  std::vector<QPolynomial> images;
  for (std::size_t j = 2; j <= n; ++j) {
    for (std::size_t i = 1; i < j; ++i) {
      domain.push_back("p_" + std::to_string(i) + "_" + std::to_string(j));
      QPolynomial det(RationalField{}, 2 * n);
      det.add_term(Monomial::from_factors({{x(1, i), 1}, {x(2, j), 1}}), Rational(1));
      det.add_term(Monomial::from_factors({{x(1, j), 1}, {x(2, i), 1}}), Rational(-1));
      images.push_back(std::move(det));
    }
  }
  return RingMap(std::move(domain), std::move(codomain), std::move(images));
}

inline RingMap gen_grassmannian(std::size_t n) {
  if (n < 4) throw std::invalid_argument("grassmannian fixture needs n >= 4");
  return plucker_map(n);
}

/// (x, y, z) -> ((a+b)^2, a^2 - b^2, (a-b)^2); kernel <xz - y^2>.
inline RingMap gen_cusp() {
  const RationalField q;
  auto a = QPolynomial::variable(q, 2, 0);
  auto b = QPolynomial::variable(q, 2, 1);
  return RingMap({"x", "y", "z"}, {"a", "b"}, {pow(a + b, 2), a * a - b * b, pow(a - b, 2)});
}

/// K3P model on the 4-leaf sunlet network. Group Z2 x Z2 is encoded as
/// {0,1,2,3} with addition = xor. Domain: q_{g1 g2 g3 g4} with g1+g2+g3+g4 = 0
/// (64 variables); codomain: a<e>_<g> for edges e = 1..8 (32 parameters).
/// Each image is the sum of the two tree parameterizations obtained by
/// removing one reticulation edge.
inline RingMap gen_sunlet_k3p() {
  std::vector<std::string> codomain;
  for (int e = 1; e <= 8; ++e) {
    for (int g = 0; g < 4; ++g) codomain.push_back("a" + std::to_string(e) + "_" + std::to_string(g));
  }
  auto a = [](int edge, unsigned g) { return static_cast<std::uint32_t>((edge - 1) * 4 + static_cast<int>(g)); };
  std::vector<std::string> domain;
  std::vector<QPolynomial> images;
  for (unsigned g1 = 0; g1 < 4; ++g1) {
    for (unsigned g2 = 0; g2 < 4; ++g2) {
      for (unsigned g3 = 0; g3 < 4; ++g3) {
        const unsigned g4 = g1 ^ g2 ^ g3;
        domain.push_back("q_" + std::to_string(g1) + std::to_string(g2) + std::to_string(g3) + std::to_string(g4));
        QPolynomial img(RationalField{}, 32);
        img.add_term(Monomial::from_factors({{a(1, g1), 1},
                                             {a(2, g2), 1},
                                             {a(3, g3), 1},
                                             {a(4, g4), 1},
                                             {a(5, g1), 1},
                                             {a(6, g1 ^ g2), 1},
                                             {a(7, g4), 1}}),
                     Rational(1));
        img.add_term(Monomial::from_factors({{a(1, g1), 1},
                                             {a(2, g2), 1},
                                             {a(3, g3), 1},
                                             {a(4, g4), 1},
                                             {a(6, g2), 1},
                                             {a(7, g1 ^ g4), 1},
                                             {a(8, g1), 1}}),
                     Rational(1));
        images.push_back(std::move(img));
      }
    }
  }
  return RingMap(std::move(domain), std::move(codomain), std::move(images));
}

}  // namespace mgimpl::io
