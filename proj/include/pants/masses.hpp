#pragma once

#include <cmath>
#include <stdexcept>

namespace pants {

// Masses of the three bodies together with the derived constants the
// metric formulas need: pairwise products p_k = m_i m_j, reduced masses
// mu_ij, d(m) = sqrt(3 m1 m2 m3 / M), and the asymptotic cylinder radius
// of each collision end.
struct MassTriple {
  double m1 = 1.0;
  double m2 = 1.0;
  double m3 = 1.0;

  MassTriple() = default;
  MassTriple(double a, double b, double c) : m1(a), m2(b), m3(c) {
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(m3 > 0.0))
      throw std::invalid_argument("MassTriple: masses must be positive");
  }

  double mass(int i) const {
    switch (i) {
      case 1: return m1;
      case 2: return m2;
      case 3: return m3;
    }
    throw std::invalid_argument("MassTriple::mass: index must be 1, 2 or 3");
  }

  double total() const { return m1 + m2 + m3; }

  // p_k = m_i m_j for {i,j,k} = {1,2,3}.
  double p(int k) const {
    switch (k) {
      case 1: return m2 * m3;
      case 2: return m1 * m3;
      case 3: return m1 * m2;
    }
    throw std::invalid_argument("MassTriple::p: index must be 1, 2 or 3");
  }

  double mu(int i, int j) const {
    const double mi = mass(i), mj = mass(j);
    return mi * mj / (mi + mj);
  }

  double d_m() const { return std::sqrt(3.0 * m1 * m2 * m3 / total()); }

  // Radius of the Euclidean cylinder the metric approaches at end k,
  // i.e. sqrt(mu_ij m_i m_j) for the pair ij not containing k.
  double cyl_radius(int k) const {
    switch (k) {
      case 1: return std::sqrt(mu(2, 3) * m2 * m3);
      case 2: return std::sqrt(mu(1, 3) * m1 * m3);
      case 3: return std::sqrt(mu(1, 2) * m1 * m2);
    }
    throw std::invalid_argument("MassTriple::cyl_radius: index must be 1, 2 or 3");
  }

  bool equal() const { return m1 == m2 && m2 == m3; }
};

// Recover masses from prescribed pairwise products: m_i = sqrt(p_j p_k / p_i).
inline MassTriple masses_from_products(double p1, double p2, double p3) {
  if (!(p1 > 0.0) || !(p2 > 0.0) || !(p3 > 0.0))
    throw std::invalid_argument("masses_from_products: products must be positive");
  return MassTriple(std::sqrt(p2 * p3 / p1), std::sqrt(p1 * p3 / p2),
                    std::sqrt(p1 * p2 / p3));
}

}  // namespace pants
