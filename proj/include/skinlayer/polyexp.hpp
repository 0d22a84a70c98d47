#pragma once

// Exact coefficient algebra of boundary-layer profiles
//     p(eta) * exp(-sqrt(i) eta),   p a complex polynomial,
// together with the half-line L2 weight and the layer ODE
//     (d^2/deta^2 - i) u = s(eta) e^{-sqrt(i) eta},  u(0) = u0,  u in L2(R+),
// whose unique decaying solution raises the polynomial degree by exactly one.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "skinlayer/types.hpp"

namespace skinlayer::polyexp {

class PolyExpProfile {
 public:
  static constexpr int degree_cap = 64;

  PolyExpProfile() = default;
  explicit PolyExpProfile(std::vector<cdouble> coeffs) : c_(std::move(coeffs)) {
    check_cap(int(c_.size()) - 1);
    normalize();
  }
  static PolyExpProfile constant(cdouble c0) { return PolyExpProfile({c0}); }

  // coefficient of eta^j (0 outside the stored range)
  cdouble coeff(int j) const {
    return (j >= 0 && j < int(c_.size())) ? c_[std::size_t(j)] : cdouble(0.0);
  }
  // -1 for the canonical zero profile
  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<cdouble>& coeffs() const { return c_; }

  PolyExpProfile operator+(const PolyExpProfile& o) const {
    std::vector<cdouble> r(std::max(c_.size(), o.c_.size()), cdouble(0.0));
    for (std::size_t j = 0; j < r.size(); ++j) r[j] = coeff(int(j)) + o.coeff(int(j));
    return PolyExpProfile(std::move(r));
  }
  PolyExpProfile operator-(const PolyExpProfile& o) const { return *this + (o * cdouble(-1.0)); }
  PolyExpProfile operator*(cdouble s) const {
    std::vector<cdouble> r = c_;
    for (auto& v : r) v *= s;
    return PolyExpProfile(std::move(r));
  }

  // multiply the polynomial by eta
  PolyExpProfile mul_by_eta() const {
    if (is_zero()) return {};
    check_cap(degree() + 1);
    std::vector<cdouble> r(c_.size() + 1, cdouble(0.0));
    for (std::size_t j = 0; j < c_.size(); ++j) r[j + 1] = c_[j];
    return PolyExpProfile(std::move(r));
  }

  // d/deta of p(eta)e^{-sqrt(i) eta}: coefficient polynomial p' - sqrt(i) p
  PolyExpProfile differentiate() const {
    if (is_zero()) return {};
    std::vector<cdouble> r(c_.size(), cdouble(0.0));
    for (int j = 0; j <= degree(); ++j) {
      r[std::size_t(j)] = -sqrt_i * c_[std::size_t(j)];
      if (j + 1 <= degree()) r[std::size_t(j)] += cdouble(j + 1) * c_[std::size_t(j) + 1];
    }
    return PolyExpProfile(std::move(r));
  }

  cdouble evaluate(double eta) const {
    cdouble p = 0.0;
    for (int j = degree(); j >= 0; --j) p = p * eta + c_[std::size_t(j)];
    return p * std::exp(-sqrt_i * eta);
  }

  // drop coefficients below rel_tol * max|coeff| (floating-point residue left
  // behind by cancellations that are exact in the underlying algebra)
  PolyExpProfile trimmed(double rel_tol) const {
    double m = 0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    if (m == 0) return {};
    std::vector<cdouble> r = c_;
    for (auto& v : r)
      if (std::abs(v) < rel_tol * m) v = 0.0;
    return PolyExpProfile(std::move(r));
  }

 private:
  static void check_cap(int deg) {
    if (deg > degree_cap) throw std::length_error("PolyExpProfile: degree cap (64) exceeded");
  }
  void normalize() {
    while (!c_.empty() && c_.back() == cdouble(0.0)) c_.pop_back();
  }

  std::vector<cdouble> c_;  // c_[j] multiplies eta^j
};

inline PolyExpProfile operator*(cdouble s, const PolyExpProfile& p) { return p * s; }

// integral_0^inf |p(eta)|^2 e^{-sqrt(2) eta} deta, via the exact moments
// integral eta^k e^{-sqrt(2) eta} = k! / sqrt(2)^{k+1}
inline double l2_norm_halfline(const PolyExpProfile& p) {
  if (p.is_zero()) return 0.0;
  const double s2 = std::sqrt(2.0);
  double total = 0.0;
  for (int m = 0; m <= 2 * p.degree(); ++m) {
    cdouble cm = 0.0;
    for (int j = std::max(0, m - p.degree()); j <= std::min(m, p.degree()); ++j)
      cm += p.coeff(j) * std::conj(p.coeff(m - j));
    double moment = 1.0 / s2;  // k = 0
    for (int k = 1; k <= m; ++k) moment *= double(k) / s2;
    total += cm.real() * moment;
  }
  return total;
}

// forward operator (d^2 - i) applied to p e^{-sqrt(i) eta}: polynomial
// p'' - 2 sqrt(i) p' (the i-terms cancel exactly); degree m -> m-1
inline PolyExpProfile apply_ode_operator(const PolyExpProfile& p) {
  if (p.is_zero()) return {};
  int m = p.degree();
  std::vector<cdouble> r(std::size_t(std::max(m, 1)), cdouble(0.0));
  for (int j = 0; j <= m - 1; ++j) {
    cdouble v = -2.0 * sqrt_i * cdouble(j + 1) * p.coeff(j + 1);
    if (j + 2 <= m) v += cdouble(j + 2) * cdouble(j + 1) * p.coeff(j + 2);
    r[std::size_t(j)] = v;
  }
  return PolyExpProfile(std::move(r));
}

// unique L2(R+) solution of (d^2 - i) u = s(eta) e^{-sqrt(i) eta}, u(0) = u0.
// Writing u = p e^{-sqrt(i) eta}, p solves p'' - 2 sqrt(i) p' = s with
// p(0) = u0: w := p' is found by matching coefficients from the top degree
// down, then p by integration. Degree of p is deg(s) + 1.
inline PolyExpProfile solve_layer_ode(const PolyExpProfile& source, cdouble u0) {
  if (source.is_zero()) {
    if (u0 == cdouble(0.0)) return {};
    return PolyExpProfile::constant(u0);
  }
  int m = source.degree();
  if (m + 1 > PolyExpProfile::degree_cap)
    throw std::length_error("solve_layer_ode: degree cap exceeded");
  std::vector<cdouble> w(std::size_t(m) + 1, cdouble(0.0));  // w = p'
  const cdouble two_sqrt_i = 2.0 * sqrt_i;
  w[std::size_t(m)] = -source.coeff(m) / two_sqrt_i;
  for (int k = m - 1; k >= 0; --k)
    w[std::size_t(k)] = (cdouble(k + 1) * w[std::size_t(k) + 1] - source.coeff(k)) / two_sqrt_i;
  std::vector<cdouble> p(std::size_t(m) + 2, cdouble(0.0));
  p[0] = u0;
  for (int k = 0; k <= m; ++k) p[std::size_t(k) + 1] = w[std::size_t(k)] / cdouble(k + 1);
  return PolyExpProfile(std::move(p));
}

}  // namespace skinlayer::polyexp
