#pragma once

// Per-mode scalar symbols of the impedance operators D^{delta,k}, k = 0..3.
//
// On the sphere the tangential vector spherical harmonics diagonalize every
// operator involved: grad_G div_G has eigenvalue -lambda on the gradient
// family and 0 on the curl family, Rot_G rot_G the reverse, with
// lambda = n(n+1)/R^2. The third-order operator keeps the Yosida-regularized
// form; its real and imaginary parts stay nonnegative termwise, which is
// what the coercivity scan quantifies.

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skinlayer/types.hpp"

namespace skinlayer::gibc {

enum class VshFamily { gradient, curl };

struct ModeIndex {
  int degree = 1;                 // n >= 1
  VshFamily family = VshFamily::gradient;
  double radius = 1.0;            // sphere radius

  double lambda() const { return double(degree) * double(degree + 1) / (radius * radius); }
};

struct ImpedanceSymbol {
  int k = 0;
  double delta = 0;
  ModeIndex mode;
  cdouble value;
};

inline double skin_depth(double omega, double sigma) {
  if (omega <= 0 || sigma <= 0) throw std::domain_error("skin_depth: omega and sigma must be > 0");
  return 1.0 / std::sqrt(omega * sigma);
}

namespace detail {

// eigenvalues of grad_G div_G and Rot_G rot_G on the mode's family
inline std::pair<double, double> family_eigs(const ModeIndex& m) {
  double lam = m.lambda();
  return m.family == VshFamily::gradient ? std::pair{-lam, 0.0} : std::pair{0.0, lam};
}

}  // namespace detail

// d_k(mode, delta). The optional curvature pair (c1, c2) restricts the
// tensor terms to the principal frame: gradient <-> tau1 (eigenvalue of H-C
// is (c2-c1)/2), curl <-> tau2. General curvature is meaningful for k <= 2
// only (the third-order operator is built on the sphere diagonalization).
//
// The third-order operator fixes the two free constants of its construction:
// the even split of the delta sqrt(i) term (alpha = 1/2) and the unit Yosida
// regularization constant (beta = 1); other choices in (0,1) x (0,inf) would
// be admissible.
inline ImpedanceSymbol d_k(int k, double delta, const ModeIndex& mode, double eps_r = 1.0,
                           double omega = 1.0,
                           std::optional<std::pair<double, double>> curvature = std::nullopt) {
  if (k < 0 || k > 3) throw std::domain_error("d_k: k must be 0..3");
  if (mode.degree < 1) throw std::domain_error("d_k: mode degree must be >= 1");
  double c1 = curvature ? curvature->first : 1.0 / mode.radius;
  double c2 = curvature ? curvature->second : 1.0 / mode.radius;
  double h = 0.5 * (c1 + c2);
  bool tau1 = mode.family == VshFamily::gradient;
  double hmc = h - (tau1 ? c1 : c2);            // eigenvalue of H - C
  double c2mh2 = (tau1 ? c1 * c1 : c2 * c2) - h * h;  // eigenvalue of C^2 - H^2

  ImpedanceSymbol s;
  s.k = k;
  s.delta = delta;
  s.mode = mode;
  switch (k) {
    case 0:
      s.value = 0.0;
      break;
    case 1:
      s.value = delta * sqrt_i;
      break;
    case 2:
      s.value = delta * sqrt_i + delta * delta * hmc;
      break;
    case 3: {
      if (c1 != c2)
        throw std::invalid_argument("d_k: k = 3 requires umbilic curvature (sphere path)");
      auto [gd, rr] = detail::family_eigs(mode);
      double d2 = delta * delta;
      cdouble A = 1.0 / (1.0 - d2 * gd);
      cdouble B = 1.0 / (1.0 + d2 * rr);
      cdouble ew2 = eps_r * omega * omega;
      double q = std::sqrt(2.0) / 4.0 * delta;
      s.value = delta * sqrt_i * 0.5 + d2 * hmc +
                delta * d2 / (2.0 * sqrt_i) * (c2mh2 + ew2) +
                q * (A + d2 * rr * B) + cdouble(0.0, 1.0) * q * (B - d2 * gd * A);
      break;
    }
  }
  return s;
}

// the five summands of d_3 separately (sign-structure scans)
inline std::array<cdouble, 5> d3_terms(double delta, const ModeIndex& mode, double eps_r = 1.0,
                                       double omega = 1.0) {
  auto [gd, rr] = detail::family_eigs(mode);
  double d2 = delta * delta;
  cdouble A = 1.0 / (1.0 - d2 * gd);
  cdouble B = 1.0 / (1.0 + d2 * rr);
  double q = std::sqrt(2.0) / 4.0 * delta;
  return {delta * sqrt_i * 0.5, cdouble(0.0),
          delta * d2 / (2.0 * sqrt_i) * cdouble(eps_r * omega * omega),
          q * (A + d2 * rr * B), cdouble(0.0, 1.0) * q * (B - d2 * gd * A)};
}

// un-regularized third-order symbol (sphere)
inline ImpedanceSymbol d3_unregularized(double delta, const ModeIndex& mode, double eps_r = 1.0,
                                        double omega = 1.0) {
  auto [gd, rr] = detail::family_eigs(mode);
  ImpedanceSymbol s;
  s.k = 3;
  s.delta = delta;
  s.mode = mode;
  s.value = delta * sqrt_i +
            delta * delta * delta / (2.0 * sqrt_i) * cdouble(eps_r * omega * omega + gd + rr);
  return s;
}

// remainder symbol of D^{delta,3} = D_0^{delta,3} + delta^5 R^{delta,3};
// expanding the Yosida terms gives, per family,
//   R = +- (sqrt2/4)(1-i) lambda^2 / (1 + delta^2 lambda)
// (+ on the gradient family, - on the curl family)
inline cdouble remainder_symbol(double delta, const ModeIndex& mode) {
  double lam = mode.lambda();
  double sign = mode.family == VshFamily::gradient ? 1.0 : -1.0;
  return sign * std::sqrt(2.0) / 4.0 * cdouble(1.0, -1.0) * lam * lam /
         (1.0 + delta * delta * lam);
}

// ---------------------------------------------------------------------------
// coercivity / boundedness scan:  ||D phi|| <= C1 delta ||phi||,
// Re(D phi, phi) >= C2 delta ||phi||^2, empirically over a (delta, lambda)
// log grid on both families
// ---------------------------------------------------------------------------

struct ScanPoint {
  int k;
  double delta, lambda;
  VshFamily family;
  cdouble value;
};

struct ScanResult {
  int k = 0;
  double C1 = 0;                  // sup |d_k| / delta
  double C2 = 0;                  // inf Re d_k / delta
  double delta_k = 0;             // largest delta with positive per-delta inf
  std::vector<ScanPoint> grid;
};

inline ScanResult coercivity_scan(int k, double delta_max, double lambda_max, double eps_r = 1.0,
                                  double omega = 1.0, double R = 1.0, int n_lambda = 200,
                                  int n_delta = 40) {
  if (k < 1 || k > 3) throw std::domain_error("coercivity_scan: k must be 1..3");
  double lam_min = 2.0 / (R * R);
  ScanResult res;
  res.k = k;
  res.C1 = 0.0;
  res.C2 = std::numeric_limits<double>::infinity();
  res.delta_k = 0.0;

  for (int di = 0; di < n_delta; ++di) {
    double t = n_delta == 1 ? 1.0 : double(di) / double(n_delta - 1);
    double delta = delta_max * std::pow(1e-3, 1.0 - t);  // log grid (0, delta_max]
    double inf_re = std::numeric_limits<double>::infinity();
    for (int li = 0; li < n_lambda; ++li) {
      double s = n_lambda == 1 ? 0.0 : double(li) / double(n_lambda - 1);
      double lam = lam_min * std::pow(lambda_max / lam_min, s);
      // lambda = n(n+1)/R^2 has no exact integer degree on a log grid; the
      // symbol only reads lambda, so synthesize the mode through the radius
      for (VshFamily fam : {VshFamily::gradient, VshFamily::curl}) {
        ModeIndex m;
        m.degree = 1;
        m.family = fam;
        m.radius = std::sqrt(2.0 / lam);
        cdouble v = d_k(k, delta, m, eps_r, omega).value;
        res.grid.push_back({k, delta, lam, fam, v});
        res.C1 = std::max(res.C1, std::abs(v) / delta);
        inf_re = std::min(inf_re, v.real() / delta);
      }
    }
    res.C2 = std::min(res.C2, inf_re);
    if (inf_re > 0.0) res.delta_k = std::max(res.delta_k, delta);
  }
  return res;
}

inline void scan_to_csv(const ScanResult& res, std::ostream& os) {
  os << "k,delta,lambda,family,re,im\n";
  char line[160];
  for (const auto& p : res.grid) {
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%s,%.17g,%.17g\n", p.k, p.delta, p.lambda,
                  p.family == VshFamily::gradient ? "gradient" : "curl", p.value.real(),
                  p.value.imag());
    os << line;
  }
}

}  // namespace skinlayer::gibc
