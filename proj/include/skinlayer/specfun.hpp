#pragma once

// Complex-argument spherical Bessel and Riccati-Bessel functions with
// derivatives. Conventions:
//   j_0(z) = sin z / z,  y_0(z) = -cos z / z,  h_n^{1,2} = j_n +- i y_n,
//   psi_n(z) = z j_n(z), chi_n(z) = -z y_n(z), xi_n(z) = z h_n^{(1)}(z).
//
// j_n uses upward recurrence for |z| >= n and Miller-type downward
// recurrence with normalization otherwise; y_n and the Hankel functions are
// always recurred upward (they are dominant solutions). Declared accuracy:
// >= 10 significant digits for |z| <= 50, n <= 30; calls outside that box
// succeed but carry validated = false.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "skinlayer/types.hpp"

namespace skinlayer::specfun {

struct BesselEval {
  int order = 0;
  cdouble argument;
  cdouble value;
  cdouble derivative;
  bool validated = true;  // inside the declared accuracy box
};

enum class RiccatiKind { psi, chi, xi };

namespace detail {

inline bool in_validated_range(int n, cdouble z) { return n <= 30 && std::abs(z) <= 50.0; }

inline void check_overflow(cdouble z) {
  // j_n and y_n grow like e^{|Im z|}/|z|; past ~700 the exponential overflows.
  if (std::abs(z.imag()) > 700.0)
    throw std::range_error("specfun: |Im z| too large, e^|Im z| overflows double range");
}

// f_{n+1} = (2n+1)/z f_n - f_{n-1}, returns f_0..f_N
inline std::vector<cdouble> upward(cdouble f0, cdouble f1, int N, cdouble z) {
  std::vector<cdouble> f(std::size_t(N) + 1);
  f[0] = f0;
  if (N >= 1) f[1] = f1;
  for (int k = 1; k < N; ++k)
    f[std::size_t(k) + 1] = cdouble(2 * k + 1) / z * f[std::size_t(k)] - f[std::size_t(k) - 1];
  return f;
}

// Miller downward recurrence for j_0..j_N, normalized against j_0 (or j_1
// when z sits near a zero of sin).
inline std::vector<cdouble> miller_j(int N, cdouble z) {
  int start = N + 16 + int(std::ceil(std::abs(z)));
  std::vector<cdouble> g(std::size_t(start) + 2);
  g[std::size_t(start) + 1] = 0.0;
  g[std::size_t(start)] = 1e-280;
  for (int k = start; k >= 1; --k) {
    g[std::size_t(k) - 1] = cdouble(2 * k + 1) / z * g[std::size_t(k)] - g[std::size_t(k) + 1];
    if (std::abs(g[std::size_t(k) - 1]) > 1e250) {
      double s = 1e-250;
      for (int m = k - 1; m <= start + 1; ++m) g[std::size_t(m)] *= s;
    }
  }
  cdouble j0 = std::sin(z) / z;
  cdouble scale;
  if (std::abs(j0) > 1e-3 / (1.0 + std::abs(z))) {
    scale = j0 / g[0];
  } else {
    cdouble j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    scale = j1 / g[1];
  }
  std::vector<cdouble> out(std::size_t(N) + 1);
  for (int k = 0; k <= N; ++k) out[std::size_t(k)] = g[std::size_t(k)] * scale;
  return out;
}

inline BesselEval make_eval(int n, cdouble z, const std::vector<cdouble>& f) {
  BesselEval e;
  e.order = n;
  e.argument = z;
  e.value = f[std::size_t(n)];
  e.derivative = (n == 0) ? -f[1]
                          : f[std::size_t(n) - 1] - cdouble(n + 1) / z * f[std::size_t(n)];
  e.validated = in_validated_range(n, z);
  if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag()) ||
      !std::isfinite(e.derivative.real()) || !std::isfinite(e.derivative.imag()))
    throw std::range_error("specfun: evaluation overflowed the double range");
  return e;
}

// j_0..j_N: upward recurrence only in its classical stability region, the
// clearly oscillatory band of near-real arguments; Miller downward with
// normalization everywhere else (it computes the minimal solution and stays
// at full precision across the turning band and off the axis, where upward
// measurably sheds digits).
inline std::vector<cdouble> j_seq(int N, cdouble z) {
  double margin = 2.0 * std::cbrt(double(N)) + 2.0;
  if (std::abs(z.imag()) <= 1.0 && std::abs(z) >= double(N) + margin) {
    cdouble j0 = std::sin(z) / z;
    cdouble j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    return upward(j0, j1, N, z);
  }
  return miller_j(N, z);
}

// h^{(1)} or h^{(2)} by upward recurrence from the closed-form seeds; only
// the kind that grows relative to the rest of the solution space along the
// recurrence may be computed this way (see hankel_stable_kind)
inline std::vector<cdouble> hankel_seq(int kind, int N, cdouble z) {
  const cdouble i(0.0, 1.0);
  cdouble h0, h1;
  if (kind == 1) {
    if (z.imag() < -700.0) throw std::range_error("spherical_h: e^{iz} overflows");
    cdouble e = std::exp(i * z);
    h0 = -i * e / z;
    h1 = -e * (1.0 / z + i / (z * z));
  } else {
    if (z.imag() > 700.0) throw std::range_error("spherical_h: e^{-iz} overflows");
    cdouble e = std::exp(-i * z);
    h0 = i * e / z;
    h1 = -e * (1.0 / z - i / (z * z));
  }
  return upward(h0, h1, N, z);
}

inline int hankel_stable_kind(cdouble z) { return z.imag() >= 0.0 ? 1 : 2; }

}  // namespace detail

inline BesselEval spherical_j(int n, cdouble z) {
  if (n < 0) throw std::domain_error("spherical_j: order must be >= 0");
  if (z == cdouble(0.0)) {
    BesselEval e;
    e.order = n;
    e.argument = z;
    e.value = (n == 0) ? 1.0 : 0.0;
    e.derivative = (n == 1) ? 1.0 / 3.0 : 0.0;
    e.validated = true;
    return e;
  }
  detail::check_overflow(z);
  return detail::make_eval(n, z, detail::j_seq(std::max(n + 1, 1), z));
}

inline BesselEval spherical_y(int n, cdouble z) {
  if (n < 0) throw std::domain_error("spherical_y: order must be >= 0");
  if (z == cdouble(0.0)) throw std::domain_error("spherical_y: z = 0");
  detail::check_overflow(z);
  int top = std::max(n + 1, 1);
  std::vector<cdouble> f(std::size_t(top) + 1);
  if (z.imag() == 0.0) {
    // real axis: the textbook upward recurrence (y is never relatively
    // decaying there)
    cdouble y0 = -std::cos(z) / z;
    cdouble y1 = -std::cos(z) / (z * z) - std::sin(z) / z;
    f = detail::upward(y0, y1, top, z);
  } else {
    // off the axis, |y_n| can fall by many orders across the band n ~ |z|
    // while seed roundoff rides a relatively growing solution; combine the
    // regular solution with the Hankel kind that is stable upward instead:
    //   Im z > 0:  y = i (j - h1),   Im z < 0:  y = i (h2 - j)
    int kind = detail::hankel_stable_kind(z);
    auto h = detail::hankel_seq(kind, top, z);
    auto j = detail::j_seq(top, z);
    const cdouble i(0.0, 1.0);
    for (int k = 0; k <= top; ++k)
      f[std::size_t(k)] = kind == 1 ? i * (j[std::size_t(k)] - h[std::size_t(k)])
                                    : i * (h[std::size_t(k)] - j[std::size_t(k)]);
  }
  return detail::make_eval(n, z, f);
}

inline BesselEval spherical_h(int kind, int n, cdouble z) {
  if (kind != 1 && kind != 2) throw std::domain_error("spherical_h: kind must be 1 or 2");
  if (n < 0) throw std::domain_error("spherical_h: order must be >= 0");
  if (z == cdouble(0.0)) throw std::domain_error("spherical_h: z = 0");
  detail::check_overflow(z);
  int top = std::max(n + 1, 1);
  if (kind == detail::hankel_stable_kind(z))
    return detail::make_eval(n, z, detail::hankel_seq(kind, top, z));
  // the other kind follows from h1 + h2 = 2j without a separate recurrence
  auto h = detail::hankel_seq(3 - kind, top, z);
  auto j = detail::j_seq(top, z);
  std::vector<cdouble> f(std::size_t(top) + 1);
  for (int k = 0; k <= top; ++k)
    f[std::size_t(k)] = 2.0 * j[std::size_t(k)] - h[std::size_t(k)];
  return detail::make_eval(n, z, f);
}

inline BesselEval riccati(RiccatiKind kind, int n, cdouble z) {
  BesselEval base;
  double sign = 1.0;
  switch (kind) {
    case RiccatiKind::psi: base = spherical_j(n, z); break;
    case RiccatiKind::chi: base = spherical_y(n, z); sign = -1.0; break;
    case RiccatiKind::xi: base = spherical_h(1, n, z); break;
  }
  BesselEval e;
  e.order = n;
  e.argument = z;
  e.value = sign * z * base.value;
  e.derivative = sign * (base.value + z * base.derivative);  // product rule
  e.validated = base.validated;
  return e;
}

// Logarithmic derivative psi_n'(z)/psi_n(z) by downward recurrence,
// D_{m-1} = m/z - 1/(D_m + m/z). Stable for large |z| where psi itself
// overflows; this is what the transmission solve uses at the conductor side.
inline cdouble riccati_psi_logderiv(int n, cdouble z) {
  if (z == cdouble(0.0)) throw std::domain_error("riccati_psi_logderiv: z = 0");
  int start = n + 20 + int(std::ceil(std::abs(z)));
  cdouble d = 0.0;
  for (int m = start; m > n; --m) {
    cdouble mz = cdouble(m) / z;
    d = mz - 1.0 / (d + mz);
  }
  return d;
}

}  // namespace skinlayer::specfun
