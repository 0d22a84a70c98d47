#pragma once

// Concentric-sphere Maxwell problems, one vector-spherical-harmonic mode at a
// time. Conventions (time factor e^{+i w t}):
//   i w E - curl H = 0 and i w H + curl E = 0 outside,
//   (i eps_r w + 1/(w delta^2)) E = curl H inside, so the interior wavenumber
//   obeys k_i^2 = eps_r w^2 - i/delta^2 with the branch Im k_i < 0.
//
// Mode fields are built from Y = Y_n^m, B_vec = grad_{S^2} Y and
// C_vec = B_vec x rhat with radial factors z_n(kappa r):
//   TM_r (electric multipole): E_T ~ B_vec, H_T ~ C_vec, E_r != 0,
//   TE_r: the reverse.
// The polarization convention is pinned by tests: D = 0 reproduces the PEC
// solve and reconstructed fields satisfy the Maxwell residual.
//
// On Gamma (r = R) the reference normal points into the conductor (n = -rhat);
// traces are also reported in the surface-algebra basis B = grad_G Y,
// C = B x n of blprofiles, where (vg, vc) = (R e_B, -R e_C) for a field
// e_B B_vec + e_C C_vec.
//
// The transmission solve uses the scaled interior unknown
// t = gamma psi_n(k_i R) and the logarithmic derivative psi'/psi, so it stays
// finite for arbitrarily small delta.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "skinlayer/gibc.hpp"
#include "skinlayer/specfun.hpp"
#include "skinlayer/types.hpp"

namespace skinlayer::modal {

enum class Polarization { TM, TE };

inline const char* to_string(Polarization p) { return p == Polarization::TM ? "TM" : "TE"; }

struct ProblemConfig {
  double R = 1.0;
  double R_out = 2.0;
  double omega = 1.0;
  double eps_r = 1.0;
  double delta = 0.01;

  void validate() const {
    if (!(0 < R && R < R_out)) throw std::invalid_argument("ProblemConfig: need 0 < R < R_out");
    if (!(omega > 0) || !(eps_r > 0) || !(delta > 0))
      throw std::invalid_argument("ProblemConfig: omega, eps_r, delta must be > 0");
  }
  cdouble interior_wavenumber() const {
    cdouble k2 = eps_r * omega * omega - cdouble(0.0, 1.0) / (delta * delta);
    cdouble k = std::sqrt(k2);
    if (k.imag() > 0) k = -k;
    return k;
  }
};

struct ModalSolution {
  int degree = 1;
  Polarization pol = Polarization::TM;
  cdouble alpha, beta;         // exterior coefficients on j_n(w r), y_n(w r)
  cdouble t_int = 0.0;         // gamma * psi_n(k_i R); exact solves only
  bool has_interior = false;
  int gibc_order = -1;         // -1 for the exact transmission solution
  double condition = 0.0;
  bool near_resonance = false; // condition > 1e12, carried, not fatal
};

namespace detail {

struct Radial {
  cdouble j, y, dpsij, dpsiy;  // j_n, y_n, psi_n', chi-free at real argument x
};

inline Radial radial(int n, double x) {
  auto je = specfun::spherical_j(n, cdouble(x));
  auto ye = specfun::spherical_y(n, cdouble(x));
  Radial r;
  r.j = je.value;
  r.y = ye.value;
  r.dpsij = je.value + x * je.derivative;  // psi' = j + x j'
  r.dpsiy = ye.value + x * ye.derivative;
  return r;
}

inline gibc::VshFamily impedance_family(Polarization p) {
  // D acts on H_T: curl family for TM, gradient family for TE
  return p == Polarization::TM ? gibc::VshFamily::curl : gibc::VshFamily::gradient;
}

}  // namespace detail

// outer-boundary row of E_T - H x n = g at r = R_out, per polarization
// (coefficients multiplying alpha and beta)
inline std::pair<cdouble, cdouble> absorbing_row(const ProblemConfig& cfg, int degree,
                                                 Polarization pol) {
  double x = cfg.omega * cfg.R_out;
  auto r = detail::radial(degree, x);
  const cdouble i(0.0, 1.0);
  if (pol == Polarization::TM)
    return {r.dpsij / x + i * r.j, r.dpsiy / x + i * r.y};
  return {r.j - i * r.dpsij / x, r.y - i * r.dpsiy / x};
}

// GIBC solve: exterior Maxwell with E x n + w D^{delta,k}(H_T) = 0 at r = R
// (k = 0 is the perfect conductor). Unit modal datum g at R_out.
inline ModalSolution solve_gibc(const ProblemConfig& cfg, int degree, Polarization pol, int k) {
  cfg.validate();
  gibc::ModeIndex mode{degree, detail::impedance_family(pol), cfg.R};
  cdouble d = gibc::d_k(k, cfg.delta, mode, cfg.eps_r, cfg.omega).value;

  double xR = cfg.omega * cfg.R;
  auto rR = detail::radial(degree, xR);
  const cdouble i(0.0, 1.0);
  std::array<std::array<cdouble, 2>, 2> A{};
  std::array<cdouble, 2> b{};
  if (pol == Polarization::TM) {
    // psi'-combination = i w^2 R d * (j,y)-combination
    A[0] = {rR.dpsij - i * cfg.omega * cfg.omega * cfg.R * d * rR.j,
            rR.dpsiy - i * cfg.omega * cfg.omega * cfg.R * d * rR.y};
  } else {
    A[0] = {rR.j + i * d / cfg.R * rR.dpsij, rR.y + i * d / cfg.R * rR.dpsiy};
  }
  auto [a0, a1] = absorbing_row(cfg, degree, pol);
  A[1] = {a0, a1};
  b[1] = 1.0;

  auto x = solve_dense<2>(A, b);
  ModalSolution s;
  s.degree = degree;
  s.pol = pol;
  s.alpha = x[0];
  s.beta = x[1];
  s.gibc_order = k;
  s.condition = condition_1norm<2>(A);
  s.near_resonance = s.condition > 1e12;
  if (!std::isfinite(s.alpha.real()) || !std::isfinite(s.beta.real()))
    throw std::runtime_error("solve_gibc: singular system, degree " + std::to_string(degree) +
                             " delta " + std::to_string(cfg.delta));
  return s;
}

// exact transmission solve (3x3 per mode); swap_continuity_rows exchanges
// the two tangential continuity rows, which must not change the solution
inline ModalSolution solve_exact(const ProblemConfig& cfg, int degree, Polarization pol,
                                 bool swap_continuity_rows = false) {
  cfg.validate();
  cdouble ki = cfg.interior_wavenumber();
  cdouble kiR = ki * cfg.R;
  cdouble D = specfun::riccati_psi_logderiv(degree, kiR);

  double xR = cfg.omega * cfg.R;
  auto rR = detail::radial(degree, xR);
  std::array<std::array<cdouble, 3>, 3> A{};
  std::array<cdouble, 3> b{};
  if (pol == Polarization::TM) {
    // tangential E continuity, then tangential H continuity
    A[0] = {rR.dpsij / xR, rR.dpsiy / xR, -D / kiR};
    A[1] = {rR.j, rR.y, -1.0 / xR};
  } else {
    A[0] = {rR.j, rR.y, -1.0 / kiR};
    A[1] = {rR.dpsij, rR.dpsiy, -D};
  }
  if (swap_continuity_rows) std::swap(A[0], A[1]);
  auto [a0, a1] = absorbing_row(cfg, degree, pol);
  A[2] = {a0, a1, 0.0};
  b[2] = 1.0;

  std::array<cdouble, 3> x;
  try {
    x = solve_dense<3>(A, b);
  } catch (const std::exception&) {
    throw std::runtime_error("solve_exact: singular system, degree " + std::to_string(degree) +
                             " delta " + std::to_string(cfg.delta));
  }
  ModalSolution s;
  s.degree = degree;
  s.pol = pol;
  s.alpha = x[0];
  s.beta = x[1];
  s.t_int = x[2];
  s.has_interior = true;
  s.gibc_order = -1;
  s.condition = condition_1norm<3>(A);
  s.near_resonance = s.condition > 1e12;
  return s;
}

// ---------------------------------------------------------------------------
// traces on Gamma in the surface-algebra basis
// ---------------------------------------------------------------------------

struct GammaTraces {
  CVec3 h_tangential;  // algebra coefficients of H_T
  CVec3 e_cross_n;     // algebra coefficients of E x n (n into the conductor)
};

inline GammaTraces gamma_traces(const ProblemConfig& cfg, const ModalSolution& s) {
  double xR = cfg.omega * cfg.R;
  auto r = detail::radial(s.degree, xR);
  cdouble z = s.alpha * r.j + s.beta * r.y;
  cdouble dpsi = s.alpha * r.dpsij + s.beta * r.dpsiy;
  const cdouble i(0.0, 1.0);
  GammaTraces t;
  if (s.pol == Polarization::TM) {
    t.h_tangential[1] = -cfg.R * i * z;        // H_T = i z C_vec -> vc = -R (i z)
    t.e_cross_n[1] = dpsi / cfg.omega;         // E x n = -e_B C_vec -> vc = R e_B
  } else {
    t.h_tangential[0] = i * dpsi / cfg.omega;  // H_T = i psi'/x B_vec -> vg = R h_B
    t.e_cross_n[0] = cfg.R * z;                // E x n = e_C B_vec -> vg = R e_C
  }
  return t;
}

// ---------------------------------------------------------------------------
// field reconstruction: coefficients of Y rhat, B_vec = grad_{S^2} Y and
// C_vec = B_vec x rhat at radius r; Lambda = n(n+1)
// ---------------------------------------------------------------------------

struct ModeFieldSample {
  cdouble e_r, e_B, e_C;
  cdouble h_r, h_B, h_C;
};

inline ModeFieldSample exterior_field(const ProblemConfig& cfg, const ModalSolution& s,
                                      double r) {
  double x = cfg.omega * r;
  auto rb = detail::radial(s.degree, x);
  cdouble z = s.alpha * rb.j + s.beta * rb.y;
  cdouble dpsi = s.alpha * rb.dpsij + s.beta * rb.dpsiy;
  double Lam = double(s.degree) * double(s.degree + 1);
  const cdouble i(0.0, 1.0);
  ModeFieldSample f{};
  if (s.pol == Polarization::TM) {
    f.e_r = Lam * z / x;
    f.e_B = dpsi / x;
    f.h_C = i * z;
  } else {
    f.e_C = z;
    f.h_r = i * Lam * z / x;
    f.h_B = i * dpsi / x;
  }
  return f;
}

inline cdouble interior_gamma(const ProblemConfig& cfg, const ModalSolution& s);

inline ModeFieldSample interior_field(const ProblemConfig& cfg, const ModalSolution& s,
                                      double r) {
  cdouble gamma = interior_gamma(cfg, s);
  cdouble ki = cfg.interior_wavenumber();
  cdouble x = ki * r;
  auto je = specfun::spherical_j(s.degree, x);
  cdouble z = gamma * je.value;
  cdouble dpsi = gamma * (je.value + x * je.derivative);
  double Lam = double(s.degree) * double(s.degree + 1);
  cdouble ratio = ki / cfg.omega;
  const cdouble i(0.0, 1.0);
  ModeFieldSample f{};
  if (s.pol == Polarization::TM) {
    f.e_r = Lam * z / x;
    f.e_B = dpsi / x;
    f.h_C = i * ratio * z;
  } else {
    f.e_C = z;
    f.h_r = i * ratio * Lam * z / x;
    f.h_B = i * ratio * dpsi / x;
  }
  return f;
}

// ---------------------------------------------------------------------------
// exterior expansion terms E_e^l: order 0 is the PEC problem with the outer
// datum, order l >= 1 has zero outer datum and inherits the layer trace
// E^l_i(.,0) x n as interface datum. Declared in this header, defined after
// the blprofiles include in expansion.hpp to keep the layering explicit.
// ---------------------------------------------------------------------------

struct ExpansionTerm {
  cdouble alpha, beta;
  CVec3 h_trace;    // H^l_{e,T} algebra coefficients on Gamma
  CVec3 exn_trace;  // interface datum E^l_i(.,0) x n used by this order
};

// exterior solve with prescribed inner datum for E x n (algebra coefficient
// on the mode's trace family) and outer datum g
inline ModalSolution solve_exterior_with_datum(const ProblemConfig& cfg, int degree,
                                               Polarization pol, cdouble exn_datum,
                                               cdouble outer_datum) {
  double xR = cfg.omega * cfg.R;
  auto rR = detail::radial(degree, xR);
  std::array<std::array<cdouble, 2>, 2> A{};
  std::array<cdouble, 2> b{};
  if (pol == Polarization::TM) {
    A[0] = {rR.dpsij / cfg.omega, rR.dpsiy / cfg.omega};
  } else {
    A[0] = {cfg.R * rR.j, cfg.R * rR.y};
  }
  b[0] = exn_datum;
  auto [a0, a1] = absorbing_row(cfg, degree, pol);
  A[1] = {a0, a1};
  b[1] = outer_datum;
  auto x = solve_dense<2>(A, b);
  ModalSolution s;
  s.degree = degree;
  s.pol = pol;
  s.alpha = x[0];
  s.beta = x[1];
  s.gibc_order = -2;  // expansion term, not a GIBC solve
  s.condition = condition_1norm<2>(A);
  s.near_resonance = s.condition > 1e12;
  return s;
}

// ---------------------------------------------------------------------------
// norms: H(curl) over the exterior shell reduced to radial quadrature, plus
// interior L2/H(curl) pieces for the stability checks
// ---------------------------------------------------------------------------

namespace detail {

struct GaussRule {
  std::vector<double> x, w;  // nodes/weights on [-1, 1]
};

inline const GaussRule& gauss_rule(int n) {
  static thread_local GaussRule cache;
  if (int(cache.x.size()) == n) return cache;
  GaussRule r;
  r.x.resize(std::size_t(n));
  r.w.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        break;
      }
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[std::size_t(i)] = x;
    r.w[std::size_t(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  cache = std::move(r);
  return cache;
}

template <class F>
double integrate(F&& f, double a, double b, int n) {
  const GaussRule& g = gauss_rule(n);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0;
  for (int i = 0; i < n; ++i) s += g.w[std::size_t(i)] * f(mid + half * g.x[std::size_t(i)]);
  return s * half;
}

}  // namespace detail

// squared H(curl, Omega_e) norm of the exterior mode field with radial
// coefficients (alpha, beta); Lambda = n(n+1)
inline double exterior_hcurl_norm2(const ProblemConfig& cfg, int degree, Polarization pol,
                                   cdouble alpha, cdouble beta, int quad_pts = 64) {
  double w = cfg.omega;
  double Lam = double(degree) * double(degree + 1);
  auto zz = [&](double r) {
    auto rb = detail::radial(degree, w * r);
    return std::pair{alpha * rb.j + beta * rb.y, alpha * rb.dpsij + beta * rb.dpsiy};
  };
  // integral of Lambda |z|^2 r^2 dr and of [Lambda |z|^2 + |psi'|^2] dr
  double I_field = detail::integrate(
      [&](double r) {
        auto [z, dp] = zz(r);
        return std::norm(z) * r * r;
      },
      cfg.R, cfg.R_out, quad_pts);
  double I_mixed = detail::integrate(
      [&](double r) {
        auto [z, dp] = zz(r);
        return Lam * std::norm(z) + std::norm(dp);
      },
      cfg.R, cfg.R_out, quad_pts);
  if (pol == Polarization::TE)
    return Lam * I_field + Lam * I_mixed;           // |E|^2 + |curl E|^2
  return Lam / (w * w) * I_mixed + w * w * Lam * I_field;
}

// H(curl) distance between two solutions of the same mode
inline double hcurl_error(const ProblemConfig& cfg, const ModalSolution& a,
                          const ModalSolution& b) {
  if (a.degree != b.degree || a.pol != b.pol)
    throw std::invalid_argument("hcurl_error: mode mismatch");
  return std::sqrt(
      exterior_hcurl_norm2(cfg, a.degree, a.pol, a.alpha - b.alpha, a.beta - b.beta));
}

// H(curl) distance between a solution and the truncated expansion sum_l d^l E^l
inline double hcurl_error(const ProblemConfig& cfg, const ModalSolution& a,
                          const std::vector<ExpansionTerm>& terms) {
  cdouble sa = 0, sb = 0, dl = 1.0;
  for (const auto& t : terms) {
    sa += dl * t.alpha;
    sb += dl * t.beta;
    dl *= cfg.delta;
  }
  return std::sqrt(exterior_hcurl_norm2(cfg, a.degree, a.pol, a.alpha - sa, a.beta - sb));
}

// ---------------------------------------------------------------------------
// interior evaluation (guarded: psi_n(k_i R) overflows once |Im k_i| R
// approaches 700, i.e. delta below roughly 2e-3 at R = 1)
// ---------------------------------------------------------------------------

inline cdouble interior_gamma(const ProblemConfig& cfg, const ModalSolution& s) {
  if (!s.has_interior) throw std::logic_error("interior_gamma: no interior part");
  cdouble kiR = cfg.interior_wavenumber() * cfg.R;
  if (std::abs(kiR.imag()) > 690.0)
    throw std::range_error("interior_gamma: interior radial function overflows at this delta");
  auto psi = specfun::riccati(specfun::RiccatiKind::psi, s.degree, kiR);
  return s.t_int / psi.value;
}

// squared L2(Omega_i) norm of E and squared L2(Omega_i) norm of curl E
struct InteriorNorms {
  double e_l2_sq = 0;
  double curl_e_l2_sq = 0;
};

inline InteriorNorms interior_norms(const ProblemConfig& cfg, const ModalSolution& s,
                                    int quad_pts = 64) {
  cdouble gamma = interior_gamma(cfg, s);
  cdouble ki = cfg.interior_wavenumber();
  double Lam = double(s.degree) * double(s.degree + 1);
  auto parts = [&](double a, double b, auto&& f) {
    return detail::integrate(f, a, b, quad_pts);
  };
  // the integrand concentrates in a collar of width ~ delta under Gamma;
  // split so the boundary panel resolves it
  double W = std::min(cfg.R, 40.0 * cfg.delta);
  auto split_integral = [&](auto&& f) {
    double s1 = parts(cfg.R - W, cfg.R, f);
    double s2 = (W < cfg.R) ? parts(0.0, cfg.R - W, f) : 0.0;
    return s1 + s2;
  };
  auto I_field = split_integral([&](double r) {
    auto je = specfun::spherical_j(s.degree, ki * r);
    return std::norm(je.value) * r * r;
  });
  auto I_mixed = split_integral([&](double r) {
    auto je = specfun::spherical_j(s.degree, ki * r);
    cdouble dpsi = je.value + ki * r * je.derivative;
    return Lam * std::norm(je.value) + std::norm(dpsi);
  });
  double g2 = std::norm(gamma);
  InteriorNorms out;
  if (s.pol == Polarization::TE) {
    out.e_l2_sq = g2 * Lam * I_field;
    out.curl_e_l2_sq = g2 * Lam * I_mixed;  // curl E = k_i gamma N
  } else {
    out.e_l2_sq = g2 * Lam / std::norm(ki) * I_mixed;
    out.curl_e_l2_sq = g2 * std::norm(ki) * Lam * I_field;
  }
  return out;
}

// dominant tangential field magnitude at radius r relative to its value at
// R (|E_C| for TE, |H_C| for TM, both carried by |j_n(k_i r)|); drives the
// interior-decay check
inline double interior_relative_magnitude(const ProblemConfig& cfg, const ModalSolution& s,
                                          double r) {
  cdouble ki = cfg.interior_wavenumber();
  auto at = [&](double rr) { return std::abs(specfun::spherical_j(s.degree, ki * rr).value); };
  return at(r) / at(cfg.R);
}

// least-squares fit of -d log|field| / d depth over 0 <= R - r <= depth
inline double interior_decay_rate(const ProblemConfig& cfg, const ModalSolution& s, double depth,
                                  int npts = 40) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 1; i <= npts; ++i) {
    double d = depth * i / npts;
    double y = std::log(interior_relative_magnitude(cfg, s, cfg.R - d));
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
  }
  double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  return -slope;
}

}  // namespace skinlayer::modal
