#pragma once

// Boundary-layer recursion over a finite-dimensional surface-symbol algebra.
//
// Fields live on Gamma x R+ as triples of profiles p(eta)e^{-sqrt(i) eta} in
// the coordinates (gradient family / tau1, curl family / tau2, normal). Every
// surface operator is a 3x3 complex matrix on those coordinates, so the
// recursion
//     d_eta H^k x n + (1/w) E^k = sum_l A_H^(l)(E^{k-l}, H^{k-l})
//    -d_eta E^k x n + i w H^k  = sum_l A_E^(l)(E^{k-l}, H^{k-l})
// is exact: the normal components come from projecting the equations on n,
// the tangential magnetic components solve the scalar layer ODE, and the
// electric field is recovered from the first equation. E^k here is the
// normalized electric profile (the physical expansion is shifted one power
// of delta; order 0 of the unnormalized electric field vanishes).

#include <stdexcept>
#include <vector>

#include "skinlayer/polyexp.hpp"
#include "skinlayer/types.hpp"

namespace skinlayer::blprofiles {

using polyexp::PolyExpProfile;

struct ProfileVector {
  std::array<PolyExpProfile, 3> comp;  // (g, c, n) coordinates

  const PolyExpProfile& operator[](int i) const { return comp[std::size_t(i)]; }
  PolyExpProfile& operator[](int i) { return comp[std::size_t(i)]; }

  ProfileVector operator+(const ProfileVector& o) const {
    ProfileVector r;
    for (int i = 0; i < 3; ++i) r[i] = comp[std::size_t(i)] + o[i];
    return r;
  }
  ProfileVector operator-(const ProfileVector& o) const {
    ProfileVector r;
    for (int i = 0; i < 3; ++i) r[i] = comp[std::size_t(i)] - o[i];
    return r;
  }
  ProfileVector operator*(cdouble s) const {
    ProfileVector r;
    for (int i = 0; i < 3; ++i) r[i] = comp[std::size_t(i)] * s;
    return r;
  }

  ProfileVector mul_by_eta() const {
    ProfileVector r;
    for (int i = 0; i < 3; ++i) r[i] = comp[std::size_t(i)].mul_by_eta();
    return r;
  }
  ProfileVector differentiate() const {
    ProfileVector r;
    for (int i = 0; i < 3; ++i) r[i] = comp[std::size_t(i)].differentiate();
    return r;
  }
  int degree() const {
    int d = -1;
    for (const auto& p : comp) d = std::max(d, p.degree());
    return d;
  }
  // eta^j coefficient as an algebra vector
  CVec3 coeff(int j) const { return {{comp[0].coeff(j), comp[1].coeff(j), comp[2].coeff(j)}}; }
  CVec3 evaluate(double eta) const {
    return {{comp[0].evaluate(eta), comp[1].evaluate(eta), comp[2].evaluate(eta)}};
  }
  ProfileVector trimmed(double rel_tol) const {
    double m = 0;
    for (const auto& p : comp)
      for (const auto& c : p.coeffs()) m = std::max(m, std::abs(c));
    ProfileVector r;
    if (m == 0) return r;
    for (int i = 0; i < 3; ++i) {
      std::vector<cdouble> cs = comp[std::size_t(i)].coeffs();
      for (auto& c : cs)
        if (std::abs(c) < rel_tol * m) c = 0.0;
      r[i] = PolyExpProfile(std::move(cs));
    }
    return r;
  }
};

inline ProfileVector apply(const CMat3& A, const ProfileVector& v) {
  ProfileVector r;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r[i] = r[i] + v[k] * A(i, k);
  return r;
}

inline ProfileVector from_coeff(const CVec3& c) {
  ProfileVector r;
  for (int i = 0; i < 3; ++i)
    if (c[i] != cdouble(0.0)) r[i] = PolyExpProfile::constant(c[i]);
  return r;
}

// ---------------------------------------------------------------------------
// surface-symbol algebra
// ---------------------------------------------------------------------------

// Scalars (fields proportional to the mode's spherical harmonic) are carried
// on the normal slot; rot/div rows map tangential coordinates there and
// Rot/grad columns map them back. On the sphere instantiation the normal is
// the conductor-side convention, pointing into the obstacle.
struct SurfaceSymbolAlgebra {
  double c1 = 0, c2 = 0;  // principal curvature symbols
  double h = 0, g = 0;    // mean / Gaussian curvature scalars

  CMat3 C, H, G, M;       // curvature tensors on the tangential block
  CMat3 cross_n;          // V -> V x n : (vg, vc) -> (-vc, vg)
  CMat3 rot;              // V -> (rot_G V) on the n slot
  CMat3 Rot;              // n-slot scalar -> tangential Rot_G
  CMat3 grad, div;        // likewise for grad_G / div_G
  CMat3 rotM, RotM;       // M-weighted variants

  CMat3 c_gamma() const { return rot + Rot - cross_n * C; }
  CMat3 c_gammaM() const { return rotM + RotM - cross_n * G; }
  CMat3 grad_div() const { return grad * div; }
  CMat3 rot_rot() const { return Rot * rot; }
  CMat3 laplace_beltrami() const { return grad_div() - rot_rot(); }

  static CMat3 cross_matrix() {
    CMat3 X;
    X(0, 1) = -1.0;
    X(1, 0) = 1.0;
    return X;
  }

  // one tangential vector spherical-harmonic mode of degree n on the sphere
  // of radius R; lambda = n(n+1)/R^2, curvature c = -1/R (normal into the
  // obstacle ball)
  static SurfaceSymbolAlgebra sphere_mode(double R, int degree) {
    if (degree < 1) throw std::invalid_argument("sphere_mode: degree must be >= 1");
    double lam = double(degree) * double(degree + 1) / (R * R);
    SurfaceSymbolAlgebra a;
    a.c1 = a.c2 = -1.0 / R;
    a.h = a.c1;
    a.g = a.c1 * a.c1;
    a.C = CMat3::diag(a.c1, a.c2, 0.0);
    a.H = CMat3::diag(a.h, a.h, 0.0);
    a.G = CMat3::diag(a.g, a.g, 0.0);
    a.M = a.H * 2.0 - a.C;
    a.cross_n = cross_matrix();
    a.rot(2, 1) = lam;   // rot_G V = lambda * vc
    a.Rot(1, 2) = 1.0;   // Rot_G Y = curl-family unit
    a.grad(0, 2) = 1.0;  // grad_G Y = gradient-family unit
    a.div(2, 0) = -lam;  // div_G(gradient unit) = -lambda Y
    double m = 2.0 * a.h - a.c1;
    a.rotM = a.rot * m;  // M = m I_G on a sphere
    a.RotM = a.Rot * m;
    return a;
  }

  // arbitrary principal curvatures with user-supplied derivative symbols
  // (all zero by default); exercises the curvature terms that vanish on the
  // sphere without needing a surface PDE solver
  struct DerivativeSymbols {
    CVec3 rot_row;    // tangential -> scalar
    CVec3 Rot_col;    // scalar -> tangential
    CVec3 grad_col;
    CVec3 div_row;
    CVec3 rotM_row;
    CVec3 RotM_col;
  };

  static SurfaceSymbolAlgebra pointwise(double c1, double c2,
                                        const DerivativeSymbols& ds = {}) {
    SurfaceSymbolAlgebra a;
    a.c1 = c1;
    a.c2 = c2;
    a.h = 0.5 * (c1 + c2);
    a.g = c1 * c2;
    a.C = CMat3::diag(c1, c2, 0.0);
    a.H = CMat3::diag(a.h, a.h, 0.0);
    a.G = CMat3::diag(a.g, a.g, 0.0);
    a.M = a.H * 2.0 - a.C;
    a.cross_n = cross_matrix();
    for (int i = 0; i < 2; ++i) {
      a.rot(2, i) = ds.rot_row[i];
      a.div(2, i) = ds.div_row[i];
      a.Rot(i, 2) = ds.Rot_col[i];
      a.grad(i, 2) = ds.grad_col[i];
      a.rotM(2, i) = ds.rotM_row[i];
      a.RotM(i, 2) = ds.RotM_col[i];
    }
    return a;
  }

  // residual of n x Rot_G(rot_G(V x n)) = -grad_G(div_G V) on the tangential
  // block; a compatibility requirement on the supplied symbols
  double rot_grad_compatibility() const {
    CMat3 lhs = (cross_n * Rot * rot * cross_n) * cdouble(-1.0);  // n x W = -W x n
    CMat3 rhs = grad_div() * cdouble(-1.0);
    return max_abs(lhs - rhs);
  }
};

// ---------------------------------------------------------------------------
// recursion
// ---------------------------------------------------------------------------

struct RecursionContext {
  SurfaceSymbolAlgebra alg;
  double omega = 1.0;
  double eps_r = 1.0;
};

// A_H^(1..4) and A_E^(1..2) of the matched expansion
inline ProfileVector apply_AH(int ell, const ProfileVector& u, const ProfileVector& v,
                              const RecursionContext& ctx) {
  const cdouble iew = cdouble(0.0, 1.0) * ctx.eps_r * ctx.omega;
  const SurfaceSymbolAlgebra& a = ctx.alg;
  switch (ell) {
    case 1: {
      ProfileVector bracket = apply(a.cross_n, v.differentiate()) + u * cdouble(1.0 / ctx.omega);
      return apply(a.c_gamma(), v) - bracket.mul_by_eta() * cdouble(2.0 * a.h);
    }
    case 2: {
      ProfileVector bracket = apply(a.cross_n, v.differentiate()) + u * cdouble(1.0 / ctx.omega);
      return u * (-iew) + apply(a.c_gammaM(), v).mul_by_eta() -
             bracket.mul_by_eta().mul_by_eta() * cdouble(a.g);
    }
    case 3:
      return u.mul_by_eta() * (-2.0 * a.h * iew);
    case 4:
      return u.mul_by_eta().mul_by_eta() * (-2.0 * a.g * iew);
    default:
      throw std::invalid_argument("apply_AH: ell must be 1..4");
  }
}

inline ProfileVector apply_AE(int ell, const ProfileVector& u, const ProfileVector& v,
                              const RecursionContext& ctx) {
  const cdouble iw = cdouble(0.0, 1.0) * ctx.omega;
  const SurfaceSymbolAlgebra& a = ctx.alg;
  switch (ell) {
    case 1: {
      ProfileVector bracket = apply(a.cross_n, u.differentiate()) - v * iw;
      return apply(a.c_gamma(), u) * cdouble(-1.0) + bracket.mul_by_eta() * cdouble(2.0 * a.h);
    }
    case 2: {
      ProfileVector bracket = apply(a.cross_n, u.differentiate()) - v * iw;
      return apply(a.c_gammaM(), u).mul_by_eta() * cdouble(-1.0) +
             bracket.mul_by_eta().mul_by_eta() * cdouble(a.g);
    }
    default:
      throw std::invalid_argument("apply_AE: ell must be 1 or 2");
  }
}

struct LayerState {
  // E[k] is the normalized electric profile of order k (equal to the
  // unnormalized order k+1), H[k] the magnetic profile of order k
  std::vector<ProfileVector> E, H;
  RecursionContext ctx;

  int max_order() const { return int(H.size()) - 1; }

  // unnormalized electric field of order ell (order 0 vanishes identically)
  ProfileVector electric_unnormalized(int ell) const {
    if (ell == 0) return {};
    if (ell - 1 > max_order()) throw std::out_of_range("electric_unnormalized: order not computed");
    return E[std::size_t(ell) - 1];
  }
};

// traces[l] = tangential algebra coefficients of H^l_{e,T} on Gamma, l = 0..k
inline LayerState run_recursion(const RecursionContext& ctx, const std::vector<CVec3>& traces,
                                int k) {
  if (int(traces.size()) < k + 1)
    throw std::invalid_argument("run_recursion: need a trace per order 0..k");
  const cdouble iw = cdouble(0.0, 1.0) * ctx.omega;
  const double trim = 1e-13;

  LayerState st;
  st.ctx = ctx;
  for (int order = 0; order <= k; ++order) {
    ProfileVector f, gE;  // right-hand sides, polynomial parts of (..)e^{-sqrt(i) eta}
    for (int ell = 1; ell <= 4 && order - ell >= 0; ++ell)
      f = f + apply_AH(ell, st.E[std::size_t(order - ell)], st.H[std::size_t(order - ell)], ctx);
    for (int ell = 1; ell <= 2 && order - ell >= 0; ++ell)
      gE = gE + apply_AE(ell, st.E[std::size_t(order - ell)], st.H[std::size_t(order - ell)], ctx);

    // projection on n: the first equation gives E.n, the second H.n
    ProfileVector Hk;
    Hk[2] = gE[2] * (1.0 / iw);

    // tangential magnetic components solve (d^2 - i) v = g~ e^{-sqrt(i) eta},
    // g~ = n x d_eta(f e) - (1/w) g_T, with BC v(0) = H^order_{e,T}
    ProfileVector gt = apply(ctx.alg.cross_n, f.differentiate()) * cdouble(-1.0);
    for (int i = 0; i < 2; ++i) {
      gt[i] = gt[i] - gE[i] * cdouble(1.0 / ctx.omega);
      Hk[i] = polyexp::solve_layer_ode(gt[i], traces[std::size_t(order)][i]);
    }

    // first equation recovers the full electric vector
    ProfileVector Ek =
        (f - apply(ctx.alg.cross_n, Hk.differentiate())) * cdouble(ctx.omega);

    st.H.push_back(Hk.trimmed(trim));
    st.E.push_back(Ek.trimmed(trim));
  }
  return st;
}

// E^ell_i x n at eta = 0 (the interface datum passed to the exterior
// expansion); ell = 0 vanishes identically
inline CVec3 trace_Ek_cross_n(const LayerState& st, int ell) {
  if (ell == 0) return {};
  if (ell - 1 > st.max_order()) throw std::out_of_range("trace_Ek_cross_n: order not computed");
  return st.ctx.alg.cross_n * st.E[std::size_t(ell) - 1].coeff(0);
}

// ---------------------------------------------------------------------------
// impedance operators and the trace-identity right-hand sides, as matrices
// on the algebra coordinates (the per-mode scalar symbols live in gibc.hpp;
// on a sphere mode the two agree family by family)
// ---------------------------------------------------------------------------

inline CMat3 inverse(const CMat3& A) {
  std::array<std::array<cdouble, 3>, 3> M{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[std::size_t(i)][std::size_t(j)] = A(i, j);
  CMat3 inv;
  for (int j = 0; j < 3; ++j) {
    std::array<cdouble, 3> e{};
    e[std::size_t(j)] = 1.0;
    auto x = solve_dense<3>(M, e);
    for (int i = 0; i < 3; ++i) inv(i, j) = x[std::size_t(i)];
  }
  return inv;
}

namespace detail {
inline CMat3 project_tangential(const CMat3& A) {
  CMat3 P = CMat3::tangential_identity();
  return P * A * P;
}
}  // namespace detail

// Yosida resolvents (1 - d^2 grad div)^{-1} and (1 + d^2 Rot rot)^{-1}
inline CMat3 yosida_A(const SurfaceSymbolAlgebra& a, double delta) {
  CMat3 I = CMat3::identity();
  return detail::project_tangential(inverse(I - a.grad_div() * cdouble(delta * delta)));
}
inline CMat3 yosida_B(const SurfaceSymbolAlgebra& a, double delta) {
  CMat3 I = CMat3::identity();
  return detail::project_tangential(inverse(I + a.rot_rot() * cdouble(delta * delta)));
}

// D^{delta,k} for k = 0..3 (k = 3 is the regularized operator)
inline CMat3 impedance_matrix(const RecursionContext& ctx, double delta, int k) {
  const SurfaceSymbolAlgebra& a = ctx.alg;
  CMat3 Ig = CMat3::tangential_identity();
  CMat3 HmC = a.H - a.C;
  cdouble ew2 = ctx.eps_r * ctx.omega * ctx.omega;
  switch (k) {
    case 0:
      return CMat3::zero();
    case 1:
      return Ig * (delta * sqrt_i);
    case 2:
      return Ig * (delta * sqrt_i) + HmC * cdouble(delta * delta);
    case 3: {
      CMat3 A = yosida_A(a, delta), B = yosida_B(a, delta);
      cdouble d3 = delta * delta * delta;
      cdouble q = std::sqrt(2.0) / 4.0 * delta;
      CMat3 curv = a.C * a.C - a.H * a.H + Ig * ew2;
      return Ig * (delta * sqrt_i * 0.5) + HmC * cdouble(delta * delta) +
             curv * (d3 / (2.0 * sqrt_i)) +
             (A + a.rot_rot() * B * cdouble(delta * delta)) * q +
             (B - a.grad_div() * A * cdouble(delta * delta)) * (cdouble(0.0, 1.0) * q);
    }
    default:
      throw std::invalid_argument("impedance_matrix: k must be 0..3");
  }
}

// the raw (un-regularized) third-order operator
inline CMat3 impedance_matrix_unreg3(const RecursionContext& ctx, double delta) {
  const SurfaceSymbolAlgebra& a = ctx.alg;
  CMat3 Ig = CMat3::tangential_identity();
  cdouble ew2 = ctx.eps_r * ctx.omega * ctx.omega;
  cdouble d3 = delta * delta * delta;
  CMat3 curv = a.C * a.C - a.H * a.H + Ig * ew2 + a.grad_div() + a.rot_rot();
  return Ig * (delta * sqrt_i) + (a.H - a.C) * cdouble(delta * delta) + curv * (d3 / (2.0 * sqrt_i));
}

// remainder in D^{delta,3} = D_0^{delta,3} + delta^5 R^{delta,3}; expanding
// the Yosida terms gives R = (sqrt2/4)(1-i)[A (grad div)^2 - B (Rot rot)^2]
inline CMat3 remainder_matrix(const RecursionContext& ctx, double delta) {
  const SurfaceSymbolAlgebra& a = ctx.alg;
  CMat3 A = yosida_A(a, delta), B = yosida_B(a, delta);
  CMat3 GD = a.grad_div(), RR = a.rot_rot();
  return (A * GD * GD - B * RR * RR) * (std::sqrt(2.0) / 4.0 * cdouble(1.0, -1.0));
}

// phi_k of the trace identity
//   E~_{e,k} x n + w D^{delta,k}(H~_{e,k})_T = delta^{k+1} phi_k;
// traces[l] holds the tangential algebra coefficients of H^l_{e,T}
inline CVec3 phi_k(const RecursionContext& ctx, const std::vector<CVec3>& traces, double delta,
                   int k) {
  if (int(traces.size()) < k + 1) throw std::invalid_argument("phi_k: need traces 0..k");
  const SurfaceSymbolAlgebra& a = ctx.alg;
  const double w = ctx.omega;
  CMat3 HmC = a.H - a.C;
  switch (k) {
    case 0:
      return {};
    case 1:
      return traces[1] * (sqrt_i * w);
    case 2:
      return (traces[2] * sqrt_i + HmC * (traces[1] + traces[2] * cdouble(delta))) * cdouble(w);
    case 3: {
      cdouble ew2 = ctx.eps_r * w * w;
      CMat3 curv = a.C * a.C - a.H * a.H + CMat3::tangential_identity() * ew2 + a.grad_div() +
                   a.rot_rot();
      CVec3 h123 = traces[1] + traces[2] * cdouble(delta) + traces[3] * cdouble(delta * delta);
      CVec3 phi30 = (traces[3] * sqrt_i + HmC * (traces[2] + traces[3] * cdouble(delta)) +
                     curv * h123 * (1.0 / (2.0 * sqrt_i))) *
                    cdouble(w);
      CVec3 htilde{};
      cdouble dl = 1.0;
      for (int l = 0; l <= 3; ++l, dl *= delta) htilde = htilde + traces[std::size_t(l)] * dl;
      return phi30 + remainder_matrix(ctx, delta) * htilde * cdouble(w * delta);
    }
    default:
      throw std::invalid_argument("phi_k: k must be 0..3");
  }
}

}  // namespace skinlayer::blprofiles
