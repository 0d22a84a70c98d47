#pragma once

// Surface differential geometry on parametric charts: principal curvatures
// and the derived tensor family (C, H, G, M, R_nu), the layer Jacobian
// J(nu) = det(I + nu C) = 1 + 2 nu h + nu^2 g, and the curl operator in local
// coordinates
//   J(nu) curl V = (C_G + nu C_G^M) Vhat - J(nu) d_nu(Vhat x n),
// with the surface operators evaluated by finite differences on the chart.
// Charts fix the normal as xu x xv (sphere/ellipsoid: outward); all identities
// checked here are covariant under flipping it.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "skinlayer/types.hpp"

namespace skinlayer::geometry {

struct CurvatureData {
  double c1 = 0, c2 = 0;       // principal curvatures
  Vec3 tau1, tau2, normal;     // orthonormal frame, tau2 = normal x tau1

  double h() const { return 0.5 * (c1 + c2); }  // mean curvature
  double g() const { return c1 * c2; }          // Gaussian curvature
};

struct SurfaceTensor {
  Mat3 mat;
  bool tangential = true;
};

inline Mat3 tangential_projector(const CurvatureData& cd) {
  return Mat3::outer(cd.tau1, cd.tau1) + Mat3::outer(cd.tau2, cd.tau2);
}
inline SurfaceTensor curvature_tensor(const CurvatureData& cd) {
  return {Mat3::outer(cd.tau1, cd.tau1) * cd.c1 + Mat3::outer(cd.tau2, cd.tau2) * cd.c2, true};
}
inline SurfaceTensor mean_curvature_tensor(const CurvatureData& cd) {
  return {tangential_projector(cd) * cd.h(), true};
}
inline SurfaceTensor gauss_curvature_tensor(const CurvatureData& cd) {
  return {tangential_projector(cd) * cd.g(), true};
}
// (I + nu C) R_nu = I_G
inline SurfaceTensor r_nu_tensor(const CurvatureData& cd, double nu) {
  return {Mat3::outer(cd.tau1, cd.tau1) * (1.0 / (1.0 + nu * cd.c1)) +
              Mat3::outer(cd.tau2, cd.tau2) * (1.0 / (1.0 + nu * cd.c2)),
          true};
}

inline double jacobian(double nu, const CurvatureData& cd) {
  return 1.0 + 2.0 * nu * cd.h() + nu * nu * cd.g();
}

// largest layer thickness guaranteed to keep J positive
inline double nubar_default(const CurvatureData& cd) {
  double cmax = std::max(std::abs(cd.c1), std::abs(cd.c2));
  return cmax > 0 ? 0.5 / cmax : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// tensor / vector identity reports
// ---------------------------------------------------------------------------

struct TensorIdentityReport {
  double m_vs_2h_minus_c = 0;   // |M - (2H - C)| with M := (J R_nu - I_G)/nu
  double mc_vs_g = 0;           // |M C - G|
  double inv_identity = 0;      // |(I + nu C) R_nu - I_G|
  double jacobian_vs_det = 0;   // |J(nu) - det(I + nu C)|
  double max_residual() const {
    return std::max({m_vs_2h_minus_c, mc_vs_g, inv_identity, jacobian_vs_det});
  }
};

inline TensorIdentityReport tensor_identities(const CurvatureData& cd, double nu = 0.0) {
  if (nu == 0.0) nu = 0.4 * std::min(1.0, nubar_default(cd));
  Mat3 Ig = tangential_projector(cd);
  Mat3 C = curvature_tensor(cd).mat;
  Mat3 H = mean_curvature_tensor(cd).mat;
  Mat3 G = gauss_curvature_tensor(cd).mat;
  Mat3 Rnu = r_nu_tensor(cd, nu).mat;
  double J = jacobian(nu, cd);

  TensorIdentityReport rep;
  Mat3 M = (Rnu * J - Ig) * (1.0 / nu);  // defining relation I_G + nu M = J R_nu
  rep.m_vs_2h_minus_c = max_abs(M - (H * 2.0 - C));
  rep.mc_vs_g = max_abs(M * C - G);
  Mat3 IpnuC = Mat3::identity() + C * nu;  // acts as I_G + nu C on the tangent plane
  rep.inv_identity = max_abs(IpnuC * Rnu - Ig);
  rep.jacobian_vs_det = std::abs(J - det(IpnuC));
  return rep;
}

struct VectorIdentityReport {
  double cross_collapse = 0;   // (C(Vxn))xn - CV + 2HV
  double hc_identity = 0;      // {C((H-C)Vxn)}xn - (3hC - C^2 - 2H^2)V
  double c2h_identity = 0;     // (C(Vxn))xn - (C-2H)V
  double hcg_identity = 0;     // {(3HC-G)(Vxn)}xn - (3HC + G - 6H^2)V
  double max_residual() const {
    return std::max({cross_collapse, hc_identity, c2h_identity, hcg_identity});
  }
};

inline VectorIdentityReport vector_identities(const CurvatureData& cd, const Vec3& V) {
  if (std::abs(dot(V, cd.normal)) > 1e-12 * (1.0 + norm(V)))
    throw std::invalid_argument("vector_identities: V must be tangential");
  Mat3 C = curvature_tensor(cd).mat;
  Mat3 H = mean_curvature_tensor(cd).mat;
  Mat3 G = gauss_curvature_tensor(cd).mat;
  const Vec3& n = cd.normal;
  double h = cd.h();

  auto xn = [&n](const Vec3& w) { return cross(w, n); };
  VectorIdentityReport rep;
  rep.cross_collapse = norm(xn(C * xn(V)) - C * V + 2.0 * (H * V));
  rep.hc_identity = norm(xn(C * xn((H - C) * V)) - (C * (3.0 * h) - C * C - (H * H) * 2.0) * V);
  rep.c2h_identity = norm(xn(C * xn(V)) - (C - H * 2.0) * V);
  rep.hcg_identity = norm(xn((H * C * 3.0 - G) * xn(V)) - (H * C * 3.0 + G - (H * H) * 6.0) * V);
  return rep;
}

// ---------------------------------------------------------------------------
// parametric surfaces
// ---------------------------------------------------------------------------

class ParametricSurface {
 public:
  struct Jet {
    Vec3 x, xu, xv, xuu, xuv, xvv;
  };
  using ChartFn = std::function<Jet(double, double)>;

  ParametricSurface(ChartFn chart, double u0, double u1, double v0, double v1)
      : chart_(std::move(chart)), u0_(u0), u1_(u1), v0_(v0), v1_(v1) {}

  static ParametricSurface sphere(double R) {
    auto chart = [R](double u, double v) {
      double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
      Jet j;
      j.x = {R * su * cv, R * su * sv, R * cu};
      j.xu = {R * cu * cv, R * cu * sv, -R * su};
      j.xv = {-R * su * sv, R * su * cv, 0};
      j.xuu = {-R * su * cv, -R * su * sv, -R * cu};
      j.xuv = {-R * cu * sv, R * cu * cv, 0};
      j.xvv = {-R * su * cv, -R * su * sv, 0};
      return j;
    };
    return {chart, 0.25, pi - 0.25, 0.0, 2.0 * pi};
  }

  static ParametricSurface ellipsoid(double a, double b, double c) {
    auto chart = [a, b, c](double u, double v) {
      double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
      Jet j;
      j.x = {a * su * cv, b * su * sv, c * cu};
      j.xu = {a * cu * cv, b * cu * sv, -c * su};
      j.xv = {-a * su * sv, b * su * cv, 0};
      j.xuu = {-a * su * cv, -b * su * sv, -c * cu};
      j.xuv = {-a * cu * sv, b * cu * cv, 0};
      j.xvv = {-a * su * cv, -b * su * sv, 0};
      return j;
    };
    return {chart, 0.25, pi - 0.25, 0.0, 2.0 * pi};
  }

  static ParametricSurface torus(double R0, double r0) {
    auto chart = [R0, r0](double u, double v) {
      double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
      double w = R0 + r0 * cu;
      Jet j;
      j.x = {w * cv, w * sv, r0 * su};
      j.xu = {-r0 * su * cv, -r0 * su * sv, r0 * cu};
      j.xv = {-w * sv, w * cv, 0};
      j.xuu = {-r0 * cu * cv, -r0 * cu * sv, -r0 * su};
      j.xuv = {r0 * su * sv, -r0 * su * cv, 0};
      j.xvv = {-w * cv, -w * sv, 0};
      return j;
    };
    return {chart, 0.0, 2.0 * pi, 0.0, 2.0 * pi};
  }

  Jet jet(double u, double v) const { return chart_(u, v); }
  Vec3 point(double u, double v) const { return chart_(u, v).x; }
  Vec3 normal(double u, double v) const {
    Jet j = chart_(u, v);
    return normalized(cross(j.xu, j.xv));
  }

  double u0() const { return u0_; }
  double u1() const { return u1_; }
  double v0() const { return v0_; }
  double v1() const { return v1_; }

  // principal curvatures and frame from the fundamental forms; the curvature
  // tensor is C = grad_G n with n = (xu x xv)/|xu x xv|, so C xu = d_u n and
  // the chart matrix of C is -I_f^{-1} II.
  CurvatureData curvature(double u, double v) const {
    Jet j = chart_(u, v);
    Vec3 n = normalized(cross(j.xu, j.xv));
    double E = dot(j.xu, j.xu), F = dot(j.xu, j.xv), G2 = dot(j.xv, j.xv);
    double L = dot(j.xuu, n), M = dot(j.xuv, n), N = dot(j.xvv, n);
    double detI = E * G2 - F * F;
    if (detI <= 0) throw std::domain_error("curvature: degenerate chart point");

    // A = -I_f^{-1} II, the matrix of C in the (xu, xv) basis
    double a11 = -(G2 * L - F * M) / detI, a12 = -(G2 * M - F * N) / detI;
    double a21 = -(E * M - F * L) / detI, a22 = -(E * N - F * M) / detI;
    double tr = a11 + a22, dt = a11 * a22 - a12 * a21;
    double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - dt));
    double k1 = 0.5 * tr + disc, k2 = 0.5 * tr - disc;

    CurvatureData cd;
    cd.normal = n;
    cd.c1 = k1;
    cd.c2 = k2;
    if (disc > 1e-9 * (std::abs(k1) + std::abs(k2) + 1e-30)) {
      // null vector of A - k1 in chart coordinates; both rows give one, keep
      // the better conditioned
      double wa_u = -a12, wa_v = a11 - k1;
      double wb_u = a22 - k1, wb_v = -a21;
      bool use_a = std::abs(wa_u) + std::abs(wa_v) >= std::abs(wb_u) + std::abs(wb_v);
      double w1u = use_a ? wa_u : wb_u, w1v = use_a ? wa_v : wb_v;
      cd.tau1 = normalized(j.xu * w1u + j.xv * w1v);
    } else {
      cd.tau1 = normalized(j.xu);  // umbilic point: any tangent direction
    }
    cd.tau2 = normalized(cross(n, cd.tau1));
    return cd;
  }

 private:
  ChartFn chart_;
  double u0_, u1_, v0_, v1_;
};

// ---------------------------------------------------------------------------
// curl in local coordinates
// ---------------------------------------------------------------------------

// ambient vector field restricted to the collar Gamma x (0, nubar)
struct LocalField {
  std::function<Vec3(const Vec3&)> value;
};

struct CurlOptions {
  double h_chart = 1e-5;   // chart-coordinate FD step
  double h_nu = 1e-5;      // normal-coordinate FD step
  bool richardson = true;  // one level of step-halving extrapolation
};

namespace detail {

template <class T, class F>
T central_diff(F&& f, double h, bool richardson) {
  T d1 = (f(h) - f(-h)) * (1.0 / (2.0 * h));
  if (!richardson) return d1;
  T d2 = (f(0.5 * h) - f(-0.5 * h)) * (1.0 / h);
  return d2 * (4.0 / 3.0) - d1 * (1.0 / 3.0);
}

}  // namespace detail

// curl V at x = x_G(u,v) + nu n(u,v), evaluated through the local-coordinate
// identity rather than ambient differentiation.
inline Vec3 curl_local(const ParametricSurface& surf, const LocalField& field, double u, double v,
                       double nu, const CurlOptions& opt = {}) {
  CurvatureData cd = surf.curvature(u, v);
  double J = jacobian(nu, cd);
  if (J <= 0) throw std::domain_error("curl_local: J(nu) <= 0, point outside the collar");

  ParametricSurface::Jet jet = surf.jet(u, v);
  const Vec3 n = cd.normal;
  double E = dot(jet.xu, jet.xu), F = dot(jet.xv, jet.xu), G2 = dot(jet.xv, jet.xv);
  double detI = E * G2 - F * F;

  // field pulled back to the chart at fixed nu
  auto vhat = [&](double uu, double vv) {
    ParametricSurface::Jet jj = surf.jet(uu, vv);
    Vec3 nn = normalized(cross(jj.xu, jj.xv));
    return field.value(jj.x + nu * nn);
  };
  auto nrm = [&](double uu, double vv) {
    ParametricSurface::Jet jj = surf.jet(uu, vv);
    return normalized(cross(jj.xu, jj.xv));
  };

  const double h = opt.h_chart;
  auto du3 = [&](auto&& f) {
    return detail::central_diff<Vec3>([&](double e) { return f(u + e, v); }, h, opt.richardson);
  };
  auto dv3 = [&](auto&& f) {
    return detail::central_diff<Vec3>([&](double e) { return f(u, v + e); }, h, opt.richardson);
  };

  // grad_G of a scalar s(u,v): g^{ij} d_j s x_i
  auto grad_surface = [&](auto&& s) {
    double su = detail::central_diff<double>([&](double e) { return s(u + e, v); }, h, opt.richardson);
    double sv = detail::central_diff<double>([&](double e) { return s(u, v + e); }, h, opt.richardson);
    double au = (G2 * su - F * sv) / detI;
    double av = (E * sv - F * su) / detI;
    return jet.xu * au + jet.xv * av;
  };
  // (A grad)_dot W = sum_i (A grad_G W_i)_i for an R^3-valued chart field W
  auto a_grad_dot = [&](const Mat3& A, auto&& W) {
    Vec3 Wu = du3(W), Wv = dv3(W);
    double s = 0;
    // grad_G W_i = au_i xu + av_i xv with (au, av) from the inverse metric
    Vec3 au = (Wu * G2 - Wv * F) * (1.0 / detI);
    Vec3 av = (Wv * E - Wu * F) * (1.0 / detI);
    // component i of A(grad_G W_i), summed over i
    Vec3 gx = A * (jet.xu * au.x + jet.xv * av.x);
    Vec3 gy = A * (jet.xu * au.y + jet.xv * av.y);
    Vec3 gz = A * (jet.xu * au.z + jet.xv * av.z);
    s = gx.x + gy.y + gz.z;
    return s;
  };

  Mat3 Ig = tangential_projector(cd);
  Mat3 C = curvature_tensor(cd).mat;
  Mat3 M = mean_curvature_tensor(cd).mat * 2.0 - C;
  Mat3 G = gauss_curvature_tensor(cd).mat;

  Vec3 V = vhat(u, v);
  auto v_cross_n = [&](double uu, double vv) { return cross(vhat(uu, vv), nrm(uu, vv)); };
  auto v_dot_n = [&](double uu, double vv) { return dot(vhat(uu, vv), nrm(uu, vv)); };

  double rot_v = a_grad_dot(Ig, v_cross_n);       // rot_G Vhat = div_G(Vhat x n)
  double rotM_v = a_grad_dot(M, v_cross_n);       // (M grad) . (Vhat x n)
  Vec3 grad_vn = grad_surface(v_dot_n);
  Vec3 Rot_vn = cross(grad_vn, n);                // Rot_G(Vhat . n)
  Vec3 RotM_vn = cross(M * grad_vn, n);           // (M grad(Vhat . n)) x n

  Vec3 CG = n * rot_v + Rot_vn - cross(C * V, n);
  Vec3 CGM = n * rotM_v + RotM_vn - cross(G * V, n);

  // d_nu(Vhat x n) at fixed chart point (n frozen)
  Vec3 x0 = jet.x;
  Vec3 dnu = detail::central_diff<Vec3>(
      [&](double e) { return cross(field.value(x0 + (nu + e) * n), n); }, opt.h_nu,
      opt.richardson);

  return (CG + nu * CGM - J * dnu) * (1.0 / J);
}

// reference Cartesian curl by central differences (oracle-grade helper)
inline Vec3 curl_cartesian_fd(const LocalField& field, const Vec3& x, double h,
                              bool richardson = true) {
  auto d = [&](int dir) {
    Vec3 e{dir == 0 ? 1.0 : 0.0, dir == 1 ? 1.0 : 0.0, dir == 2 ? 1.0 : 0.0};
    return detail::central_diff<Vec3>([&](double t) { return field.value(x + t * e); }, h,
                                      richardson);
  };
  Vec3 dx = d(0), dy = d(1), dz = d(2);
  return {dy.z - dz.y, dz.x - dx.z, dx.y - dy.x};
}

}  // namespace skinlayer::geometry
