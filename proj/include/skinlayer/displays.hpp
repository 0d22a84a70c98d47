#pragma once

// Closed forms of the first boundary-layer profiles and interface traces,
// written directly from the explicit order-0..2 solutions. This is a second
// route to the same objects `run_recursion` produces; the two must agree
// coefficient-wise, and the frozen tables under tests/golden pin both.
//
// Inputs are the tangential trace coefficients t0, t1, t2 of H^0, H^1, H^2
// on Gamma in algebra coordinates.

#include "skinlayer/blprofiles.hpp"

namespace skinlayer::displays {

using blprofiles::ProfileVector;
using blprofiles::RecursionContext;

namespace detail {
inline ProfileVector make(const std::vector<CVec3>& coeffs) {
  ProfileVector r;
  for (int i = 0; i < 3; ++i) {
    std::vector<cdouble> c;
    for (const auto& v : coeffs) c.push_back(v[i]);
    r[i] = polyexp::PolyExpProfile(std::move(c));
  }
  return r;
}
}  // namespace detail

inline ProfileVector H0(const RecursionContext& ctx, const CVec3& t0) {
  (void)ctx;
  return detail::make({t0});
}

inline ProfileVector E0(const RecursionContext& ctx, const CVec3& t0) {
  return detail::make({ctx.alg.cross_n * t0 * (sqrt_i * ctx.omega)});
}

inline ProfileVector H1_tangential(const RecursionContext& ctx, const CVec3& t0,
                                   const CVec3& t1) {
  return detail::make({t1, ctx.alg.H * t0 * cdouble(-1.0)});
}

inline cdouble H1_normal(const RecursionContext& ctx, const CVec3& t0) {
  return (ctx.alg.rot * (ctx.alg.cross_n * t0) * (-1.0 / sqrt_i))[2];
}

inline cdouble E1_normal(const RecursionContext& ctx, const CVec3& t0) {
  return (ctx.alg.rot * t0 * cdouble(ctx.omega))[2];
}

inline ProfileVector E1_cross_n(const RecursionContext& ctx, const CVec3& t0, const CVec3& t1) {
  const auto& a = ctx.alg;
  CVec3 c0 = (t1 * (-sqrt_i) + (a.C - a.H) * t0) * cdouble(ctx.omega);
  CVec3 c1 = a.H * t0 * (sqrt_i * ctx.omega);
  return detail::make({c0, c1});
}

inline ProfileVector H2_tangential(const RecursionContext& ctx, const CVec3& t0, const CVec3& t1,
                                   const CVec3& t2) {
  const auto& a = ctx.alg;
  cdouble ew2 = ctx.eps_r * ctx.omega * ctx.omega;
  CMat3 Ig = CMat3::tangential_identity();
  CMat3 C2mH2 = a.C * a.C - a.H * a.H;
  CMat3 DL = a.laplace_beltrami();
  cdouble inv2s = 1.0 / (2.0 * sqrt_i);
  CVec3 c1 = (a.H * t1 + C2mH2 * t0 * inv2s - (DL + Ig * ew2) * t0 * inv2s) * cdouble(-1.0);
  CVec3 c2 = (a.H * (a.H * t0) * 3.0 - a.G * t0) * 0.5;
  return detail::make({t2, c1, c2});
}

inline ProfileVector E2_cross_n(const RecursionContext& ctx, const CVec3& t0, const CVec3& t1,
                                const CVec3& t2) {
  const auto& a = ctx.alg;
  cdouble w = ctx.omega;
  cdouble ew2 = ctx.eps_r * ctx.omega * ctx.omega;
  CMat3 Ig = CMat3::tangential_identity();
  CMat3 C2mH2 = a.C * a.C - a.H * a.H;
  CMat3 DL = a.laplace_beltrami();
  cdouble inv2s = 1.0 / (2.0 * sqrt_i);
  CVec3 c0 = (t2 * (-sqrt_i) + (a.C - a.H) * t1 - C2mH2 * t0 * inv2s -
              (Ig * ew2 + a.grad_div() + a.rot_rot()) * t0 * inv2s) *
             w;
  CVec3 c1 = (a.H * t1 * sqrt_i +
              (a.H * a.H * 5.0 - a.H * a.C * 6.0 + a.C * a.C - DL - Ig * ew2) * t0 * 0.5) *
             w;
  CVec3 c2 = (a.H * (a.H * t0) * 3.0 - a.G * t0) * (-0.5 * sqrt_i) * w;
  return detail::make({c0, c1, c2});
}

// interface traces E^l_i(.,0) x n, l = 1, 2, 3
inline CVec3 trace1(const RecursionContext& ctx, const CVec3& t0) {
  return t0 * (-sqrt_i * ctx.omega);
}

inline CVec3 trace2(const RecursionContext& ctx, const CVec3& t0, const CVec3& t1) {
  return (t1 * (-sqrt_i) + (ctx.alg.C - ctx.alg.H) * t0) * cdouble(ctx.omega);
}

inline CVec3 trace3(const RecursionContext& ctx, const CVec3& t0, const CVec3& t1,
                    const CVec3& t2) {
  const auto& a = ctx.alg;
  cdouble ew2 = ctx.eps_r * ctx.omega * ctx.omega;
  CMat3 Ig = CMat3::tangential_identity();
  cdouble inv2s = 1.0 / (2.0 * sqrt_i);
  return (t2 * (-sqrt_i) + (a.C - a.H) * t1 - (a.C * a.C - a.H * a.H) * t0 * inv2s -
          (Ig * ew2 + a.grad_div() + a.rot_rot()) * t0 * inv2s) *
         cdouble(ctx.omega);
}

}  // namespace skinlayer::displays
