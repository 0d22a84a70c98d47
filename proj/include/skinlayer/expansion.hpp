#pragma once

// Exterior expansion terms (E_e^l, H_e^l), the trace identity that ties them
// to the impedance symbols, and the convergence-rate studies.
//
// Order 0 solves the perfect-conductor problem with the outer datum; order
// l >= 1 has zero outer datum and receives E^l_i(.,0) x n from the layer
// recursion, which in turn consumes the tangential magnetic traces of the
// previous exterior orders.

#include <string>
#include <vector>

#include "skinlayer/blprofiles.hpp"
#include "skinlayer/modal.hpp"

namespace skinlayer::modal {

namespace detail {

inline int trace_slot(Polarization pol) {
  // TM traces live on the curl-family slot, TE on the gradient-family slot
  return pol == Polarization::TM ? 1 : 0;
}

inline blprofiles::RecursionContext recursion_context(const ProblemConfig& cfg, int degree) {
  blprofiles::RecursionContext ctx;
  ctx.alg = blprofiles::SurfaceSymbolAlgebra::sphere_mode(cfg.R, degree);
  ctx.omega = cfg.omega;
  ctx.eps_r = cfg.eps_r;
  return ctx;
}

}  // namespace detail

inline std::vector<ExpansionTerm> expansion_terms(const ProblemConfig& cfg, int degree,
                                                  Polarization pol, int k) {
  cfg.validate();
  if (k < 0 || k > 3) throw std::invalid_argument("expansion_terms: k must be 0..3");
  auto ctx = detail::recursion_context(cfg, degree);
  int slot = detail::trace_slot(pol);

  std::vector<ExpansionTerm> terms;
  std::vector<CVec3> h_traces;
  for (int ell = 0; ell <= k; ++ell) {
    CVec3 datum{};
    if (ell > 0) {
      auto st = blprofiles::run_recursion(ctx, h_traces, ell - 1);
      datum = blprofiles::trace_Ek_cross_n(st, ell);
    }
    ModalSolution sol =
        solve_exterior_with_datum(cfg, degree, pol, datum[slot], ell == 0 ? 1.0 : 0.0);
    GammaTraces tr = gamma_traces(cfg, sol);
    ExpansionTerm term;
    term.alpha = sol.alpha;
    term.beta = sol.beta;
    term.h_trace = tr.h_tangential;
    term.exn_trace = datum;
    terms.push_back(term);
    h_traces.push_back(tr.h_tangential);
  }
  return terms;
}

// ---------------------------------------------------------------------------
// trace identity   E~_{e,k} x n + w D^{delta,k}(H~_{e,k})_T = delta^{k+1} phi_k
// ---------------------------------------------------------------------------

struct TraceIdentityResult {
  double residual = 0;  // max-abs of the defect
  double scale = 0;     // max-abs of the largest participating term
  double relative() const { return scale > 0 ? residual / scale : 0.0; }
};

inline TraceIdentityResult trace_identity_residual(const ProblemConfig& cfg, int degree,
                                                   Polarization pol, int k) {
  auto ctx = detail::recursion_context(cfg, degree);
  auto terms = expansion_terms(cfg, degree, pol, k);

  std::vector<CVec3> h_traces;
  CVec3 e_sum{}, h_sum{};
  cdouble dl = 1.0;
  for (int ell = 0; ell <= k; ++ell, dl *= cfg.delta) {
    ModalSolution sol;
    sol.degree = degree;
    sol.pol = pol;
    sol.alpha = terms[std::size_t(ell)].alpha;
    sol.beta = terms[std::size_t(ell)].beta;
    GammaTraces tr = gamma_traces(cfg, sol);
    e_sum = e_sum + tr.e_cross_n * dl;
    h_sum = h_sum + tr.h_tangential * dl;
    h_traces.push_back(tr.h_tangential);
  }

  CVec3 dh = blprofiles::impedance_matrix(ctx, cfg.delta, k) * h_sum * cdouble(cfg.omega);
  CVec3 phi = blprofiles::phi_k(ctx, h_traces, cfg.delta, k);
  double dk1 = std::pow(cfg.delta, k + 1);
  CVec3 defect = e_sum + dh - phi * cdouble(dk1);

  TraceIdentityResult r;
  r.residual = max_abs(defect);
  // the d1-sized impedance of the magnetic trace anchors the scale when every
  // participating term vanishes identically (k = 0 is exactly PEC)
  r.scale = std::max({max_abs(e_sum), max_abs(dh), dk1 * max_abs(phi),
                      cfg.omega * cfg.delta * max_abs(h_sum), 1e-300});
  return r;
}

// ---------------------------------------------------------------------------
// rate studies
// ---------------------------------------------------------------------------

enum class StudyKind {
  gibc_vs_exact,        // || E^delta_e - E^{delta,k}_e ||
  truncation_vs_exact,  // || E^delta_e - sum_l delta^l E^l_e ||
  gibc_vs_truncation,   // || E^{delta,k}_e - sum_l delta^l E^l_e ||
};

inline const char* to_string(StudyKind k) {
  switch (k) {
    case StudyKind::gibc_vs_exact: return "gibc_vs_exact";
    case StudyKind::truncation_vs_exact: return "truncation_vs_exact";
    default: return "gibc_vs_truncation";
  }
}

struct RatePoint {
  double delta = 0;
  double error = 0;
  double max_condition = 0;
};

struct RateReport {
  int k = 0;
  StudyKind kind = StudyKind::gibc_vs_exact;
  std::vector<int> degrees;
  std::string excitation;  // human-readable sweep description
  std::vector<RatePoint> points;
  double slope = 0;        // least-squares log-log fit
};

inline double fit_loglog_slope(const std::vector<RatePoint>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : pts) {
    if (!(p.error > 0)) continue;
    double x = std::log(p.delta), y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::runtime_error("fit_loglog_slope: need >= 2 positive errors");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline RateReport rate_study(const ProblemConfig& base, int k, const std::vector<double>& deltas,
                             const std::vector<int>& degrees,
                             StudyKind kind = StudyKind::gibc_vs_exact) {
  if (deltas.size() < 4) throw std::invalid_argument("rate_study: need >= 4 delta values");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (!(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("rate_study: delta list must be strictly decreasing");

  RateReport rep;
  rep.k = k;
  rep.kind = kind;
  rep.degrees = degrees;
  rep.excitation = "unit modal datum at R_out, degrees n in sweep, both polarizations";

  for (double d : deltas) {
    ProblemConfig cfg = base;
    cfg.delta = d;
    double err2 = 0;
    double cond = 0;
    for (int degree : degrees) {
      for (Polarization pol : {Polarization::TM, Polarization::TE}) {
        try {
          double e = 0;
          if (kind == StudyKind::gibc_vs_exact) {
            ModalSolution ex = solve_exact(cfg, degree, pol);
            ModalSolution gb = solve_gibc(cfg, degree, pol, k);
            e = hcurl_error(cfg, ex, gb);
            cond = std::max({cond, ex.condition, gb.condition});
          } else if (kind == StudyKind::truncation_vs_exact) {
            ModalSolution ex = solve_exact(cfg, degree, pol);
            auto terms = expansion_terms(cfg, degree, pol, k);
            e = hcurl_error(cfg, ex, terms);
            cond = std::max(cond, ex.condition);
          } else {
            ModalSolution gb = solve_gibc(cfg, degree, pol, k);
            auto terms = expansion_terms(cfg, degree, pol, k);
            e = hcurl_error(cfg, gb, terms);
            cond = std::max(cond, gb.condition);
          }
          err2 += e * e;
        } catch (const std::exception& ex) {
          throw std::runtime_error("rate_study: solve failed at degree " +
                                   std::to_string(degree) + ", pol " + to_string(pol) +
                                   ", delta " + std::to_string(d) + ": " + ex.what());
        }
      }
    }
    rep.points.push_back({d, std::sqrt(err2), cond});
  }
  rep.slope = fit_loglog_slope(rep.points);
  return rep;
}

}  // namespace skinlayer::modal
