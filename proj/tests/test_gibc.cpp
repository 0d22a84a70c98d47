#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "skinlayer/gibc.hpp"

using namespace skinlayer;
using namespace skinlayer::gibc;

namespace {
double rel(cdouble got, cdouble want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}
ModeIndex mode_with_lambda(VshFamily fam, double lam) {
  return {1, fam, std::sqrt(2.0 / lam)};
}
}  // namespace

TEST_CASE("skin depth") {
  CHECK(skin_depth(1.0, 100.0) == Catch::Approx(0.1).epsilon(1e-15));
  CHECK(skin_depth(4.0, 0.25) == Catch::Approx(1.0).epsilon(1e-15));
  double om = 2.0 * pi * 1e9, sg = 5.8e7;
  CHECK(skin_depth(om, sg) == Catch::Approx(1.0 / std::sqrt(om * sg)).epsilon(1e-15));
  CHECK_THROWS_AS(skin_depth(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(skin_depth(1.0, 0.0), std::domain_error);
}

TEST_CASE("low-order symbols") {
  ModeIndex m{1, VshFamily::gradient, 1.0};
  CHECK(d_k(0, 0.2, m).value == cdouble(0.0));
  CHECK(rel(d_k(1, 0.1, m).value, {0.0707106781186548, 0.0707106781186548}) < 1e-12);
  // sphere: H - C = 0, so the second-order symbol equals the first-order one
  for (double R : {0.5, 1.0, 3.0}) {
    ModeIndex mr{2, VshFamily::curl, R};
    CHECK(d_k(2, 0.05, mr).value == d_k(1, 0.05, mr).value);
  }
  // general curvature restriction: (H-C) eigenvalues ((c2-c1)/2, (c1-c2)/2)
  double c1 = 0.9, c2 = -0.3, delta = 0.04;
  cdouble dg = d_k(2, delta, m, 1.0, 1.0, std::pair{c1, c2}).value;
  cdouble dc = d_k(2, delta, {1, VshFamily::curl, 1.0}, 1.0, 1.0, std::pair{c1, c2}).value;
  CHECK(rel(dg, delta * sqrt_i + delta * delta * 0.5 * (c2 - c1)) < 1e-14);
  CHECK(rel(dc, delta * sqrt_i + delta * delta * 0.5 * (c1 - c2)) < 1e-14);
  CHECK_THROWS_AS(d_k(3, delta, m, 1.0, 1.0, std::pair{c1, c2}), std::invalid_argument);
  CHECK_THROWS_AS(d_k(4, delta, m), std::domain_error);
}

TEST_CASE("third-order symbol at a frozen configuration") {
  // delta = 0.1, sphere R = 1, n = 1 (lambda = 2), eps_r = omega = 1;
  // values assembled independently term by term in 30-digit arithmetic
  ModeIndex g{1, VshFamily::gradient, 1.0}, c{1, VshFamily::curl, 1.0};
  CHECK(rel(d_k(3, 0.1, g).value, {0.0703709895669082737, 0.0710503666704012312}) < 1e-14);
  CHECK(rel(d_k(3, 0.1, c).value, {0.0717574734515877787, 0.0696638827857217262}) < 1e-14);
  CHECK(rel(d3_unregularized(0.1, g).value, {0.0703571247280614787, 0.0710642315092480262}) <
        1e-14);
  CHECK(rel(d3_unregularized(0.1, c).value, {0.0717713382904345737, 0.0696500179468749312}) <
        1e-14);
}

TEST_CASE("unregularized symbol: small-delta limit and direct arithmetic") {
  ModeIndex c{1, VshFamily::curl, 1.0};  // lambda = 2
  ModeIndex g{1, VshFamily::gradient, 1.0};
  double delta = 0.1;
  CHECK(rel(d3_unregularized(delta, c).value,
            delta * sqrt_i + std::pow(delta, 3) / (2.0 * sqrt_i) * cdouble(1.0 + 2.0)) < 1e-14);
  CHECK(rel(d3_unregularized(delta, g).value,
            delta * sqrt_i + std::pow(delta, 3) / (2.0 * sqrt_i) * cdouble(1.0 - 2.0)) < 1e-14);
  // delta -> 0: symbol/delta -> sqrt(i)
  CHECK(rel(d3_unregularized(1e-5, g).value / 1e-5, sqrt_i) < 1e-9);
}

TEST_CASE("remainder symbol: consistency and bounds") {
  // lambda -> 0 kills the remainder
  CHECK(std::abs(remainder_symbol(0.1, mode_with_lambda(VshFamily::gradient, 1e-12))) < 1e-20);

  // d3 = d3_unregularized + delta^5 R, checked in two forms: additively over
  // the whole (delta, lambda) box, and as the quotient (d3 - d30)/delta^5
  // where delta^4 lambda^2 is large enough that the subtraction keeps twelve
  // digits of the difference in double precision
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ud(0.01, 0.5), ul(std::log10(2.0), 6.0);
  for (int i = 0; i < 20; ++i) {
    double delta = ud(rng), lam = std::pow(10.0, ul(rng));
    for (auto fam : {VshFamily::gradient, VshFamily::curl}) {
      ModeIndex m = mode_with_lambda(fam, lam);
      cdouble d3 = d_k(3, delta, m).value;
      cdouble d30 = d3_unregularized(delta, m).value;
      cdouble d5R = std::pow(delta, 5) * remainder_symbol(delta, m);
      double scale = std::max({std::abs(d3), std::abs(d30), std::abs(d5R)});
      CHECK(std::abs(d3 - (d30 + d5R)) < 1e-12 * scale);
    }
  }
  std::uniform_real_distribution<double> udc(0.05, 0.5), ulc(2.0, 6.0);
  for (int i = 0; i < 20; ++i) {
    double delta = udc(rng), lam = std::pow(10.0, ulc(rng));
    for (auto fam : {VshFamily::gradient, VshFamily::curl}) {
      ModeIndex m = mode_with_lambda(fam, lam);
      cdouble lhs = (d_k(3, delta, m).value - d3_unregularized(delta, m).value) /
                    std::pow(delta, 5);
      CHECK(rel(lhs, remainder_symbol(delta, m)) < 1e-12);
    }
  }

  // pointwise consistency order: |d3 - d3_unregularized| <= (1/2) delta^5 lambda^2
  for (double delta : {0.01, 0.1, 0.3})
    for (double lam : {2.0, 1e3, 1e6})
      for (auto fam : {VshFamily::gradient, VshFamily::curl}) {
        ModeIndex m = mode_with_lambda(fam, lam);
        double diff = std::abs(d_k(3, delta, m).value - d3_unregularized(delta, m).value);
        CHECK(diff <= 0.5 * std::pow(delta, 5) * lam * lam * (1.0 + 1e-12));
      }

  // |remainder| (1 + lambda)^{-2} <= 1 for lambda >= 0, delta <= 1
  double sup = 0;
  for (int i = 0; i <= 500; ++i) {
    double lam = std::pow(10.0, -2.0 + 10.0 * i / 500.0);
    for (double delta : {1.0, 0.5, 0.1, 0.01})
      sup = std::max(sup, std::abs(remainder_symbol(
                              delta, mode_with_lambda(VshFamily::curl, lam))) /
                              ((1.0 + lam) * (1.0 + lam)));
  }
  CHECK(sup <= 1.0);
}

TEST_CASE("monotone vanishing: d_k/delta -> sqrt(i) pointwise in lambda") {
  ModeIndex m{1, VshFamily::gradient, 1.0};
  for (int k : {1, 2, 3}) {
    cdouble lim = d_k(k, 1e-6, m).value / 1e-6;
    CHECK(rel(lim, sqrt_i) < 1e-9);
  }
}

TEST_CASE("Yosida symbols are contractions") {
  for (double delta : {0.01, 0.1, 0.5, 1.0})
    for (double lam : {0.0, 2.0, 1e3, 1e8}) {
      double a = 1.0 / (1.0 + delta * delta * lam);
      CHECK(std::abs(a) <= 1.0);
      CHECK(std::abs(delta * delta * lam * a) <= 1.0);
    }
}

TEST_CASE("termwise sign structure of d_3 on the sphere") {
  for (double delta : {0.01, 0.1, 0.3})
    for (double lam : {2.0, 50.0, 1e4, 1e6})
      for (auto fam : {VshFamily::gradient, VshFamily::curl}) {
        auto terms = d3_terms(delta, mode_with_lambda(fam, lam));
        for (const auto& t : terms) CHECK(t.real() >= -1e-16);
      }
}

TEST_CASE("coercivity scan") {
  // k = 1: exact constants C1 = 1, C2 = sqrt(2)/2 at any delta
  auto s1 = coercivity_scan(1, 0.3, 1e6);
  CHECK(s1.C1 == Catch::Approx(1.0).epsilon(1e-13));
  CHECK(s1.C2 == Catch::Approx(std::sqrt(0.5)).epsilon(1e-13));
  CHECK(s1.delta_k == Catch::Approx(0.3).epsilon(1e-12));

  // k = 2 on the sphere equals k = 1
  auto s2 = coercivity_scan(2, 0.3, 1e6);
  CHECK(s2.C1 == Catch::Approx(s1.C1).epsilon(1e-13));
  CHECK(s2.C2 == Catch::Approx(s1.C2).epsilon(1e-13));

  // k = 3 over lambda in [2, 1e6], delta <= 0.3
  auto s3 = coercivity_scan(3, 0.3, 1e6);
  CHECK(s3.C2 >= 0.35);
  CHECK(s3.C1 <= 1.2);
  CHECK(s3.delta_k == Catch::Approx(0.3).epsilon(1e-12));
  CHECK(s3.grid.size() >= 2 * 200u * 40u);

  // CSV emission shape
  std::ostringstream os;
  ScanResult small = coercivity_scan(1, 0.1, 10.0, 1.0, 1.0, 1.0, 3, 2);
  scan_to_csv(small, os);
  CHECK(os.str().rfind("k,delta,lambda,family,re,im\n", 0) == 0);
  CHECK_THROWS_AS(coercivity_scan(0, 0.1, 10.0), std::domain_error);
}
