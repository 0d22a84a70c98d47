#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skinlayer/polyexp.hpp"

using namespace skinlayer;
using namespace skinlayer::polyexp;

namespace {
PolyExpProfile make(std::initializer_list<cdouble> c) { return PolyExpProfile(std::vector<cdouble>(c)); }

double coeff_dev(const PolyExpProfile& a, const PolyExpProfile& b) {
  double m = 0;
  for (int j = 0; j <= std::max(a.degree(), b.degree()); ++j)
    m = std::max(m, std::abs(a.coeff(j) - b.coeff(j)));
  return m;
}
}  // namespace

TEST_CASE("profile arithmetic basics") {
  PolyExpProfile one = PolyExpProfile::constant(1.0);

  // d/deta e^{-sqrt(i) eta} = -sqrt(i) e^{-sqrt(i) eta}
  CHECK(coeff_dev(one.differentiate(), make({-sqrt_i})) == 0.0);

  // evaluate(eta e^{-sqrt(i) eta}, 0) = 0
  CHECK(std::abs(one.mul_by_eta().evaluate(0.0)) == 0.0);

  // eta^2 then differentiate: 2 eta - sqrt(i) eta^2
  auto p = one.mul_by_eta().mul_by_eta().differentiate();
  CHECK(coeff_dev(p, make({0.0, 2.0, -sqrt_i})) == 0.0);

  CHECK(make({1.0, 0.0}).degree() == 0);  // trailing zeros trimmed
  CHECK(PolyExpProfile().is_zero());
}

TEST_CASE("half-line L2 weight via the exact moments") {
  PolyExpProfile one = PolyExpProfile::constant(1.0);
  CHECK(l2_norm_halfline(one) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(l2_norm_halfline(PolyExpProfile()) == 0.0);
  CHECK(l2_norm_halfline(one.mul_by_eta()) ==
        Catch::Approx(2.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-14));  // 2!/sqrt(2)^3

  // quadrature oracle on [0, 60] for random profiles
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cdouble> cs;
    for (int j = 0; j <= 5; ++j) cs.emplace_back(u(rng), u(rng));
    PolyExpProfile prof(cs);
    // composite Simpson, fine enough for 1e-12 on this decaying integrand
    int N = 60000;
    double hgrid = 60.0 / N, s = 0;
    for (int i = 0; i <= N; ++i) {
      double eta = i * hgrid;
      double w = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += w * std::norm(prof.evaluate(eta));
    }
    s *= hgrid / 3.0;
    CHECK(l2_norm_halfline(prof) == Catch::Approx(s).epsilon(1e-11));
  }
}

TEST_CASE("forward layer operator") {
  PolyExpProfile one = PolyExpProfile::constant(1.0);
  CHECK(apply_ode_operator(one).is_zero());
  CHECK(coeff_dev(apply_ode_operator(one.mul_by_eta()), make({-2.0 * sqrt_i})) == 0.0);
  CHECK(coeff_dev(apply_ode_operator(one.mul_by_eta().mul_by_eta()),
                  make({2.0, -4.0 * sqrt_i})) == 0.0);

  // symbolic-differentiation oracle: (d^2 - i)u by central differences
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<cdouble> cs;
    for (int j = 0; j <= 4; ++j) cs.emplace_back(u(rng), u(rng));
    PolyExpProfile prof(cs);
    PolyExpProfile op = apply_ode_operator(prof);
    for (double eta : {0.3, 1.0, 2.2}) {
      double h = 1e-4;
      cdouble d2 = (prof.evaluate(eta + h) - 2.0 * prof.evaluate(eta) + prof.evaluate(eta - h)) /
                   (h * h);
      cdouble want = d2 - cdouble(0, 1) * prof.evaluate(eta);
      CHECK(std::abs(op.evaluate(eta) - want) < 1e-6);
    }
  }
}

TEST_CASE("layer ODE solver closed forms") {
  // homogeneous decaying solution
  auto u0 = solve_layer_ode(PolyExpProfile(), 1.0);
  CHECK(coeff_dev(u0, PolyExpProfile::constant(1.0)) == 0.0);

  // s = 1: u = -(1/(2 sqrt i)) eta e^{-sqrt(i) eta}; the sign follows from
  // (d^2 - i)(eta e) = -2 sqrt(i) e and is pinned by the round trip below
  auto u1 = solve_layer_ode(PolyExpProfile::constant(1.0), 0.0);
  CHECK(coeff_dev(u1, make({0.0, {-0.3535533905932738, 0.3535533905932738}})) < 1e-15);

  // s = eta: u = (i/4) eta - (1/(4 sqrt i)) eta^2 times e^{-sqrt(i) eta}
  auto u2 = solve_layer_ode(PolyExpProfile::constant(1.0).mul_by_eta(), 0.0);
  CHECK(coeff_dev(u2, make({0.0, {0.0, 0.25}, {-0.1767766952966369, 0.1767766952966369}})) <
        1e-15);
}

TEST_CASE("round trip, degree law, uniqueness") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(0, 6);
  for (int trial = 0; trial < 100; ++trial) {
    int m = deg(rng);
    std::vector<cdouble> cs;
    for (int j = 0; j <= m; ++j) cs.emplace_back(u(rng), u(rng));
    if (cs.back() == cdouble(0.0)) cs.back() = 1.0;
    PolyExpProfile s(cs);
    cdouble bc(u(rng), u(rng));

    PolyExpProfile sol = solve_layer_ode(s, bc);
    CHECK(sol.degree() == s.degree() + 1);            // P_k -> P_{k+1}
    CHECK(std::abs(sol.coeff(0) - bc) == 0.0);        // boundary value
    double scale = 0;
    for (auto& c : cs) scale = std::max(scale, std::abs(c));
    CHECK(coeff_dev(apply_ode_operator(sol), s) < 1e-12 * scale);
  }
  CHECK(solve_layer_ode(PolyExpProfile(), 0.0).is_zero());
}

TEST_CASE("degree cap is enforced") {
  std::vector<cdouble> cs(65, 1.0);  // degree 64, at the cap
  PolyExpProfile p(cs);
  CHECK_THROWS_AS(p.mul_by_eta(), std::length_error);
  CHECK_THROWS_AS(solve_layer_ode(p, 0.0), std::length_error);
}
