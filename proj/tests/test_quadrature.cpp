#include <doctest.h>

#include <cmath>
#include <complex>

#include "qdecay/errors.hpp"
#include "qdecay/faddeeva.hpp"
#include "qdecay/quadrature.hpp"

using qdecay::cplx;

TEST_CASE("two-point rule has the closed-form nodes and weights") {
  const auto rule = qdecay::gauss_legendre(2);
  const double node = 1.0 / std::sqrt(3.0);
  CHECK(rule.nodes[0] == doctest::Approx(-node).epsilon(1e-15));
  CHECK(rule.nodes[1] == doctest::Approx(node).epsilon(1e-15));
  CHECK(rule.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rule.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("n-point rule is exact through degree 2n-1") {
  const auto rule = qdecay::gauss_legendre(5);
  double m8 = 0.0, m9 = 0.0;
  for (int i = 0; i < 5; ++i) {
    m8 += rule.weights[i] * std::pow(rule.nodes[i], 8);
    m9 += rule.weights[i] * std::pow(rule.nodes[i], 9);
  }
  CHECK(m8 == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(std::abs(m9) < 1e-15);
}

TEST_CASE("weights on a mapped interval sum to its length") {
  const auto rule = qdecay::gauss_legendre_on(0.25, 2.75, 37);
  double s = 0.0;
  for (double w : rule.weights) s += w;
  CHECK(s == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("smooth integrands converge at fixed order") {
  const cplx s1 =
      qdecay::integrate([](double x) { return cplx(std::sin(x), 0); }, 0.0,
                        M_PI, 24);
  CHECK(std::abs(s1 - 2.0) < 1e-14);
  const cplx s2 = qdecay::integrate(
      [](double x) { return std::exp(cplx(0, 1) * x); }, 0.0, 1.0, 24);
  const cplx expected = (std::exp(cplx(0, 1)) - 1.0) / cplx(0, 1);
  CHECK(std::abs(s2 - expected) < 1e-14);
}

TEST_CASE("adaptive doubling resolves a sharp but smooth peak") {
  const cplx got = qdecay::integrate_adaptive(
      [](double x) { return cplx(1.0 / (1e-4 + x * x), 0); }, -1.0, 1.0, 1e-12,
      16, 16384);
  const double expected = 2.0 / 1e-2 * std::atan(1.0 / 1e-2);
  CHECK(std::abs(got.real() - expected) < 1e-9 * expected);
}

TEST_CASE("adaptive doubling reports failure on a discontinuity") {
  CHECK_THROWS_AS(qdecay::integrate_adaptive(
                      [](double x) { return cplx(x < 0.618034 ? 0.0 : 1.0, 0); },
                      0.0, 1.0, 1e-12, 16, 1024),
                  qdecay::QuadratureNotConverged);
}

TEST_CASE("invalid orders are rejected") {
  CHECK_THROWS_AS(qdecay::gauss_legendre(0), qdecay::DomainError);
  CHECK_THROWS_AS(qdecay::gauss_legendre(-3), qdecay::DomainError);
}
