#pragma once

// Faddeyeva function w(z) = exp(-z^2) erfc(-iz) on the whole complex plane,
// plus the real Dawson integral it leans on near the real axis.
//
// Region split (after reflecting Im z < 0 into the upper half-plane):
//   |z| <= 2            Maclaurin series  w(z) = sum (iz)^n / Gamma(n/2+1)
//   |z| >= 6.5          Laplace continued fraction (modified Lentz)
//   Im z < 0.5          Taylor in (iy) off the real axis, axis values from
//                       exp(-x^2) + 2i D(x)/sqrt(pi)
//   otherwise           midpoint-rule sum over exp(-t^2)/(z-t) with the
//                       residue correction 2 exp(-z^2)/(1 + exp(-2 pi i z/h))
//
// Target accuracy: relative error <= 1e-13 for |z| <= 10, <= 1e-10 beyond.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "qdecay/errors.hpp"

namespace qdecay {

using cplx = std::complex<double>;

namespace detail {

inline constexpr double kSqrtPi = 1.7724538509055160273;

// Gamma(n/2 + 1) for n = 0..170.
inline const std::array<double, 171>& half_gamma_table() {
  static const std::array<double, 171> table = [] {
    std::array<double, 171> g{};
    g[0] = 1.0;               // Gamma(1)
    g[1] = kSqrtPi / 2.0;     // Gamma(3/2)
    for (std::size_t n = 2; n < g.size(); ++n) g[n] = (n / 2.0) * g[n - 2];
    return g;
  }();
  return table;
}

// Dawson integral D(x) = exp(-x^2) int_0^x exp(t^2) dt.
inline double dawson(double x) {
  const double ax = std::abs(x);
  if (ax < 1.0) {
    // D(x) = sum_{n>=0} (-2)^n x^{2n+1} / (2n+1)!!
    double term = x, total = x;
    for (int n = 1; n < 100; ++n) {
      term *= -2.0 * x * x / (2 * n + 1);
      total += term;
      if (std::abs(term) <= 1e-18 * std::abs(total)) break;
    }
    return total;
  }
  if (ax > 7.0) {
    // asymptotic 1/(2x) + 1/(4x^3) + ...
    double term = 0.5 / x, total = term;
    for (int n = 1; n < 40; ++n) {
      term *= (2 * n - 1) / (2.0 * x * x);
      total += term;
      if (std::abs(term) <= 1e-18 * std::abs(total)) break;
    }
    return total;
  }
  // Rybicki's exponentially convergent sampling sum, D(x) =
  // lim_{h->0} (1/sqrt(pi)) sum_{n odd} exp(-(x-nh)^2)/n.
  constexpr double h = 0.2;
  long n0 = std::lround(ax / h);
  if (n0 % 2 == 0) ++n0;
  double total = 0.0;
  for (long m = -48; m <= 48; m += 2) {
    const long n = n0 + m;
    const double xp = ax - static_cast<double>(n) * h;
    total += std::exp(-xp * xp) / static_cast<double>(n);
  }
  total /= kSqrtPi;
  return x >= 0 ? total : -total;
}

inline cplx w_on_axis(double x) {
  return {std::exp(-x * x), 2.0 * dawson(x) / kSqrtPi};
}

inline cplx w_series(cplx z) {
  const auto& gam = half_gamma_table();
  const cplx iz = cplx(0, 1) * z;
  cplx zn = 1.0, total = 1.0;
  for (std::size_t n = 1; n < gam.size(); ++n) {
    zn *= iz;
    const cplx term = zn / gam[n];
    total += term;
    if (std::abs(term) <= 1e-18 * std::abs(total)) break;
  }
  return total;
}

// w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...)))), Im z > 0.
inline cplx w_contfrac(cplx z) {
  constexpr double tiny = 1e-300;
  cplx f = z, C = z, D = 0.0;
  for (int m = 1; m <= 300; ++m) {
    const double am = -0.5 * m;
    D = z + am * D;
    if (D == 0.0) D = tiny;
    C = z + am / C;
    if (C == 0.0) C = tiny;
    D = 1.0 / D;
    const cplx delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return cplx(0, 1) / (kSqrtPi * f);
}

// Taylor expansion off the real axis: w(x+iy) = sum w^(n)(x) (iy)^n / n!,
// derivatives from w' = -2 z w + 2i/sqrt(pi).
inline cplx w_taylor_off_axis(cplx z) {
  const double x = z.real(), y = z.imag();
  cplx wn_1 = w_on_axis(x);
  cplx wn = -2.0 * x * wn_1 + cplx(0, 2.0 / kSqrtPi);
  const cplx iy(0, y);
  cplx p = iy;
  cplx total = wn_1 + wn * p;
  for (int n = 2; n < 80; ++n) {
    const cplx wnext = -2.0 * x * wn - 2.0 * (n - 1) * wn_1;
    wn_1 = wn;
    wn = wnext;
    p *= iy / static_cast<double>(n);
    const cplx term = wn * p;
    total += term;
    if (std::abs(term) <= 1e-17 * std::abs(total)) break;
  }
  return total;
}

inline cplx w_midpoint(cplx z) {
  constexpr double h = 0.29;
  const double x = z.real();
  const long m0 = static_cast<long>(std::floor(x / h));
  const long span = static_cast<long>(13.0 / h) + 1;
  cplx total = 0.0;
  for (long m = m0 - span; m <= m0 + span; ++m) {
    const double tm = (m + 0.5) * h;
    total += std::exp(-tm * tm) / (z - tm);
  }
  const cplx sum = cplx(0, h) * total / M_PI;
  const cplx corr =
      2.0 * std::exp(-z * z) / (1.0 + std::exp(cplx(0, -2.0 * M_PI / h) * z));
  return sum + corr;
}

}  // namespace detail

/// Faddeyeva (scaled complex complementary error) function w(z).
inline cplx faddeeva_w(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("faddeeva_w: non-finite argument");
  if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
  if (z.imag() == 0.0) return detail::w_on_axis(z.real());
  const double az = std::abs(z);
  if (az <= 2.0) return detail::w_series(z);
  if (az >= 6.5) return detail::w_contfrac(z);
  if (z.imag() < 0.5) return detail::w_taylor_off_axis(z);
  return detail::w_midpoint(z);
}

/// Dawson integral for real argument.
inline double dawson(double x) { return detail::dawson(x); }

}  // namespace qdecay
