#pragma once

// Delta-shell potential V(r) = lambda * delta(r - a), s waves, units
// hbar = 2m = 1. Resonant (quasinormal) states are u_n(r) = A_n sin(kappa_n r)
// on [0, a] with outgoing boundary conditions; the poles kappa_n solve
//
//   lambda (e^{2 i kappa a} - 1) + 2 i kappa = 0
//
// in the fourth quadrant. Third-quadrant partners are kappa_{-n} = -kappa_n*
// and are generated on the fly, never stored.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qdecay/errors.hpp"

namespace qdecay {

using cplx = std::complex<double>;

struct ShellPotential {
  double lambda;  // shell intensity, > 0 (repulsive: no bound/antibound states)
  double a;       // shell radius, > 0

  ShellPotential(double lambda_, double a_) : lambda(lambda_), a(a_) {
    if (!(lambda > 0.0))
      throw DomainError("ShellPotential: lambda must be > 0");
    if (!(a > 0.0)) throw DomainError("ShellPotential: a must be > 0");
  }
};

struct Pole {
  int index = 0;  // n >= 1
  cplx kappa;     // a_n - i b_n, fourth quadrant

  cplx energy() const { return kappa * kappa; }
  double resonance_energy() const { return energy().real(); }
  double width() const { return -2.0 * energy().imag(); }
};

inline cplx pole_equation_residual(const ShellPotential& p, cplx kappa) {
  return p.lambda * (std::exp(cplx(0, 2.0 * p.a) * kappa) - 1.0) +
         cplx(0, 2.0) * kappa;
}

namespace detail {

inline cplx pole_equation_derivative(const ShellPotential& p, cplx kappa) {
  return cplx(0, 2.0 * p.a) * p.lambda *
             std::exp(cplx(0, 2.0 * p.a) * kappa) +
         cplx(0, 2.0);
}

// Large-n asymptotics of the pole equation.
inline cplx pole_initial_guess(const ShellPotential& p, int n) {
  const double re = n * M_PI / p.a;
  const double im = std::log(1.0 + 2.0 * n * M_PI / (p.lambda * p.a)) /
                    (2.0 * p.a);
  return {re, -im};
}

inline cplx newton_pole(const ShellPotential& p, cplx guess, int n) {
  cplx k = guess;
  for (int iter = 0; iter < 50; ++iter) {
    const cplx dk =
        pole_equation_residual(p, k) / pole_equation_derivative(p, k);
    k -= dk;
    if (std::abs(dk) <= 1e-14 * (1.0 + std::abs(k))) return k;
  }
  throw NonConvergence("find_poles: Newton failed for n=" +
                       std::to_string(n) + " at kappa=(" +
                       std::to_string(k.real()) + "," +
                       std::to_string(k.imag()) + ")");
}

inline bool in_basin(const ShellPotential& p, cplx k, int n) {
  return k.real() > 0.0 && k.imag() < 0.0 &&
         std::abs(k.real() - n * M_PI / p.a) < M_PI / (2.0 * p.a);
}

// Continuation in lambda from the impenetrable-shell limit.
inline cplx continuation_pole(const ShellPotential& p, int n) {
  double lam = 1e6;
  cplx k = newton_pole(ShellPotential(lam, p.a),
                       pole_initial_guess(ShellPotential(lam, p.a), n), n);
  while (lam > p.lambda * 1.0000001) {
    lam = std::max(p.lambda, lam / 4.0);
    k = newton_pole(ShellPotential(lam, p.a), k, n);
  }
  return k;
}

// Winding number of the pole equation around a rectangle, by walking the
// boundary with steps small enough that the argument never jumps by >= pi/2.
inline long winding_number(const ShellPotential& p, cplx lo, cplx hi) {
  const cplx corners[5] = {lo,
                           {hi.real(), lo.imag()},
                           hi,
                           {lo.real(), hi.imag()},
                           lo};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx z0 = corners[e], z1 = corners[e + 1];
    double s = 0.0;
    // The residual's phase advances at a rate of at most ~2a along the
    // contour (from the e^{2i kappa a} term), so steps no larger than
    // pi/(8a) in kappa keep each increment well below pi/2 and rule out
    // 2pi aliasing on long edges. Halving below that only refines further.
    const double step_cap =
        std::min(1.0 / 256.0, M_PI / (8.0 * p.a) / std::abs(z1 - z0));
    double step = step_cap;
    cplx f0 = pole_equation_residual(p, z0);
    while (s < 1.0) {
      double ds = std::min(step, 1.0 - s);
      for (;;) {
        const cplx z = z0 + (s + ds) * (z1 - z0);
        const cplx f1 = pole_equation_residual(p, z);
        const double dphi = std::arg(f1 / f0);
        if (std::abs(dphi) < M_PI / 2.0) {
          total += dphi;
          f0 = f1;
          s += ds;
          step = std::min(step_cap, ds * 2.0);
          break;
        }
        ds *= 0.5;
        if (ds < 1e-12)
          throw NonConvergence(
              "winding_number: argument step failed to resolve (zero on "
              "contour?)");
      }
    }
  }
  return std::lround(total / (2.0 * M_PI));
}

}  // namespace detail

struct PoleSet {
  ShellPotential potential;
  std::vector<Pole> poles;  // n = 1..n_max, ordered by Re kappa
};

/// Locate poles n = 1..n_max in the fourth quadrant and certify the count by
/// the argument principle on an enclosing rectangle.
inline PoleSet find_poles(const ShellPotential& p, int n_max) {
  if (n_max < 1) throw DomainError("find_poles: n_max must be >= 1");
  PoleSet set{p, {}};
  set.poles.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    cplx k;
    try {
      k = detail::newton_pole(p, detail::pole_initial_guess(p, n), n);
      if (!detail::in_basin(p, k, n)) k = detail::continuation_pole(p, n);
    } catch (const NonConvergence&) {
      k = detail::continuation_pole(p, n);
    }
    if (!detail::in_basin(p, k, n))
      throw NonConvergence("find_poles: pole n=" + std::to_string(n) +
                           " escaped its basin");
    const double res = std::abs(pole_equation_residual(p, k));
    if (res > 1e-10 * p.lambda)
      throw NonConvergence("find_poles: residual " + std::to_string(res) +
                           " too large for n=" + std::to_string(n));
    set.poles.push_back(Pole{n, k});
  }
  for (int i = 1; i < n_max; ++i)
    if (!(set.poles[i].kappa.real() > set.poles[i - 1].kappa.real()))
      throw MissedPole("find_poles: pole ordering violated at n=" +
                       std::to_string(i + 1));

  // Argument-principle audit on a rectangle hugging the fourth quadrant.
  double b_max = 0.0;
  for (const Pole& pole : set.poles)
    b_max = std::max(b_max, -pole.kappa.imag());
  const double b1 = -set.poles.front().kappa.imag();
  const cplx lo(1e-3 / p.a, -(1.5 * b_max + 0.5 / p.a));
  const cplx hi((n_max + 0.5) * M_PI / p.a, -std::min(0.5 * b1, 0.45 / p.a));
  const long count = detail::winding_number(p, lo, hi);
  if (count != n_max)
    throw MissedPole("find_poles: argument principle counted " +
                     std::to_string(count) + " zeros, expected " +
                     std::to_string(n_max));
  return set;
}

/// Normalized resonant state u_n(r) = A_n sin(kappa_n r), r <= a, with
/// int_0^a u_n^2 dr + i u_n^2(a)/(2 kappa_n) = 1 and Re A_n > 0.
struct ResonantState {
  Pole pole;
  cplx norm_const;  // A_n
  double a = 0.0;   // shell radius

  cplx eval(double r) const {
    if (r < 0.0 || r > a)
      throw DomainError("ResonantState::eval: r outside [0, a]");
    return norm_const * std::sin(pole.kappa * r);
  }
};

inline ResonantState normalize(const Pole& pole, const ShellPotential& p) {
  const cplx k = pole.kappa;
  const cplx sin_ka = std::sin(k * p.a);
  const cplx inv_norm2 = p.a / 2.0 - std::sin(2.0 * k * p.a) / (4.0 * k) +
                         cplx(0, 0.5) * sin_ka * sin_ka / k;
  if (std::abs(inv_norm2) < 1e-14)
    throw DegenerateNorm("normalize: numerically zero norm for n=" +
                         std::to_string(pole.index));
  cplx A = std::sqrt(1.0 / inv_norm2);
  if (A.real() < 0.0) A = -A;
  return ResonantState{pole, A, p.a};
}

inline std::vector<ResonantState> normalize_all(const PoleSet& set) {
  std::vector<ResonantState> states;
  states.reserve(set.poles.size());
  for (const Pole& pole : set.poles)
    states.push_back(normalize(pole, set.potential));
  return states;
}

}  // namespace qdecay
