#pragma once

// Independent ground truth: Hermitian continuum-spectral evolution of the same
// initial states. Delta-normalized scattering states of the delta shell,
//
//   phi_k(r) = sqrt(2/pi) B(k) sin(k r)          r <= a
//   B(k)     = 1 / sqrt(sin^2(ka) + (cos(ka) + (lambda/k) sin(ka))^2)
//
// give A(t) = int_0^inf |<phi_k|psi>|^2 e^{-i k^2 t} dk with closed-form
// overlaps. The integral is done on phase-limited Gauss-Legendre panels with
// an integration-by-parts tail correction; used only by tests and acceptance.

#include <cmath>
#include <complex>

#include "qdecay/basis.hpp"
#include "qdecay/delta_shell.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/quadrature.hpp"

namespace qdecay {

struct ContinuumState {
  double k;
  double lambda;
  double a;

  /// Interior amplitude of the delta-normalized scattering state.
  double interior_amplitude() const {
    const double s = std::sin(k * a), c = std::cos(k * a);
    const double d = c + (lambda / k) * s;
    return 1.0 / std::sqrt(s * s + d * d);
  }

  double eval_interior(double r) const {
    return std::sqrt(2.0 / M_PI) * interior_amplitude() * std::sin(k * r);
  }
};

namespace detail {

inline double continuum_overlap(double k, const InitialState& psi,
                                const ShellPotential& pot) {
  const ContinuumState phi{k, pot.lambda, pot.a};
  if (psi.kind() == InitialState::Kind::box_eigenstate) {
    const double q = psi.alpha() * M_PI / pot.a;
    const double dk = k - q, sk = k + q;
    const double integral =
        (std::abs(dk * pot.a) < 1e-7)
            ? 0.5 * pot.a - std::sin(sk * pot.a) / (2.0 * sk)
            : std::sin(dk * pot.a) / (2.0 * dk) -
                  std::sin(sk * pot.a) / (2.0 * sk);
    return std::sqrt(2.0 / M_PI) * phi.interior_amplitude() *
           std::sqrt(2.0 / pot.a) * integral;
  }
  const cplx c = integrate(
      [&](double r) { return psi.eval(r) * phi.eval_interior(r); }, 0.0, pot.a,
      256);
  return c.real();  // oracle supports real states only
}

}  // namespace detail

/// Spectral survival amplitude A(t) = int_0^kmax |<phi_k|psi>|^2 e^{-ik^2 t} dk
/// plus the first integration-by-parts tail term.
inline cplx spectral_amplitude_fixed(const InitialState& psi,
                                     const ShellPotential& pot, double t,
                                     double k_max, double dk_cap = 0.05) {
  const GaussRule& rule = gauss_legendre(15);
  cplx total = 0.0;
  double k0 = 1e-9;
  while (k0 < k_max) {
    double dk = dk_cap;
    if (t > 0.0) dk = std::min(dk, M_PI / std::max(2.0 * k0 * t, 1e-30));
    dk = std::min(dk, k_max - k0);
    const double mid = k0 + 0.5 * dk, half = 0.5 * dk;
    for (int i = 0; i < 15; ++i) {
      const double k = mid + half * rule.nodes[i];
      const double rho = detail::continuum_overlap(k, psi, pot);
      total += half * rule.weights[i] * rho * rho *
               std::exp(cplx(0, -k * k * t));
    }
    k0 += dk;
  }
  if (t > 0.0) {
    const double rho = detail::continuum_overlap(k_max, psi, pot);
    total += rho * rho * std::exp(cplx(0, -k_max * k_max * t)) /
             (cplx(0, 2.0 * k_max) * t);
  }
  return total;
}

/// Self-converging spectral amplitude: doubles k_max (and halves the panel
/// cap) until two refinements agree to `tol`.
inline cplx spectral_amplitude(const InitialState& psi,
                               const ShellPotential& pot, double t,
                               double k_max0 = 40.0, double tol = 1e-8) {
  if (t < 0.0) throw DomainError("spectral_amplitude: t must be >= 0");
  cplx prev = spectral_amplitude_fixed(psi, pot, t, k_max0, 0.05);
  double k_max = k_max0;
  for (int iter = 0; iter < 6; ++iter) {
    k_max *= 2.0;
    const cplx cur = spectral_amplitude_fixed(psi, pot, t, k_max, 0.025);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  throw QuadratureNotConverged("spectral_amplitude: no self-convergence");
}

}  // namespace qdecay
