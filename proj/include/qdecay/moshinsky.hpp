#pragma once

// Moshinsky function M(y), the Fresnel-type kernel that couples a complex
// pole kappa to free dispersion exp(-i k^2 t) (units hbar = 2m = 1):
//
//   M(y) = (i/2pi) int e^{ikx} e^{-ik^2 t} / (k - kappa) dk
//        = (1/2) e^{i x^2/(4t)} w(i y),   y = e^{-i pi/4} (x - 2 kappa t)/(2 sqrt(t))

#include <cmath>
#include <complex>

#include "qdecay/errors.hpp"
#include "qdecay/faddeeva.hpp"

namespace qdecay {

struct MoshinskyArgs {
  double x;     // position offset, typically r - a
  cplx kappa;   // complex wavenumber
  double t;     // time, > 0
};

inline cplx moshinsky_y(const MoshinskyArgs& args) {
  static const cplx phase = std::polar(1.0, -M_PI / 4.0);
  return phase * (args.x - 2.0 * args.kappa * args.t) /
         (2.0 * std::sqrt(args.t));
}

inline cplx moshinsky_m(const MoshinskyArgs& args) {
  if (!(args.t > 0.0))
    throw DomainError("moshinsky_m: requires t > 0");
  const cplx y = moshinsky_y(args);
  const cplx prefactor =
      0.5 * std::exp(cplx(0, args.x * args.x / (4.0 * args.t)));
  return prefactor * faddeeva_w(cplx(0, 1) * y);
}

/// M(y_n^o): the interior kernel, x = 0 (r = a).
inline cplx moshinsky_m0(cplx kappa, double t) {
  return moshinsky_m({0.0, kappa, t});
}

/// M(y_n^o) minus its leading long-time term 1/(2 sqrt(pi) y_n^o).
///
/// Under the kappa^{-1} sum rule (sum over the full pole set of
/// u_n(r)u_n(r')/kappa_n vanishes) the subtracted terms sum to zero exactly,
/// so expansions built from this kernel equal the plain ones in the infinite
/// limit while the truncated tail falls off two powers faster. Without the
/// subtraction the truncation residue carries a spurious t^{-1/2} component
/// that buries the t^{-5/2}-and-beyond cancellations of the entangled
/// antisymmetric states.
inline cplx moshinsky_m0_reduced(cplx kappa, double t) {
  if (!(t > 0.0))
    throw DomainError("moshinsky_m0_reduced: requires t > 0");
  const cplx y0 = moshinsky_y({0.0, kappa, t});
  return 0.5 * faddeeva_w(cplx(0, 1) * y0) -
         1.0 / (2.0 * detail::kSqrtPi * y0);
}

/// Crossover time for the expansion kernel. The subtracted term scales like
/// t^{-1/2}, so the sum-rule truncation residue it leaves behind is amplified
/// at short times and suppressed at long times; near t = 1 both forms carry
/// the same (negligible) residue.
inline constexpr double kSumRuleSwitchTime = 1.0;

/// Kernel for truncated pole expansions: plain M(y_n^o) below the crossover,
/// the reduced form above it.
inline cplx moshinsky_m0_kernel(cplx kappa, double t) {
  return t < kSumRuleSwitchTime ? moshinsky_m0(kappa, t)
                                : moshinsky_m0_reduced(kappa, t);
}

}  // namespace qdecay
