#pragma once

// Exact single-particle time evolution inside the shell,
//
//   Psi(r,t) = sum_{n=-N..N} C_n u_n(r) M(y_n^o),   r < a,
//
// its split into exponential and non-exponential parts, and the survival /
// nonescape probabilities. Mirror terms (n < 0) are generated from
// kappa_{-n} = -kappa_n*, u_{-n} = u_n*, C_{-n} = Cbar_n*.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "qdecay/basis.hpp"
#include "qdecay/delta_shell.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/moshinsky.hpp"
#include "qdecay/parallel.hpp"
#include "qdecay/quadrature.hpp"

namespace qdecay {

struct SplitParts {
  cplx exponential;
  cplx nonexponential;
};

struct DecayCurves {
  std::vector<double> times;
  std::vector<double> survival;      // S(t)
  std::vector<double> nonescape;     // P(t)
  std::vector<cplx> amplitude;       // A(t)
};

inline std::vector<double> log_time_grid(double t_min, double t_max,
                                         int points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2)
    throw DomainError("log_time_grid: need 0 < t_min < t_max, points >= 2");
  std::vector<double> ts(points);
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (int i = 0; i < points; ++i)
    ts[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
  return ts;
}

class SingleParticleEvolution {
 public:
  SingleParticleEvolution(const ShellPotential& pot, InitialState psi,
                          const std::vector<ResonantState>& states,
                          CoefficientSet coeffs)
      : pot_(pot), psi_(std::move(psi)), states_(states),
        coeffs_(std::move(coeffs)) {
    const std::size_t n = states_.size();
    if (coeffs_.entries().size() != n)
      throw DomainError(
          "SingleParticleEvolution: basis and coefficient set sizes differ");
    kappa_.resize(n);
    C_.resize(n);
    Cbar_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      kappa_[i] = states_[i].pole.kappa;
      C_[i] = coeffs_.entries()[i].C;
      Cbar_[i] = coeffs_.entries()[i].Cbar;
    }
  }

  /// Convenience constructor: solve poles and coefficients for n = 1..N.
  static SingleParticleEvolution make(const ShellPotential& pot,
                                      const InitialState& psi, int n_max) {
    auto states = normalize_all(find_poles(pot, n_max));
    auto coeffs = build_coefficients(states, psi);
    return SingleParticleEvolution(pot, psi, states, std::move(coeffs));
  }

  const ShellPotential& potential() const { return pot_; }
  const InitialState& initial_state() const { return psi_; }
  const std::vector<ResonantState>& states() const { return states_; }
  const CoefficientSet& coefficients() const { return coeffs_; }
  int truncation() const { return static_cast<int>(states_.size()); }

  /// Psi(r, t). t = 0 returns the initial state (M is undefined there);
  /// the expansion excludes r = a.
  cplx evolve(double r, double t) const {
    check_r(r);
    if (t == 0.0) return psi_.eval(r);
    if (!(t > 0.0)) throw DomainError("evolve: t must be >= 0");
    cplx total = 0.0;
    for (std::size_t i = 0; i < kappa_.size(); ++i) {
      total += C_[i] * u(i, r) * moshinsky_m0_kernel(kappa_[i], t);
      total += mirror_C(i) * std::conj(u(i, r)) *
               moshinsky_m0_kernel(-std::conj(kappa_[i]), t);
    }
    return total;
  }

  /// Exponential and non-exponential parts; they sum to evolve(r, t) by the
  /// reflection identity M(y^o) = e^{-i kappa^2 t} - M(-y^o).
  SplitParts evolve_split(double r, double t) const {
    check_r(r);
    if (!(t > 0.0)) throw DomainError("evolve_split: t must be > 0");
    cplx exp_part = 0.0, nonexp = 0.0;
    static const cplx phase = std::polar(1.0, -M_PI / 4.0);
    const double sqt = std::sqrt(t);
    for (std::size_t i = 0; i < kappa_.size(); ++i) {
      const cplx k = kappa_[i];
      const cplx y0 = -phase * k * sqt;           // y_n^o
      const cplx y0m = phase * std::conj(k) * sqt;  // y_{-n}^o
      // Must mirror the kernel choice in evolve() so the parts sum exactly.
      const bool reduced = t >= kSumRuleSwitchTime;
      const cplx m1 = reduced ? 1.0 / (2.0 * detail::kSqrtPi * y0) : 0.0;
      const cplx m1m = reduced ? 1.0 / (2.0 * detail::kSqrtPi * y0m) : 0.0;
      exp_part += C_[i] * u(i, r) * std::exp(cplx(0, -1) * k * k * t);
      const cplx I_n =
          C_[i] * u(i, r) * (0.5 * faddeeva_w(cplx(0, -1) * y0) + m1) -
          mirror_C(i) * std::conj(u(i, r)) *
              (0.5 * faddeeva_w(cplx(0, 1) * y0m) - m1m);
      nonexp -= I_n;
    }
    return {exp_part, nonexp};
  }

  /// Survival amplitude by the coefficient route, A(t) = sum C_n Cbar_n M(y_n^o).
  cplx survival_amplitude(double t) const {
    if (t == 0.0) return 1.0;
    if (!(t > 0.0)) throw DomainError("survival_amplitude: t must be >= 0");
    cplx total = 0.0;
    for (std::size_t i = 0; i < kappa_.size(); ++i) {
      total += C_[i] * Cbar_[i] * moshinsky_m0_kernel(kappa_[i], t);
      total += std::conj(C_[i] * Cbar_[i]) *
               moshinsky_m0_kernel(-std::conj(kappa_[i]), t);
    }
    return total;
  }

  /// Survival amplitude by direct quadrature of int psi* Psi(t).
  cplx survival_amplitude_quadrature(double t) const {
    if (t == 0.0) return 1.0;
    const MappedRule rule = spatial_rule();
    cplx total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      total += rule.weights[i] * std::conj(psi_.eval(rule.nodes[i])) *
               evolve(rule.nodes[i], t);
    return total;
  }

  double survival_probability(double t) const {
    return std::norm(survival_amplitude(t));
  }

  double nonescape_probability(double t) const {
    if (t == 0.0) return 1.0;
    const MappedRule rule = spatial_rule();
    double total = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      total += rule.weights[i] * std::norm(evolve(rule.nodes[i], t));
    return total;
  }

  DecayCurves decay_curves(const std::vector<double>& times,
                           int threads = 1) const {
    DecayCurves c;
    c.times = times;
    c.survival.resize(times.size());
    c.nonescape.resize(times.size());
    c.amplitude.resize(times.size());
    parallel_for(times.size(), threads, [&](std::size_t i) {
      c.amplitude[i] = survival_amplitude(times[i]);
      c.survival[i] = std::norm(c.amplitude[i]);
      c.nonescape[i] = nonescape_probability(times[i]);
    });
    return c;
  }

  /// Spectral-accuracy quadrature rule on [0, a] matched to the basis size.
  MappedRule spatial_rule() const {
    const int order =
        std::max(128, static_cast<int>(std::ceil(3.3 * truncation())));
    return gauss_legendre_on(0.0, pot_.a, order);
  }

 private:
  void check_r(double r) const {
    if (r < 0.0 || r >= pot_.a)
      throw DomainError("expansion excluded at r >= a (or r < 0)");
  }

  cplx u(std::size_t i, double r) const {
    return states_[i].norm_const * std::sin(kappa_[i] * r);
  }

  // C_{-n} = conj(Cbar_n): overlap of psi with u_n^*.
  cplx mirror_C(std::size_t i) const { return std::conj(Cbar_[i]); }

  ShellPotential pot_;
  InitialState psi_;
  std::vector<ResonantState> states_;
  CoefficientSet coeffs_;
  std::vector<cplx> kappa_, C_, Cbar_;
};

}  // namespace qdecay
