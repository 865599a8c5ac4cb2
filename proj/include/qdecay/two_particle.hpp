#pragma once

// Two identical noninteracting particles in the same shell potential.
// Factorized symmetric states evolve as a product of single-particle sums;
// entangled symmetric/antisymmetric states as the symmetrized double sum
//
//   Psi(r1,r2,t) = (1/sqrt 2) sum_{p,q} (C_pa C_qb +/- C_pb C_qa)
//                  u_p(r1) u_q(r2) M(y_p^o) M(y_q^o).
//
// Everything reduces to rank-2 combinations of the two single-particle factor
// sums, so frames and probabilities stay O(N) per point.

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "qdecay/errors.hpp"
#include "qdecay/moshinsky.hpp"
#include "qdecay/parallel.hpp"
#include "qdecay/single_particle.hpp"

namespace qdecay {

class TwoBodyState {
 public:
  enum class Kind { factorized_symmetric, entangled };

  static TwoBodyState factorized(const ShellPotential& pot, int alpha,
                                 int n_max) {
    return TwoBodyState(Kind::factorized_symmetric, +1,
                        SingleParticleEvolution::make(
                            pot, InitialState::box(alpha, pot.a), n_max),
                        std::nullopt);
  }

  static TwoBodyState entangled(const ShellPotential& pot, int alpha, int beta,
                                int sign, int n_max) {
    if (alpha == beta)
      throw DegenerateState(
          "TwoBodyState::entangled: alpha == beta (antisymmetric state "
          "vanishes, symmetric state mis-normalized)");
    if (sign != +1 && sign != -1)
      throw DomainError("TwoBodyState::entangled: sign must be +1 or -1");
    auto states = normalize_all(find_poles(pot, n_max));
    const InitialState psi_a = InitialState::box(alpha, pot.a);
    const InitialState psi_b = InitialState::box(beta, pot.a);
    SingleParticleEvolution ea(pot, psi_a, states,
                               build_coefficients(states, psi_a));
    SingleParticleEvolution eb(pot, psi_b, states,
                               build_coefficients(states, psi_b));
    return TwoBodyState(Kind::entangled, sign, std::move(ea), std::move(eb));
  }

  Kind kind() const { return kind_; }
  int sign() const { return sign_; }
  const SingleParticleEvolution& constituent_alpha() const { return ea_; }
  const SingleParticleEvolution& constituent_beta() const {
    return eb_ ? *eb_ : ea_;
  }
  const ShellPotential& potential() const { return ea_.potential(); }
  int truncation() const { return ea_.truncation(); }

  cplx initial(double r1, double r2) const {
    const auto& pa = ea_.initial_state();
    if (kind_ == Kind::factorized_symmetric) return pa.eval(r1) * pa.eval(r2);
    const auto& pb = eb_->initial_state();
    return (pa.eval(r1) * pb.eval(r2) +
            static_cast<double>(sign_) * pb.eval(r1) * pa.eval(r2)) /
           std::sqrt(2.0);
  }

  cplx evolve_two(double r1, double r2, double t) const {
    if (t == 0.0) return initial(r1, r2);
    if (kind_ == Kind::factorized_symmetric)
      return ea_.evolve(r1, t) * ea_.evolve(r2, t);
    return (ea_.evolve(r1, t) * eb_->evolve(r2, t) +
            static_cast<double>(sign_) * eb_->evolve(r1, t) *
                ea_.evolve(r2, t)) /
           std::sqrt(2.0);
  }

  /// Survival amplitude and probability via the coefficient form:
  /// factorized A_2 = A_1^2; entangled A_2 = A_a A_b +/- X_ab X_ba with
  /// X_ab(t) = sum_p C_{p,a} Cbar_{p,b} M(y_p^o).
  std::pair<cplx, double> survival_two(double t) const {
    if (t == 0.0) return {1.0, 1.0};
    if (!(t > 0.0)) throw DomainError("survival_two: t must be >= 0");
    cplx amp;
    if (kind_ == Kind::factorized_symmetric) {
      const cplx a1 = ea_.survival_amplitude(t);
      amp = a1 * a1;
    } else {
      const cplx aa = ea_.survival_amplitude(t);
      const cplx ab = eb_->survival_amplitude(t);
      const cplx xab = cross_amplitude(ea_, *eb_, t);
      const cplx xba = cross_amplitude(*eb_, ea_, t);
      amp = aa * ab + static_cast<double>(sign_) * xab * xba;
    }
    return {amp, std::norm(amp)};
  }

  /// Exponential-regime part of the survival amplitude (for window detection).
  cplx survival_two_exponential(double t) const {
    if (kind_ == Kind::factorized_symmetric) {
      const cplx a1 = exponential_amplitude(ea_, ea_, t);
      return a1 * a1;
    }
    const cplx aa = exponential_amplitude(ea_, ea_, t);
    const cplx ab = exponential_amplitude(*eb_, *eb_, t);
    const cplx xab = exponential_amplitude(ea_, *eb_, t);
    const cplx xba = exponential_amplitude(*eb_, ea_, t);
    return aa * ab + static_cast<double>(sign_) * xab * xba;
  }

  /// Survival amplitude by 2-D quadrature of int int Psi0* Psi(t).
  cplx survival_two_quadrature(double t) const {
    if (t == 0.0) return 1.0;
    const MappedRule rule = ea_.spatial_rule();
    const std::size_t m = rule.nodes.size();
    std::vector<cplx> fa(m), fb(m), p0a(m), p0b(m);
    const auto& eb = constituent_beta();
    for (std::size_t i = 0; i < m; ++i) {
      fa[i] = ea_.evolve(rule.nodes[i], t);
      fb[i] = eb.evolve(rule.nodes[i], t);
      p0a[i] = ea_.initial_state().eval(rule.nodes[i]);
      p0b[i] = eb.initial_state().eval(rule.nodes[i]);
    }
    // <psi0_s | phi_s(t)> factors; the double integral factorizes.
    cplx oaa = 0.0, obb = 0.0, oab = 0.0, oba = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      oaa += rule.weights[i] * std::conj(p0a[i]) * fa[i];
      obb += rule.weights[i] * std::conj(p0b[i]) * fb[i];
      oab += rule.weights[i] * std::conj(p0a[i]) * fb[i];
      oba += rule.weights[i] * std::conj(p0b[i]) * fa[i];
    }
    if (kind_ == Kind::factorized_symmetric) return oaa * oaa;
    return oaa * obb + static_cast<double>(sign_) * oab * oba;
  }

  /// Nonescape probability P(t) = int int |Psi(r1,r2,t)|^2 on the
  /// Gauss-Legendre product grid.
  double nonescape_two(double t) const {
    if (t == 0.0) return 1.0;
    if (!(t > 0.0)) throw DomainError("nonescape_two: t must be >= 0");
    const MappedRule rule = ea_.spatial_rule();
    const std::size_t m = rule.nodes.size();
    if (kind_ == Kind::factorized_symmetric) {
      double p1 = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        p1 += rule.weights[i] * std::norm(ea_.evolve(rule.nodes[i], t));
      return p1 * p1;
    }
    std::vector<cplx> fa(m), fb(m);
    for (std::size_t i = 0; i < m; ++i) {
      fa[i] = ea_.evolve(rule.nodes[i], t);
      fb[i] = eb_->evolve(rule.nodes[i], t);
    }
    // |Psi|^2 expands into products of the four pairwise overlaps.
    double naa = 0.0, nbb = 0.0;
    cplx nab = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      naa += rule.weights[i] * std::norm(fa[i]);
      nbb += rule.weights[i] * std::norm(fb[i]);
      nab += rule.weights[i] * std::conj(fa[i]) * fb[i];
    }
    return naa * nbb + static_cast<double>(sign_) * std::norm(nab);
  }

  DecayCurves decay_curves(const std::vector<double>& times,
                           int threads = 1) const {
    DecayCurves c;
    c.times = times;
    c.survival.resize(times.size());
    c.nonescape.resize(times.size());
    c.amplitude.resize(times.size());
    parallel_for(times.size(), threads, [&](std::size_t i) {
      auto [amp, s] = survival_two(times[i]);
      c.amplitude[i] = amp;
      c.survival[i] = s;
      c.nonescape[i] = nonescape_two(times[i]);
    });
    return c;
  }

 private:
  TwoBodyState(Kind kind, int sign, SingleParticleEvolution ea,
               std::optional<SingleParticleEvolution> eb)
      : kind_(kind), sign_(sign), ea_(std::move(ea)), eb_(std::move(eb)) {}

  static cplx cross_amplitude(const SingleParticleEvolution& ea,
                              const SingleParticleEvolution& eb, double t) {
    // X_ab(t) = sum_p C_{p,a} Cbar_{p,b} M(y_p^o), full pole range.
    cplx total = 0.0;
    const auto& ca = ea.coefficients().entries();
    const auto& cb = eb.coefficients().entries();
    const auto& states = ea.states();
    for (std::size_t i = 0; i < states.size(); ++i) {
      const cplx k = states[i].pole.kappa;
      total += ca[i].C * cb[i].Cbar * moshinsky_m0_kernel(k, t);
      total += std::conj(ca[i].Cbar * cb[i].C) *
               moshinsky_m0_kernel(-std::conj(k), t);
    }
    return total;
  }

  static cplx exponential_amplitude(const SingleParticleEvolution& ea,
                                    const SingleParticleEvolution& eb,
                                    double t) {
    cplx total = 0.0;
    const auto& ca = ea.coefficients().entries();
    const auto& cb = eb.coefficients().entries();
    const auto& states = ea.states();
    for (std::size_t i = 0; i < states.size(); ++i) {
      const cplx k = states[i].pole.kappa;
      total += ca[i].C * cb[i].Cbar * std::exp(cplx(0, -1) * k * k * t);
    }
    return total;
  }

  Kind kind_;
  int sign_;
  SingleParticleEvolution ea_;
  std::optional<SingleParticleEvolution> eb_;
};

}  // namespace qdecay
