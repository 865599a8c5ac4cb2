#pragma once

// Expansion machinery: initial states confined to [0, a], the coefficients
// C_n = int psi u_n and Cbar_n = int psi* u_n, strength sums
// Re sum C_n Cbar_n -> 1, and truncation control.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qdecay/delta_shell.hpp"
#include "qdecay/errors.hpp"
#include "qdecay/quadrature.hpp"

namespace qdecay {

class InitialState {
 public:
  enum class Kind { box_eigenstate, tabulated };

  /// Infinite-box eigenstate psi_alpha(r) = sqrt(2/a) sin(alpha pi r / a).
  static InitialState box(int alpha, double a) {
    if (alpha < 1) throw DomainError("InitialState::box: alpha must be >= 1");
    if (!(a > 0.0)) throw DomainError("InitialState::box: a must be > 0");
    InitialState s;
    s.kind_ = Kind::box_eigenstate;
    s.alpha_ = alpha;
    s.a_ = a;
    s.real_valued_ = true;
    return s;
  }

  /// State tabulated on a uniform grid over [0, a] (values.front() must be 0);
  /// rescaled to unit norm on construction.
  static InitialState tabulated(std::vector<cplx> values, double a) {
    if (values.size() < 8)
      throw DomainError("InitialState::tabulated: need at least 8 samples");
    if (std::abs(values.front()) > 1e-12)
      throw DomainError("InitialState::tabulated: psi(0) must vanish");
    if (!(a > 0.0)) throw DomainError("InitialState::tabulated: a must be > 0");
    InitialState s;
    s.kind_ = Kind::tabulated;
    s.a_ = a;
    s.samples_ = std::move(values);
    s.samples_.front() = 0.0;
    s.real_valued_ = true;
    for (const cplx& v : s.samples_)
      if (v.imag() != 0.0) s.real_valued_ = false;
    const double norm2 =
        integrate([&s](double r) { return std::norm(s.interp(r)); }, 0.0, a,
                  256);
    if (!(norm2 > 1e-14))
      throw DomainError("InitialState::tabulated: state has zero norm");
    const double scale = 1.0 / std::sqrt(norm2);
    for (cplx& v : s.samples_) v *= scale;
    return s;
  }

  Kind kind() const { return kind_; }
  int alpha() const { return alpha_; }
  double a() const { return a_; }
  bool real_valued() const { return real_valued_; }

  cplx eval(double r) const {
    if (r < 0.0 || r > a_)
      throw DomainError("InitialState::eval: r outside [0, a]");
    if (kind_ == Kind::box_eigenstate)
      return std::sqrt(2.0 / a_) * std::sin(alpha_ * M_PI * r / a_);
    return interp(r);
  }

  double norm() const {
    return integrate([this](double r) { return std::norm(eval(r)); }, 0.0, a_,
                     256);
  }

 private:
  InitialState() = default;

  // Catmull-Rom cubic through the uniform samples.
  cplx interp(double r) const {
    const std::size_t n = samples_.size();
    const double h = a_ / static_cast<double>(n - 1);
    double u = r / h;
    auto i = static_cast<std::ptrdiff_t>(std::floor(u));
    if (i < 0) i = 0;
    if (i > static_cast<std::ptrdiff_t>(n) - 2)
      i = static_cast<std::ptrdiff_t>(n) - 2;
    const double x = u - static_cast<double>(i);
    const cplx p1 = samples_[i], p2 = samples_[i + 1];
    const cplx p0 = i > 0 ? samples_[i - 1] : 2.0 * p1 - p2;
    const cplx p3 = i + 2 < static_cast<std::ptrdiff_t>(n)
                        ? samples_[i + 2]
                        : 2.0 * p2 - p1;
    const cplx m1 = 0.5 * (p2 - p0), m2 = 0.5 * (p3 - p1);
    const double x2 = x * x, x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * p1 + (x3 - 2 * x2 + x) * m1 +
           (-2 * x3 + 3 * x2) * p2 + (x3 - x2) * m2;
  }

  Kind kind_ = Kind::box_eigenstate;
  int alpha_ = 1;
  double a_ = 1.0;
  bool real_valued_ = true;
  std::vector<cplx> samples_;
};

/// (C_n, Cbar_n) for one resonant state. Box states use the closed-form
/// sine-sine overlap; tabulated states use Gauss-Legendre with order doubling.
inline std::pair<cplx, cplx> coefficient(const ResonantState& s,
                                         const InitialState& psi) {
  const cplx k = s.pole.kappa;
  const double a = s.a;
  if (psi.kind() == InitialState::Kind::box_eigenstate) {
    const int alpha = psi.alpha();
    const double q = alpha * M_PI / a;
    const double sign = (alpha % 2 == 0) ? -1.0 : 1.0;
    const cplx c = sign * std::sqrt(2.0 / a) * s.norm_const * std::sin(k * a) *
                   q / (q * q - k * k);
    return {c, c};  // real initial state
  }
  const cplx c = integrate_adaptive(
      [&](double r) { return psi.eval(r) * s.eval(r); }, 0.0, a, 1e-9, 64,
      8192);
  if (psi.real_valued()) return {c, c};
  const cplx cbar = integrate_adaptive(
      [&](double r) { return std::conj(psi.eval(r)) * s.eval(r); }, 0.0, a,
      1e-9, 64, 8192);
  return {c, cbar};
}

struct CoefficientEntry {
  int n;
  cplx C;
  cplx Cbar;
  double strength;  // Re{C_n Cbar_n}
};

class CoefficientSet {
 public:
  CoefficientSet() = default;
  CoefficientSet(std::vector<CoefficientEntry> entries)
      : entries_(std::move(entries)) {}

  const std::vector<CoefficientEntry>& entries() const { return entries_; }
  int truncation() const { return static_cast<int>(entries_.size()); }

  double strength_sum() const { return strength_sum(truncation()); }

  double strength_sum(int n_terms) const {
    double total = 0.0;
    for (int i = 0; i < n_terms && i < truncation(); ++i)
      total += entries_[i].strength;
    return total;
  }

 private:
  std::vector<CoefficientEntry> entries_;
};

inline CoefficientSet build_coefficients(
    const std::vector<ResonantState>& states, const InitialState& psi) {
  std::vector<CoefficientEntry> entries;
  entries.reserve(states.size());
  for (const ResonantState& s : states) {
    auto [c, cbar] = coefficient(s, psi);
    entries.push_back(
        CoefficientEntry{s.pole.index, c, cbar, (c * cbar).real()});
  }
  return CoefficientSet(std::move(entries));
}

/// Smallest N with |1 - Re sum_{n<=N} C_n Cbar_n| <= tol, capped.
inline int choose_truncation(const ShellPotential& p, const InitialState& psi,
                             double tol, int cap = 500) {
  if (!(tol > 0.0 && tol < 0.1))
    throw DomainError("choose_truncation: tol must lie in (0, 0.1)");
  int block = 16;
  PoleSet poles = find_poles(p, std::min(block, cap));
  auto states = normalize_all(poles);
  CoefficientSet coeffs = build_coefficients(states, psi);
  double running = 0.0;
  int n = 0;
  for (;;) {
    for (const auto& e : coeffs.entries()) {
      if (e.n <= n) continue;
      running += e.strength;
      n = e.n;
      if (std::abs(1.0 - running) <= tol) return n;
    }
    if (n >= cap)
      throw TruncationCapReached(
          "choose_truncation: cap " + std::to_string(cap) +
              " reached, deficit " + std::to_string(std::abs(1.0 - running)),
          std::abs(1.0 - running));
    block = std::min(2 * block, cap);
    poles = find_poles(p, block);
    states = normalize_all(poles);
    coeffs = build_coefficients(states, psi);
    running = coeffs.strength_sum(n);
  }
}

}  // namespace qdecay
