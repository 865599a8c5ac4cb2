#pragma once

// Gauss-Legendre nodes/weights (Newton iteration on P_n) with a process-wide
// cache, plus small helpers for integrating callables on [lo, hi].

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include "qdecay/errors.hpp"

namespace qdecay {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

inline GaussRule gauss_legendre_raw(int n) {
  if (n < 1) throw DomainError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

inline const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre_raw(n)).first;
  return it->second;
}

/// Nodes and weights mapped to [lo, hi].
struct MappedRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline MappedRule gauss_legendre_on(double lo, double hi, int n) {
  const GaussRule& rule = gauss_legendre(n);
  MappedRule mapped;
  mapped.nodes.resize(n);
  mapped.weights.resize(n);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    mapped.nodes[i] = mid + half * rule.nodes[i];
    mapped.weights[i] = half * rule.weights[i];
  }
  return mapped;
}

template <typename F>
auto integrate(F&& f, double lo, double hi, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  auto acc = decltype(f(lo)){};
  for (int i = 0; i < n; ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

/// Integrate with order doubling until two refinements agree to `tol`
/// (relative to scale, absolute below it). Throws QuadratureNotConverged.
template <typename F>
auto integrate_adaptive(F&& f, double lo, double hi, double tol,
                        int order0 = 16, int max_order = 4096) {
  auto prev = integrate(f, lo, hi, order0);
  for (int n = 2 * order0; n <= max_order; n *= 2) {
    auto cur = integrate(f, lo, hi, n);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  throw QuadratureNotConverged("integrate_adaptive: no convergence to tol");
}

}  // namespace qdecay
