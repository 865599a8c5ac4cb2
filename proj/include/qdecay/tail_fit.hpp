#pragma once

// Log-log least-squares tail fitting for the inverse-power decay laws, plus
// automated detection of the post-exponential window.

#include <cmath>
#include <functional>
#include <vector>

#include "qdecay/errors.hpp"

namespace qdecay {

struct TailFitResult {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares slope of log(value) vs log(t) over times in [t_lo, t_hi].
/// Requires at least one decade of usable data and 3 points.
inline TailFitResult tail_fit(const std::vector<double>& times,
                              const std::vector<double>& values, double t_lo,
                              double t_hi) {
  if (times.size() != values.size())
    throw DomainError("tail_fit: times/values size mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo || times[i] > t_hi) continue;
    if (!(values[i] > 0.0)) continue;
    xs.push_back(std::log(times[i]));
    ys.push_back(std::log(values[i]));
  }
  if (xs.size() < 3 || xs.back() - xs.front() < std::log(10.0))
    throw WindowTooShort("tail_fit: window spans less than one decade");
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  TailFitResult fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.points = static_cast<int>(xs.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - fit.intercept - fit.slope * xs[i];
    ss += res * res;
  }
  if (xs.size() > 2)
    fit.stderr_slope = std::sqrt(ss / (n - 2.0) / (sxx - sx * sx / n));
  return fit;
}

/// First t in a log sweep of [t_min, t_max] where the exponential part of the
/// amplitude has dropped below `threshold` of the total. `split` returns
/// (|exponential|, |total|) at a given time.
inline double detect_post_exponential_start(
    const std::function<std::pair<double, double>(double)>& split,
    double t_min, double t_max, double threshold = 1e-3, int probes = 200) {
  const double l0 = std::log(t_min), l1 = std::log(t_max);
  for (int i = 0; i < probes; ++i) {
    const double t = std::exp(l0 + (l1 - l0) * i / (probes - 1));
    auto [e, tot] = split(t);
    if (tot > 0.0 && e < threshold * tot) return t;
  }
  throw NonConvergence(
      "detect_post_exponential_start: exponential part never dropped below "
      "threshold in the given range");
}

}  // namespace qdecay
