#pragma once

#include <cmath>
#include <utility>

namespace wagetheft {

inline constexpr int kMaxBisectionIterations = 200;
inline constexpr double kArgumentTolerance = 1e-12;

/// Root of a non-decreasing f on [lo, hi] with f(lo) <= 0 <= f(hi).
///
/// Halves the bracket until it stops shrinking in floating point or the
/// iteration budget runs out; returns the end with the smaller |f|.
template <class F>
double bisect_increasing(F&& f, double lo, double hi) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  for (int i = 0; i < kMaxBisectionIterations; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = f(mid);
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

/// Root of a non-increasing f on [lo, hi] with f(lo) >= 0 >= f(hi).
template <class F>
double bisect_decreasing(F&& f, double lo, double hi) {
  return bisect_increasing([&](double x) { return -f(x); }, lo, hi);
}

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of f on [lo, hi].
///
/// Converges to a local maximizer when f is unimodal on the bracket; the
/// best point seen (including both ends) is returned either way.
template <class F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarOptimum best{lo, f(lo)};
  const auto consider = [&](double x, double v) {
    if (v > best.value || (v == best.value && x < best.x)) best = {x, v};
  };
  consider(hi, f(hi));

  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < kMaxBisectionIterations && (hi - lo) > tol; ++i) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  consider(x1, f1);
  consider(x2, f2);
  return best;
}

}  // namespace wagetheft
