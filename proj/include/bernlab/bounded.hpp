#pragma once

#include <algorithm>
#include <cmath>

namespace bernlab {

// A real number known to lie in [value - err, value + err].
struct BoundedValue {
  double value = 0.0;
  double err = 0.0;
  bool converged = true;

  double lo() const { return value - err; }
  double hi() const { return value + err; }

  static BoundedValue exact(double v) { return {v, 0.0, true}; }
  static BoundedValue from_interval(double lo, double hi, bool converged = true) {
    return {0.5 * (lo + hi), 0.5 * (hi - lo), converged};
  }
};

inline BoundedValue operator+(const BoundedValue& x, const BoundedValue& y) {
  return {x.value + y.value, x.err + y.err, x.converged && y.converged};
}

inline BoundedValue scale(const BoundedValue& x, double c) {
  return {x.value * c, x.err * std::abs(c), x.converged};
}

inline bool overlaps(const BoundedValue& x, const BoundedValue& y, double slack = 0.0) {
  return x.lo() <= y.hi() + slack && y.lo() <= x.hi() + slack;
}

// Rounding allowance for a sum of n nonnegative binary64 terms totalling s.
inline double summation_slack(double n, double s) { return (n + 8.0) * 1.2e-16 * std::abs(s); }

}  // namespace bernlab
