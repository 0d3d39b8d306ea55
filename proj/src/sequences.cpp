#include "bernlab/sequences.hpp"

#include <cmath>
#include <limits>

namespace bernlab {

DecreasingSequence DecreasingSequence::inv_sqrt(const Rational& scale) {
  if (scale <= 0) throw ValidationError("inv_sqrt scale must be positive");
  DecreasingSequence s;
  s.kind_ = Kind::InvSqrt;
  s.scale_ = scale;
  return s;
}

DecreasingSequence DecreasingSequence::inv_sqrt_log(std::int64_t shift) {
  // n log n must be positive from the first term on
  if (shift < 2) throw ValidationError("inv_sqrt_log needs shift >= 2");
  DecreasingSequence s;
  s.kind_ = Kind::InvSqrtLog;
  s.shift_ = shift;
  return s;
}

DecreasingSequence DecreasingSequence::geometric(const Rational& first, const Rational& ratio) {
  if (first <= 0) throw ValidationError("geometric sequence needs first > 0");
  if (ratio <= 0 || ratio >= 1) throw ValidationError("geometric ratio must lie in (0,1)");
  DecreasingSequence s;
  s.kind_ = Kind::Geometric;
  s.first_ = first;
  s.ratio_ = ratio;
  return s;
}

DecreasingSequence DecreasingSequence::explicit_values(std::vector<Rational> values) {
  if (values.empty()) throw ValidationError("explicit sequence is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= 0) throw ValidationError("explicit sequence entries must be positive");
    if (i > 0 && values[i] > values[i - 1]) throw ValidationError("explicit sequence must be decreasing");
  }
  DecreasingSequence s;
  s.kind_ = Kind::Explicit;
  s.values_ = std::move(values);
  for (const Rational& v : s.values_) s.values_d_.push_back(v.get_d());
  return s;
}

std::string DecreasingSequence::tag() const {
  switch (kind_) {
    case Kind::InvSqrt: return "inv_sqrt";
    case Kind::InvSqrtLog: return "inv_sqrt_log";
    case Kind::Geometric: return "geometric";
    case Kind::Explicit: return "explicit";
  }
  return "?";
}

double DecreasingSequence::at(std::int64_t n) const {
  if (n < 0) throw std::out_of_range("sequence index must be >= 0");
  switch (kind_) {
    case Kind::InvSqrt: return scale_.get_d() / std::sqrt(static_cast<double>(n + 1));
    case Kind::InvSqrtLog: {
      double x = static_cast<double>(n + shift_);
      return 1.0 / std::sqrt(x * std::log(x));
    }
    case Kind::Geometric: return first_.get_d() * std::pow(ratio_.get_d(), static_cast<double>(n));
    case Kind::Explicit: return n < static_cast<std::int64_t>(values_d_.size()) ? values_d_[n] : 0.0;
  }
  return 0.0;
}

double DecreasingSequence::sq(std::int64_t n) const {
  switch (kind_) {
    case Kind::InvSqrt: {
      double s = scale_.get_d();
      return s * s / static_cast<double>(n + 1);
    }
    case Kind::InvSqrtLog: {
      double x = static_cast<double>(n + shift_);
      return 1.0 / (x * std::log(x));
    }
    default: {
      double a = at(n);
      return a * a;
    }
  }
}

std::optional<Rational> DecreasingSequence::exact_at(std::int64_t n) const {
  if (kind_ == Kind::Explicit) {
    return n < static_cast<std::int64_t>(values_.size()) ? values_[n] : Rational(0);
  }
  if (kind_ == Kind::Geometric && n < 4096) {
    Rational r = first_;
    for (std::int64_t i = 0; i < n; ++i) r *= ratio_;
    return r;
  }
  if (kind_ == Kind::InvSqrt && n == 0) return scale_;
  return std::nullopt;
}

double DecreasingSequence::sup_upper() const {
  double a0 = at(0);
  return kind_ == Kind::InvSqrtLog ? a0 * (1.0 + 1e-12) : a0;
}

std::optional<std::int64_t> DecreasingSequence::support_end() const {
  if (kind_ == Kind::Explicit) return static_cast<std::int64_t>(values_.size());
  return std::nullopt;
}

double DecreasingSequence::head_sq_sum(std::int64_t k) const {
  double s = 0.0;
  for (std::int64_t n = 0; n < k; ++n) s += sq(n);
  return s;
}

double DecreasingSequence::diff_tail_bound(std::int64_t k, std::int64_t n1) const {
  if (k <= 0) return 0.0;
  if (auto end = support_end()) {
    // every a_{n-k} with n - k >= end vanishes, so nothing remains
    if (n1 - k + 1 >= *end) return 0.0;
  }
  if (kind_ == Kind::Geometric) {
    // exact: first^2 (1 - r^k)^2 r^{2(n1+1-k)} / (1 - r^2)
    double f = first_.get_d(), r = ratio_.get_d();
    double rk = std::pow(r, static_cast<double>(k));
    double v = f * f * (1 - rk) * (1 - rk) * std::pow(r, 2.0 * static_cast<double>(n1 + 1 - k)) / (1 - r * r);
    return v * (1 + 1e-12);
  }

  // telescoping: sum_{n > n1} (a_{n-k}^2 - a_n^2) = sum_{n=n1-k+1}^{n1} a_n^2
  double tele = 0.0;
  for (std::int64_t n = n1 - k + 1; n <= n1; ++n) tele += sq(n);
  tele *= 1 + 1e-12;

  // mean value bound: |a_{n-k} - a_n| <= k |a'(n-k)|
  double mv = std::numeric_limits<double>::infinity();
  double y0 = static_cast<double>(n1 - k + 1);
  if (kind_ == Kind::InvSqrt && y0 >= 1) {
    // a'(x)^2 = s^2 / (4 (x+1)^3); sum_{y >= y0+1} y^-3 <= 1 / (2 y0^2)
    double s = scale_.get_d();
    mv = static_cast<double>(k) * static_cast<double>(k) * s * s / (8.0 * y0 * y0);
  } else if (kind_ == Kind::InvSqrtLog) {
    // y = x + shift; a'(y)^2 = (log y + 1)^2 / (4 (y log y)^3) <= C(Y0) / y^3 for y >= Y0
    double Y0 = y0 + static_cast<double>(shift_) - 1.0;
    if (Y0 > 3) {
      double L = std::log(Y0);
      double C = 0.25 * (L + 1) * (L + 1) / (L * L * L);
      mv = static_cast<double>(k) * static_cast<double>(k) * C / (2.0 * (Y0 - 1) * (Y0 - 1));
    }
  }
  return std::min(tele, mv * (1 + 1e-12));
}

}  // namespace bernlab
