#include "bernlab/bump.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bernlab {

namespace {

constexpr std::int64_t kTablePositionLimit = std::int64_t{1} << 40;
constexpr std::size_t kTableEntryLimit = std::size_t{1} << 22;

__int128 to_i128(const mpz_class& z) {
  if (!z.fits_slong_p()) throw ValidationError("bump parameter too large: " + z.get_str());
  return static_cast<__int128>(z.get_si());
}

}  // namespace

std::pair<double, double> trigamma_bounds(double x) {
  double x2 = x * x, x3 = x2 * x, x5 = x3 * x2;
  double upper = 1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x3);
  double lower = upper - 1.0 / (30.0 * x5);
  return {lower * (1 - 1e-14), upper * (1 + 1e-14)};
}

BumpCocycle BumpCocycle::build(const Rational& D) {
  if (D <= 0) throw ValidationError("bump construction needs D > 0");
  BumpCocycle bc;
  bc.D_ = D;
  Rational inv = 1 / (144 * D * D);
  bc.delta_ = inv < 1 ? inv : Rational(1);
  bc.delta_.canonicalize();
  bc.delta_d_ = bc.delta_.get_d();
  bc.dnum_ = to_i128(bc.delta_.get_num());
  bc.dden_ = to_i128(bc.delta_.get_den());

  bc.b_.push_back(0);
  for (std::int64_t n = 0; bc.b_.back() < kTablePositionLimit && bc.b_.size() < kTableEntryLimit; ++n) {
    bc.b_.push_back(bc.b_.back() + 2 * bc.a(n));
  }
  return bc;
}

BumpCocycle::BumpCocycle(const BumpCocycle& other)
    : D_(other.D_),
      delta_(other.delta_),
      delta_d_(other.delta_d_),
      dnum_(other.dnum_),
      dden_(other.dden_),
      b_(other.b_) {
  std::lock_guard<std::mutex> lock(other.memo_mutex_);
  memo_ = other.memo_;
}

std::int64_t BumpCocycle::a(std::int64_t n) const {
  if (n < 0) throw std::out_of_range("bump index must be >= 0");
  if (n == 0) return 1;
  __int128 nn = static_cast<__int128>(n) * n;
  __int128 v = (dnum_ * nn + dden_ - 1) / dden_;
  return static_cast<std::int64_t>(std::max<__int128>(v, 1));
}

std::int64_t BumpCocycle::b(std::int64_t n) const {
  if (n < 0 || n >= table_size()) throw std::out_of_range("bump offset outside the tabulated range");
  return b_[n];
}

std::int64_t BumpCocycle::bump_of(std::int64_t m) const {
  if (m < 1) throw std::out_of_range("bump_of needs m >= 1");
  if (m > b_.back()) throw std::out_of_range("position " + std::to_string(m) + " beyond the tabulated bumps");
  auto it = std::lower_bound(b_.begin(), b_.end(), m);
  return static_cast<std::int64_t>(it - b_.begin()) - 1;
}

double BumpCocycle::H(std::int64_t m) const {
  if (m <= 0) return 0.0;
  std::int64_t n = bump_of(m);
  std::int64_t an = a(n);
  std::int64_t u = m - b_[n];
  return u <= an ? static_cast<double>(u) / static_cast<double>(an)
                 : static_cast<double>(2 * an - u) / static_cast<double>(an);
}

Rational BumpCocycle::H_exact(std::int64_t m) const {
  if (m <= 0) return 0;
  std::int64_t n = bump_of(m);
  std::int64_t an = a(n);
  std::int64_t u = m - b_[n];
  Rational r(u <= an ? u : 2 * an - u, an);
  r.canonicalize();
  return r;
}

void BumpCocycle::add_bumps(std::int64_t k, std::int64_t from, std::int64_t to, Partial& acc) const {
  const long double kk = static_cast<long double>(k);
  const long double s1 = kk * (kk + 1) / 2;
  const long double s2 = kk * (kk + 1) * (2 * kk + 1) / 6;
  const long double seg3num = (kk * kk * kk + 2 * kk) / 3;
  std::int64_t prev = from > 0 ? a(from - 1) : 0;
  for (std::int64_t n = from; n <= to; ++n) {
    std::int64_t an = a(n);
    if (n >= 1 && prev >= k) {
      long double A = static_cast<long double>(an), P = static_cast<long double>(prev);
      long double alpha = 1 / A + 1 / P, beta = -kk / P;
      long double seg1 = alpha * alpha * s2 + 2 * alpha * beta * s1 + kk * beta * beta;
      long double seg24 = 2 * (A - kk) * kk * kk / (A * A);
      long double seg3 = seg3num / (A * A);
      acc.sum += seg1 + seg24 + seg3;
      acc.terms += 1;
    } else {
      std::int64_t start = b(n);
      for (std::int64_t u = 1; u <= 2 * an; ++u) {
        double h = u <= an ? static_cast<double>(u) / static_cast<double>(an)
                           : static_cast<double>(2 * an - u) / static_cast<double>(an);
        double d = h - H(start + u - k);
        acc.sum += static_cast<long double>(d) * d;
        acc.terms += 1;
      }
    }
    prev = an;
  }
}

std::pair<double, double> BumpCocycle::inverse_tail(std::int64_t N) const {
  if (N < 1) throw std::invalid_argument("inverse_tail needs N >= 1");
  auto [plo, phi] = trigamma_bounds(static_cast<double>(N + 1));
  double Nd = static_cast<double>(N);
  double quartic = 1.0 / (3.0 * delta_d_ * delta_d_ * Nd * Nd * Nd);
  double hi = phi / delta_d_;
  double lo = std::max(0.0, plo / delta_d_ - quartic);
  return {lo * (1 - 1e-13), hi * (1 + 1e-13)};
}

std::pair<double, double> BumpCocycle::bump_tail(std::int64_t k, std::int64_t N) const {
  if (a(N) < k) throw std::invalid_argument("bump_tail needs a_N >= k");
  auto [s1lo, s1hi] = inverse_tail(N);
  double kd = static_cast<double>(k);
  double Nd = static_cast<double>(N);
  double aN = static_cast<double>(a(N));
  double s2 = 1.0 / (3.0 * delta_d_ * delta_d_ * Nd * Nd * Nd);
  double lo = std::max(0.0, 2 * kd * kd * s1lo - 2 * kd * kd * kd * s2);
  double hi = 2 * kd * kd * s1hi + kd * kd * kd * (1.0 / (aN * aN) + s2);
  return {lo * (1 - 1e-13), hi * (1 + 1e-13)};
}

BoundedValue BumpCocycle::finish(std::int64_t k, std::int64_t N, const Partial& acc, bool converged) const {
  auto [lo, hi] = bump_tail(k, N);
  double head = static_cast<double>(acc.sum);
  double slack = summation_slack(4.0 * static_cast<double>(acc.terms), head);
  return BoundedValue::from_interval(std::max(0.0, head - slack + lo), head + slack + hi, converged);
}

bool BumpCocycle::at_rounding_floor(std::int64_t k, std::int64_t N, const Partial& acc) const {
  // more bumps only shrink the tail bracket, which is already below the summation slack
  auto [lo, hi] = bump_tail(k, N);
  return hi - lo <= summation_slack(4.0 * static_cast<double>(acc.terms), static_cast<double>(acc.sum));
}

namespace {

std::int64_t first_index_at_least(const BumpCocycle& bc, std::int64_t k) {
  double guess = std::sqrt(static_cast<double>(k) / bc.delta_d());
  std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess) - 2);
  while (n > 1 && bc.a(n - 1) >= k) --n;
  while (bc.a(n) < k) ++n;
  return n;
}

}  // namespace

BoundedValue BumpCocycle::gamma_norm_sq(std::int64_t k, double tol, std::int64_t max_bumps) const {
  if (k < 0) k = -k;
  if (k == 0) return BoundedValue::exact(0.0);
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(k);
    if (it != memo_.end() && (it->second.err <= tol * std::max(1.0, it->second.value))) return it->second;
  }

  std::int64_t N = std::max<std::int64_t>(first_index_at_least(*this, k) + 1, 64);
  Partial acc;
  add_bumps(k, 0, N, acc);
  BoundedValue result;
  for (;;) {
    bool capped = N >= max_bumps;
    result = finish(k, N, acc, true);
    if (result.err <= tol * std::max(1.0, result.value) || at_rounding_floor(k, N, acc)) break;
    if (capped) {
      result.converged = false;
      break;
    }
    std::int64_t next = std::min(max_bumps, 2 * N);
    add_bumps(k, N + 1, next, acc);
    N = next;
  }

  std::lock_guard<std::mutex> lock(memo_mutex_);
  auto it = memo_.find(k);
  if (it == memo_.end() || it->second.err > result.err) memo_[k] = result;
  return result;
}

BoundedValue BumpCocycle::gamma_tail(std::int64_t k, std::int64_t m0, double tol) const {
  if (k == 0) return BoundedValue::exact(0.0);
  if (k < 0) return gamma_tail(-k, m0 - k, tol);
  if (m0 < 0) m0 = 0;

  std::int64_t n = bump_of(m0 + 1);
  Partial acc;
  for (std::int64_t m = m0 + 1; m <= b(n + 1); ++m) {
    double d = H(m) - H(m - k);
    acc.sum += static_cast<long double>(d) * d;
    acc.terms += 1;
  }
  std::int64_t N = std::max<std::int64_t>(std::max(first_index_at_least(*this, k) + 1, n + 1), 64);
  add_bumps(k, n + 1, N, acc);
  BoundedValue result;
  const std::int64_t cap = 100'000'000;
  for (;;) {
    result = finish(k, N, acc, true);
    if (result.err <= tol * std::max(1.0, result.value) || at_rounding_floor(k, N, acc)) break;
    if (N >= cap) {
      result.converged = false;
      break;
    }
    std::int64_t next = std::min(cap, 2 * N);
    add_bumps(k, N + 1, next, acc);
    N = next;
  }
  return result;
}

BoundedValue BumpCocycle::gamma_norm_sq_direct(std::int64_t k, std::int64_t n_bumps) const {
  if (k < 0) k = -k;
  if (k == 0) return BoundedValue::exact(0.0);
  if (a(n_bumps) < k) throw std::invalid_argument("direct sum needs a_N >= k");
  Partial acc;
  std::int64_t end = b(n_bumps + 1);
  for (std::int64_t m = 1; m <= end; ++m) {
    double d = H(m) - H(m - k);
    acc.sum += static_cast<long double>(d) * d;
    acc.terms += 1;
  }
  return finish(k, n_bumps, acc, true);
}

}  // namespace bernlab
