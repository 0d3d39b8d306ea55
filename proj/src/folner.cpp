#include "bernlab/folner.hpp"

#include <algorithm>
#include <cmath>

namespace bernlab {

double PhiSpec::at_index(std::int64_t k) const {
  double l = std::log1p(static_cast<double>(k));
  double a = alpha.get_d();
  return kind == Kind::Log1p ? a * l : a * std::sqrt(l);
}

std::string PhiSpec::describe() const {
  return std::string(kind == Kind::Log1p ? "log1p" : "sqrt_log") + ":" + alpha.get_str();
}

PhiSpec PhiSpec::parse(const std::string& text) {
  PhiSpec p;
  std::string name = text;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    name = text.substr(0, colon);
    p.alpha = parse_rational(text.substr(colon + 1));
  }
  if (name == "log1p" || name == "log") {
    p.kind = Kind::Log1p;
  } else if (name == "sqrt_log") {
    p.kind = Kind::SqrtLog;
  } else {
    throw ValidationError("unknown phi '" + name + "' (expected log1p or sqrt_log)");
  }
  if (p.alpha <= 0) throw ValidationError("phi scale must be positive");
  return p;
}

std::int64_t enumerate_integers(std::int64_t k) {
  if (k <= 0) return 0;
  return (k % 2 == 1) ? (k + 1) / 2 : -(k / 2);
}

std::int64_t enumeration_index(std::int64_t g) {
  if (g == 0) return 0;
  return g > 0 ? 2 * g - 1 : -2 * g;
}

namespace {

Rational sym_diff_ratio(std::int64_t g, std::int64_t length) {
  std::int64_t shift = std::min<std::int64_t>(std::abs(g), length);
  return Rational(2 * shift, length);
}

}  // namespace

bool FolnerCocycle::budget_condition() const {
  // phi(g_k) is increasing in k, so checking k = 1..N covers every k >= 1
  Rational acc = 0;
  for (std::size_t n = 1; n <= eps.size(); ++n) {
    acc += eps[n - 1] * eps[n - 1];
    double half_phi_sq = 0.5 * std::pow(phi.at_index(static_cast<std::int64_t>(n)), 2);
    if (acc.get_d() > half_phi_sq * (1 - 1e-12)) return false;
  }
  return true;
}

bool FolnerCocycle::folner_condition() const {
  for (std::size_t n = 1; n <= eps.size(); ++n) {
    const Rational& en = eps[n - 1];
    Rational pow2(1);
    pow2 /= Rational(mpz_class(1) << static_cast<unsigned>(n));
    for (std::size_t k = 1; k <= n; ++k) {
      Rational lhs = en * en * sym_diff_ratio(enumerate_integers(static_cast<std::int64_t>(k)), intervals[n - 1].length);
      Rational rhs = eps[k - 1] * eps[k - 1] * pow2;
      if (lhs > rhs) return false;
    }
  }
  return true;
}

FolnerCocycle build_folner(const PhiSpec& phi, const Rational& bound, int horizon) {
  if (bound <= 0 || bound > 1) throw ValidationError("folner bound must lie in (0,1]");
  if (horizon < 1 || horizon > 24) throw ValidationError("folner horizon must lie in 1..24");
  FolnerCocycle fc;
  fc.phi = phi;
  fc.bound = bound;

  const int bits = 30;
  double spent = 0.0;
  std::int64_t next_start = 1;
  for (int n = 1; n <= horizon; ++n) {
    double budget = 0.5 * std::pow(phi.at_index(n), 2) - spent;
    if (!(budget > 0)) throw ValidationError("phi is too small to host step " + std::to_string(n));
    double target = bound.get_d() * (1 - std::ldexp(1.0, -10)) / std::sqrt(static_cast<double>(n));
    target = std::min(target, std::sqrt(budget) * (1 - 1e-9));
    Rational e = dyadic_floor(target, bits);
    if (!fc.eps.empty() && e > fc.eps.back()) e = fc.eps.back();
    if (e <= 0) throw ValidationError("phi budget exhausted at step " + std::to_string(n));
    fc.eps.push_back(e);
    spent += Rational(e * e).get_d();

    // smallest 4^j with eps_n^2 * 2|g_k| / 4^j <= eps_k^2 2^-n for all k <= n
    Rational pow2(1);
    pow2 /= Rational(mpz_class(1) << static_cast<unsigned>(n));
    std::int64_t length = 1;
    unsigned j = 0;
    for (;; ++j, length *= 4) {
      if (j > 30) throw ValidationError("no admissible Folner interval at step " + std::to_string(n));
      bool ok = true;
      for (int k = 1; k <= n && ok; ++k) {
        Rational lhs = e * e * sym_diff_ratio(enumerate_integers(k), length);
        ok = lhs <= fc.eps[k - 1] * fc.eps[k - 1] * pow2;
      }
      if (ok) break;
    }
    Rational value = e / Rational(mpz_class(1) << j);
    value.canonicalize();
    fc.intervals.push_back({next_start, length, value});
    next_start += length;
  }
  return fc;
}

}  // namespace bernlab
