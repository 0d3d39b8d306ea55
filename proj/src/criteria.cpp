#include "bernlab/criteria.hpp"

#include "bernlab/cocycles.hpp"

#include "bernlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bernlab {

Rational kappa0(const Rational& delta) {
  if (delta <= 0 || delta > Rational(1, 2)) throw ValidationError("delta must lie in (0, 1/2]");
  Rational om = 1 - delta;
  Rational k = 1 / (delta * delta) + 1 / (delta * om * om);
  k.canonicalize();
  return k;
}

Rational auto_kappa(const Rational& delta) {
  Rational k = kappa0(delta);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), k.get_num_mpz_t(), k.get_den_mpz_t());
  return Rational(fl + 1);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Conservative: return "Conservative";
    case Verdict::Dissipative: return "Dissipative";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::vector<PartialSum> criterion_partial_sums(const ActionSpec& spec, double kappa, std::int64_t radius, double tol) {
  if (!(kappa > 0)) throw ValidationError("kappa must be positive");
  if (radius < 0) throw ValidationError("radius must be >= 0");
  std::vector<PartialSum> out;
  double lo = 0, hi = 0;
  for (std::int64_t n = 0; n <= radius; ++n) {
    auto sph = sphere(spec.group, n);
    std::vector<BoundedValue> norms(sph.size());
    parallel_for(static_cast<std::int64_t>(sph.size()), [&](std::int64_t i) { norms[i] = norm_sq(spec, sph[i], tol).value; });
    for (const BoundedValue& v : norms) {
      lo += std::exp(-kappa * v.hi());
      hi += std::exp(-kappa * v.lo());
    }
    double slack = summation_slack(static_cast<double>(sph.size()), hi);
    out.push_back({n, std::max(0.0, lo - slack), hi + slack});
  }
  return out;
}

double word_block_partial_sum(double alpha, double beta, double kappa_m, std::int64_t s_max) {
  // words a^-1 b^n1 a b^m1 ... a^-1 b^nk a b^mk with n_i, m_i >= 1 and total b-exponent s:
  // C(s-1, 2k-1) of them, each with ||c||^2 = 2k alpha^2 + beta^2 s - 2 alpha beta (k-1)
  double best = -INFINITY;
  std::vector<double> logs;
  for (std::int64_t k = 1; 2 * k <= s_max; ++k) {
    for (std::int64_t s = 2 * k; s <= s_max; ++s) {
      double lc = std::lgamma(static_cast<double>(s)) - std::lgamma(static_cast<double>(2 * k)) -
                  std::lgamma(static_cast<double>(s - 2 * k + 1));
      double norm = 2.0 * k * alpha * alpha + beta * beta * s - 2.0 * alpha * beta * (k - 1);
      double l = lc - kappa_m * norm;
      logs.push_back(l);
      best = std::max(best, l);
    }
  }
  if (logs.empty()) return 0.0;
  double acc = 0;
  for (double l : logs) acc += std::exp(l - best);
  double lv = best + std::log(acc);
  return lv > 700 ? INFINITY : std::exp(lv);
}

namespace {

double block_ratio(double alpha, double beta, double kappa_m) {
  if (beta == 0) return INFINITY;
  double q = std::exp(-kappa_m * beta * beta);
  double geo = q / (1 - q);
  return std::exp(-kappa_m * (2 * alpha * alpha - 2 * alpha * beta)) * geo * geo;
}

double ball_head(const ActionSpec& spec, std::int64_t H) {
  double head = 0;
  for (std::int64_t n = 0; n <= H; ++n) {
    for (const GroupElement& g : sphere(spec.group, n)) head += std::exp(-0.5 * norm_sq(spec, g, 1e-9).value.lo());
  }
  return head * (1 + 1e-12);
}

std::optional<DissipativeCertificate> geometric_certificate(const ActionSpec& spec, double slope, double coeff,
                                                            double base, std::int64_t H, std::string bound) {
  if (!(slope > 0)) return std::nullopt;
  DissipativeCertificate c;
  c.kind = DissipativeCertificate::Kind::Geometric;
  c.lower_bound = std::move(bound);
  c.slope = slope;
  c.sphere_coeff = coeff;
  c.sphere_base = base;
  c.rho = base * std::exp(-slope / 2);
  if (!(c.rho < 1)) return std::nullopt;
  c.head_radius = H;
  c.head = ball_head(spec, H);
  c.tail = coeff * std::pow(c.rho, static_cast<double>(H + 1)) / (1 - c.rho);
  c.total = c.head + c.tail;
  return c;
}

std::optional<DissipativeCertificate> dissipative_certificate(const ActionSpec& spec, std::int64_t radius) {
  const double m = static_cast<double>(spec.multiplicity);
  if (auto* w = spec.as<WSplit>()) {
    double a = Rational(w->p_a - w->p_w).get_d(), b = Rational(w->p_b - w->p_w).get_d();
    double sigma = a * b <= 0 ? std::min(a * a, b * b) : std::min(a * a, b * b) - a * b;
    std::ostringstream os;
    os << "||c_g||^2 >= " << m * sigma << " |g| (syllable closed form, descending pairs <= |g|/2)";
    return geometric_certificate(spec, m * sigma, 4.0 / 3.0, 3.0, std::min<std::int64_t>(radius, 6), os.str());
  }
  if (auto* s = spec.as<SpecialCocycle>()) {
    double slope = m * Rational(s->scale * s->scale * s->D).get_d();
    std::ostringstream os;
    os << "||c_g||^2 >= " << slope << " |g| (bump norms ||gamma_k||^2 >= D |k|^{3/2})";
    if (spec.group.is_free()) return geometric_certificate(spec, slope, 4.0 / 3.0, 3.0, std::min<std::int64_t>(radius, 3), os.str());
    return geometric_certificate(spec, slope, 2.0, 1.0, std::min<std::int64_t>(radius, 16), os.str());
  }
  if (auto* z = spec.as<ZSequence>()) {
    if (z->a.kind() != DecreasingSequence::Kind::InvSqrt) return std::nullopt;
    double s2 = Rational(z->a.scale() * z->a.scale()).get_d();
    DissipativeCertificate c;
    c.kind = DissipativeCertificate::Kind::PowerLaw;
    c.slope = m * s2;
    c.exponent = c.slope / 2;
    if (!(c.exponent > 1)) return std::nullopt;
    std::ostringstream os;
    os << "||c_k||^2 >= " << c.slope << " log(1+|k|) (head of the translate sandwich)";
    c.lower_bound = os.str();
    c.head_radius = std::max<std::int64_t>(radius, 1);
    c.head = ball_head(spec, c.head_radius);
    c.tail = 2 * std::pow(1.0 + static_cast<double>(c.head_radius), 1 - c.exponent) / (c.exponent - 1);
    c.total = c.head + c.tail;
    return c;
  }
  return std::nullopt;
}

std::optional<ConservativeWitness> conservative_witness(const ActionSpec& spec, double kappa) {
  const double m = static_cast<double>(spec.multiplicity);
  const double km = kappa * m;
  ConservativeWitness w;
  w.kappa = kappa;
  w.kappa_m = km;
  if (auto* f = spec.as<FreeProductW>()) {
    w.kind = ConservativeWitness::Kind::Constant;
    w.family = "reduced words avoiding the distinguished generator";
    w.upper_bound = "||c_g||^2 = 0 on the witness family";
    w.factor = 1;
    (void)f;
    return w;
  }
  if (auto* ws = spec.as<WSplit>()) {
    double a = Rational(ws->p_a - ws->p_w).get_d(), b = Rational(ws->p_b - ws->p_w).get_d();
    w.family = "a^-1 b^n1 a b^m1 ... a^-1 b^nk a b^mk in <b, a^-1 b a>, n_i, m_i >= 1";
    w.upper_bound = "||c||^2 = 2k alpha^2 + beta^2 sum(n+m) - 2 alpha beta (k-1)";
    w.alpha = a;
    w.beta = b;
    if (b == 0) {
      w.kind = ConservativeWitness::Kind::Constant;
      w.factor = std::exp(-km * 2 * a * a);
      w.upper_bound = "||c||^2 = 2 alpha^2 on a^-1 b^n a, n >= 1";
      return w;
    }
    w.kind = ConservativeWitness::Kind::WordBlocks;
    w.ratio = block_ratio(a, b, km);
    if (!(w.ratio >= 1)) return std::nullopt;
    w.factor = std::exp(2 * km * a * b);
    for (std::int64_t s = 4; s <= 2048; s *= 2) {
      double ps = word_block_partial_sum(a, b, km, s);
      w.partial_sums.push_back({s, ps});
      if (ps > 1e3) break;
    }
    return w;
  }
  if (auto* z = spec.as<ZSequence>()) {
    switch (z->a.kind()) {
      case DecreasingSequence::Kind::InvSqrt: {
        double s2 = Rational(z->a.scale() * z->a.scale()).get_d();
        w.kind = ConservativeWitness::Kind::PowerLaw;
        w.family = "k >= 1";
        w.exponent = 2 * km * s2;
        w.factor = std::exp(-w.exponent);
        std::ostringstream os;
        os << "||c_k||^2 <= 2 m s^2 (1 + log k) with s^2 = " << s2;
        w.upper_bound = os.str();
        if (!(w.exponent <= 1)) return std::nullopt;
        double acc = 0;
        std::int64_t next = 10;
        for (std::int64_t k = 1; k <= 1'000'000; ++k) {
          acc += w.factor * std::pow(static_cast<double>(k), -w.exponent);
          if (k == next) {
            w.partial_sums.push_back({k, acc});
            next *= 10;
          }
        }
        return w;
      }
      case DecreasingSequence::Kind::InvSqrtLog: {
        double N = static_cast<double>(z->n0);
        double C = 1.0 / (N * std::log(N)) - std::log(std::log(N));
        w.kind = ConservativeWitness::Kind::LogPower;
        w.family = "k >= 1";
        w.exponent = 2 * km;
        w.factor = std::exp(-2 * km * C);
        std::ostringstream os;
        os << "||c_k||^2 <= 2 m (" << C << " + log log(" << z->n0 << " k))";
        w.upper_bound = os.str();
        return w;
      }
      default: {
        double total;
        if (z->a.kind() == DecreasingSequence::Kind::Geometric) {
          Rational f = z->a.first(), r = z->a.ratio();
          total = Rational(f * f / (1 - r * r)).get_d();
        } else {
          Rational t = 0;
          for (const Rational& v : z->a.values()) t += v * v;
          total = t.get_d();
        }
        w.kind = ConservativeWitness::Kind::Constant;
        w.family = "k >= 1";
        w.factor = std::exp(-2 * km * total * (1 + 1e-12));
        std::ostringstream os;
        os << "||c_k||^2 <= 2 m sum a_n^2 = " << 2 * m * total;
        w.upper_bound = os.str();
        return w;
      }
    }
  }
  if (auto* fo = spec.as<FolnerInduced>()) {
    Rational t = 0;
    for (const auto& iv : fo->intervals) t += iv.value * iv.value * iv.length;
    w.kind = ConservativeWitness::Kind::Constant;
    w.family = "g in Z";
    w.factor = std::exp(-2 * km * t.get_d() * (1 + 1e-12));
    std::ostringstream os;
    os << "||c_g||^2 <= 2 m sum F^2 = " << 2 * m * t.get_d();
    w.upper_bound = os.str();
    return w;
  }
  return std::nullopt;
}

}  // namespace

bool DissipativeCertificate::recheck() const {
  if (!(slope > 0) || !std::isfinite(total)) return false;
  if (kind == Kind::Geometric) {
    double r = sphere_base * std::exp(-slope / 2);
    if (!(r < 1) || std::abs(r - rho) > 1e-12 * std::max(1.0, r)) return false;
    double t = sphere_coeff * std::pow(r, static_cast<double>(head_radius + 1)) / (1 - r);
    if (std::abs(t - tail) > 1e-9 * std::max(1.0, t)) return false;
    double ball_bound = 1;
    for (std::int64_t n = 1; n <= head_radius; ++n) ball_bound += sphere_coeff * std::pow(sphere_base, static_cast<double>(n));
    if (head > ball_bound * (1 + 1e-9)) return false;
  } else {
    if (std::abs(exponent - slope / 2) > 1e-12 * exponent || !(exponent > 1)) return false;
    double t = 2 * std::pow(1.0 + static_cast<double>(head_radius), 1 - exponent) / (exponent - 1);
    if (std::abs(t - tail) > 1e-9 * std::max(1.0, t)) return false;
    if (head > static_cast<double>(2 * head_radius + 1) * (1 + 1e-9)) return false;
  }
  return std::abs(total - (head + tail)) <= 1e-9 * std::max(1.0, total);
}

bool ConservativeWitness::recheck() const {
  if (!(factor > 0)) return false;
  switch (kind) {
    case Kind::Constant: return true;
    case Kind::PowerLaw: return exponent > 0 && exponent <= 1;
    case Kind::LogPower: return exponent > 0;
    case Kind::WordBlocks: {
      double r = block_ratio(alpha, beta, kappa_m);
      if (!(r >= 1) || std::abs(r - ratio) > 1e-9 * r) return false;
      double prev = 0;
      for (const auto& [s, ps] : partial_sums) {
        if (ps < prev) return false;
        double again = word_block_partial_sum(alpha, beta, kappa_m, s);
        if (std::abs(again - ps) > 1e-9 * std::max(1.0, ps)) return false;
        prev = ps;
      }
      return true;
    }
  }
  return false;
}

bool CriterionVerdict::recheck() const {
  switch (verdict) {
    case Verdict::Dissipative: return dissipative && dissipative->recheck();
    case Verdict::Conservative: return conservative && conservative->recheck();
    case Verdict::Inconclusive: return true;
  }
  return false;
}

CriterionVerdict classify_conservativity(const ActionSpec& spec, std::optional<double> kappa, std::int64_t radius) {
  validate_spec(spec);
  CriterionVerdict v;
  double k0 = kappa0(spec.delta).get_d();
  v.kappa = kappa ? *kappa : auto_kappa(spec.delta).get_d();

  if (auto c = dissipative_certificate(spec, radius)) {
    v.verdict = Verdict::Dissipative;
    v.dissipative = c;
    v.reason = "sum of exp(-||c_g||^2 / 2) is finite";
    return v;
  }
  if (v.kappa > k0) {
    if (auto w = conservative_witness(spec, v.kappa)) {
      v.verdict = Verdict::Conservative;
      v.conservative = w;
      v.reason = "sum of exp(-kappa ||c_g||^2) diverges with kappa > kappa0(delta)";
      return v;
    }
    v.reason = "no divergent minorant and no summable majorant for this family";
  } else {
    std::ostringstream os;
    os << "kappa = " << v.kappa << " does not exceed kappa0(delta) = " << k0 << "; no summable majorant either";
    v.reason = os.str();
  }
  v.verdict = Verdict::Inconclusive;
  v.partial_sums = criterion_partial_sums(spec, 0.5, radius);
  return v;
}

double hellinger_factor(double a, double b) { return std::sqrt(a * b) + std::sqrt((1 - a) * (1 - b)); }

double negsq_factor(double a, double b) { return a * a * a / (b * b) + (1 - a) * (1 - a) * (1 - a) / ((1 - b) * (1 - b)); }

namespace {

struct ProductParts {
  long double log_sum = 0;
  std::size_t factors = 0;
  double tail_mass = 0;
  bool certified = true;
};

template <class Two, class General>
ProductParts product_parts(const ActionSpec& spec, const GroupElement& g, double tol, Two two, General general) {
  double delta = spec.delta.get_d();
  CoordinateSet cs = coordinate_set(spec, g, tol * delta);
  std::vector<double> logs;
  logs.reserve(cs.pairs.size() + cs.general.size());
  for (const auto& [a, b] : cs.pairs) logs.push_back(std::log(two(a, b)));
  for (const auto& [from, to] : cs.general) logs.push_back(std::log(general(from, to)));
  // largest |log factor| first
  std::sort(logs.begin(), logs.end(), [](double x, double y) { return std::abs(x) > std::abs(y); });
  ProductParts p;
  for (double l : logs) p.log_sum += l;
  p.factors = logs.size();
  p.tail_mass = cs.tail_mass;
  p.certified = cs.tail_certified;
  if (cs.general.empty()) {
    // the omitted mass is also at most ||c_g||^2 minus what was included
    long double included = 0;
    for (const auto& [a, b] : cs.pairs) included += static_cast<long double>(a - b) * (a - b);
    NormResult n = norm_sq(spec, g, tol * delta);
    double per_copy = n.value.hi() / static_cast<double>(spec.multiplicity);
    double rest = per_copy - static_cast<double>(included) * (1 - 1e-12) + summation_slack(cs.pairs.size(), per_copy);
    rest = std::max(rest, 0.0);
    if (n.value.converged && rest < p.tail_mass) {
      p.tail_mass = rest;
      p.certified = p.certified || rest <= tol * delta;
    }
  }
  return p;
}

BoundedValue from_log_bracket(long double lo, long double hi, std::size_t factors, bool converged) {
  double slack = (static_cast<double>(factors) + 8.0) * 2.3e-16;
  return BoundedValue::from_interval(std::exp(static_cast<double>(lo) - slack),
                                     std::exp(static_cast<double>(hi) + slack), converged);
}

}  // namespace

BoundedValue hellinger_product(const ActionSpec& spec, const GroupElement& g, double tol) {
  if (g.is_identity()) return BoundedValue::exact(1.0);
  if (!spec.as<FreeProductW>() || spec.as<FreeProductW>()->mu0.size() == 2) {
    // every two-point factor is at most 1 - d^2 / 2, so the product is at most exp(-||c_g||^2 / 2)
    NormResult n = norm_sq(spec, g, tol);
    double ceiling = std::exp(-0.5 * n.value.lo());
    if (n.value.converged && ceiling <= tol) return BoundedValue::from_interval(0.0, ceiling, true);
  }
  auto parts = product_parts(spec, g, tol, hellinger_factor, [](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::sqrt(p[i] * q[i]);
    return s;
  });
  double m = static_cast<double>(spec.multiplicity);
  double delta = spec.delta.get_d();
  // each omitted factor is >= 1 - d^2 / (4 delta) with sum d^2 <= T
  long double tail_lo = 0;
  if (parts.tail_mass > 0) {
    double x = parts.tail_mass / (4 * delta);
    tail_lo = x < 1 ? -parts.tail_mass / (4 * delta * (1 - x)) : -INFINITY;
  }
  return from_log_bracket(m * (parts.log_sum + tail_lo), m * parts.log_sum, parts.factors, parts.certified);
}

BoundedValue negsq_log_product(const ActionSpec& spec, const GroupElement& g, double tol) {
  if (g.is_identity()) return BoundedValue::exact(0.0);
  auto parts = product_parts(spec, g, tol, negsq_factor, [](const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * p[i] * p[i] / (q[i] * q[i]);
    return s;
  });
  double m = static_cast<double>(spec.multiplicity);
  // each omitted factor lies in [1, 1 + kappa0 d^2]
  long double tail_hi = kappa0(spec.delta).get_d() * parts.tail_mass;
  double slack = (static_cast<double>(parts.factors) + 8.0) * 2.3e-16;
  double lo = static_cast<double>(m * parts.log_sum), hi = static_cast<double>(m * (parts.log_sum + tail_hi));
  return BoundedValue::from_interval(lo - slack - 1e-15 * std::abs(lo), hi + slack + 1e-15 * std::abs(hi),
                                     parts.certified);
}

BoundedValue negsq_product(const ActionSpec& spec, const GroupElement& g, double tol) {
  if (g.is_identity()) return BoundedValue::exact(1.0);
  BoundedValue l = negsq_log_product(spec, g, tol);
  if (l.lo() > 709.0) throw std::overflow_error("negsq_product overflows binary64; use negsq_log_product");
  return BoundedValue::from_interval(std::exp(l.lo()), std::exp(l.hi()), l.converged);
}

double kesten_norm(int rank) {
  if (rank < 1) throw ValidationError("rank must be >= 1");
  return 2 * std::sqrt(2.0 * rank - 1);
}

NonamenabilityReport nonamenability_check(const ActionSpec& spec, std::vector<GroupElement> generators) {
  if (!spec.group.is_free()) throw ValidationError("nonamenability check needs a free group");
  int r = spec.group.rank;
  if (generators.empty()) {
    for (int gen = 1; gen <= r; ++gen) {
      for (int sign : {1, -1}) {
        Word w(r);
        w.push_back(gen, sign);
        generators.emplace_back(w);
      }
    }
  }
  std::vector<int> seen(2 * r, 0);
  for (const GroupElement& g : generators) {
    if (g.group() != spec.group || g.word().length() != 1) throw ValidationError("generators must be single letters a_i^{+-1}");
    const Syllable& s = g.word().syllables().front();
    seen[2 * (s.gen - 1) + (s.exp > 0 ? 0 : 1)] += 1;
  }
  for (int c : seen) {
    if (c != 1) throw ValidationError("generating set must be {a_i, a_i^-1 : i = 1..rank}, each exactly once");
  }
  NonamenabilityReport rep;
  rep.sum = BoundedValue::exact(0.0);
  for (const GroupElement& g : generators) {
    BoundedValue h = hellinger_product(spec, g, 1e-12);
    rep.terms.push_back({g, h});
    rep.sum = rep.sum + h;
  }
  rep.kesten = kesten_norm(r);
  rep.margin = rep.sum.lo() - rep.kesten;
  rep.nonamenable = rep.margin > 0;
  return rep;
}

}  // namespace bernlab
