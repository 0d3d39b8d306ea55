#include "bernlab/typeclass.hpp"

#include "bernlab/factor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace bernlab {

namespace {

Rational from_exponents(const std::vector<mpz_class>& primes, const std::vector<mpz_class>& v) {
  mpz_class num = 1, den = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (v[i] == 0) continue;
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), primes[i].get_mpz_t(), mpz_class(abs(v[i])).get_ui());
    (v[i] > 0 ? num : den) *= pw;
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational below_one(const Rational& q) { return q > 1 ? Rational(1 / q) : q; }

// Row-reduces an integer matrix to Hermite normal form; returns the nonzero rows.
std::vector<std::vector<mpz_class>> hermite_rows(std::vector<std::vector<mpz_class>> rows, std::size_t cols) {
  std::size_t pivot = 0;
  for (std::size_t c = 0; c < cols && pivot < rows.size(); ++c) {
    for (;;) {
      // smallest nonzero entry in column c at or below the pivot row
      std::size_t best = rows.size();
      for (std::size_t r = pivot; r < rows.size(); ++r) {
        if (rows[r][c] != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
      }
      if (best == rows.size()) break;
      std::swap(rows[pivot], rows[best]);
      bool clean = true;
      for (std::size_t r = pivot + 1; r < rows.size(); ++r) {
        if (rows[r][c] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pivot][c].get_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) rows[r][j] -= q * rows[pivot][j];
        if (rows[r][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (rows[pivot][c] == 0) continue;
    if (rows[pivot][c] < 0) {
      for (auto& x : rows[pivot]) x = -x;
    }
    for (std::size_t r = 0; r < pivot; ++r) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][c].get_mpz_t(), rows[pivot][c].get_mpz_t());
      for (std::size_t j = 0; j < cols; ++j) rows[r][j] -= q * rows[pivot][j];
    }
    ++pivot;
  }
  rows.resize(pivot);
  return rows;
}

std::string rstr(const Rational& q) { return q.get_str(); }

}  // namespace

std::vector<mpz_class> exponent_vector(const Rational& q, const std::vector<mpz_class>& primes) {
  if (q <= 0) throw ValidationError("ratio values must be positive");
  std::vector<mpz_class> v(primes.size(), 0);
  mpz_class num = q.get_num(), den = q.get_den();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    while (mpz_divisible_p(num.get_mpz_t(), primes[i].get_mpz_t())) {
      num /= primes[i];
      v[i] += 1;
    }
    while (mpz_divisible_p(den.get_mpz_t(), primes[i].get_mpz_t())) {
      den /= primes[i];
      v[i] -= 1;
    }
  }
  if (num != 1 || den != 1) throw std::logic_error("value has a prime outside the basis");
  return v;
}

RatioGroup ratio_group(const std::vector<Rational>& values) {
  if (values.empty()) throw ValidationError("ratio_group needs at least one value");
  std::set<mpz_class> ps;
  for (const Rational& q : values) {
    if (q <= 0) throw ValidationError("ratio values must be positive, got " + rstr(q));
    for (const auto& [p, e] : factorize(q.get_num())) ps.insert(p);
    for (const auto& [p, e] : factorize(q.get_den())) ps.insert(p);
  }
  RatioGroup g;
  g.primes.assign(ps.begin(), ps.end());
  for (const Rational& q : values) g.exponents.push_back(exponent_vector(q, g.primes));
  auto rows = hermite_rows(g.exponents, g.primes.size());
  g.rank = static_cast<int>(rows.size());
  for (const auto& r : rows) g.basis.push_back(below_one(from_exponents(g.primes, r)));
  std::sort(g.basis.begin(), g.basis.end(), [](const Rational& x, const Rational& y) { return x > y; });
  if (g.rank == 0) {
    g.kind = RatioGroup::Kind::Trivial;
  } else if (g.rank == 1) {
    g.kind = RatioGroup::Kind::Cyclic;
    g.generator = g.basis.front();
  } else {
    g.kind = RatioGroup::Kind::Dense;
  }
  return g;
}

std::string RatioGroup::describe() const {
  switch (kind) {
    case Kind::Trivial: return "trivial";
    case Kind::Cyclic: return "cyclic, generated by " + rstr(generator);
    case Kind::Dense: {
      std::ostringstream os;
      os << "dense, rank " << rank << " basis {";
      for (std::size_t i = 0; i < basis.size(); ++i) os << (i ? ", " : "") << rstr(basis[i]);
      os << "}";
      return os.str();
    }
  }
  return "?";
}

std::string TypeLabel::text() const {
  switch (kind) {
    case Kind::II1: return "II_1";
    case Kind::III1: return "III_1";
    case Kind::IIIlambda:
      if (root == 1) return "III_" + rstr(base);
      {
        mpz_class n, d;
        bool exact = mpz_root(n.get_mpz_t(), base.get_num_mpz_t(), root) != 0 &&
                     mpz_root(d.get_mpz_t(), base.get_den_mpz_t(), root) != 0;
        if (exact) return "III_" + rstr(Rational(n, d));
      }
      return "III_(" + rstr(base) + ")^(1/" + std::to_string(root) + ")";
  }
  return "?";
}

std::vector<Rational> t_values(const BaseMeasure& mu0, const BaseMeasure& mu1) {
  mu0.validate();
  mu1.validate();
  if (mu0.size() != mu1.size()) throw ValidationError("mu0 and mu1 live on base spaces of different sizes");
  std::vector<Rational> t;
  for (std::size_t i = 0; i < mu0.size(); ++i) t.push_back(Rational(mu1.p[i] / mu0.p[i]));
  return t;
}

TypeLabel type_from_values(const std::vector<Rational>& t) {
  RatioGroup g = ratio_group(t);
  TypeLabel l;
  switch (g.kind) {
    case RatioGroup::Kind::Trivial: l.kind = TypeLabel::Kind::II1; break;
    case RatioGroup::Kind::Dense: l.kind = TypeLabel::Kind::III1; break;
    case RatioGroup::Kind::Cyclic:
      l.kind = TypeLabel::Kind::IIIlambda;
      l.base = g.generator;
      l.lambda = g.generator.get_d();
      break;
  }
  return l;
}

TypeLabel plain_type(const BaseMeasure& mu0, const BaseMeasure& mu1) { return type_from_values(t_values(mu0, mu1)); }

StableParams stable_params_from_values(const std::vector<Rational>& t) {
  if (t.empty()) throw ValidationError("no T values");
  StableParams p;
  p.t0 = *std::min_element(t.begin(), t.end());
  std::vector<Rational> diffs;
  for (const Rational& x : t) diffs.push_back(Rational(x / p.t0));
  p.L = ratio_group(diffs);
  if (p.L.kind == RatioGroup::Kind::Trivial) {
    if (p.t0 != 1) throw std::logic_error("constant T different from 1");
    p.k1 = 1;
    return p;
  }
  if (p.L.kind == RatioGroup::Kind::Dense) return p;

  const Rational& r = p.L.generator;
  p.exp_a = 1 / r;
  Rational eb = p.t0;
  while (eb < 1) eb /= r;
  while (eb >= p.exp_a) eb *= r;
  p.exp_b = eb;
  p.a = std::log(p.exp_a.get_d());
  p.b = std::log(p.exp_b.get_d());

  // k1: least k >= 1 with t0^k in r^Z, i.e. v(t0) = (u / k) v(r)
  std::set<mpz_class> ps(p.L.primes.begin(), p.L.primes.end());
  for (const auto& [q, e] : factorize(p.t0.get_num())) ps.insert(q);
  for (const auto& [q, e] : factorize(p.t0.get_den())) ps.insert(q);
  std::vector<mpz_class> primes(ps.begin(), ps.end());
  auto vt = exponent_vector(p.t0, primes), vr = exponent_vector(r, primes);
  std::optional<Rational> ratio;
  bool parallel = true;
  for (std::size_t i = 0; i < primes.size() && parallel; ++i) {
    if (vr[i] == 0) {
      parallel = vt[i] == 0;
      continue;
    }
    Rational c(vt[i], vr[i]);
    c.canonicalize();
    if (ratio && *ratio != c) parallel = false;
    ratio = c;
  }
  if (parallel) {
    Rational c = ratio ? *ratio : Rational(0);
    p.k1 = c.get_den().get_si();
  }
  return p;
}

StableParams stable_params(const BaseMeasure& mu0, const BaseMeasure& mu1) {
  return stable_params_from_values(t_values(mu0, mu1));
}

StableTypeSet stable_type_set(const StableParams& p, int instances) {
  StableTypeSet s;
  TypeLabel l;
  switch (p.L.kind) {
    case RatioGroup::Kind::Trivial:
      l.kind = TypeLabel::Kind::II1;
      s.types.push_back(l);
      s.rule = "{II_1}";
      return s;
    case RatioGroup::Kind::Dense:
      l.kind = TypeLabel::Kind::III1;
      s.types.push_back(l);
      s.rule = "{III_1}";
      return s;
    case RatioGroup::Kind::Cyclic: break;
  }
  const Rational& r = p.L.generator;
  auto instance = [&](long k0) {
    TypeLabel t;
    t.kind = TypeLabel::Kind::IIIlambda;
    t.base = r;
    t.root = k0;
    t.lambda = std::pow(r.get_d(), 1.0 / static_cast<double>(k0));
    return t;
  };
  if (p.k1) {
    for (long k0 = 1; k0 <= *p.k1; ++k0) {
      if (*p.k1 % k0 == 0) s.types.push_back(instance(k0));
    }
    s.rule = "III_(" + rstr(r) + ")^(1/k0) for k0 dividing " + std::to_string(*p.k1);
    return s;
  }
  s.infinite = true;
  l.kind = TypeLabel::Kind::III1;
  s.types.push_back(l);
  for (long k0 = 1; k0 <= instances; ++k0) s.types.push_back(instance(k0));
  s.rule = "III_1 and III_(" + rstr(r) + ")^(1/k0) for every integer k0 >= 1";
  return s;
}

std::vector<Rational> sd_generators(const BaseMeasure& mu0, const BaseMeasure& mu1) {
  return ratio_group(t_values(mu0, mu1)).basis;
}

Rational rationalize(double x, double rel_tol) {
  if (!(x > 0) || !std::isfinite(x)) throw ValidationError("rationalize needs a positive finite value");
  // convergents h/k of the continued fraction of x
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = x;
  for (int i = 0; i < 64; ++i) {
    double a = std::floor(y);
    mpz_class ai(a);
    mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    Rational q(h1, k1);
    q.canonicalize();
    if (std::abs(q.get_d() - x) <= rel_tol * x) return q;
    double frac = y - a;
    if (frac <= 0) return q;
    y = 1 / frac;
  }
  return Rational(h1, k1);
}

std::vector<Rational> approximate_t_values(const std::vector<double>& mu0, const std::vector<double>& mu1,
                                           double rel_tol) {
  if (mu0.size() != mu1.size() || mu0.size() < 2) throw ValidationError("measures must share a base of size >= 2");
  double s0 = 0, s1 = 0;
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    if (!(mu0[i] > 0 && mu1[i] > 0)) throw ValidationError("measure entries must be positive");
    s0 += mu0[i];
    s1 += mu1[i];
  }
  if (std::abs(s0 - 1) > 1e-12 || std::abs(s1 - 1) > 1e-12) throw ValidationError("measures must sum to 1 within 1e-12");
  std::vector<Rational> t;
  for (std::size_t i = 0; i < mu0.size(); ++i) t.push_back(rationalize(mu1[i] / mu0[i], rel_tol));
  return t;
}

namespace {

std::vector<Rational> exact_marginal(const ActionSpec& spec, const GroupElement& h) {
  if (auto* f = spec.as<FreeProductW>()) return w_last_positive(h, f->generator) ? f->mu1.p : f->mu0.p;
  auto v = f_exact(spec, h);
  if (!v) throw ValidationError("omega range needs exact marginals");
  return {*v, 1 - *v};
}

Rational rpow(const Rational& q, std::int64_t n) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

OmegaRange omega_range(const ActionSpec& spec, const std::vector<GroupElement>& elements) {
  if (!(spec.as<WSplit>() || spec.as<FreeProductW>() || spec.as<FolnerInduced>())) {
    throw ValidationError("omega range needs a family with exact marginals and finitely supported cocycles");
  }
  OmegaRange out;
  std::set<Rational> ratios, gens;
  for (const GroupElement& g : elements) {
    if (g.group() != spec.group) throw ValidationError("element does not belong to the spec's group");
    GroupElement ginv = inv(g);
    std::map<std::pair<std::vector<Rational>, std::vector<Rational>>, std::int64_t> laws;
    if (auto* fo = spec.as<FolnerInduced>()) {
      std::int64_t k = g.integer();
      std::vector<std::int64_t> cuts;
      for (const auto& iv : fo->intervals) {
        for (std::int64_t p : {iv.start, iv.start + iv.length, iv.start + k, iv.start + iv.length + k}) cuts.push_back(p);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto from = exact_marginal(spec, GroupElement(cuts[i] - k)), to = exact_marginal(spec, GroupElement(cuts[i]));
        if (from != to) laws[{from, to}] += (cuts[i + 1] - cuts[i]) * spec.multiplicity;
      }
    } else {
      for (const GroupElement& h : ball(spec.group, word_length(g))) {
        auto from = exact_marginal(spec, mul(ginv, h)), to = exact_marginal(spec, h);
        if (from != to) laws[{from, to}] += spec.multiplicity;
      }
    }
    Rational base = 1;
    for (const auto& [key, n] : laws) {
      const auto& [from, to] = key;
      Rational r0 = to[0] / from[0];
      base *= rpow(r0, n);
      for (std::size_t x = 0; x < from.size(); ++x) {
        Rational r = to[x] / from[x];
        ratios.insert(r);
        if (x > 0) gens.insert(Rational(r / r0));
      }
    }
    gens.insert(base);
  }
  out.ratios.assign(ratios.rbegin(), ratios.rend());
  out.generators.assign(gens.rbegin(), gens.rend());
  return out;
}

std::string log_text(const Rational& q) { return "log(" + rstr(q) + ")"; }

}  // namespace bernlab
