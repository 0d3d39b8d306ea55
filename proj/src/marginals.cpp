#include "bernlab/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bernlab {

void BaseMeasure::validate() const {
  if (p.size() < 2) throw ValidationError("base measure needs at least two points");
  Rational sum = 0;
  for (const Rational& x : p) {
    if (x <= 0 || x >= 1) throw ValidationError("base measure entries must lie in (0,1), got " + x.get_str());
    sum += x;
  }
  if (exact) {
    if (sum != 1) throw ValidationError("base measure does not sum to 1 (sum " + sum.get_str() + ")");
  } else if (std::abs(sum.get_d() - 1.0) > 1e-12) {
    throw ValidationError("base measure does not sum to 1 within 1e-12");
  }
}

std::string BaseMeasure::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out << ',';
    out << p[i].get_str();
  }
  return out.str();
}

BaseMeasure BaseMeasure::parse(const std::string& csv) {
  BaseMeasure m;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    m.p.push_back(parse_rational(item));
  }
  m.validate();
  return m;
}

std::string family_name(const MarginalFamily& f) {
  switch (f.index()) {
    case 0: return "wsplit";
    case 1: return "zsequence";
    case 2: return "free_product_w";
    case 3: return "folner_induced";
    case 4: return "special";
  }
  return "?";
}

SpecialCocycle make_special(const Rational& D, const Rational& base, const Rational& scale) {
  SpecialCocycle s;
  s.D = D;
  s.base = base;
  s.scale = scale;
  s.bump = std::make_shared<const BumpCocycle>(BumpCocycle::build(D));
  return s;
}

namespace {

void check_range(const Rational& lo, const Rational& hi, const Rational& delta, const std::string& what) {
  if (lo < delta || hi > 1 - delta) {
    throw ValidationError(what + " leaves [delta, 1-delta] for delta = " + delta.get_str());
  }
}

const FolnerInduced::Interval* folner_find(const FolnerInduced& f, std::int64_t n) {
  auto it = std::upper_bound(f.intervals.begin(), f.intervals.end(), n,
                             [](std::int64_t v, const FolnerInduced::Interval& iv) { return v < iv.start; });
  if (it == f.intervals.begin()) return nullptr;
  --it;
  return n < it->start + it->length ? &*it : nullptr;
}

}  // namespace

void validate_spec(const ActionSpec& spec) {
  if (spec.multiplicity < 1) throw ValidationError("multiplicity must be >= 1");
  if (spec.delta <= 0 || spec.delta > Rational(1, 2)) throw ValidationError("delta must lie in (0, 1/2]");
  const Rational& d = spec.delta;

  if (auto* w = spec.as<WSplit>()) {
    if (!spec.group.is_free() || spec.group.rank != 2) throw ValidationError("wsplit family lives on F_2");
    for (const Rational* p : {&w->p_a, &w->p_b, &w->p_w}) check_range(*p, *p, d, "wsplit value " + p->get_str());
  } else if (auto* z = spec.as<ZSequence>()) {
    if (spec.group.is_free()) throw ValidationError("zsequence family lives on Z");
    if (z->a.kind() == DecreasingSequence::Kind::InvSqrtLog && z->a.shift() != z->n0) {
      throw ValidationError("inv_sqrt_log shift must equal n0");
    }
    if (z->lambda < d) throw ValidationError("zsequence lambda below delta");
    double top = z->lambda.get_d() + z->a.sup_upper();
    if (auto a0 = z->a.exact_at(0)) {
      check_range(z->lambda, z->lambda + *a0, d, "zsequence");
    } else if (top > 1 - d.get_d()) {
      throw ValidationError("zsequence values exceed 1 - delta");
    }
  } else if (auto* f = spec.as<FreeProductW>()) {
    if (!spec.group.is_free() || spec.group.rank < 2) throw ValidationError("free_product_w needs a free group of rank >= 2");
    if (f->generator < 1 || f->generator > spec.group.rank) throw ValidationError("free_product_w generator out of range");
    f->mu0.validate();
    f->mu1.validate();
    if (f->mu0.size() != f->mu1.size()) throw ValidationError("mu0 and mu1 must share a base space");
    if (f->mu0.size() == 2) {
      check_range(f->mu0.p[0], f->mu0.p[0], d, "mu0(0)");
      check_range(f->mu1.p[0], f->mu1.p[0], d, "mu1(0)");
    }
  } else if (auto* fo = spec.as<FolnerInduced>()) {
    if (spec.group.is_free()) throw ValidationError("folner_induced family lives on Z");
    if (fo->bound <= 0) throw ValidationError("folner bound must be positive");
    check_range(fo->offset, fo->offset + fo->bound, d, "folner_induced");
    std::int64_t last_end = std::numeric_limits<std::int64_t>::min();
    for (const auto& iv : fo->intervals) {
      if (iv.length < 1) throw ValidationError("folner interval length must be >= 1");
      if (iv.start < last_end) throw ValidationError("folner intervals must be sorted and disjoint");
      if (iv.value < 0 || iv.value >= fo->bound) throw ValidationError("folner value outside [0, bound)");
      last_end = iv.start + iv.length;
    }
  } else if (auto* s = spec.as<SpecialCocycle>()) {
    if (spec.group.is_free() && spec.group.rank != 2) throw ValidationError("special family lives on Z or F_2");
    if (s->scale <= 0) throw ValidationError("special scale must be positive");
    if (!s->bump) throw ValidationError("special family has no bump function");
    check_range(s->base - s->scale, s->base + s->scale, d, "special");
  }
}

std::optional<Rational> f_exact(const ActionSpec& spec, const GroupElement& g) {
  if (auto* w = spec.as<WSplit>()) {
    switch (w_class(g)) {
      case WClass::Wa: return w->p_a;
      case WClass::Wb: return w->p_b;
      case WClass::W: return w->p_w;
    }
  }
  if (auto* z = spec.as<ZSequence>()) {
    std::int64_t n = g.integer();
    if (n < z->n0) return z->lambda;
    if (auto v = z->a.exact_at(n - z->n0)) return z->lambda + *v;
    return std::nullopt;
  }
  if (auto* f = spec.as<FreeProductW>()) {
    if (f->mu0.size() != 2) return std::nullopt;
    return w_last_positive(g, f->generator) ? f->mu1.p[0] : f->mu0.p[0];
  }
  if (auto* fo = spec.as<FolnerInduced>()) {
    const auto* iv = folner_find(*fo, g.integer());
    return iv ? fo->offset + iv->value : fo->offset;
  }
  if (auto* s = spec.as<SpecialCocycle>()) {
    if (g.is_integer()) return s->base + s->scale * s->bump->H_exact(g.integer());
    switch (e_class(g)) {
      case EClass::Identity: return s->base;
      case EClass::Ea: return s->base + s->scale * s->bump->H_exact(pi_a(g));
      case EClass::Eb: return s->base - s->scale * s->bump->H_exact(pi_b(g));
    }
  }
  return std::nullopt;
}

double f_double(const ActionSpec& spec, const GroupElement& g) {
  if (auto* z = spec.as<ZSequence>()) {
    std::int64_t n = g.integer();
    double lam = z->lambda.get_d();
    return n < z->n0 ? lam : lam + z->a.at(n - z->n0);
  }
  if (auto* s = spec.as<SpecialCocycle>()) {
    double base = s->base.get_d(), sc = s->scale.get_d();
    if (g.is_integer()) return base + sc * s->bump->H(g.integer());
    switch (e_class(g)) {
      case EClass::Identity: return base;
      case EClass::Ea: return base + sc * s->bump->H(pi_a(g));
      case EClass::Eb: return base - sc * s->bump->H(pi_b(g));
    }
  }
  auto v = f_exact(spec, g);
  if (!v) throw ValidationError("family has no scalar marginal value");
  return v->get_d();
}

BoundedValue f_value(const ActionSpec& spec, const IndexPoint& i) {
  if (i.copy < 1 || i.copy > spec.multiplicity) throw ValidationError("copy index outside 1..multiplicity");
  if (spec.as<ZSequence>()) {
    double v = f_double(spec, i.elem);
    return {v, 4e-16 * std::abs(v), true};
  }
  if (auto v = f_exact(spec, i.elem)) return BoundedValue::exact(v->get_d());
  double v = f_double(spec, i.elem);
  return {v, 4e-16 * std::abs(v), true};
}

std::size_t base_size(const ActionSpec& spec) {
  if (auto* f = spec.as<FreeProductW>()) return f->mu0.size();
  return 2;
}

std::vector<double> marginal(const ActionSpec& spec, const GroupElement& g) {
  if (auto* f = spec.as<FreeProductW>()) {
    const BaseMeasure& m = w_last_positive(g, f->generator) ? f->mu1 : f->mu0;
    std::vector<double> out;
    for (std::size_t i = 0; i < m.size(); ++i) out.push_back(m.at(i));
    return out;
  }
  double p = f_double(spec, g);
  return {p, 1 - p};
}

NonsingularReport check_nonsingular_hypotheses(const ActionSpec& spec, const std::vector<GroupElement>& probes,
                                               std::int64_t radius) {
  NonsingularReport rep;
  rep.radius = radius;
  auto domain = ball(spec.group, radius);
  for (const GroupElement& g : probes) {
    NonsingularProbe pr;
    pr.g = g;
    long double partial = 0;
    for (const GroupElement& k : domain) {
      double d = f_double(spec, mul(g, k)) - f_double(spec, k);
      partial += static_cast<long double>(d) * d;
    }
    pr.partial = static_cast<double>(partial);
    std::int64_t len = word_length(g);

    if (spec.as<WSplit>() || spec.as<FreeProductW>()) {
      pr.tail_certified = radius >= 2 * len;
    } else if (auto* z = spec.as<ZSequence>()) {
      std::int64_t k = g.integer();
      std::int64_t K = std::abs(k);
      if (K == 0) {
        pr.tail_certified = true;
      } else if (radius >= std::abs(z->n0) + K) {
        pr.tail_certified = true;
        pr.tail = k > 0 ? z->a.diff_tail_bound(K, radius + K - z->n0) : z->a.diff_tail_bound(K, radius - z->n0);
      }
    } else if (auto* fo = spec.as<FolnerInduced>()) {
      std::int64_t reach = 0;
      for (const auto& iv : fo->intervals) reach = std::max({reach, std::abs(iv.start), std::abs(iv.start + iv.length)});
      pr.tail_certified = radius >= reach + len;
    } else if (auto* s = spec.as<SpecialCocycle>()) {
      if (g.is_integer()) {
        std::int64_t k = g.integer();
        if (k == 0 || radius >= std::abs(k)) {
          // points n > radius with n or n + k in the support; n < -radius contributes nothing
          BoundedValue t = s->bump->gamma_tail(k, radius + k, 1e-6);
          pr.tail = t.hi() * std::pow(s->scale.get_d(), 2);
          pr.tail_certified = t.converged;
        }
      }
    }
    pr.sum = BoundedValue::from_interval(pr.partial * (1 - 1e-12), pr.partial * (1 + 1e-12) + pr.tail);
    rep.probes.push_back(pr);
  }

  std::optional<double> lambda;
  if (auto* z = spec.as<ZSequence>()) lambda = z->lambda.get_d();
  if (auto* fo = spec.as<FolnerInduced>()) lambda = fo->offset.get_d();
  if (auto* s = spec.as<SpecialCocycle>(); s && !spec.group.is_free()) lambda = s->base.get_d();
  if (lambda) {
    rep.lambda = lambda;
    double sup = 0;
    for_each_in_sphere(spec.group, radius, [&](const GroupElement& i) {
      sup = std::max(sup, std::abs(f_double(spec, i) - *lambda));
    });
    rep.sup_deviation = sup;
  }
  return rep;
}

std::pair<BaseMeasure, BaseMeasure> measures_from_lambda(const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) throw ValidationError("lambda must lie in (0,1)");
  Rational p0 = 1 / (1 + lambda);
  Rational p1 = lambda / (1 + lambda);
  BaseMeasure mu0{{p0, 1 - p0}, true}, mu1{{p1, 1 - p1}, true};
  mu0.validate();
  mu1.validate();
  return {mu0, mu1};
}

namespace {

void check_t_values(const BaseMeasure& mu0, const BaseMeasure& mu1, const std::vector<Rational>& expected) {
  for (std::size_t i = 0; i < expected.size(); ++i) {
    Rational t = mu1.p[i] / mu0.p[i];
    if (t != expected[i]) throw std::logic_error("measure builder produced T(" + std::to_string(i) + ") = " + t.get_str());
  }
}

}  // namespace

std::pair<BaseMeasure, BaseMeasure> measures_from_ab(const Rational& A, const Rational& B) {
  if (A <= 1) throw ValidationError("need a > 0, i.e. exp(a) > 1");
  if (B < 1 || B >= A) throw ValidationError("need 0 <= b < a, i.e. 1 <= exp(b) < exp(a)");
  if (B == 1) {
    Rational half(1, 2);
    Rational x = 1 / (2 * (1 + A));
    Rational y = A / (2 * (1 + A));
    BaseMeasure mu0{{half, x, y}, true}, mu1{{half, y, x}, true};
    mu0.validate();
    mu1.validate();
    check_t_values(mu0, mu1, {Rational(1), A, 1 / A});
    return {mu0, mu1};
  }
  // mu0(0) = (e^-b - e^-a) / (1 - e^-a); mu1(0) = e^b mu0(0)
  Rational p0 = (1 / B - 1 / A) / (1 - 1 / A);
  Rational p1 = B * p0;
  BaseMeasure mu0{{p0, 1 - p0}, true}, mu1{{p1, 1 - p1}, true};
  mu0.validate();
  mu1.validate();
  check_t_values(mu0, mu1, {B, B / A});
  return {mu0, mu1};
}

std::pair<BaseMeasure, BaseMeasure> measures_from_ab(double a, double b) {
  if (!(a > 0)) throw ValidationError("need a > 0");
  if (!(b >= 0 && b < a)) throw ValidationError("need 0 <= b < a");
  auto exact_of = [](double v) { return Rational(v); };
  if (b == 0) {
    double ea = std::exp(a);
    double x = 1 / (2 * (1 + ea));
    BaseMeasure mu0{{exact_of(0.5), exact_of(x), exact_of(0.5 - x)}, false};
    BaseMeasure mu1{{exact_of(0.5), exact_of(0.5 - x), exact_of(x)}, false};
    mu0.validate();
    mu1.validate();
    return {mu0, mu1};
  }
  double p0 = (std::exp(-b) - std::exp(-a)) / (1 - std::exp(-a));
  double p1 = std::exp(b) * p0;
  BaseMeasure mu0{{exact_of(p0), exact_of(1 - p0)}, false}, mu1{{exact_of(p1), exact_of(1 - p1)}, false};
  mu0.validate();
  mu1.validate();
  double t0 = p1 / p0, t1 = (1 - p1) / (1 - p0);
  if (std::abs(std::log(t0) - b) > 1e-9 || std::abs(std::log(t1) - (b - a)) > 1e-9) {
    throw std::logic_error("float measure builder missed its T values");
  }
  return {mu0, mu1};
}

std::pair<BaseMeasure, BaseMeasure> measures_from_atomic_eta(const std::vector<EtaAtom>& atoms) {
  if (atoms.empty()) throw ValidationError("atomic eta needs at least one atom");
  Rational kappa = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const auto& at = atoms[i];
    if (at.t <= 0 || at.t >= 1) throw ValidationError("atom positions must lie in (0,1)");
    if (at.weight <= 0) throw ValidationError("atom weights must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (atoms[j].t == at.t) throw ValidationError("duplicate atom " + at.t.get_str());
    }
    kappa += at.weight * (1 + at.t);
  }
  BaseMeasure mu0, mu1;
  std::vector<Rational> expected;
  for (const auto& at : atoms) {
    mu0.p.push_back(at.weight / kappa);
    mu0.p.push_back(at.weight * at.t / kappa);
    mu1.p.push_back(at.weight * at.t / kappa);
    mu1.p.push_back(at.weight / kappa);
    expected.push_back(at.t);
    expected.push_back(1 / at.t);
  }
  mu0.validate();
  mu1.validate();
  check_t_values(mu0, mu1, expected);
  return {mu0, mu1};
}

std::vector<EtaAtom> geometric_eta(const std::vector<Rational>& ts) {
  std::vector<EtaAtom> atoms;
  Rational pow2 = 1;
  for (const Rational& t : ts) {
    pow2 *= 2;
    atoms.push_back({t, 1 / (pow2 * (1 + t))});
  }
  return atoms;
}

}  // namespace bernlab
