#include "bernlab/cocycles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace bernlab {

namespace {

double mult(const ActionSpec& spec) { return static_cast<double>(spec.multiplicity); }

NormResult exact_result(const ActionSpec& spec, const Rational& single, std::string method) {
  Rational v = single * spec.multiplicity;
  return {BoundedValue::exact(v.get_d()), v, std::move(method)};
}

NormResult float_result(const ActionSpec& spec, BoundedValue single, std::string method) {
  return {scale(single, mult(spec)), std::nullopt, std::move(method)};
}

std::int64_t abs_exponent_sum(const GroupElement& g, int gen) {
  std::int64_t n = 0;
  for (const Syllable& s : g.word().syllables()) {
    if (s.gen == gen) n += std::abs(s.exp);
  }
  return n;
}

// sum_{j=k}^{n1} (a_{j-k} - a_j)^2, extended incrementally
struct DiffSum {
  const DecreasingSequence& a;
  std::int64_t k;
  std::int64_t upto;  // last j included
  long double sum = 0;
  std::int64_t terms = 0;

  void extend(std::int64_t n1) {
    for (std::int64_t j = upto + 1; j <= n1; ++j) {
      double d = a.at(j - k) - a.at(j);
      sum += static_cast<long double>(d) * d;
      ++terms;
    }
    upto = std::max(upto, n1);
  }
};

// ||c_k||^2 for one copy of a ZSequence: head sum_{j<k} a_j^2 plus the
// difference series, truncated at n1 with the certified tail.
BoundedValue zsequence_norm(const ZSequence& z, std::int64_t k, double tol) {
  k = std::abs(k);
  if (k == 0) return BoundedValue::exact(0.0);
  long double head = 0;
  for (std::int64_t j = 0; j < k; ++j) head += z.a.sq(j);
  DiffSum ds{z.a, k, k - 1};
  std::int64_t n1 = std::max<std::int64_t>(4 * k, 64);
  const std::int64_t cap = std::int64_t{1} << 33;
  double tail = 0;
  bool converged = true;
  for (;;) {
    ds.extend(n1);
    tail = z.a.diff_tail_bound(k, n1);
    // past the rounding floor a longer sum only adds slack
    double floor = summation_slack(3.0 * static_cast<double>(k + ds.terms), static_cast<double>(head + ds.sum));
    if (tail <= std::max(tol, floor)) break;
    if (n1 >= cap) {
      converged = false;
      break;
    }
    n1 *= 2;
  }
  double body = static_cast<double>(head + ds.sum);
  double slack = summation_slack(3.0 * static_cast<double>(k + ds.terms), body);
  return BoundedValue::from_interval(body - slack, body + slack + tail, converged);
}

// sum_{n<m} v_n v_m-type overlap: |[s1, s1+l1) cap [s2, s2+l2)|
std::int64_t overlap(std::int64_t s1, std::int64_t l1, std::int64_t s2, std::int64_t l2) {
  std::int64_t lo = std::max(s1, s2), hi = std::min(s1 + l1, s2 + l2);
  return std::max<std::int64_t>(0, hi - lo);
}

Rational folner_norm(const FolnerInduced& f, std::int64_t k) {
  if (k == 0) return 0;
  // ||v - v(. - k)||^2 = 2 sum v^2 - 2 sum_h v(h) v(h - k)
  Rational sq = 0, cross = 0;
  for (const auto& iv : f.intervals) sq += iv.value * iv.value * iv.length;
  for (const auto& I : f.intervals) {
    for (const auto& J : f.intervals) {
      std::int64_t o = overlap(I.start, I.length, J.start + k, J.length);
      if (o) cross += I.value * J.value * o;
    }
  }
  return 2 * sq - 2 * cross;
}

double scale_sq(const SpecialCocycle& s) { return Rational(s.scale * s.scale).get_d(); }

BoundedValue special_free_norm(const SpecialCocycle& s, const GroupElement& g, double tol) {
  auto syl = g.word().syllables();
  if (syl.empty()) return BoundedValue::exact(0.0);
  BoundedValue acc = BoundedValue::exact(0.0);
  double each = tol / static_cast<double>(syl.size());
  for (const Syllable& x : syl) acc = acc + s.bump->gamma_norm_sq(x.exp, each);
  for (std::size_t j = 0; j + 1 < syl.size(); ++j) {
    double cross = 2 * s.bump->H(syl[j].exp) * s.bump->H(-syl[j + 1].exp);
    acc = acc + BoundedValue{cross, 4e-16 * cross, true};
  }
  return scale(acc, scale_sq(s));
}

}  // namespace

std::optional<Rational> cocycle_coeff_exact(const ActionSpec& spec, const GroupElement& g, const GroupElement& h) {
  auto fh = f_exact(spec, h);
  auto fg = f_exact(spec, mul(inv(g), h));
  if (!fh || !fg) return std::nullopt;
  return Rational(*fh - *fg);
}

double cocycle_coeff(const ActionSpec& spec, const GroupElement& g, const GroupElement& h) {
  if (g.is_identity()) return 0.0;
  return f_double(spec, h) - f_double(spec, mul(inv(g), h));
}

NormResult norm_sq(const ActionSpec& spec, const GroupElement& g, double tol) {
  if (!(tol > 0)) throw ValidationError("tol must be positive");
  if (g.group() != spec.group) throw ValidationError("element does not belong to the spec's group");
  if (g.is_identity()) return exact_result(spec, 0, "identity");
  double per_copy_tol = tol / mult(spec);

  if (auto* w = spec.as<WSplit>()) {
    Rational alpha = w->p_a - w->p_w, beta = w->p_b - w->p_w;
    Rational v = alpha * alpha * abs_exponent_sum(g, 1) + beta * beta * abs_exponent_sum(g, 2) -
                 2 * alpha * beta * descending_sign_changes(g);
    return exact_result(spec, v, "closed form: syllable exponents and descending sign changes");
  }
  if (auto* f = spec.as<FreeProductW>()) {
    if (f->mu0.size() != 2) throw ValidationError("norm_sq needs a two-point base space");
    Rational d = f->mu1.p[0] - f->mu0.p[0];
    return exact_result(spec, d * d * abs_exponent_sum(g, f->generator), "closed form: distinguished exponent sum");
  }
  if (auto* z = spec.as<ZSequence>()) {
    return float_result(spec, zsequence_norm(*z, g.integer(), per_copy_tol),
                        "head sum plus difference series with certified tail");
  }
  if (auto* fo = spec.as<FolnerInduced>()) {
    return exact_result(spec, folner_norm(*fo, g.integer()), "finite interval overlap sum");
  }
  if (auto* s = spec.as<SpecialCocycle>()) {
    if (g.is_integer()) {
      double ss = scale_sq(*s);
      return float_result(spec, scale(s->bump->gamma_norm_sq(g.integer(), per_copy_tol / ss), ss),
                          "bump decomposition with certified tail");
    }
    return float_result(spec, special_free_norm(*s, g, per_copy_tol / scale_sq(*s)),
                        "syllable decomposition over bump norms");
  }
  throw ValidationError("norm_sq: unsupported family");
}

std::vector<Ray> special_rays(const GroupElement& g) {
  std::vector<Ray> rays;
  const Word& w = g.word();
  Word prefix(w.rank());
  auto add = [&](const Word& p) {
    int last = p.is_identity() ? 0 : p.syllables().back().gen;
    for (int x = 1; x <= w.rank(); ++x) {
      if (x != last) rays.push_back({GroupElement(p), x});
    }
  };
  add(prefix);
  for (const Syllable& s : w.syllables()) {
    int sign = s.exp > 0 ? 1 : -1;
    for (std::int64_t i = 0; i < std::abs(s.exp); ++i) {
      prefix.push_back(s.gen, sign);
      add(prefix);
    }
  }
  return rays;
}

NormResult norm_sq_bruteforce(const ActionSpec& spec, const GroupElement& g, std::int64_t radius) {
  if (g.group() != spec.group) throw ValidationError("element does not belong to the spec's group");
  if (radius < word_length(g)) throw ValidationError("oracle radius must be at least |g|");
  if (g.is_identity()) return exact_result(spec, 0, "oracle");
  const std::string method = "oracle: direct sum over ball(" + std::to_string(radius) + ")";

  if (spec.as<WSplit>() || (spec.as<FreeProductW>() && spec.as<FreeProductW>()->mu0.size() == 2)) {
    Rational acc = 0;
    for (const GroupElement& h : ball(spec.group, radius)) {
      Rational c = *cocycle_coeff_exact(spec, g, h);
      acc += c * c;
    }
    return exact_result(spec, acc, method);
  }
  if (auto* fo = spec.as<FolnerInduced>()) {
    // integer-scaled: every value is an integer multiple of 1/L
    mpz_class L = 1;
    for (const auto& iv : fo->intervals) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), iv.value.get_den_mpz_t());
    std::int64_t k = g.integer();
    std::int64_t reach = 0;
    for (const auto& iv : fo->intervals) reach = std::max({reach, std::abs(iv.start), std::abs(iv.start + iv.length)});
    if (radius < reach + std::abs(k)) {
      throw ValidationError("oracle radius does not cover the support (need " + std::to_string(reach + std::abs(k)) + ")");
    }
    auto scaled = [&](std::int64_t n) -> mpz_class {
      Rational v = *f_exact(spec, GroupElement(n)) - fo->offset;
      return mpz_class(v * L);
    };
    mpz_class acc = 0;
    for (std::int64_t h = -radius; h <= radius; ++h) {
      mpz_class c = scaled(h) - scaled(h - k);
      acc += c * c;
    }
    Rational v(acc, L * L);
    v.canonicalize();
    return exact_result(spec, v, method);
  }
  if (auto* z = spec.as<ZSequence>()) {
    std::int64_t k = g.integer(), K = std::abs(k);
    if (radius < std::abs(z->n0) + K) throw ValidationError("oracle radius must be at least |n0| + |k|");
    long double acc = 0;
    for (std::int64_t h = -radius; h <= radius; ++h) {
      double c = cocycle_coeff(spec, g, GroupElement(h));
      acc += static_cast<long double>(c) * c;
    }
    double tail = k > 0 ? z->a.diff_tail_bound(K, radius - z->n0) : z->a.diff_tail_bound(K, radius + K - z->n0);
    double body = static_cast<double>(acc);
    double slack = summation_slack(4.0 * static_cast<double>(2 * radius + 1), body);
    return float_result(spec, BoundedValue::from_interval(body - slack, body + slack + tail), method);
  }
  if (auto* s = spec.as<SpecialCocycle>()) {
    double ss = scale_sq(*s);
    if (g.is_integer()) {
      std::int64_t k = g.integer();
      long double acc = 0;
      for (std::int64_t h = -radius; h <= radius; ++h) {
        double c = cocycle_coeff(spec, g, GroupElement(h));
        acc += static_cast<long double>(c) * c;
      }
      BoundedValue tail = scale(s->bump->gamma_tail(k, radius, 1e-9), ss);
      double body = static_cast<double>(acc);
      double slack = summation_slack(4.0 * static_cast<double>(2 * radius + 1), body);
      return float_result(
          spec, BoundedValue::from_interval(body - slack + tail.lo(), body + slack + tail.hi(), tail.converged), method);
    }
    // rays p x^e; beyond |e| = radius the coefficient is s (H(e) - H(e + f)) on
    // the ray, f the x-exponent ending g^-1 p (0 if none)
    GroupElement ginv = inv(g);
    long double acc = 0;
    std::int64_t terms = 0;
    BoundedValue tails = BoundedValue::exact(0.0);
    bool identity_done = false;
    for (const Ray& r : special_rays(g)) {
      for (std::int64_t e = -radius; e <= radius; ++e) {
        if (e == 0 && (identity_done || !r.prefix.is_identity())) continue;
        if (e == 0) identity_done = true;
        Word hw = r.prefix.word();
        hw.push_back(r.gen, e);
        double c = cocycle_coeff(spec, g, GroupElement(hw));
        acc += static_cast<long double>(c) * c;
        ++terms;
      }
      GroupElement q = mul(ginv, r.prefix);
      std::int64_t f = 0;
      if (!q.word().is_identity() && q.word().syllables().back().gen == r.gen) f = q.word().syllables().back().exp;
      if (f != 0) tails = tails + s->bump->gamma_tail(-f, radius, 1e-9);
    }
    double body = static_cast<double>(acc);
    double slack = summation_slack(4.0 * static_cast<double>(terms), body);
    tails = scale(tails, ss);
    return float_result(spec,
                        BoundedValue::from_interval(body - slack + tails.lo(), body + slack + tails.hi(), tails.converged),
                        "oracle: direct sum over rays p x^e, |e| <= " + std::to_string(radius));
  }
  throw ValidationError("norm_sq_bruteforce: unsupported family");
}

CoordinateSet coordinate_set(const ActionSpec& spec, const GroupElement& g, double tol) {
  if (g.group() != spec.group) throw ValidationError("element does not belong to the spec's group");
  CoordinateSet cs;
  if (g.is_identity()) return cs;
  GroupElement ginv = inv(g);
  auto push = [&](const GroupElement& h) {
    double a = f_double(spec, mul(ginv, h)), b = f_double(spec, h);
    if (a != b) cs.pairs.push_back({a, b});
  };

  if (auto* f = spec.as<FreeProductW>(); f && f->mu0.size() > 2) {
    for (const GroupElement& h : ball(spec.group, word_length(g))) {
      auto from = marginal(spec, mul(ginv, h)), to = marginal(spec, h);
      if (from != to) cs.general.push_back({from, to});
    }
    return cs;
  }
  if (spec.as<WSplit>() || spec.as<FreeProductW>()) {
    for (const GroupElement& h : ball(spec.group, word_length(g))) push(h);
    return cs;
  }
  if (auto* fo = spec.as<FolnerInduced>()) {
    std::int64_t k = g.integer();
    std::vector<std::int64_t> cuts;
    for (const auto& iv : fo->intervals) {
      for (std::int64_t p : {iv.start, iv.start + iv.length, iv.start + k, iv.start + iv.length + k}) cuts.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double a = f_double(spec, GroupElement(cuts[i] - k)), b = f_double(spec, GroupElement(cuts[i]));
      if (a == b) continue;
      for (std::int64_t h = cuts[i]; h < cuts[i + 1]; ++h) cs.pairs.push_back({a, b});
    }
    return cs;
  }
  if (auto* z = spec.as<ZSequence>()) {
    std::int64_t k = g.integer(), K = std::abs(k);
    std::int64_t n1 = std::max<std::int64_t>(std::abs(z->n0) + 4 * K, 64);
    auto tail_at = [&](std::int64_t R) {
      return k > 0 ? z->a.diff_tail_bound(K, R - z->n0) : z->a.diff_tail_bound(K, R + K - z->n0);
    };
    const std::int64_t cap = std::int64_t{1} << 26;
    while (tail_at(n1) > tol && n1 < cap) n1 *= 2;
    cs.tail_mass = tail_at(n1);
    cs.tail_certified = cs.tail_mass <= tol;
    for (std::int64_t h = std::min(z->n0, z->n0 + k) - 1; h <= n1; ++h) push(GroupElement(h));
    return cs;
  }
  if (auto* s = spec.as<SpecialCocycle>()) {
    double ss = scale_sq(*s);
    // bump tails decay slowly; past this the caller falls back on the norm
    const std::int64_t cap = std::int64_t{1} << 14;
    if (g.is_integer()) {
      std::int64_t k = g.integer();
      std::int64_t R = std::max<std::int64_t>(64, 4 * std::abs(k));
      BoundedValue t = s->bump->gamma_tail(k, R, 1e-6);
      while (ss * t.hi() > tol && R < cap) {
        R *= 2;
        t = s->bump->gamma_tail(k, R, 1e-6);
      }
      cs.tail_mass = ss * t.hi();
      cs.tail_certified = t.converged && cs.tail_mass <= tol;
      for (std::int64_t h = -std::abs(k); h <= R; ++h) push(GroupElement(h));
      return cs;
    }
    std::int64_t E = std::max<std::int64_t>(64, 4 * word_length(g));
    for (;;) {
      double tails = 0;
      bool conv = true;
      for (const Ray& r : special_rays(g)) {
        GroupElement q = mul(ginv, r.prefix);
        if (!q.word().is_identity() && q.word().syllables().back().gen == r.gen) {
          BoundedValue t = s->bump->gamma_tail(-q.word().syllables().back().exp, E, 1e-6);
          tails += t.hi();
          conv = conv && t.converged;
        }
      }
      cs.tail_mass = ss * tails;
      cs.tail_certified = conv && cs.tail_mass <= tol;
      if (cs.tail_mass <= tol || E >= cap) break;
      E *= 2;
    }
    bool identity_done = false;
    for (const Ray& r : special_rays(g)) {
      for (std::int64_t e = -E; e <= E; ++e) {
        if (e == 0 && (identity_done || !r.prefix.is_identity())) continue;
        if (e == 0) identity_done = true;
        Word hw = r.prefix.word();
        hw.push_back(r.gen, e);
        push(GroupElement(hw));
      }
    }
    return cs;
  }
  throw ValidationError("coordinate_set: unsupported family");
}

std::vector<GrowthRow> growth(const ActionSpec& spec, std::int64_t radius, double tol) {
  if (radius < 0) throw ValidationError("radius must be >= 0");
  std::vector<GrowthRow> rows;
  const double m = mult(spec);
  if (!spec.group.is_free()) {
    for (std::int64_t k = 1; k <= radius; ++k) {
      GrowthRow row;
      row.index = k;
      row.element = std::to_string(k);
      row.value = norm_sq(spec, GroupElement(k), tol).value;
      row.lower_bound = row.value.lo();
      row.upper_bound = row.value.hi();
      if (auto* z = spec.as<ZSequence>()) {
        double head = z->a.head_sq_sum(k);
        row.lower_bound = m * head * (1 - 1e-12);
        row.upper_bound = 2 * m * head * (1 + 1e-12);
      } else if (auto* s = spec.as<SpecialCocycle>()) {
        row.lower_bound = m * scale_sq(*s) * s->D.get_d() * std::pow(static_cast<double>(k), 1.5);
      }
      rows.push_back(row);
    }
    return rows;
  }
  for (const GroupElement& g : ball(spec.group, radius)) {
    GrowthRow row;
    row.index = word_length(g);
    row.element = format_element(g);
    row.value = norm_sq(spec, g, tol).value;
    row.lower_bound = row.value.lo();
    row.upper_bound = row.value.hi();
    if (auto* s = spec.as<SpecialCocycle>()) {
      row.lower_bound = m * scale_sq(*s) * s->D.get_d() * static_cast<double>(row.index);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bernlab
