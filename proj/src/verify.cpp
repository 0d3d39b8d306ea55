#include "bernlab/verify.hpp"

#include "bernlab/cocycles.hpp"
#include "bernlab/criteria.hpp"
#include "bernlab/parallel.hpp"

#include <cmath>

namespace bernlab {

namespace {

BoundedValue exp_of(const BoundedValue& x, double c) {
  double a = std::exp(c * x.lo()), b = std::exp(c * x.hi());
  return BoundedValue::from_interval(std::min(a, b) * (1 - 4e-16), std::max(a, b) * (1 + 4e-16), x.converged);
}

BoundCheck check(std::string name, const GroupElement& g, BoundedValue lhs, BoundedValue rhs) {
  BoundCheck c;
  c.inequality = std::move(name);
  c.element = format_element(g);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs.value - lhs.value;
  c.pass = lhs.lo() <= rhs.hi();
  return c;
}

}  // namespace

std::vector<GroupElement> default_grid(const ActionSpec& spec) {
  if (spec.group.is_free()) return ball(spec.group, 4);
  std::vector<GroupElement> grid;
  for (std::int64_t k = 1; k <= 1000; ++k) {
    grid.emplace_back(k);
    grid.emplace_back(-k);
  }
  return grid;
}

VerifyReport verify_bounds(const ActionSpec& spec, const std::vector<GroupElement>& grid, double tol) {
  validate_spec(spec);
  const double m = static_cast<double>(spec.multiplicity);
  const double k0 = kappa0(spec.delta).get_d();
  const bool lower_applies = spec.delta >= Rational(1, 3);
  std::vector<std::vector<BoundCheck>> per(grid.size());

  parallel_for(static_cast<std::int64_t>(grid.size()), [&](std::int64_t idx) {
    const GroupElement& g = grid[idx];
    auto& out = per[idx];
    BoundedValue n = norm_sq(spec, g, tol).value;
    bool two_point = !(spec.as<FreeProductW>() && spec.as<FreeProductW>()->mu0.size() > 2);
    if (two_point) {
      BoundedValue h = hellinger_product(spec, g, tol);
      out.push_back(check("sqrt-upper", g, h, exp_of(n, -0.5)));
      if (lower_applies) out.push_back(check("sqrt-lower", g, exp_of(n, -0.6), h));
      // compared as logs, the integral overflows for fast-growing cocycles
      BoundedValue bound = scale(n, k0);
      bound.err += 4e-16 * std::abs(bound.value);
      out.push_back(check("negsq", g, negsq_log_product(spec, g, tol), bound));
    }
    if (auto* z = spec.as<ZSequence>()) {
      double head = z->a.head_sq_sum(std::abs(g.integer()));
      double slack = summation_slack(3.0 * static_cast<double>(std::abs(g.integer())), head);
      out.push_back(check("translate-lower", g, BoundedValue{m * head, m * slack, true}, n));
      out.push_back(check("translate-upper", g, n, BoundedValue{2 * m * head, 2 * m * slack, true}));
    }
    if (spec.as<WSplit>() || spec.as<FolnerInduced>() || (spec.as<FreeProductW>() && two_point)) {
      std::int64_t radius = word_length(g);
      if (auto* fo = spec.as<FolnerInduced>()) {
        std::int64_t reach = 0;
        for (const auto& iv : fo->intervals) reach = std::max({reach, std::abs(iv.start), std::abs(iv.start + iv.length)});
        radius += reach;
      }
      NormResult oracle = norm_sq_bruteforce(spec, g, radius);
      NormResult closed = norm_sq(spec, g, tol);
      BoundCheck c = check("norm-oracle", g, closed.value, oracle.value);
      c.pass = closed.exact && oracle.exact && *closed.exact == *oracle.exact;
      out.push_back(c);
    }
    if (auto* s = spec.as<SpecialCocycle>()) {
      double len = static_cast<double>(word_length(g));
      double growth = spec.group.is_free() ? len : std::pow(len, 1.5);
      double bound = m * Rational(s->scale * s->scale * s->D).get_d() * growth;
      out.push_back(check("bump-growth", g, BoundedValue::exact(bound), n));
    }
  });

  VerifyReport rep;
  for (auto& v : per) {
    for (auto& c : v) {
      if (!c.pass) ++rep.failures;
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

}  // namespace bernlab
