#include "bernlab/presets.hpp"

#include <cmath>

namespace bernlab {

std::vector<PresetInfo> preset_list() {
  return {
      {"explicit-z", "lambda (default 1/2)", "Z, F(n) = lambda + 1/sqrt(n log n) from n0 on"},
      {"explicit-z-sqrt6", "", "Z, F(n) = 1/2 + 1/(6 sqrt n) for n >= 1"},
      {"f2-wsplit", "", "F_2, F = 3/5 on W_a, 2/5 on W_b, 1/2 elsewhere"},
      {"f2-wsplit-512", "", "F_2, F = 3/5 on W_a, 5/12 on W_b, 1/2 elsewhere"},
      {"f2-dissipative", "D (default 36)", "F_2, F = 1/2 +- H(pi)/4 from the bump function of parameter D"},
      {"folner-z", "phi (default log1p)", "Z, slow-growth cocycle from Folner intervals"},
  };
}

ActionSpec explicit_z(const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) throw ValidationError("explicit-z needs lambda in (0,1)");
  double om = Rational(1 - lambda).get_d();
  std::int64_t n0 = std::max<std::int64_t>(3, static_cast<std::int64_t>(std::ceil(1.0 / (om * om))));
  ActionSpec s;
  s.group = Group::integers();
  ZSequence z;
  z.lambda = lambda;
  z.n0 = n0;
  z.a = DecreasingSequence::inv_sqrt_log(n0);
  double room = std::min(lambda.get_d(), om - z.a.sup_upper());
  s.family = z;
  s.delta = dyadic_floor(std::min(room, 0.5), 20);
  validate_spec(s);
  return s;
}

ActionSpec explicit_z_sqrt6() {
  ActionSpec s;
  s.group = Group::integers();
  s.family = ZSequence{Rational(1, 2), 1, DecreasingSequence::inv_sqrt(Rational(1, 6))};
  s.delta = Rational(1, 3);
  validate_spec(s);
  return s;
}

ActionSpec f2_wsplit() {
  ActionSpec s;
  s.group = Group::free(2);
  s.family = WSplit{Rational(3, 5), Rational(2, 5), Rational(1, 2)};
  s.delta = Rational(1, 3);
  validate_spec(s);
  return s;
}

ActionSpec f2_wsplit_512() {
  ActionSpec s;
  s.group = Group::free(2);
  s.family = WSplit{Rational(3, 5), Rational(5, 12), Rational(1, 2)};
  s.delta = Rational(1, 3);
  validate_spec(s);
  return s;
}

ActionSpec f2_dissipative(const Rational& D) {
  ActionSpec s;
  s.group = Group::free(2);
  s.family = make_special(D, Rational(1, 2), Rational(1, 4));
  s.delta = Rational(1, 4);
  validate_spec(s);
  return s;
}

ActionSpec folner_z(const PhiSpec& phi) {
  FolnerCocycle fc = build_folner(phi, Rational(1, 6));
  FolnerInduced f;
  f.offset = Rational(1, 2);
  f.bound = fc.bound;
  for (const auto& iv : fc.intervals) f.intervals.push_back({iv.start, iv.length, iv.value});
  ActionSpec s;
  s.group = Group::integers();
  s.family = f;
  s.delta = Rational(1, 3);
  validate_spec(s);
  return s;
}

ActionSpec preset(const std::string& text) {
  std::string name = text, arg;
  if (auto open = text.find('('); open != std::string::npos) {
    if (text.back() != ')') throw ValidationError("malformed preset '" + text + "'");
    name = text.substr(0, open);
    arg = text.substr(open + 1, text.size() - open - 2);
  } else if (auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    arg = text.substr(colon + 1);
  }
  auto no_arg = [&] {
    if (!arg.empty()) throw ValidationError("preset '" + name + "' takes no argument");
  };
  if (name == "explicit-z") return explicit_z(arg.empty() ? Rational(1, 2) : parse_rational(arg));
  if (name == "explicit-z-sqrt6") return no_arg(), explicit_z_sqrt6();
  if (name == "f2-wsplit") return no_arg(), f2_wsplit();
  if (name == "f2-wsplit-512") return no_arg(), f2_wsplit_512();
  if (name == "f2-dissipative") return f2_dissipative(arg.empty() ? Rational(36) : parse_rational(arg));
  if (name == "folner-z") return folner_z(PhiSpec::parse(arg.empty() ? "log1p" : arg));
  throw ValidationError("unknown preset '" + name + "'");
}

}  // namespace bernlab
