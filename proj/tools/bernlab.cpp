// bernlab command line: specs, cocycle norms, criteria, classification,
// simulation, verification and the two cocycle builders.

#include "bernlab/bump.hpp"
#include "bernlab/cocycles.hpp"
#include "bernlab/criteria.hpp"
#include "bernlab/folner.hpp"
#include "bernlab/montecarlo.hpp"
#include "bernlab/presets.hpp"
#include "bernlab/spec_json.hpp"
#include "bernlab/typeclass.hpp"
#include "bernlab/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

using namespace bernlab;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitValidation = 2;
constexpr int kExitInconclusive = 3;

struct SpecArgs {
  std::string spec_file;
  std::string preset_name;
  std::int64_t power = 0;
};

void add_spec_flags(CLI::App* cmd, SpecArgs& a) {
  cmd->add_option("--spec", a.spec_file, "ActionSpec JSON file");
  cmd->add_option("--preset", a.preset_name, "named preset, e.g. f2-wsplit or explicit-z(1/3)");
  cmd->add_option("--power", a.power, "diagonal power m (overrides the spec's multiplicity)");
}

ActionSpec resolve_spec(const SpecArgs& a) {
  if (a.spec_file.empty() == a.preset_name.empty()) throw ValidationError("give exactly one of --spec and --preset");
  ActionSpec s = a.spec_file.empty() ? preset(a.preset_name) : load_spec(a.spec_file);
  if (a.power != 0) {
    if (a.power < 1) throw ValidationError("--power must be >= 1");
    s.multiplicity = a.power;
  }
  validate_spec(s);
  return s;
}

Json bounded_json(const BoundedValue& v) {
  return {{"value", v.value}, {"err", v.err}, {"lower", v.lo()}, {"upper", v.hi()}, {"converged", v.converged}};
}

struct Output {
  std::string out_file;
};

// Writes the report; the wall time field is the only nondeterministic entry.
void emit(const std::string& command, const Json& results, const std::optional<ActionSpec>& spec,
          const std::vector<std::uint64_t>& seeds, std::chrono::steady_clock::time_point start, const Output& o,
          const Json& certificates = nullptr) {
  Json rep;
  rep["schema"] = "bernlab/1";
  rep["tool_version"] = kVersion;
  rep["command"] = command;
  rep["spec_digest"] = spec ? Json(spec_digest(*spec)) : Json(nullptr);
  if (spec) rep["spec"] = spec_to_json(*spec);
  rep["seeds"] = seeds;
  rep["results"] = results;
  rep["certificates"] = certificates;
  rep["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::string text = rep.dump(2) + "\n";
  if (o.out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out_file);
    if (!f) throw std::runtime_error("cannot write '" + o.out_file + "'");
    f << text;
  }
}

// path "-" is stdout
void write_csv(const std::string& path, const std::vector<std::array<std::string, 4>>& rows) {
  std::ofstream file;
  if (path != "-") {
    file.open(path);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
  }
  std::ostream& f = path == "-" ? std::cout : file;
  f << "index,value,lower_bound,upper_bound\n";
  for (const auto& r : rows) f << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << '\n';
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

Json certificate_json(const CriterionVerdict& v) {
  if (v.dissipative) {
    const auto& c = *v.dissipative;
    Json j{{"kind", c.kind == DissipativeCertificate::Kind::Geometric ? "geometric" : "power_law"},
           {"lower_bound", c.lower_bound},
           {"slope", c.slope},
           {"head_radius", c.head_radius},
           {"head", c.head},
           {"tail", c.tail},
           {"total", c.total},
           {"rechecked", c.recheck()}};
    if (c.kind == DissipativeCertificate::Kind::Geometric) {
      j["sphere_coeff"] = c.sphere_coeff;
      j["sphere_base"] = c.sphere_base;
      j["rho"] = c.rho;
    } else {
      j["exponent"] = c.exponent;
    }
    return j;
  }
  if (v.conservative) {
    const auto& w = *v.conservative;
    static const char* kinds[] = {"constant", "power_law", "log_power", "word_blocks"};
    Json ps = Json::array();
    for (const auto& [b, s] : w.partial_sums) ps.push_back({{"budget", b}, {"partial_sum", s}});
    Json j{{"kind", kinds[static_cast<int>(w.kind)]},
           {"family", w.family},
           {"upper_bound", w.upper_bound},
           {"kappa", w.kappa},
           {"factor", w.factor},
           {"exponent", w.exponent},
           {"partial_sums", ps},
           {"rechecked", w.recheck()}};
    if (w.kind == ConservativeWitness::Kind::WordBlocks) {
      j["block_ratio"] = w.ratio;
      j["alpha"] = w.alpha;
      j["beta"] = w.beta;
    }
    return j;
  }
  return nullptr;
}

Json type_json(const TypeLabel& t) { return {{"type", t.text()}, {"lambda", t.lambda}}; }

Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const Rational& q : v) a.push_back(q.get_str());
  return a;
}

Json classification_json(const std::vector<Rational>& t, bool stable, bool approximate) {
  Json r;
  r["mode"] = approximate ? "approximate" : "exact";
  r["t_values"] = rationals_json(t);
  RatioGroup g = ratio_group(t);
  r["type"] = type_from_values(t).text();
  r["ratio_group"] = g.describe();
  r["sd_basis"] = rationals_json(g.basis);
  if (stable) {
    StableParams p = stable_params_from_values(t);
    Json s;
    s["L"] = p.L.describe();
    if (p.L.kind == RatioGroup::Kind::Cyclic) {
      s["a"] = {{"exact", log_text(p.exp_a)}, {"decimal", p.a}};
      s["b"] = {{"exact", p.exp_b == 1 ? std::string("0") : log_text(p.exp_b)},
                {"decimal", p.b},
                {"t_x0", p.t0.get_str()},
                {"step", p.exp_a.get_str()}};
    } else {
      s["a"] = p.L.kind == RatioGroup::Kind::Dense ? "dense" : "trivial";
      s["b"] = nullptr;
    }
    s["k1"] = p.k1 ? Json(*p.k1) : Json("infinity");
    StableTypeSet set = stable_type_set(p);
    Json types = Json::array();
    for (const auto& x : set.types) types.push_back(type_json(x));
    s["stable_types"] = types;
    s["rule"] = set.rule;
    s["infinite"] = set.infinite;
    r["stable"] = s;
  }
  return r;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw ValidationError("malformed number '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bernlab: nonsingular Bernoulli actions, cocycles and types"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Output out;
  auto start = std::chrono::steady_clock::now();
  std::function<int()> run;

  // spec
  auto* spec_cmd = app.add_subcommand("spec", "validate or print action specs");
  spec_cmd->require_subcommand(1);
  std::string validate_file;
  auto* validate = spec_cmd->add_subcommand("validate", "parse and validate a spec file");
  validate->add_option("file", validate_file, "spec JSON")->required();
  validate->add_option("--out", out.out_file);
  validate->callback([&] {
    run = [&] {
      ActionSpec s = load_spec(validate_file);
      emit("spec validate", {{"valid", true}, {"family", family_name(s.family)}}, s, {}, start, out);
      return 0;
    };
  });
  SpecArgs show_args;
  auto* show = spec_cmd->add_subcommand("show", "print the spec of a preset or file");
  add_spec_flags(show, show_args);
  bool show_raw = false;
  show->add_option("--out", out.out_file);
  show->add_flag("--raw", show_raw, "print the bare spec, loadable with --spec");
  show->callback([&] {
    run = [&] {
      ActionSpec s = resolve_spec(show_args);
      if (show_raw) {
        if (out.out_file.empty()) {
          std::cout << spec_to_json(s).dump(2) << "\n";
        } else {
          save_spec(s, out.out_file);
        }
        return 0;
      }
      Json presets = Json::array();
      for (const auto& p : preset_list()) presets.push_back({{"name", p.name}, {"argument", p.argument}, {"summary", p.summary}});
      emit("spec show", {{"family", family_name(s.family)}, {"presets", presets}}, s, {}, start, out);
      return 0;
    };
  });

  // cocycle
  auto* cocycle = app.add_subcommand("cocycle", "cocycle norms and growth");
  cocycle->require_subcommand(1);
  SpecArgs norm_args;
  std::string element;
  double tol = 1e-9;
  std::int64_t oracle_radius = -1;
  auto* norm = cocycle->add_subcommand("norm", "||c_g||^2 with certified error");
  add_spec_flags(norm, norm_args);
  norm->add_option("-g,--element", element, "group element, e.g. \"a b^-1 a\" or 5")->required();
  norm->add_option("--tol", tol);
  norm->add_option("--oracle-radius", oracle_radius, "also run the brute-force oracle");
  norm->add_option("--out", out.out_file);
  norm->callback([&] {
    run = [&] {
      ActionSpec s = resolve_spec(norm_args);
      GroupElement g = parse_element(s.group, element);
      NormResult r = norm_sq(s, g, tol);
      Json res = bounded_json(r.value);
      res["element"] = format_element(g);
      res["method"] = r.method;
      res["exact"] = r.exact ? Json(r.exact->get_str()) : Json(nullptr);
      if (oracle_radius >= 0) {
        NormResult o = norm_sq_bruteforce(s, g, oracle_radius);
        Json oj = bounded_json(o.value);
        oj["method"] = o.method;
        oj["exact"] = o.exact ? Json(o.exact->get_str()) : Json(nullptr);
        oj["agrees"] = (r.exact && o.exact) ? *r.exact == *o.exact : overlaps(r.value, o.value);
        res["oracle"] = oj;
      }
      emit("cocycle norm", res, s, {}, start, out);
      return 0;
    };
  });
  SpecArgs growth_args;
  std::int64_t growth_radius = 4;
  std::string growth_csv;
  auto* growth_cmd = cocycle->add_subcommand("growth", "||c_g||^2 over a ball, as CSV");
  add_spec_flags(growth_cmd, growth_args);
  growth_cmd->add_option("--radius", growth_radius);
  growth_cmd->add_option("--tol", tol);
  growth_cmd->add_option("--out", growth_csv, "CSV file (default: stdout)");
  growth_cmd->callback([&] {
    run = [&] {
      ActionSpec s = resolve_spec(growth_args);
      std::vector<std::array<std::string, 4>> rows;
      for (const GrowthRow& r : growth(s, growth_radius, tol)) {
        rows.push_back({std::to_string(r.index), num(r.value.value), num(r.lower_bound), num(r.upper_bound)});
      }
      write_csv(growth_csv.empty() ? "-" : growth_csv, rows);
      return 0;
    };
  });

  // criterion
  SpecArgs crit_args;
  std::string kappa_text = "auto";
  std::int64_t crit_radius = 4;
  std::string crit_csv;
  bool certify = false;
  auto* crit = app.add_subcommand("criterion", "conservative / dissipative verdict with evidence");
  add_spec_flags(crit, crit_args);
  crit->add_option("--kappa", kappa_text, "auto or a value above kappa0(delta)");
  crit->add_option("--radius", crit_radius);
  crit->add_option("--csv", crit_csv, "dump the partial-sum trajectory to FILE, or alone to stdout instead of the report")
      ->expected(0, 1);
  crit->add_flag("--certify", certify, "exit 3 when no certificate exists");
  crit->add_option("--out", out.out_file);
  crit->callback([&] {
    run = [&] {
      ActionSpec s = resolve_spec(crit_args);
      std::optional<double> kappa;
      if (kappa_text != "auto") kappa = parse_rational(kappa_text).get_d();
      CriterionVerdict v = classify_conservativity(s, kappa, crit_radius);
      Json res{{"verdict", to_string(v.verdict)},
               {"reason", v.reason},
               {"kappa", v.kappa},
               {"kappa0", kappa0(s.delta).get_str()},
               {"multiplicity", s.multiplicity},
               {"rechecked", v.recheck()}};
      bool csv_stdout = crit->count("--csv") > 0 && crit_csv.empty();
      if (csv_stdout) crit_csv = "-";
      if (!crit_csv.empty()) {
        auto ps = v.partial_sums.empty() ? criterion_partial_sums(s, 0.5, crit_radius) : v.partial_sums;
        std::vector<std::array<std::string, 4>> rows;
        for (const auto& p : ps) rows.push_back({std::to_string(p.radius), num(0.5 * (p.lower + p.upper)), num(p.lower), num(p.upper)});
        write_csv(crit_csv, rows);
      }
      Json traj = Json::array();
      for (const auto& p : v.partial_sums) traj.push_back({{"radius", p.radius}, {"lower", p.lower}, {"upper", p.upper}});
      res["partial_sums"] = traj;
      if (!csv_stdout || !out.out_file.empty()) emit("criterion", res, s, {}, start, out, certificate_json(v));
      return certify && v.verdict == Verdict::Inconclusive ? kExitInconclusive : 0;
    };
  });

  // classify
  SpecArgs cls_args;
  std::string mu0_text, mu1_text;
  std::vector<std::string> cls_elements;
  bool stable = false;
  double approx_tol = 0;
  auto* cls = app.add_subcommand("classify", "type and stable type from (mu0, mu1) or a preset");
  add_spec_flags(cls, cls_args);
  cls->add_option("--mu0", mu0_text, "e.g. 2/3,1/3");
  cls->add_option("--mu1", mu1_text);
  cls->add_option("--element", cls_elements, "elements whose omega values are used (spec mode)");
  cls->add_flag("--stable", stable, "also compute L, a, b, k1 and the stable types");
  cls->add_option("--approx", approx_tol, "float mode: rationalize T values to this relative tolerance");
  cls->add_option("--out", out.out_file);
  cls->callback([&] {
    run = [&] {
      if (!mu0_text.empty() || !mu1_text.empty()) {
        if (mu0_text.empty() || mu1_text.empty()) throw ValidationError("give both --mu0 and --mu1");
        std::vector<Rational> t;
        bool approximate = approx_tol > 0;
        if (approximate) {
          t = approximate_t_values(parse_doubles(mu0_text), parse_doubles(mu1_text), approx_tol);
        } else {
          t = t_values(BaseMeasure::parse(mu0_text), BaseMeasure::parse(mu1_text));
        }
        emit("classify", classification_json(t, stable, approximate), std::nullopt, {}, start, out);
        return 0;
      }
      ActionSpec s = resolve_spec(cls_args);
      std::vector<GroupElement> elems;
      for (const auto& e : cls_elements) elems.push_back(parse_element(s.group, e));
      if (elems.empty()) {
        if (s.group.is_free()) {
          for (int gen = 1; gen <= s.group.rank; ++gen) {
            Word w(s.group.rank);
            w.push_back(gen, 1);
            elems.emplace_back(w);
          }
        } else {
          elems.emplace_back(std::int64_t{1});
        }
      }
      OmegaRange om = omega_range(s, elems);
      Json res = classification_json(om.ratios, stable, false);
      res["omega_ratios"] = rationals_json(om.ratios);
      res["omega_generators"] = rationals_json(om.generators);
      RatioGroup g = ratio_group(om.generators);
      res["type"] = type_from_values(om.generators).text();
      res["ratio_group"] = g.describe();
      Json el = Json::array();
      for (const auto& e : elems) el.push_back(format_element(e));
      res["elements"] = el;
      emit("classify", res, s, {}, start, out);
      return 0;
    };
  });

  // simulate
  SpecArgs sim_args;
  std::int64_t samples = 100000, window = -1;
  std::uint64_t seed = 1;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimates of omega(g, .)");
  add_spec_flags(sim, sim_args);
  sim->add_option("-g,--element", element)->required();
  sim->add_option("--samples", samples);
  sim->add_option("--seed", seed);
  sim->add_option("--window", window, "radius of the coordinate window (default |g|, or the support)");
  sim->add_option("--out", out.out_file);
  sim->callback([&] {
    run = [&] {
      ActionSpec s = resolve_spec(sim_args);
      GroupElement g = parse_element(s.group, element);
      std::int64_t w = window;
      if (w < 0) {
        w = word_length(g);
        if (auto* fo = s.as<FolnerInduced>()) {
          for (const auto& iv : fo->intervals) w = std::max(w, std::abs(iv.start + iv.length) + word_length(g));
        } else if (!s.group.is_free()) {
          w = std::max<std::int64_t>(w, 1000);
        }
      }
      McOmegaResult r = mc_omega(s, g, w, samples, seed);
      auto est = [](const Estimate& e) { return Json{{"mean", e.mean}, {"stderr", e.stderr_}}; };
      Json res{{"element", format_element(g)},
               {"samples", r.samples},
               {"window", r.window},
               {"coordinates", r.coordinates},
               {"omega", est(r.omega)},
               {"sqrt_omega", est(r.sqrt_omega)},
               {"omega_negsq", est(r.omega_negsq)},
               {"truncation", r.truncation},
               {"hellinger_exact", bounded_json(hellinger_product(s, g, 1e-9))}};
      emit("simulate", res, s, {seed}, start, out);
      return 0;
    };
  });

  // verify
  SpecArgs ver_args;
  std::int64_t ver_radius = -1;
  auto* ver = app.add_subcommand("verify", "run the inequality suite on a grid");
  add_spec_flags(ver, ver_args);
  ver->add_option("--radius", ver_radius, "ball radius (F_n) or max |k| (Z); default 4 / 1000");
  ver->add_option("--tol", tol);
  ver->add_option("--out", out.out_file);
  ver->callback([&] {
    run = [&] {
      ActionSpec s = resolve_spec(ver_args);
      std::vector<GroupElement> grid;
      if (ver_radius < 0) {
        grid = default_grid(s);
      } else if (s.group.is_free()) {
        grid = ball(s.group, ver_radius);
      } else {
        for (std::int64_t k = 1; k <= ver_radius; ++k) {
          grid.emplace_back(k);
          grid.emplace_back(-k);
        }
      }
      VerifyReport rep = verify_bounds(s, grid, ver->count("--tol") ? tol : 1e-5);
      Json checks = Json::array();
      std::map<std::string, std::pair<int, int>> summary;
      for (const auto& c : rep.checks) {
        checks.push_back({{"inequality", c.inequality},
                          {"element", c.element},
                          {"lhs", bounded_json(c.lhs)},
                          {"rhs", bounded_json(c.rhs)},
                          {"margin", c.margin},
                          {"pass", c.pass}});
        auto& e = summary[c.inequality];
        e.first += 1;
        e.second += c.pass ? 0 : 1;
      }
      Json sum = Json::object();
      for (const auto& [k, v] : summary) sum[k] = {{"checked", v.first}, {"failed", v.second}};
      emit("verify", {{"grid_size", grid.size()}, {"failures", rep.failures}, {"summary", sum}, {"checks", checks}}, s, {},
           start, out);
      return 0;
    };
  });

  // build
  auto* build = app.add_subcommand("build", "construct the bump and Folner cocycles");
  build->require_subcommand(1);
  std::string D_text = "1";
  std::int64_t kmax = 16;
  auto* special = build->add_subcommand("special", "bump function H and ||gamma_k||^2 >= D |k|^{3/2}");
  special->add_option("--D", D_text);
  special->add_option("--kmax", kmax);
  special->add_option("--tol", tol);
  special->add_option("--out", out.out_file);
  special->callback([&] {
    run = [&] {
      BumpCocycle bc = BumpCocycle::build(parse_rational(D_text));
      Json rows = Json::array();
      bool all = true;
      for (std::int64_t k = 1; k <= kmax; ++k) {
        BoundedValue v = bc.gamma_norm_sq(k, std::max(tol, 1e-12));
        double bound = bc.D().get_d() * std::pow(static_cast<double>(k), 1.5);
        bool ok = v.lo() >= bound;
        all = all && ok;
        Json row = bounded_json(v);
        row["k"] = k;
        row["bound"] = bound;
        row["holds"] = ok;
        rows.push_back(row);
      }
      Json a = Json::array();
      for (std::int64_t n = 0; n < 12; ++n) a.push_back(bc.a(n));
      emit("build special",
           {{"D", bc.D().get_str()}, {"delta", bc.delta().get_str()}, {"a_head", a}, {"gamma", rows}, {"all_hold", all}},
           std::nullopt, {}, start, out);
      return 0;
    };
  });
  std::string phi_text = "log1p";
  std::string bound_text = "1/6";
  int horizon = 10;
  auto* folner = build->add_subcommand("folner", "Folner-interval cocycle with ||c_g|| <= phi(g)");
  folner->add_option("--phi", phi_text, "log1p[:alpha] or sqrt_log[:alpha]");
  folner->add_option("--bound", bound_text, "values lie in [0, bound)");
  folner->add_option("--horizon", horizon);
  folner->add_option("--out", out.out_file);
  folner->callback([&] {
    run = [&] {
      FolnerCocycle fc = build_folner(PhiSpec::parse(phi_text), parse_rational(bound_text), horizon);
      Json ivs = Json::array();
      for (std::size_t n = 0; n < fc.intervals.size(); ++n) {
        const auto& iv = fc.intervals[n];
        ivs.push_back({{"n", n + 1},
                       {"eps", fc.eps[n].get_str()},
                       {"start", iv.start},
                       {"length", iv.length},
                       {"value", iv.value.get_str()}});
      }
      emit("build folner",
           {{"phi", fc.phi.describe()},
            {"bound", fc.bound.get_str()},
            {"intervals", ivs},
            {"budget_condition", fc.budget_condition()},
            {"folner_condition", fc.folner_condition()}},
           std::nullopt, {}, start, out);
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  try {
    return run ? run() : 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
