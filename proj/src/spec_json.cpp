#include "bernlab/spec_json.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace bernlab {

namespace {

void expect_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) throw ValidationError("unknown key '" + it.key() + "' in " + where);
  }
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

std::int64_t json_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ValidationError(what + " must be an integer");
  return j.get<std::int64_t>();
}

std::string rstr(const Rational& q) { return q.get_str(); }

Json measure_json(const BaseMeasure& m) {
  Json arr = Json::array();
  for (const Rational& p : m.p) arr.push_back(rstr(p));
  return arr;
}

BaseMeasure measure_from_json(const Json& j, const std::string& what) {
  if (j.is_string()) return BaseMeasure::parse(j.get<std::string>());
  if (!j.is_array()) throw ValidationError(what + " must be an array or a comma-separated string");
  BaseMeasure m;
  for (const Json& x : j) m.p.push_back(json_rational(x, what));
  m.validate();
  return m;
}

Json sequence_json(const DecreasingSequence& a) {
  Json s;
  s["type"] = a.tag();
  switch (a.kind()) {
    case DecreasingSequence::Kind::InvSqrt: s["scale"] = rstr(a.scale()); break;
    case DecreasingSequence::Kind::InvSqrtLog: break;
    case DecreasingSequence::Kind::Geometric:
      s["first"] = rstr(a.first());
      s["ratio"] = rstr(a.ratio());
      break;
    case DecreasingSequence::Kind::Explicit: {
      Json v = Json::array();
      for (const Rational& q : a.values()) v.push_back(rstr(q));
      s["values"] = v;
      break;
    }
  }
  return s;
}

DecreasingSequence sequence_from_json(const Json& s, std::int64_t n0) {
  const std::string where = "family.sequence";
  if (!s.is_object()) throw ValidationError(where + " must be an object");
  std::string type = require(s, "type", where).get<std::string>();
  if (type == "inv_sqrt") {
    expect_keys(s, where, {"type", "scale"});
    return DecreasingSequence::inv_sqrt(json_rational(require(s, "scale", where), "scale"));
  }
  if (type == "inv_sqrt_log") {
    expect_keys(s, where, {"type"});
    return DecreasingSequence::inv_sqrt_log(n0);
  }
  if (type == "geometric") {
    expect_keys(s, where, {"type", "first", "ratio"});
    return DecreasingSequence::geometric(json_rational(require(s, "first", where), "first"),
                                         json_rational(require(s, "ratio", where), "ratio"));
  }
  if (type == "explicit") {
    expect_keys(s, where, {"type", "values"});
    const Json& v = require(s, "values", where);
    if (!v.is_array()) throw ValidationError("explicit values must be an array");
    std::vector<Rational> vals;
    for (const Json& x : v) vals.push_back(json_rational(x, "explicit value"));
    return DecreasingSequence::explicit_values(std::move(vals));
  }
  throw ValidationError("unknown sequence type '" + type + "'");
}

}  // namespace

Rational json_rational(const Json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.dump());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw ValidationError(what + " must be a rational string such as \"1/3\"");
}

Json spec_to_json(const ActionSpec& spec) {
  Json j;
  j["group"] = spec.group.is_free() ? Json{{"type", "free"}, {"rank", spec.group.rank}} : Json{{"type", "integers"}};
  j["multiplicity"] = spec.multiplicity;
  j["delta"] = rstr(spec.delta);
  Json f;
  f["type"] = family_name(spec.family);
  if (auto* w = spec.as<WSplit>()) {
    f["p_a"] = rstr(w->p_a);
    f["p_b"] = rstr(w->p_b);
    f["p_w"] = rstr(w->p_w);
  } else if (auto* z = spec.as<ZSequence>()) {
    f["lambda"] = rstr(z->lambda);
    f["n0"] = z->n0;
    f["sequence"] = sequence_json(z->a);
  } else if (auto* p = spec.as<FreeProductW>()) {
    f["mu0"] = measure_json(p->mu0);
    f["mu1"] = measure_json(p->mu1);
    f["generator"] = p->generator;
  } else if (auto* fo = spec.as<FolnerInduced>()) {
    f["offset"] = rstr(fo->offset);
    f["bound"] = rstr(fo->bound);
    Json ivs = Json::array();
    for (const auto& iv : fo->intervals) {
      ivs.push_back({{"start", iv.start}, {"length", iv.length}, {"value", rstr(iv.value)}});
    }
    f["intervals"] = ivs;
  } else if (auto* s = spec.as<SpecialCocycle>()) {
    f["D"] = rstr(s->D);
    f["base"] = rstr(s->base);
    f["scale"] = rstr(s->scale);
  }
  j["family"] = f;
  return j;
}

ActionSpec spec_from_json(const Json& j) {
  expect_keys(j, "spec", {"group", "multiplicity", "delta", "family"});
  ActionSpec spec;

  const Json& g = require(j, "group", "spec");
  expect_keys(g, "group", {"type", "rank"});
  std::string gtype = require(g, "type", "group").get<std::string>();
  if (gtype == "free") {
    spec.group = Group::free(static_cast<int>(json_int(require(g, "rank", "group"), "group.rank")));
  } else if (gtype == "integers") {
    if (g.contains("rank")) throw ValidationError("group of integers takes no rank");
    spec.group = Group::integers();
  } else {
    throw ValidationError("unknown group type '" + gtype + "'");
  }

  spec.multiplicity = j.contains("multiplicity") ? json_int(j["multiplicity"], "multiplicity") : 1;
  spec.delta = json_rational(require(j, "delta", "spec"), "delta");

  const Json& f = require(j, "family", "spec");
  if (!f.is_object()) throw ValidationError("family must be an object");
  std::string type = require(f, "type", "family").get<std::string>();
  if (type == "wsplit") {
    expect_keys(f, "family", {"type", "p_a", "p_b", "p_w"});
    spec.family = WSplit{json_rational(require(f, "p_a", "family"), "p_a"),
                         json_rational(require(f, "p_b", "family"), "p_b"),
                         json_rational(require(f, "p_w", "family"), "p_w")};
  } else if (type == "zsequence") {
    expect_keys(f, "family", {"type", "lambda", "n0", "sequence"});
    ZSequence z;
    z.lambda = json_rational(require(f, "lambda", "family"), "lambda");
    z.n0 = json_int(require(f, "n0", "family"), "n0");
    z.a = sequence_from_json(require(f, "sequence", "family"), z.n0);
    spec.family = z;
  } else if (type == "free_product_w") {
    expect_keys(f, "family", {"type", "mu0", "mu1", "generator"});
    FreeProductW p;
    p.mu0 = measure_from_json(require(f, "mu0", "family"), "mu0");
    p.mu1 = measure_from_json(require(f, "mu1", "family"), "mu1");
    if (f.contains("generator")) p.generator = static_cast<int>(json_int(f["generator"], "generator"));
    spec.family = p;
  } else if (type == "folner_induced") {
    expect_keys(f, "family", {"type", "offset", "bound", "intervals"});
    FolnerInduced fo;
    fo.offset = json_rational(require(f, "offset", "family"), "offset");
    fo.bound = json_rational(require(f, "bound", "family"), "bound");
    const Json& ivs = require(f, "intervals", "family");
    if (!ivs.is_array()) throw ValidationError("intervals must be an array");
    for (const Json& iv : ivs) {
      expect_keys(iv, "interval", {"start", "length", "value"});
      fo.intervals.push_back({json_int(require(iv, "start", "interval"), "start"),
                              json_int(require(iv, "length", "interval"), "length"),
                              json_rational(require(iv, "value", "interval"), "value")});
    }
    spec.family = fo;
  } else if (type == "special") {
    expect_keys(f, "family", {"type", "D", "base", "scale"});
    spec.family = make_special(json_rational(require(f, "D", "family"), "D"),
                               json_rational(require(f, "base", "family"), "base"),
                               json_rational(require(f, "scale", "family"), "scale"));
  } else {
    throw ValidationError("unknown family type '" + type + "'");
  }
  validate_spec(spec);
  return spec;
}

ActionSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open spec file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
  try {
    return spec_from_json(j);
  } catch (const Json::exception& e) {
    throw ValidationError("bad spec '" + path + "': " + e.what());
  }
}

void save_spec(const ActionSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << spec_to_json(spec).dump(2) << '\n';
}

std::string canonical_json(const Json& j) { return j.dump(); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string spec_digest(const ActionSpec& spec) { return fnv1a_hex(canonical_json(spec_to_json(spec))); }

}  // namespace bernlab
