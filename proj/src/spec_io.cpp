#include "antagonistic/spec_io.hpp"

#include <initializer_list>
#include <set>

#include "antagonistic/error.hpp"

namespace antag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void bad(const std::string& where, const std::string& why) {
  throw Error(ErrorCode::invalid_spec, where + ": " + why);
}

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected a JSON object");
}

void allow_only(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) bad(where, "unknown field '" + key + "'");
  }
}

double real_field(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) bad(where, std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) bad(where, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

double real_field_or(const Json& j, const std::string& where, const char* key, double fallback) {
  return j.contains(key) ? real_field(j, where, key) : fallback;
}

std::string kind_of(const Json& j, const std::string& where) {
  require_object(j, where);
  if (!j.contains("kind") || !j.at("kind").is_string()) bad(where, "missing string field 'kind'");
  return j.at("kind").get<std::string>();
}

}  // namespace

std::string kind_name(const PairDensity& d) {
  return std::visit(overloaded{
                        [](const GaussianPair&) { return "gaussian-antagonistic"; },
                        [](const UniformPair&) { return "uniform-antagonistic"; },
                        [](const TwoIntervalPair&) { return "two-interval"; },
                        [](const DecayingSquaresPair&) { return "decaying-squares"; },
                        [](const GapUniformPair&) { return "gap-uniform"; },
                    },
                    d);
}

std::string kind_name(const Composition& c) {
  return std::visit(overloaded{
                        [](const AntagonisticComposition&) { return "antagonistic"; },
                        [](const AntisymmetricComposition&) { return "antisymmetric"; },
                        [](const DiagPlusAntisymComposition&) { return "diag-plus-antisym"; },
                        [](const DiagPlusAntagonisticComposition&) {
                          return "diag-plus-antagonistic";
                        },
                        [](const EllipticGaussianComposition&) { return "elliptic-gaussian"; },
                        [](const DiluteComposition&) { return "dilute"; },
                        [](const SmallSymBigAntisymComposition&) {
                          return "small-sym-big-antisym";
                        },
                    },
                    c);
}

Json to_json(const PairDensity& d) {
  Json j = std::visit(overloaded{
                          [](const GaussianPair&) { return Json::object(); },
                          [](const UniformPair&) { return Json::object(); },
                          [](const TwoIntervalPair& t) { return Json{{"w", t.w}}; },
                          [](const DecayingSquaresPair& t) { return Json{{"c", t.c}, {"p", t.p}}; },
                          [](const GapUniformPair& t) { return Json{{"lo", t.lo}, {"hi", t.hi}}; },
                      },
                      d);
  j["kind"] = kind_name(d);
  return j;
}

Json to_json(const ScalarDensity& d) {
  return std::visit(
      overloaded{
          [](const UniformScalar& u) { return Json{{"kind", "uniform"}, {"a", u.a}, {"b", u.b}}; },
          [](const GaussianScalar& g) {
            return Json{{"kind", "gaussian"}, {"mean", g.mean}, {"variance", g.variance}};
          },
          [](const TwoIntervalScalar& t) { return Json{{"kind", "two-interval"}, {"w", t.w}}; },
          [](const GapUniformScalar& t) {
            return Json{{"kind", "gap-uniform"}, {"lo", t.lo}, {"hi", t.hi}};
          },
          [](const PointScalar& p) { return Json{{"kind", "point"}, {"value", p.value}}; },
      },
      d);
}

Json to_json(const Composition& c) {
  Json j = std::visit(
      overloaded{
          [](const AntagonisticComposition& a) { return Json{{"pair", to_json(a.pair)}}; },
          [](const AntisymmetricComposition& a) { return Json{{"entry", to_json(a.entry)}}; },
          [](const DiagPlusAntisymComposition& a) {
            return Json{{"diag", to_json(a.diag)}, {"entry", to_json(a.entry)}, {"g", a.g}};
          },
          [](const DiagPlusAntagonisticComposition& a) {
            return Json{{"diag", to_json(a.diag)}, {"pair", to_json(a.pair)}};
          },
          [](const EllipticGaussianComposition& a) { return Json{{"tau", a.tau}}; },
          [](const DiluteComposition& a) {
            return Json{{"entry", to_json(a.entry)}, {"keep", a.keep}};
          },
          [](const SmallSymBigAntisymComposition& a) {
            return Json{{"diag", to_json(a.diag)},
                        {"sym", to_json(a.sym)},
                        {"antisym", to_json(a.antisym)}};
          },
      },
      c);
  j["kind"] = kind_name(c);
  return j;
}

Json to_json(const EnsembleSpec& spec) {
  return Json{{"n", spec.n}, {"seed", spec.seed}, {"composition", to_json(spec.composition)}};
}

PairDensity pair_density_from_json(const Json& j) {
  const std::string where = "pair";
  const std::string kind = kind_of(j, where);
  if (kind == "gaussian-antagonistic") {
    allow_only(j, where, {"kind"});
    return GaussianPair{};
  }
  if (kind == "uniform-antagonistic") {
    allow_only(j, where, {"kind"});
    return UniformPair{};
  }
  if (kind == "two-interval") {
    allow_only(j, where, {"kind", "w"});
    return TwoIntervalPair{real_field(j, where, "w")};
  }
  if (kind == "decaying-squares") {
    allow_only(j, where, {"kind", "c", "p"});
    return DecayingSquaresPair{real_field(j, where, "c"), real_field(j, where, "p")};
  }
  if (kind == "gap-uniform") {
    allow_only(j, where, {"kind", "lo", "hi"});
    return GapUniformPair{real_field(j, where, "lo"), real_field(j, where, "hi")};
  }
  bad(where, "unknown pair density kind '" + kind + "'");
}

ScalarDensity scalar_density_from_json(const Json& j) {
  const std::string where = "scalar density";
  const std::string kind = kind_of(j, where);
  if (kind == "uniform") {
    allow_only(j, where, {"kind", "a", "b"});
    return UniformScalar{real_field(j, where, "a"), real_field(j, where, "b")};
  }
  if (kind == "gaussian") {
    allow_only(j, where, {"kind", "mean", "variance"});
    return GaussianScalar{real_field(j, where, "mean"), real_field(j, where, "variance")};
  }
  if (kind == "two-interval") {
    allow_only(j, where, {"kind", "w"});
    return TwoIntervalScalar{real_field(j, where, "w")};
  }
  if (kind == "gap-uniform") {
    allow_only(j, where, {"kind", "lo", "hi"});
    return GapUniformScalar{real_field(j, where, "lo"), real_field(j, where, "hi")};
  }
  if (kind == "point") {
    allow_only(j, where, {"kind", "value"});
    return PointScalar{real_field(j, where, "value")};
  }
  bad(where, "unknown scalar density kind '" + kind + "'");
}

Composition composition_from_json(const Json& j) {
  const std::string where = "composition";
  const std::string kind = kind_of(j, where);
  auto sub = [&](const char* key) -> const Json& {
    if (!j.contains(key)) bad(where, std::string("missing field '") + key + "'");
    return j.at(key);
  };
  if (kind == "antagonistic") {
    allow_only(j, where, {"kind", "pair"});
    return AntagonisticComposition{pair_density_from_json(sub("pair"))};
  }
  if (kind == "antisymmetric") {
    allow_only(j, where, {"kind", "entry"});
    return AntisymmetricComposition{scalar_density_from_json(sub("entry"))};
  }
  if (kind == "diag-plus-antisym") {
    allow_only(j, where, {"kind", "diag", "entry", "g"});
    return DiagPlusAntisymComposition{scalar_density_from_json(sub("diag")),
                                      scalar_density_from_json(sub("entry")),
                                      real_field_or(j, where, "g", 1.0)};
  }
  if (kind == "diag-plus-antagonistic") {
    allow_only(j, where, {"kind", "diag", "pair"});
    return DiagPlusAntagonisticComposition{scalar_density_from_json(sub("diag")),
                                           pair_density_from_json(sub("pair"))};
  }
  if (kind == "elliptic-gaussian") {
    allow_only(j, where, {"kind", "tau"});
    return EllipticGaussianComposition{real_field(j, where, "tau")};
  }
  if (kind == "dilute") {
    allow_only(j, where, {"kind", "entry", "keep"});
    return DiluteComposition{scalar_density_from_json(sub("entry")),
                             real_field(j, where, "keep")};
  }
  if (kind == "small-sym-big-antisym") {
    allow_only(j, where, {"kind", "diag", "sym", "antisym"});
    return SmallSymBigAntisymComposition{scalar_density_from_json(sub("diag")),
                                         scalar_density_from_json(sub("sym")),
                                         scalar_density_from_json(sub("antisym"))};
  }
  bad(where, "unknown composition kind '" + kind + "'");
}

EnsembleSpec spec_from_json(const Json& j) {
  const std::string where = "spec";
  require_object(j, where);
  allow_only(j, where, {"n", "seed", "composition"});
  if (!j.contains("n") || !j.at("n").is_number_unsigned())
    bad(where, "field 'n' must be a positive integer");
  EnsembleSpec spec;
  spec.n = j.at("n").get<std::size_t>();
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) bad(where, "field 'seed' must be an unsigned integer");
    spec.seed = j.at("seed").get<std::uint64_t>();
  }
  if (!j.contains("composition")) bad(where, "missing field 'composition'");
  spec.composition = composition_from_json(j.at("composition"));
  validate(spec);
  return spec;
}

EnsembleSpec parse_spec(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_spec, std::string("malformed JSON: ") + e.what());
  }
  return spec_from_json(j);
}

}  // namespace antag
