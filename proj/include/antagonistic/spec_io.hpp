#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "antagonistic/matgen.hpp"

namespace antag {

// JSON schema (all objects reject unknown fields):
//
//   EnsembleSpec  {"n": uint, "seed": uint (default 0), "composition": Composition}
//   Composition   {"kind": "antagonistic", "pair": Pair}
//                 {"kind": "antisymmetric", "entry": Scalar}
//                 {"kind": "diag-plus-antisym", "diag": Scalar, "entry": Scalar, "g": real (default 1)}
//                 {"kind": "diag-plus-antagonistic", "diag": Scalar, "pair": Pair}
//                 {"kind": "elliptic-gaussian", "tau": real}
//                 {"kind": "dilute", "entry": Scalar, "keep": real}
//                 {"kind": "small-sym-big-antisym", "diag": Scalar, "sym": Scalar, "antisym": Scalar}
//   Pair          {"kind": "gaussian-antagonistic"} | {"kind": "uniform-antagonistic"}
//                 {"kind": "two-interval", "w"} | {"kind": "decaying-squares", "c", "p"}
//                 {"kind": "gap-uniform", "lo", "hi"}
//   Scalar        {"kind": "uniform", "a", "b"} | {"kind": "gaussian", "mean", "variance"}
//                 {"kind": "two-interval", "w"} | {"kind": "gap-uniform", "lo", "hi"}
//                 {"kind": "point", "value"}

using Json = nlohmann::json;

Json to_json(const PairDensity& d);
Json to_json(const ScalarDensity& d);
Json to_json(const Composition& c);
Json to_json(const EnsembleSpec& spec);

PairDensity pair_density_from_json(const Json& j);
ScalarDensity scalar_density_from_json(const Json& j);
Composition composition_from_json(const Json& j);
/// Parses and validates; any schema or range problem throws Error(invalid_spec).
EnsembleSpec spec_from_json(const Json& j);
EnsembleSpec parse_spec(std::string_view text);

std::string kind_name(const PairDensity& d);
std::string kind_name(const Composition& c);

}  // namespace antag
