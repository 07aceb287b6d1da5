#include <gtest/gtest.h>

#include "antagonistic/error.hpp"
#include "antagonistic/spec_io.hpp"

namespace antag {
namespace {

ErrorCode code_of(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io_failure;  // sentinel: parsed fine
}

std::string message_of(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

TEST(SpecIo, RoundTripsEveryComposition) {
  const std::vector<EnsembleSpec> specs{
      {5, AntagonisticComposition{DecayingSquaresPair{50.0, 8.0}}, 3},
      {5, AntisymmetricComposition{UniformScalar{-4.0, 4.0}}, 0},
      {5, DiagPlusAntisymComposition{UniformScalar{-10.0, -2.0}, GaussianScalar{0.0, 2.0}, 0.08}, 1},
      {5, DiagPlusAntagonisticComposition{PointScalar{-1.0}, GapUniformPair{1.5, 10.0}}, 2},
      {5, EllipticGaussianComposition{-0.3}, 4},
      {5, DiluteComposition{TwoIntervalScalar{0.25}, 0.5}, 5},
      {5, SmallSymBigAntisymComposition{UniformScalar{-10.0, -5.0}, UniformScalar{-30.0, 30.0},
                                        GapUniformScalar{1.5, 10.0}},
       18446744073709551615ull},
  };
  for (const auto& spec : specs) {
    const Json j = to_json(spec);
    const EnsembleSpec back = spec_from_json(j);
    EXPECT_EQ(to_json(back), j);
    EXPECT_EQ(back.seed, spec.seed);
    EXPECT_TRUE((sample_matrix(back).array() == sample_matrix(spec).array()).all());
  }
}

TEST(SpecIo, DefaultsSeedAndCoupling) {
  const EnsembleSpec s = parse_spec(R"({"n": 3, "composition": {"kind": "diag-plus-antisym",
      "diag": {"kind": "point", "value": -1}, "entry": {"kind": "uniform", "a": -1, "b": 1}}})");
  EXPECT_EQ(s.seed, 0u);
  EXPECT_EQ(std::get<DiagPlusAntisymComposition>(s.composition).g, 1.0);
}

TEST(SpecIo, RejectsUnknownFields) {
  EXPECT_EQ(code_of(R"({"n": 3, "colour": 1, "composition": {"kind": "elliptic-gaussian", "tau": 0}})"),
            ErrorCode::invalid_spec);
  EXPECT_NE(message_of(R"({"n": 3, "composition": {"kind": "elliptic-gaussian", "tau": 0, "x": 1}})")
                .find("unknown field 'x'"),
            std::string::npos);
  EXPECT_EQ(code_of(R"({"n": 3, "composition": {"kind": "antagonistic",
      "pair": {"kind": "uniform-antagonistic", "w": 0.5}}})"),
            ErrorCode::invalid_spec);
}

TEST(SpecIo, RejectsMalformedInput) {
  EXPECT_EQ(code_of("{not json"), ErrorCode::invalid_spec);
  EXPECT_EQ(code_of("[]"), ErrorCode::invalid_spec);
  EXPECT_EQ(code_of(R"({"composition": {"kind": "elliptic-gaussian", "tau": 0}})"),
            ErrorCode::invalid_spec);
  EXPECT_EQ(code_of(R"({"n": -2, "composition": {"kind": "elliptic-gaussian", "tau": 0}})"),
            ErrorCode::invalid_spec);
  EXPECT_EQ(code_of(R"({"n": 0, "composition": {"kind": "elliptic-gaussian", "tau": 0}})"),
            ErrorCode::invalid_spec);
  EXPECT_EQ(code_of(R"({"n": 2, "composition": {"kind": "elliptic-gaussian", "tau": 2}})"),
            ErrorCode::invalid_spec);
  EXPECT_EQ(code_of(R"({"n": 2, "composition": {"kind": "mystery"}})"), ErrorCode::invalid_spec);
  EXPECT_EQ(code_of(R"({"n": 2, "composition": {"kind": "elliptic-gaussian", "tau": "x"}})"),
            ErrorCode::invalid_spec);
  EXPECT_EQ(code_of(R"({"n": 2, "composition": {"kind": "antagonistic",
      "pair": {"kind": "two-interval", "w": 1.5}}})"),
            ErrorCode::invalid_spec);
}

}  // namespace
}  // namespace antag
