#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "antagonistic/error.hpp"
#include "antagonistic/experiments.hpp"

namespace antag {
namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

TEST(Experiments, FigureIdsRoundTrip) {
  for (const char* id : {"fig1", "fig2", "fig3", "fig4", "fig5"})
    EXPECT_EQ(figure_name(parse_figure_id(id)), id);
  EXPECT_THROW(parse_figure_id("fig6"), Error);
  EXPECT_THROW(parse_figure_id(""), Error);
}

TEST(Experiments, PresetsAreSeededPerPanel) {
  const auto p = figure_presets(FigureId::fig1, 42);
  ASSERT_EQ(p.size(), 3u);
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_EQ(p[k].spec.seed, derive_seed(42, k));
    EXPECT_EQ(p[k].spec.n, 500u);
    EXPECT_NO_THROW(validate(p[k].spec));
  }
  EXPECT_EQ(p[0].label, "g=0.01");
  EXPECT_EQ(figure_presets(FigureId::fig2, 0).size(), 3u);
  EXPECT_EQ(figure_presets(FigureId::fig3, 0).back().spec.n, 800u);
  EXPECT_EQ(figure_presets(FigureId::fig5, 0).size(), 6u);
}

TEST(Experiments, FigureCsvHasOneRowPerEigenvalue) {
  const FigureResult fig = run_figure(FigureId::fig2, 3, 1);
  std::size_t total = 0;
  for (const auto& panel : fig.panels) total += panel.spec.n;
  const std::string csv = figure_csv(fig);
  EXPECT_EQ(count_lines(csv), total + 1);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "re,im,label");

  const Json side = figure_sidecar(fig);
  EXPECT_EQ(side.dump(), figure_sidecar(run_figure(FigureId::fig2, 3, 1)).dump());
  EXPECT_EQ(figure_csv(run_figure(FigureId::fig2, 3, 3)), csv);
}

TEST(Experiments, FormatDoubleRoundTrips) {
  for (double x : {0.0, -1.5, 1.0 / 3.0, 6.02214076e23, std::numeric_limits<double>::min(),
                   -std::numeric_limits<double>::max()}) {
    const std::string s = format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    EXPECT_EQ(back, x) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Experiments, ExpectReportAgreesWithExactValue) {
  const EnsembleSpec spec{6, AntagonisticComposition{UniformPair{}}, 7};
  const Json r = expect_report(spec, parse_functional("det"), 4000, 2);
  ASSERT_FALSE(r["exact"].is_null());
  // E det = 15 theta^3 for n = 6 with theta = 1/4.
  EXPECT_NEAR(r["exact"].get<double>(), 15.0 / 64.0, 1e-14);
  EXPECT_TRUE(r["pass"].get<bool>());
  EXPECT_EQ(r["mc"]["trials"].get<std::size_t>(), 4000u);
  EXPECT_TRUE(r["mc"].contains("stderr"));
}

TEST(Experiments, ExpectReportOddDimension) {
  const EnsembleSpec spec{5, AntagonisticComposition{GaussianPair{}}, 1};
  const Json r = expect_report(spec, parse_functional("det"), 500);
  EXPECT_NEAR(r["exact"].get<double>(), 0.0, 1e-15);
  EXPECT_TRUE(r["pass"].get<bool>());
}

TEST(Experiments, ExpectReportWithoutExactTheta) {
  const EnsembleSpec spec{6, EllipticGaussianComposition{0.2}, 1};
  const Json r = expect_report(spec, parse_functional("det"), 200);
  EXPECT_TRUE(r["exact"].is_null());
  EXPECT_TRUE(r.contains("exact_unavailable"));
}

TEST(Experiments, SuiteNames) {
  for (const char* s : {"strip", "bendixson", "perturb", "elliptic", "dilute", "closure",
                        "exact-combinatorics"})
    EXPECT_EQ(suite_name(parse_suite(s)), s);
  try {
    parse_suite("everything");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
}

TEST(Experiments, FastSuitesPass) {
  for (Suite s : {Suite::exact_combinatorics, Suite::closure, Suite::perturb}) {
    const Json r = run_verify(s, 0, 1);
    EXPECT_TRUE(r["pass"].get<bool>()) << r.dump(1);
    EXPECT_FALSE(r["checks"].empty());
    for (const auto& c : r["checks"]) EXPECT_TRUE(c.contains("name"));
  }
}

TEST(Experiments, CsvExports) {
  const RealMatrix m{{1.0, -2.0}, {0.5, 0.0}};
  EXPECT_EQ(count_lines(matrix_csv(m)), 2u);
  const Spectrum s = eigenvalues(m);
  const std::string csv = spectrum_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,re,im");
  EXPECT_EQ(count_lines(csv), 3u);
  const Histogram h = esd_histogram(s.eigenvalues, 4, 3);
  EXPECT_EQ(count_lines(histogram_csv(h)), 13u);
}

}  // namespace
}  // namespace antag
