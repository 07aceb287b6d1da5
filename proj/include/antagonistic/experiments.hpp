#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "antagonistic/exact.hpp"
#include "antagonistic/laws.hpp"
#include "antagonistic/matgen.hpp"
#include "antagonistic/perturb.hpp"
#include "antagonistic/spec_io.hpp"
#include "antagonistic/spectral.hpp"

namespace antag {

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

enum class FigureId { fig1, fig2, fig3, fig4, fig5 };

FigureId parse_figure_id(std::string_view id);
std::string figure_name(FigureId id);

struct PanelPreset {
  std::string label;
  EnsembleSpec spec;
};

/// Caption parameter sets; panel k is seeded with derive_seed(seed, k).
///   fig1  D + gA, n = 500, D ~ U(-10,-2), A ~ U(-4,4), g in {0.01, 0.08, 0.5}
///   fig2  same with g = 1, n in {250, 500, 750}
///   fig3  decaying-squares antagonistic, c = 50, p = 8, n in {400, 600, 800}
///   fig4  fig3 matrices plus D ~ U(-6,-4)
///   fig5  S/sqrt(n) + A with S ~ U(-30,30), A ~ U(-10,10): four n = 200
///         draws and one n = 800 draw, then D + S/sqrt(n) + A, D ~ U(-10,-5),
///         n = 800
std::vector<PanelPreset> figure_presets(FigureId id, std::uint64_t seed);

struct FigurePanel {
  std::string label;
  EnsembleSpec spec;
  std::vector<Complex> eigenvalues;
  StabilityReport stability;
  BendixsonBox box;
};

struct FigureResult {
  FigureId id = FigureId::fig1;
  std::uint64_t seed = 0;
  std::vector<FigurePanel> panels;
};

FigureResult run_figure(FigureId id, std::uint64_t seed, unsigned threads = 1);

/// re,im,label rows in panel order.
std::string figure_csv(const FigureResult& fig);
/// Per-panel stability report, Bendixson box and spec (seed provenance).
Json figure_sidecar(const FigureResult& fig);

// ---------------------------------------------------------------------------
// Reports and exports
// ---------------------------------------------------------------------------

/// Shortest round-trip decimal form; the basis for byte-identical outputs.
std::string format_double(double x);

Json to_json(const Estimate& e);
Json to_json(const StabilityReport& r);
Json to_json(const BendixsonBox& b);
Json to_json(const FitReport& r);
Json to_json(const RadiusCheck& r);
Json to_json(const PerturbationPrediction& p);
Json to_json(const ResidualReport& r);

std::string matrix_csv(const RealMatrix& m);
std::string spectrum_csv(const Spectrum& s);          // index,re,im
std::string histogram_csv(const Histogram& h);        // re_center,im_center,count
std::string polynomial_csv(const Polynomial& p);      // power,coefficient
std::string residual_csv(const ResidualReport& r);    // eps,residual_max,residual_min,slope
std::string width_csv(const WidthTrend& t);           // n,seed,width

/// {mc: Estimate, exact: value or null, z_score, pass}; pass means
/// |z_score| <= 4. `exact` is null (with a reason) when the ensemble has no
/// exact theta or n exceeds the matching-DP cap.
Json expect_report(const EnsembleSpec& spec, const Functional& f, std::size_t trials,
                   unsigned threads = 1);

// ---------------------------------------------------------------------------
// Verification suites
// ---------------------------------------------------------------------------

enum class Suite { strip, bendixson, perturb, elliptic, dilute, closure, exact_combinatorics };

Suite parse_suite(std::string_view name);
std::string suite_name(Suite s);

/// {suite, seed, pass, checks: [{name, pass, ...details}]}. Individual check
/// failures are recorded, never thrown.
Json run_verify(Suite suite, std::uint64_t seed, unsigned threads = 1);

}  // namespace antag
