#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "antagonistic/matgen.hpp"
#include "antagonistic/spectral.hpp"

namespace antag {

/// Limiting support x^2/(1+rho)^2 + y^2/(1-rho)^2 <= 1 for pair-correlated
/// ensembles scaled to unit entry variance and divided by sqrt(n).
struct EllipseModel {
  double rho = 0.0;

  double semi_axis_re() const noexcept { return 1.0 + rho; }
  double semi_axis_im() const noexcept { return 1.0 - rho; }
};

struct FitReport {
  double inside_fraction = 0.0;
  /// KS distance of the mapped squared radii from uniform[0,1] (from the
  /// semicircle law on the surviving axis when |rho| = 1).
  double radial_ks = 0.0;
  /// 2 * 1.63 / sqrt(n)
  double ks_threshold = 0.0;
  bool ks_pass = false;
  double eta = 0.05;
  double rho = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// rho = E[xy] / E[x^2] for the pair at separation k - i = `separation`.
/// Throws zero_variance if E[x^2] == 0.
double rho_from_density(const PairDensity& d, std::size_t separation = 1);

/// Inside fraction over the ellipse inflated by (1 + eta) and the radial
/// goodness-of-fit statistic. Points must already be normalized.
FitReport elliptic_fit(std::span<const Complex> points, const EllipseModel& model,
                       double eta = 0.05, std::uint64_t seed = 0);

/// Scale and correlation that bring an ensemble into elliptic-law units:
/// antagonistic i.i.d. pairs (scale 1/sqrt(n E[x^2]), rho from the density)
/// or elliptic-gaussian (already normalized, rho = tau).
struct EllipticSetup {
  double scale = 1.0;
  EllipseModel model;
};
EllipticSetup elliptic_setup(const EnsembleSpec& spec);

/// Samples, normalizes and fits one matrix of the ensemble.
FitReport elliptic_fit_ensemble(const EnsembleSpec& spec, double eta = 0.05);

struct RadiusCheck {
  double empirical = 0.0;  // 0.99 quantile of |lambda|
  double predicted = 0.0;  // sigma sqrt(n Q)
  /// empirical / predicted; 1 when both vanish.
  double ratio = 0.0;
};

/// Linear-interpolated quantile of a sample (type 7).
double quantile(std::vector<double> values, double q);

/// Dilute compositions only; other compositions are invalid_spec.
RadiusCheck circular_radius_check(const EnsembleSpec& spec);

struct WidthRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double width = 0.0;
};

struct WidthTrend {
  std::vector<WidthRow> rows;
  std::vector<std::size_t> sizes;
  std::vector<double> mean_widths;

  /// mean_widths[k+1] <= mean_widths[k] * (1 + slack) for every k.
  bool non_increasing(double slack = 0.02) const;
};

/// Horizontal spectral width max Re - min Re for each n in `sizes` (spec.n
/// overridden) and each seed derive_seed(spec.seed, s), s < seeds.
WidthTrend strip_width_trend(const EnsembleSpec& spec, std::span<const std::size_t> sizes,
                             std::size_t seeds = 5, unsigned threads = 1);

}  // namespace antag
