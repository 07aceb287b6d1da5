#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "antagonistic/matgen.hpp"

namespace antag {

/// M(eps) = D + eps A with A antagonistic.
struct PerturbationInput {
  std::vector<double> d;
  RealMatrix a;
  double eps = 0.0;

  RealMatrix matrix() const;
  RealMatrix matrix(double eps_override) const;
};

struct PerturbationPrediction {
  /// Non-degenerate case: the shifted extreme eigenvalues (real).
  /// Degenerate case: the conjugate pair, +imaginary member first.
  std::complex<double> lambda_max;
  std::complex<double> lambda_min;
  /// Strip d_m + eps^2 |A^2_mm| / (d_M - d_m) < Re z < d_M - eps^2 |A^2_MM| / (d_M - d_m);
  /// the plain diagonal range in the degenerate case.
  double strip_lower = 0.0;
  double strip_upper = 0.0;
  /// Power of eps of the leading correction.
  int order = 2;
  bool degenerate = false;
  /// Degenerate case: the h - 2 cluster values that stay put at order eps.
  std::vector<double> unshifted;
  /// Degenerate case: indices of the cluster.
  std::vector<std::size_t> cluster;
};

/// Values closer than 1e-9 * (1 + max|d|) are treated as degenerate.
double tie_tolerance(std::span<const double> d);

/// Second-order extreme eigenvalues for non-degenerate extremes; throws
/// degenerate_extremes when argmax or argmin is not unique.
PerturbationPrediction predict_extremes(const PerturbationInput& in);

/// Conjugate pair emerging from a degenerate lowest (else highest) diagonal
/// cluster; throws not_degenerate when neither extreme is repeated.
PerturbationPrediction predict_degenerate(const PerturbationInput& in);

/// True when the lowest or highest diagonal value is repeated.
bool has_degenerate_extreme(std::span<const double> d);

struct ResidualRow {
  double eps = 0.0;
  double residual_max = 0.0;
  double residual_min = 0.0;
};

/// Order-of-accuracy check against full eigensolves.
///
/// Non-degenerate input: residual_max / residual_min are the distances from
/// the predicted extremes to the nearest true eigenvalues (greedy matching).
/// Degenerate input: residual_max is the imaginary-part error and
/// residual_min the real-part error of the +imaginary member of the pair.
/// `slope` is the least-squares slope of log(residual) against log(eps) for
/// residual_max and residual_min (the smaller of the two), or the imaginary
/// residual alone in the degenerate case.
struct ResidualReport {
  bool degenerate = false;
  std::vector<ResidualRow> rows;
  double slope_max = 0.0;
  double slope_min = 0.0;
  double slope = 0.0;
  /// Every residual below round-off; slopes are +inf.
  bool exact = false;
};

ResidualReport verify_prediction(const PerturbationInput& in, std::span<const double> eps_grid);

/// Coefficient of eps^2 in det(z - D - eps A):
/// -P(z,0) * (1/2) sum_{i,j} A_ij A_ji / ((z - d_i)(z - d_j)).
double eps2_coefficient(const PerturbationInput& in, double z);

/// Random test instance: d uniform on (-10,-2) with the extreme gaps at least
/// 1 (or, when `degenerate`, a repeated minimum of multiplicity 2), A drawn
/// from the uniform antagonistic pair law.
PerturbationInput random_perturbation_instance(std::size_t n, std::uint64_t seed,
                                               bool degenerate, double eps = 1e-2);

}  // namespace antag
