#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "antagonistic/random.hpp"

namespace antag {

/// Dense real square matrix, row-major.
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Pair densities: joint laws of (A_ij, A_ji), i < j. Every one of them is
// supported on {x*y <= 0} and has equal, symmetric marginals.
// ---------------------------------------------------------------------------

/// (1/pi) exp(-(x^2+y^2)/2) on the two antagonistic quadrants; standard normal
/// marginals, E[xy] = -2/pi.
struct GaussianPair {};

/// Density 1/2 on (0,1)x(-1,0) and (-1,0)x(0,1); uniform(-1,1) marginals,
/// E[xy] = -1/4.
struct UniformPair {};

/// Mass 1/2 on each of the squares centered at (-1,1) and (1,-1) with
/// half-width w, 0 < w < 1. E[xy] = -1, E[x^2] = 1 + w^2/3.
struct TwoIntervalPair {
  double w = 0.5;
};

/// Pair-dependent law: uniform on (1,1+delta)x(-1-delta,-1) and its mirror,
/// delta = c / (1 + (k-i)^p). Far-off-diagonal pairs approach (1,-1).
struct DecayingSquaresPair {
  double c = 50.0;
  double p = 8.0;

  double delta(std::size_t separation) const;
};

/// |x|, |y| independent uniform on (lo, hi), opposite signs with a fair
/// orientation.
struct GapUniformPair {
  double lo = 1.5;
  double hi = 10.0;
};

using PairDensity =
    std::variant<GaussianPair, UniformPair, TwoIntervalPair, DecayingSquaresPair, GapUniformPair>;

struct PairMoments {
  double mean = 0.0;
  double variance = 0.0;  // E[x^2] of the marginal
  double fourth = 0.0;    // E[x^4] of the marginal
  double theta = 0.0;     // -E[xy]
};

void validate(const PairDensity& d);

/// Draws one pair. `separation` = k - i is only read by DecayingSquaresPair.
std::pair<double, double> sample_pair(const PairDensity& d, Stream& s, std::size_t separation = 1);

/// Closed-form moments of the pair at positions (i, k), i < k.
PairMoments pair_moments(const PairDensity& d, std::size_t i = 0, std::size_t k = 1);

// ---------------------------------------------------------------------------
// Scalar densities for diagonal, symmetric and antisymmetric entries.
// ---------------------------------------------------------------------------

struct UniformScalar {
  double a = -1.0;
  double b = 1.0;
};
struct GaussianScalar {
  double mean = 0.0;
  double variance = 1.0;
};
/// Uniform on (-1-w, -1+w) U (1-w, 1+w).
struct TwoIntervalScalar {
  double w = 0.5;
};
/// Uniform on (-hi, -lo) U (lo, hi).
struct GapUniformScalar {
  double lo = 1.5;
  double hi = 10.0;
};
struct PointScalar {
  double value = 0.0;
};

using ScalarDensity =
    std::variant<UniformScalar, GaussianScalar, TwoIntervalScalar, GapUniformScalar, PointScalar>;

struct ScalarMoments {
  double mean = 0.0;
  double variance = 0.0;
};

void validate(const ScalarDensity& d);
double sample_scalar(const ScalarDensity& d, Stream& s);
ScalarMoments scalar_moments(const ScalarDensity& d);
/// Closed support bounds; infinite for the Gaussian.
std::pair<double, double> scalar_support(const ScalarDensity& d);

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

/// Independent pairs drawn from `pair`, zero diagonal.
struct AntagonisticComposition {
  PairDensity pair;
};
/// A_ij = x, A_ji = -x with x drawn from `entry`.
struct AntisymmetricComposition {
  ScalarDensity entry;
};
/// D + g A.
struct DiagPlusAntisymComposition {
  ScalarDensity diag;
  ScalarDensity entry;
  double g = 1.0;
};
/// D + antagonistic.
struct DiagPlusAntagonisticComposition {
  ScalarDensity diag;
  PairDensity pair;
};
/// Real elliptic Gaussian ensemble, E[J_ik J_ki] = tau/n, E[J_ik^2] = 1/n.
struct EllipticGaussianComposition {
  double tau = 0.0;
};
/// Every entry independently kept with probability `keep` (drawn from
/// `entry`) and zero otherwise.
struct DiluteComposition {
  ScalarDensity entry;
  double keep = 1.0;
};
/// D + S/sqrt(n) + A with S symmetric and zero on the diagonal.
struct SmallSymBigAntisymComposition {
  ScalarDensity diag;
  ScalarDensity sym;
  ScalarDensity antisym;
};

using Composition =
    std::variant<AntagonisticComposition, AntisymmetricComposition, DiagPlusAntisymComposition,
                 DiagPlusAntagonisticComposition, EllipticGaussianComposition, DiluteComposition,
                 SmallSymBigAntisymComposition>;

struct EnsembleSpec {
  std::size_t n = 1;
  Composition composition;
  std::uint64_t seed = 0;
};

/// Throws Error(invalid_spec) naming the offending field.
void validate(const EnsembleSpec& spec);

/// Draws matrix number `matrix_index` of the ensemble. Pure function of
/// (spec, matrix_index); every entry has its own counter-based stream.
RealMatrix sample_matrix(const EnsembleSpec& spec, std::uint64_t matrix_index = 0);

// ---------------------------------------------------------------------------
// Structure
// ---------------------------------------------------------------------------

/// Zero diagonal and every pair of opposite sign or both zero.
bool is_antagonistic(const RealMatrix& m);

RealMatrix negate(const RealMatrix& m);
RealMatrix transpose(const RealMatrix& m);
/// D M D^-1; throws singular_diagonal if some d_i == 0.
RealMatrix diag_conjugate(const RealMatrix& m, std::span<const double> d);
/// P^T M P for the permutation matrix with P(perm[i], i) = 1, i.e.
/// result(i, j) = m(perm[i], perm[j]).
RealMatrix permute(const RealMatrix& m, std::span<const std::size_t> perm);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// sign of R's diagonal folded into Q).
RealMatrix haar_orthogonal(std::size_t n, Stream& s);

/// The 4x4 antagonistic example used throughout the documentation.
RealMatrix example_matrix();

}  // namespace antag
