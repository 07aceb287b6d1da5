#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "antagonistic/matgen.hpp"

namespace antag {

/// theta_ij = -E[A_ij A_ji] for i < j, stored as a packed strict upper
/// triangle. Entries must be finite and nonnegative.
class ThetaArray {
 public:
  explicit ThetaArray(std::size_t n, double fill = 0.0);

  std::size_t n() const noexcept { return n_; }
  /// Symmetric access; i != j.
  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);
  double total() const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t n_;
  std::vector<double> values_;
};

/// Coefficients indexed by the power of z.
struct Polynomial {
  std::vector<double> coefficients;

  double operator()(double z) const;
  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
};

/// Monte Carlo mean with its standard error.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // serialized as "stderr"
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Largest dimension accepted by the subset dynamic program.
inline constexpr std::size_t kMatchingDpCap = 24;
/// Largest dimension accepted by the explicit matching enumerations.
inline constexpr std::size_t kEnumerationCap = 12;
inline constexpr std::size_t kPfaffianEnumerationCap = 14;

/// Pfaffian of the strict upper triangle of any square matrix (0 for odd n,
/// 1 for n = 0). Parlett-Reid elimination with pivoting on the
/// antisymmetrized triangle.
double pfaffian(const RealMatrix& m);

/// Same quantity as the explicit signed sum over ordered perfect matchings;
/// throws dimension_too_large above kPfaffianEnumerationCap.
double pfaffian_by_matchings(const RealMatrix& m);

/// (n-1)!! for even n >= 2; odd_dimension for odd n, dimension_too_large
/// when the count overflows 64 bits.
std::uint64_t matching_count(std::size_t n);

/// m_k = sum over k-edge matchings of the complete graph of the product of
/// theta over the matched edges, k = 0 .. n/2. Subset DP over vertex
/// bitmasks, O(2^n n); throws dimension_too_large above kMatchingDpCap.
std::vector<double> matching_sums(const ThetaArray& theta);

/// Same sums by explicit enumeration of every matching (independent code
/// path, n <= kEnumerationCap).
std::vector<double> matching_sums_by_enumeration(const ThetaArray& theta);

/// E[det(z I - A)] = sum_k m_k z^(n-2k); odd powers are exactly zero.
Polynomial expected_char_poly(const ThetaArray& theta);

/// E[det A]: 0 for odd n, the perfect-matching sum for even n.
double expected_det(const ThetaArray& theta);

/// LU with partial pivoting.
double determinant(const RealMatrix& m);

/// theta for ensembles with independent zero-mean pairs: antagonistic
/// compositions and antisymmetric compositions with a zero-mean entry law.
/// Anything else is invalid_spec.
ThetaArray theta_array(const EnsembleSpec& spec);

struct Functional {
  enum class Kind { det, pf_pf_transpose, char_poly_at, trace_square };
  Kind kind = Kind::det;
  double z = 0.0;  // evaluation point for char_poly_at

  double operator()(const RealMatrix& m) const;
};

/// Accepts "det", "pfpf", "charpoly", "trace2".
Functional parse_functional(std::string_view name, double z = 0.0);
std::string functional_name(const Functional& f);

/// Exact expectation of the functional from theta:
///   det       -> expected_det
///   pfpf      -> (-1)^(n/2) expected_det (0 for odd n)
///   charpoly  -> expected_char_poly(z)
///   trace2    -> -2 * sum_{i<j} theta_ij
double exact_expectation(const ThetaArray& theta, const Functional& f);

/// Sample mean and standard error of the functional over `trials`
/// independent draws (matrix indices 0 .. trials-1). Per-trial values are
/// merged in trial order, so the result is independent of `threads`.
Estimate mc_expect(const EnsembleSpec& spec, const Functional& f, std::size_t trials,
                   unsigned threads = 1);

}  // namespace antag
