#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "antagonistic/matgen.hpp"

namespace antag {

using Complex = std::complex<double>;

/// Eigenvalues sorted by (Re, Im). For real input the multiset is closed
/// under conjugation.
struct Spectrum {
  std::vector<Complex> eigenvalues;
  /// |sum(lambda) - tr M| / (1 + ||M||_F)
  double residual = 0.0;

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Rectangle containing every eigenvalue: the real side is the range of the
/// symmetric part, the imaginary side the range of (M - M^T) / 2i.
struct BendixsonBox {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  bool contains(Complex z, double tol) const noexcept {
    return z.real() >= re_lo - tol && z.real() <= re_hi + tol && z.imag() >= im_lo - tol &&
           z.imag() <= im_hi + tol;
  }
};

struct StabilityReport {
  double spectral_abscissa = 0.0;
  bool stable = false;
  double fraction_stable = 0.0;
  double min_real = 0.0;
  double max_real = 0.0;
};

/// 2-D eigenvalue histogram over the spectrum's bounding box; counts are
/// stored row-major as counts[re_bin * im_bins + im_bin].
struct Histogram {
  std::size_t re_bins = 1;
  std::size_t im_bins = 1;
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;
  std::vector<std::size_t> counts;

  std::size_t count(std::size_t re_bin, std::size_t im_bin) const {
    return counts.at(re_bin * im_bins + im_bin);
  }
  double re_center(std::size_t re_bin) const;
  double im_center(std::size_t im_bin) const;
};

/// Lexicographic (Re, Im) order used for every reported spectrum.
void sort_eigenvalues(std::vector<Complex>& values);

/// Dense non-symmetric eigensolve. Throws no_convergence if the QR iteration
/// exceeds 50*n sweeps, invalid_argument on non-finite input.
Spectrum eigenvalues(const RealMatrix& m);

BendixsonBox bendixson_box(const RealMatrix& m);

/// Throws empty_spectrum for an empty spectrum.
StabilityReport stability_report(const Spectrum& s);
StabilityReport stability_report(const std::vector<Complex>& values);

Histogram esd_histogram(const std::vector<Complex>& values, std::size_t re_bins,
                        std::size_t im_bins);

/// Scale used by the containment tolerances, 1 + ||M||_F.
double matrix_scale(const RealMatrix& m);

}  // namespace antag
