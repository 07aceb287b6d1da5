#include "antagonistic/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "antagonistic/error.hpp"
#include "antagonistic/numeric.hpp"

namespace antag {

void sort_eigenvalues(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

double matrix_scale(const RealMatrix& m) { return 1.0 + m.norm(); }

Spectrum eigenvalues(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "matrix must be square");
  if (!m.allFinite()) throw Error(ErrorCode::invalid_argument, "matrix has non-finite entries");
  const Eigen::Index n = m.rows();
  Spectrum out;
  if (n == 0) return out;

  auto solve = [&](const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    solver.setMaxIterations(50 * a.rows());
    solver.compute(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::no_convergence,
                  "QR iteration exceeded " + std::to_string(50 * a.rows()) + " sweeps (n=" +
                      std::to_string(n) + ", ||M||_F=" + std::to_string(m.norm()) + ")");
    }
    const auto& ev = solver.eigenvalues();
    return std::vector<Complex>(ev.data(), ev.data() + ev.size());
  };

  // Dimensions divisible by 32 make the unblocked QR sweeps thrash the cache
  // (n = 1024 runs ~8x slower than n = 1000). Appending a decoupled 1x1 zero
  // block avoids it; that block stays exactly decoupled through the
  // Hessenberg reduction and its eigenvalue comes back as an exact 0.
  bool done = false;
  if (n >= 64 && n % 32 == 0) {
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(n + 1, n + 1);
    padded.topLeftCorner(n, n) = m;
    std::vector<Complex> ev = solve(padded);
    const auto zero = std::find(ev.begin(), ev.end(), Complex(0.0, 0.0));
    if (zero != ev.end()) {
      ev.erase(zero);
      out.eigenvalues = std::move(ev);
      done = true;
    }
  }
  if (!done) out.eigenvalues = solve(Eigen::MatrixXd(m));
  sort_eigenvalues(out.eigenvalues);

  CompensatedSum sum;
  for (const auto& z : out.eigenvalues) sum += z.real();
  out.residual = std::abs(sum.value() - m.trace()) / matrix_scale(m);
  return out;
}

BendixsonBox bendixson_box(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "matrix must be square");
  if (m.rows() == 0) return {};
  const Eigen::MatrixXd sym = (m + m.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym_solver(sym, Eigen::EigenvaluesOnly);
  if (sym_solver.info() != Eigen::Success)
    throw Error(ErrorCode::no_convergence, "symmetric part eigensolve failed");

  // (M - M^T) / 2i is Hermitian with a spectrum symmetric about zero.
  const Eigen::MatrixXcd herm =
      Eigen::MatrixXcd((m - m.transpose()).cast<Complex>()) * Complex(0.0, -0.5);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> herm_solver(herm, Eigen::EigenvaluesOnly);
  if (herm_solver.info() != Eigen::Success)
    throw Error(ErrorCode::no_convergence, "antisymmetric part eigensolve failed");

  const auto& re = sym_solver.eigenvalues();
  const auto& im = herm_solver.eigenvalues();
  const double im_extent = std::max(std::abs(im.minCoeff()), std::abs(im.maxCoeff()));
  return BendixsonBox{re.minCoeff(), re.maxCoeff(), -im_extent, im_extent};
}

StabilityReport stability_report(const std::vector<Complex>& values) {
  if (values.empty()) throw Error(ErrorCode::empty_spectrum, "no eigenvalues to report on");
  StabilityReport r;
  r.min_real = values.front().real();
  r.max_real = values.front().real();
  std::size_t negative = 0;
  for (const auto& z : values) {
    r.min_real = std::min(r.min_real, z.real());
    r.max_real = std::max(r.max_real, z.real());
    if (z.real() < 0.0) ++negative;
  }
  r.spectral_abscissa = r.max_real;
  r.stable = r.spectral_abscissa < 0.0;
  r.fraction_stable = static_cast<double>(negative) / static_cast<double>(values.size());
  return r;
}

StabilityReport stability_report(const Spectrum& s) { return stability_report(s.eigenvalues); }

double Histogram::re_center(std::size_t re_bin) const {
  return re_lo + (static_cast<double>(re_bin) + 0.5) * (re_hi - re_lo) / static_cast<double>(re_bins);
}

double Histogram::im_center(std::size_t im_bin) const {
  return im_lo + (static_cast<double>(im_bin) + 0.5) * (im_hi - im_lo) / static_cast<double>(im_bins);
}

Histogram esd_histogram(const std::vector<Complex>& values, std::size_t re_bins,
                        std::size_t im_bins) {
  if (re_bins < 1 || im_bins < 1)
    throw Error(ErrorCode::invalid_argument, "bin counts must be >= 1");
  Histogram h;
  h.re_bins = re_bins;
  h.im_bins = im_bins;
  h.counts.assign(re_bins * im_bins, 0);
  if (values.empty()) return h;

  h.re_lo = h.re_hi = values.front().real();
  h.im_lo = h.im_hi = values.front().imag();
  for (const auto& z : values) {
    h.re_lo = std::min(h.re_lo, z.real());
    h.re_hi = std::max(h.re_hi, z.real());
    h.im_lo = std::min(h.im_lo, z.imag());
    h.im_hi = std::max(h.im_hi, z.imag());
  }
  // A flat axis gets a unit-width cell around the common value.
  if (h.re_hi == h.re_lo) {
    h.re_lo -= 0.5;
    h.re_hi += 0.5;
  }
  if (h.im_hi == h.im_lo) {
    h.im_lo -= 0.5;
    h.im_hi += 0.5;
  }
  auto bin_of = [](double x, double lo, double hi, std::size_t bins) {
    const double t = (x - lo) / (hi - lo) * static_cast<double>(bins);
    const auto b = static_cast<std::size_t>(std::max(0.0, std::floor(t)));
    return std::min(b, bins - 1);
  };
  for (const auto& z : values) {
    const std::size_t rb = bin_of(z.real(), h.re_lo, h.re_hi, re_bins);
    const std::size_t ib = bin_of(z.imag(), h.im_lo, h.im_hi, im_bins);
    ++h.counts[rb * im_bins + ib];
  }
  return h;
}

}  // namespace antag
