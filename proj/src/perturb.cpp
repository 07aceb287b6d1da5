#include "antagonistic/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "antagonistic/error.hpp"
#include "antagonistic/numeric.hpp"
#include "antagonistic/spectral.hpp"

namespace antag {

namespace {

void check_input(const PerturbationInput& in) {
  const auto n = static_cast<Eigen::Index>(in.d.size());
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need at least two diagonal values");
  if (in.a.rows() != n || in.a.cols() != n)
    throw Error(ErrorCode::invalid_argument, "A must be square with the size of d");
  if (!std::isfinite(in.eps)) throw Error(ErrorCode::invalid_argument, "eps must be finite");
}

struct Clusters {
  std::vector<std::size_t> lowest;
  std::vector<std::size_t> highest;
};

Clusters extreme_clusters(std::span<const double> d) {
  const double tol = tie_tolerance(d);
  const double lo = *std::min_element(d.begin(), d.end());
  const double hi = *std::max_element(d.begin(), d.end());
  Clusters c;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] - lo <= tol) c.lowest.push_back(i);
    if (hi - d[i] <= tol) c.highest.push_back(i);
  }
  return c;
}

double second_order_sum(const PerturbationInput& in, std::size_t row) {
  CompensatedSum s;
  const auto r = static_cast<Eigen::Index>(row);
  for (std::size_t j = 0; j < in.d.size(); ++j) {
    if (j == row) continue;
    const auto c = static_cast<Eigen::Index>(j);
    s += std::abs(in.a(r, c) * in.a(c, r)) / std::abs(in.d[row] - in.d[j]);
  }
  return s.value();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

RealMatrix PerturbationInput::matrix() const { return matrix(eps); }

RealMatrix PerturbationInput::matrix(double eps_override) const {
  RealMatrix m = eps_override * a;
  for (std::size_t i = 0; i < d.size(); ++i)
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += d[i];
  return m;
}

double tie_tolerance(std::span<const double> d) {
  double mx = 0.0;
  for (double x : d) mx = std::max(mx, std::abs(x));
  return 1e-9 * (1.0 + mx);
}

bool has_degenerate_extreme(std::span<const double> d) {
  if (d.size() < 2) return false;
  const Clusters c = extreme_clusters(d);
  return c.lowest.size() >= 2 || c.highest.size() >= 2;
}

PerturbationPrediction predict_extremes(const PerturbationInput& in) {
  check_input(in);
  const Clusters c = extreme_clusters(in.d);
  if (c.lowest.size() > 1 || c.highest.size() > 1)
    throw Error(ErrorCode::degenerate_extremes,
                "extreme diagonal values are repeated; use predict_degenerate");
  const std::size_t top = c.highest.front();
  const std::size_t bottom = c.lowest.front();
  const double e2 = in.eps * in.eps;

  PerturbationPrediction p;
  p.lambda_max = in.d[top] - e2 * second_order_sum(in, top);
  p.lambda_min = in.d[bottom] + e2 * second_order_sum(in, bottom);

  const RealMatrix sq = in.a * in.a;
  const double spread = in.d[top] - in.d[bottom];
  const auto t = static_cast<Eigen::Index>(top);
  const auto b = static_cast<Eigen::Index>(bottom);
  p.strip_lower = in.d[bottom] + e2 * std::abs(sq(b, b)) / spread;
  p.strip_upper = in.d[top] - e2 * std::abs(sq(t, t)) / spread;
  p.order = 2;
  return p;
}

PerturbationPrediction predict_degenerate(const PerturbationInput& in) {
  check_input(in);
  const Clusters c = extreme_clusters(in.d);
  const std::vector<std::size_t>* sigma = nullptr;
  if (c.lowest.size() >= 2) {
    sigma = &c.lowest;
  } else if (c.highest.size() >= 2) {
    sigma = &c.highest;
  } else {
    throw Error(ErrorCode::not_degenerate, "no repeated extreme diagonal value");
  }
  const std::vector<bool> in_sigma = [&] {
    std::vector<bool> mask(in.d.size(), false);
    for (std::size_t i : *sigma) mask[i] = true;
    return mask;
  }();
  const double center = in.d[sigma->front()];

  CompensatedSum block;
  CompensatedSum cross;
  for (std::size_t i : *sigma) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < in.d.size(); ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      const double prod = in.a(r, col) * in.a(col, r);
      if (in_sigma[j]) {
        block += std::abs(prod);
      } else {
        cross += prod / (center - in.d[j]);
      }
    }
  }
  const double imag = std::abs(in.eps) / std::sqrt(2.0) * std::sqrt(block.value());
  const double real = center + in.eps * in.eps / 2.0 * cross.value();

  PerturbationPrediction p;
  p.degenerate = true;
  p.lambda_max = {real, imag};
  p.lambda_min = {real, -imag};
  p.strip_lower = *std::min_element(in.d.begin(), in.d.end());
  p.strip_upper = *std::max_element(in.d.begin(), in.d.end());
  p.order = 1;
  p.cluster = *sigma;
  p.unshifted.assign(sigma->size() - 2, center);
  return p;
}

ResidualReport verify_prediction(const PerturbationInput& in, std::span<const double> eps_grid) {
  check_input(in);
  if (eps_grid.size() < 2) throw Error(ErrorCode::invalid_argument, "need at least two eps values");
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    if (!(eps_grid[k] > 0.0)) throw Error(ErrorCode::invalid_argument, "eps grid must be positive");
    if (k > 0 && !(eps_grid[k] < eps_grid[k - 1]))
      throw Error(ErrorCode::invalid_argument, "eps grid must be decreasing");
  }

  ResidualReport report;
  report.degenerate = has_degenerate_extreme(in.d);
  double floor = 0.0;
  for (double eps : eps_grid) {
    PerturbationInput at = in;
    at.eps = eps;
    const PerturbationPrediction pred =
        report.degenerate ? predict_degenerate(at) : predict_extremes(at);
    const RealMatrix m = at.matrix();
    const Spectrum s = eigenvalues(m);
    floor = std::max(floor, 64.0 * std::numeric_limits<double>::epsilon() * matrix_scale(m));

    auto nearest = [&](std::complex<double> z, std::size_t skip) {
      std::size_t best = s.size();
      double dist = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k == skip) continue;
        const double dk = std::abs(s.eigenvalues[k] - z);
        if (dk < dist) {
          dist = dk;
          best = k;
        }
      }
      return best;
    };

    ResidualRow row{eps, 0.0, 0.0};
    if (report.degenerate) {
      const std::size_t k = nearest(pred.lambda_max, s.size());
      row.residual_max = std::abs(s.eigenvalues[k].imag() - pred.lambda_max.imag());
      row.residual_min = std::abs(s.eigenvalues[k].real() - pred.lambda_max.real());
    } else {
      // Greedy: the closer of the two predictions claims its eigenvalue first.
      const std::size_t kmax = nearest(pred.lambda_max, s.size());
      const std::size_t kmin = nearest(pred.lambda_min, s.size());
      const double dmax = std::abs(s.eigenvalues[kmax] - pred.lambda_max);
      const double dmin = std::abs(s.eigenvalues[kmin] - pred.lambda_min);
      if (kmax != kmin) {
        row.residual_max = dmax;
        row.residual_min = dmin;
      } else if (dmax <= dmin) {
        row.residual_max = dmax;
        row.residual_min = std::abs(s.eigenvalues[nearest(pred.lambda_min, kmax)] - pred.lambda_min);
      } else {
        row.residual_min = dmin;
        row.residual_max = std::abs(s.eigenvalues[nearest(pred.lambda_max, kmin)] - pred.lambda_max);
      }
    }
    report.rows.push_back(row);
  }

  const bool all_tiny = std::all_of(report.rows.begin(), report.rows.end(), [&](const ResidualRow& r) {
    return r.residual_max <= floor && (report.degenerate || r.residual_min <= floor);
  });
  if (all_tiny) {
    report.exact = true;
    report.slope_max = report.slope_min = report.slope = std::numeric_limits<double>::infinity();
    return report;
  }

  std::vector<double> lx, ly_max, ly_min;
  for (const auto& r : report.rows) {
    lx.push_back(std::log(r.eps));
    ly_max.push_back(std::log(std::max(r.residual_max, floor)));
    ly_min.push_back(std::log(std::max(r.residual_min, floor)));
  }
  report.slope_max = fit_slope(lx, ly_max);
  report.slope_min = fit_slope(lx, ly_min);
  report.slope = report.degenerate ? report.slope_max : std::min(report.slope_max, report.slope_min);
  return report;
}

double eps2_coefficient(const PerturbationInput& in, double z) {
  check_input(in);
  const std::size_t n = in.d.size();
  double p0 = 1.0;
  for (double di : in.d) p0 *= (z - di);
  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      s += in.a(r, c) * in.a(c, r) / ((z - in.d[i]) * (z - in.d[j]));
    }
  }
  return -p0 * 0.5 * s.value();
}

PerturbationInput random_perturbation_instance(std::size_t n, std::uint64_t seed, bool degenerate,
                                               double eps) {
  if (n < 3) throw Error(ErrorCode::invalid_argument, "random instances need n >= 3");
  PerturbationInput in;
  in.eps = eps;
  in.a = sample_matrix(EnsembleSpec{n, AntagonisticComposition{UniformPair{}}, seed});
  Stream s = Stream::for_entry(seed, 0, ~std::uint64_t{0});
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000)
      throw Error(ErrorCode::invalid_argument, "could not draw a well-separated diagonal");
    in.d.assign(n, 0.0);
    for (double& x : in.d) x = uniform(s, -10.0, -2.0);
    if (degenerate) in.d[1] = in.d[0] = *std::min_element(in.d.begin(), in.d.end());
    std::vector<double> sorted = in.d;
    std::sort(sorted.begin(), sorted.end());
    const bool top_ok = sorted[n - 1] - sorted[n - 2] >= 1.0;
    const bool bottom_ok = degenerate ? sorted[2] - sorted[1] >= 1.0 : sorted[1] - sorted[0] >= 1.0;
    if (top_ok && bottom_ok) return in;
  }
}

}  // namespace antag
