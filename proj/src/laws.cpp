#include "antagonistic/laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "antagonistic/error.hpp"
#include "antagonistic/numeric.hpp"

namespace antag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double ks_distance(std::vector<double> samples, auto&& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const auto di = static_cast<double>(i);
    worst = std::max({worst, (di + 1.0) / n - f, f - di / n});
  }
  return worst;
}

double uniform_cdf(double u) { return std::clamp(u, 0.0, 1.0); }

double semicircle_cdf(double t) {
  const double c = std::clamp(t, -1.0, 1.0);
  return 0.5 + (c * std::sqrt(1.0 - c * c) + std::asin(c)) / std::numbers::pi;
}

}  // namespace

double rho_from_density(const PairDensity& d, std::size_t separation) {
  const PairMoments m = pair_moments(d, 0, separation);
  if (!(m.variance > 0.0)) throw Error(ErrorCode::zero_variance, "pair density has zero variance");
  return -m.theta / m.variance;
}

FitReport elliptic_fit(std::span<const Complex> points, const EllipseModel& model, double eta,
                       std::uint64_t seed) {
  if (!(std::abs(model.rho) <= 1.0))
    throw Error(ErrorCode::invalid_argument, "ellipse model needs |rho| <= 1");
  if (points.empty()) throw Error(ErrorCode::empty_spectrum, "no points to fit");
  FitReport r;
  r.eta = eta;
  r.rho = model.rho;
  r.n = points.size();
  r.seed = seed;
  r.ks_threshold = 2.0 * 1.63 / std::sqrt(static_cast<double>(r.n));

  const double a = model.semi_axis_re();
  const double b = model.semi_axis_im();
  constexpr double kCollapsed = 1e-12;
  const double limit = 1.0 + eta;
  std::size_t inside = 0;
  std::vector<double> stat;
  stat.reserve(points.size());

  if (a <= kCollapsed || b <= kCollapsed) {
    // The ellipse collapses onto one axis; the limit law there is the
    // semicircle of radius 2.
    const bool real_axis = b <= kCollapsed;
    const double axis = real_axis ? a : b;
    for (const auto& z : points) {
      const double t = (real_axis ? z.real() : z.imag()) / axis;
      if (std::abs(t) <= limit) ++inside;
      stat.push_back(t);
    }
    r.radial_ks = ks_distance(std::move(stat), semicircle_cdf);
  } else {
    for (const auto& z : points) {
      const double u = (z.real() / a) * (z.real() / a) + (z.imag() / b) * (z.imag() / b);
      if (u <= limit * limit) ++inside;
      stat.push_back(u);
    }
    r.radial_ks = ks_distance(std::move(stat), uniform_cdf);
  }
  r.inside_fraction = static_cast<double>(inside) / static_cast<double>(r.n);
  r.ks_pass = r.radial_ks <= r.ks_threshold;
  return r;
}

EllipticSetup elliptic_setup(const EnsembleSpec& spec) {
  validate(spec);
  const auto n = static_cast<double>(spec.n);
  return std::visit(
      overloaded{
          [&](const AntagonisticComposition& c) {
            if (std::holds_alternative<DecayingSquaresPair>(c.pair))
              throw Error(ErrorCode::invalid_spec,
                          "pair: decaying-squares pairs are not identically distributed");
            const PairMoments m = pair_moments(c.pair);
            return EllipticSetup{1.0 / std::sqrt(n * m.variance),
                                 EllipseModel{rho_from_density(c.pair)}};
          },
          [&](const EllipticGaussianComposition& c) {
            return EllipticSetup{1.0, EllipseModel{c.tau}};
          },
          [&](const AntisymmetricComposition& c) {
            const ScalarMoments m = scalar_moments(c.entry);
            const double second = m.variance + m.mean * m.mean;
            if (!(second > 0.0)) throw Error(ErrorCode::zero_variance, "entry law is a point at 0");
            return EllipticSetup{1.0 / std::sqrt(n * second), EllipseModel{-1.0}};
          },
          [&](const DiluteComposition& c) {
            const ScalarMoments m = scalar_moments(c.entry);
            const double second = c.keep * (m.variance + m.mean * m.mean);
            if (!(second > 0.0)) throw Error(ErrorCode::zero_variance, "dilute entries vanish");
            return EllipticSetup{1.0 / std::sqrt(n * second), EllipseModel{0.0}};
          },
          [](const auto&) -> EllipticSetup {
            throw Error(ErrorCode::invalid_spec,
                        "composition: no elliptic-law normalization for this ensemble");
          },
      },
      spec.composition);
}

FitReport elliptic_fit_ensemble(const EnsembleSpec& spec, double eta) {
  const EllipticSetup setup = elliptic_setup(spec);
  const Spectrum s = eigenvalues(sample_matrix(spec));
  std::vector<Complex> scaled(s.eigenvalues);
  for (auto& z : scaled) z *= setup.scale;
  return elliptic_fit(scaled, setup.model, eta, spec.seed);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

RadiusCheck circular_radius_check(const EnsembleSpec& spec) {
  validate(spec);
  const auto* dilute = std::get_if<DiluteComposition>(&spec.composition);
  if (dilute == nullptr)
    throw Error(ErrorCode::invalid_spec, "composition: radius check needs a dilute ensemble");
  const double sigma = std::sqrt(scalar_moments(dilute->entry).variance);
  RadiusCheck out;
  out.predicted = sigma * std::sqrt(static_cast<double>(spec.n) * dilute->keep);

  const Spectrum s = eigenvalues(sample_matrix(spec));
  std::vector<double> moduli;
  moduli.reserve(s.size());
  for (const auto& z : s.eigenvalues) moduli.push_back(std::abs(z));
  out.empirical = quantile(std::move(moduli), 0.99);
  if (out.predicted == 0.0) {
    out.ratio = out.empirical == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    out.ratio = out.empirical / out.predicted;
  }
  return out;
}

bool WidthTrend::non_increasing(double slack) const {
  for (std::size_t k = 1; k < mean_widths.size(); ++k) {
    if (mean_widths[k] > mean_widths[k - 1] * (1.0 + slack)) return false;
  }
  return true;
}

WidthTrend strip_width_trend(const EnsembleSpec& spec, std::span<const std::size_t> sizes,
                             std::size_t seeds, unsigned threads) {
  if (sizes.empty() || seeds == 0) throw Error(ErrorCode::invalid_argument, "empty n-list or seeds");
  for (std::size_t k = 1; k < sizes.size(); ++k) {
    if (sizes[k] <= sizes[k - 1]) throw Error(ErrorCode::invalid_argument, "n-list must increase");
  }
  WidthTrend trend;
  trend.sizes.assign(sizes.begin(), sizes.end());
  trend.rows.resize(sizes.size() * seeds);
  parallel_for(trend.rows.size(), threads, [&](std::size_t task) {
    EnsembleSpec s = spec;
    s.n = sizes[task / seeds];
    s.seed = derive_seed(spec.seed, task % seeds);
    const StabilityReport r = stability_report(eigenvalues(sample_matrix(s)));
    trend.rows[task] = WidthRow{s.n, s.seed, r.max_real - r.min_real};
  });
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    CompensatedSum sum;
    for (std::size_t s = 0; s < seeds; ++s) sum += trend.rows[k * seeds + s].width;
    trend.mean_widths.push_back(sum.value() / static_cast<double>(seeds));
  }
  return trend;
}

}  // namespace antag
