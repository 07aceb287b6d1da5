#include "antagonistic/experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "antagonistic/error.hpp"
#include "antagonistic/numeric.hpp"
#include "antagonistic/random.hpp"

namespace antag {

namespace {

constexpr double kContainmentTol = 1e-8;

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

EnsembleSpec diag_plus_antisym(std::size_t n, double g, std::uint64_t seed) {
  return {n, DiagPlusAntisymComposition{UniformScalar{-10.0, -2.0}, UniformScalar{-4.0, 4.0}, g},
          seed};
}

EnsembleSpec decaying(std::size_t n, std::uint64_t seed) {
  return {n, AntagonisticComposition{DecayingSquaresPair{50.0, 8.0}}, seed};
}

EnsembleSpec decaying_shifted(std::size_t n, std::uint64_t seed) {
  return {n, DiagPlusAntagonisticComposition{UniformScalar{-6.0, -4.0}, DecayingSquaresPair{50.0, 8.0}},
          seed};
}

EnsembleSpec sym_antisym(std::size_t n, ScalarDensity diag, std::uint64_t seed) {
  return {n,
          SmallSymBigAntisymComposition{std::move(diag), UniformScalar{-30.0, 30.0},
                                        UniformScalar{-10.0, 10.0}},
          seed};
}

std::string label_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// Suite plumbing
// ---------------------------------------------------------------------------

Json check(const std::string& name, bool pass, Json details = Json::object()) {
  details["name"] = name;
  details["pass"] = pass;
  return details;
}

double max_abs_real(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z.real()));
  return m;
}

/// Largest distance between two spectra after sorting both; the spectra are
/// expected to coincide, so the sorted orders agree up to near ties.
double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  // Sorting by the rounded real part first keeps conjugate pairs together even
  // when round-off perturbs the real parts of near-equal eigenvalues.
  auto key_sort = [](std::vector<Complex>& v) {
    std::sort(v.begin(), v.end(), [](Complex x, Complex y) {
      const double rx = std::round(x.real() * 1e6), ry = std::round(y.real() * 1e6);
      if (rx != ry) return rx < ry;
      return x.imag() < y.imag();
    });
  };
  key_sort(a);
  key_sort(b);
  // Greedy nearest matching is robust to residual ordering differences.
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& z : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t at = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(z - b[k]);
      if (d < best) {
        best = d;
        at = k;
      }
    }
    used[at] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<double> diagonal_of(const RealMatrix& m) {
  std::vector<double> d(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) d[static_cast<std::size_t>(i)] = m(i, i);
  return d;
}

Json verify_strip(std::uint64_t seed, unsigned threads) {
  constexpr std::array<double, 4> gs{0.01, 0.08, 0.5, 1.0};
  constexpr std::array<std::size_t, 4> ns{50, 100, 200, 400};
  constexpr std::size_t draws = 100;
  struct Row {
    double excess = 0.0;
    double tol = 0.0;
  };
  std::vector<Row> rows(draws);
  parallel_for(draws, threads, [&](std::size_t k) {
    const EnsembleSpec spec = diag_plus_antisym(ns[k / gs.size() % ns.size()], gs[k % gs.size()],
                                                derive_seed(seed, k));
    const RealMatrix m = sample_matrix(spec);
    const std::vector<double> d = diagonal_of(m);
    const double a = *std::min_element(d.begin(), d.end());
    const double b = *std::max_element(d.begin(), d.end());
    double excess = 0.0;
    for (const auto& z : eigenvalues(m).eigenvalues)
      excess = std::max({excess, a - z.real(), z.real() - b});
    rows[k] = {excess, kContainmentTol * matrix_scale(m)};
  });

  Json checks = Json::array();
  for (std::size_t gi = 0; gi < gs.size(); ++gi) {
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::size_t k = gi; k < draws; k += gs.size()) {
      if (rows[k].excess > rows[k].tol) ++violations;
      worst = std::max(worst, rows[k].excess);
    }
    checks.push_back(check("strip g=" + label_number(gs[gi]), violations == 0,
                           {{"g", gs[gi]}, {"draws", draws / gs.size()}, {"violations", violations},
                            {"worst_excess", worst}}));
  }
  return checks;
}

Json verify_bendixson(std::uint64_t seed, unsigned threads) {
  const std::vector<EnsembleSpec> specs{
      {120, AntagonisticComposition{UniformPair{}}, 0},
      {120, AntagonisticComposition{GaussianPair{}}, 0},
      {120, DiagPlusAntagonisticComposition{UniformScalar{-10.0, -2.0}, TwoIntervalPair{0.5}}, 0},
      {120, DiagPlusAntisymComposition{UniformScalar{-10.0, -2.0}, UniformScalar{-4.0, 4.0}, 0.5}, 0},
      {120, SmallSymBigAntisymComposition{UniformScalar{-10.0, -5.0}, UniformScalar{-30.0, 30.0},
                                          UniformScalar{-10.0, 10.0}},
       0},
      {120, EllipticGaussianComposition{0.5}, 0},
      {120, DiluteComposition{GaussianScalar{0.0, 1.0}, 0.2}, 0},
  };
  constexpr std::size_t reps = 4;
  const std::size_t tasks = specs.size() * reps;
  struct Row {
    std::size_t outside = 0;
    double antisym_real = 0.0;
    double conj_distance = 0.0;
    double tol = 0.0;
  };
  std::vector<Row> rows(tasks);
  parallel_for(tasks, threads, [&](std::size_t k) {
    EnsembleSpec spec = specs[k / reps];
    spec.seed = derive_seed(seed, k);
    const RealMatrix m = sample_matrix(spec);
    const Spectrum s = eigenvalues(m);
    const BendixsonBox box = bendixson_box(m);
    Row r;
    r.tol = kContainmentTol * matrix_scale(m);
    for (const auto& z : s.eigenvalues)
      if (!box.contains(z, r.tol)) ++r.outside;
    // Antisymmetric part: spectrum on the imaginary axis.
    const RealMatrix skew = 0.5 * (m - m.transpose());
    r.antisym_real = max_abs_real(eigenvalues(skew).eigenvalues);
    // Orthogonal conjugation preserves the spectrum.
    Stream qs = Stream::for_entry(spec.seed, 1, 0);
    const RealMatrix q = haar_orthogonal(spec.n, qs);
    const RealMatrix conj = q.transpose() * m * q;
    r.conj_distance = spectrum_distance(s.eigenvalues, eigenvalues(conj).eigenvalues);
    rows[k] = r;
  });

  Json checks = Json::array();
  for (std::size_t c = 0; c < specs.size(); ++c) {
    std::size_t outside = 0;
    double skew_real = 0.0, conj = 0.0, tol = 0.0;
    for (std::size_t k = c * reps; k < (c + 1) * reps; ++k) {
      outside += rows[k].outside;
      skew_real = std::max(skew_real, rows[k].antisym_real);
      conj = std::max(conj, rows[k].conj_distance);
      tol = std::max(tol, rows[k].tol);
    }
    const std::string kind = kind_name(specs[c].composition);
    checks.push_back(check("box " + kind, outside == 0, {{"draws", reps}, {"outside", outside}}));
    checks.push_back(check("skew part imaginary " + kind, skew_real <= tol,
                           {{"max_abs_real", skew_real}, {"tolerance", tol}}));
    // Conjugation spectra agree to backward-error level, which for
    // non-normal matrices amplifies into sqrt(eps)-sized eigenvalue shifts at
    // worst; 1e-6 * scale bounds that comfortably.
    const double conj_tol = 1e-6 * tol / kContainmentTol;
    checks.push_back(check("orthogonal conjugation " + kind, conj <= conj_tol,
                           {{"max_distance", conj}, {"tolerance", conj_tol}}));
  }
  return checks;
}

Json verify_perturb(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t instances = 20;
  const std::vector<double> grid{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  std::vector<ResidualReport> plain(instances), degen(instances);
  parallel_for(2 * instances, threads, [&](std::size_t t) {
    const std::size_t k = t % instances;
    const bool degenerate = t >= instances;
    const PerturbationInput in =
        random_perturbation_instance(5 + k % 16, derive_seed(seed, t), degenerate);
    (degenerate ? degen : plain)[k] = verify_prediction(in, grid);
  });

  auto summarize = [](const std::vector<ResidualReport>& reports, double threshold) {
    Json slopes = Json::array();
    double worst = std::numeric_limits<double>::infinity();
    bool pass = true;
    for (const auto& r : reports) {
      slopes.push_back(r.exact ? Json("exact") : Json(r.slope));
      if (!r.exact) worst = std::min(worst, r.slope);
      pass = pass && (r.exact || r.slope >= threshold);
    }
    return std::make_pair(pass, Json{{"threshold", threshold},
                                     {"min_slope", std::isfinite(worst) ? Json(worst) : Json()},
                                     {"slopes", slopes}});
  };

  Json checks = Json::array();
  auto [p1, d1] = summarize(plain, 2.7);
  checks.push_back(check("non-degenerate order", p1, d1));
  auto [p2, d2] = summarize(degen, 1.7);
  checks.push_back(check("degenerate imaginary order", p2, d2));

  // 2x2: lambda = m + sqrt(h^2 - eps^2 |ab|), h = (d1 - d2)/2, so the
  // second-order prediction misses by eps^4 (ab)^2 / (8 h^3) + O(eps^6).
  PerturbationInput two;
  two.d = {-2.0, -5.0};
  two.a = RealMatrix{{0.0, 0.7}, {-1.3, 0.0}};
  two.eps = 1e-4;
  const PerturbationPrediction pred = predict_extremes(two);
  const Spectrum s = eigenvalues(two.matrix());
  const double h = 1.5;
  const double ab = 0.7 * 1.3;
  const double e4 = std::pow(two.eps, 4) * ab * ab / (8.0 * h * h * h);
  const double top = s.eigenvalues.back().real();
  const double bottom = s.eigenvalues.front().real();
  const double err = std::max(std::abs(top - (pred.lambda_max.real() - e4)),
                              std::abs(bottom - (pred.lambda_min.real() + e4)));
  const double tol = 16.0 * std::numeric_limits<double>::epsilon() * 5.0;
  checks.push_back(check("2x2 closed form", err <= tol,
                         {{"eps", two.eps}, {"error", err}, {"tolerance", tol}}));
  return checks;
}

Json verify_elliptic(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t n = 800;
  std::vector<std::pair<std::string, EnsembleSpec>> cases{
      {"gaussian-antagonistic", {n, AntagonisticComposition{GaussianPair{}}, 0}},
      {"uniform-antagonistic", {n, AntagonisticComposition{UniformPair{}}, 0}},
      {"two-interval w=0.5", {n, AntagonisticComposition{TwoIntervalPair{0.5}}, 0}},
      {"elliptic-gaussian tau=-0.5", {n, EllipticGaussianComposition{-0.5}, 0}},
      {"elliptic-gaussian tau=0", {n, EllipticGaussianComposition{0.0}, 0}},
      {"elliptic-gaussian tau=0.5", {n, EllipticGaussianComposition{0.5}, 0}},
  };
  std::vector<FitReport> fits(cases.size());
  parallel_for(cases.size(), threads, [&](std::size_t k) {
    cases[k].second.seed = derive_seed(seed, k);
    fits[k] = elliptic_fit_ensemble(cases[k].second);
  });

  Json checks = Json::array();
  const std::array<std::pair<PairDensity, double>, 3> closed{{
      {GaussianPair{}, -2.0 / std::numbers::pi},
      {UniformPair{}, -0.75},
      {TwoIntervalPair{0.5}, -3.0 / (3.0 + 0.25)},
  }};
  for (const auto& [d, expected] : closed) {
    const double got = rho_from_density(d);
    checks.push_back(check("rho " + kind_name(d), std::abs(got - expected) <= 1e-15,
                           {{"rho", got}, {"expected", expected}}));
  }
  for (std::size_t k = 0; k < cases.size(); ++k) {
    checks.push_back(check("inside " + cases[k].first, fits[k].inside_fraction >= 0.97,
                           to_json(fits[k])));
    checks.push_back(check("radial ks " + cases[k].first, fits[k].ks_pass, to_json(fits[k])));
  }
  return checks;
}

Json verify_dilute(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t n = 600;
  const std::array<double, 2> keeps{1.0, 1.0 / std::sqrt(static_cast<double>(n))};
  std::vector<RadiusCheck> out(keeps.size());
  parallel_for(keeps.size(), threads, [&](std::size_t k) {
    out[k] = circular_radius_check(
        {n, DiluteComposition{GaussianScalar{0.0, 1.0}, keeps[k]}, derive_seed(seed, k)});
  });
  Json checks = Json::array();
  for (std::size_t k = 0; k < keeps.size(); ++k) {
    Json details = to_json(out[k]);
    details["n"] = n;
    details["keep"] = keeps[k];
    checks.push_back(check("radius keep=" + label_number(keeps[k]),
                           out[k].ratio >= 0.85 && out[k].ratio <= 1.15, details));
  }
  return checks;
}

Json verify_closure(std::uint64_t seed, unsigned threads) {
  const std::vector<PairDensity> pairs{GaussianPair{}, UniformPair{}, TwoIntervalPair{0.3},
                                       GapUniformPair{1.5, 10.0}, DecayingSquaresPair{50.0, 8.0}};
  constexpr std::size_t reps = 10;
  constexpr std::size_t n = 40;
  struct Row {
    bool structure = true;
    double spectral = 0.0;
    double tol = 0.0;
  };
  std::vector<Row> rows(pairs.size() * reps);
  parallel_for(rows.size(), threads, [&](std::size_t k) {
    const EnsembleSpec spec{n, AntagonisticComposition{pairs[k / reps]}, derive_seed(seed, k)};
    const RealMatrix a = sample_matrix(spec);
    Stream s = Stream::for_entry(spec.seed, 1, 0);
    std::vector<double> d(n);
    for (double& x : d) x = random_sign(s) * uniform(s, 0.5, 2.0);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) {
      const auto j = static_cast<std::size_t>(uniform01(s) * static_cast<double>(i + 1));
      std::swap(perm[i], perm[std::min(j, i)]);
    }

    const RealMatrix neg = negate(a), tr = transpose(a), dc = diag_conjugate(a, d),
                     pm = permute(a, perm);
    Row r;
    r.structure = is_antagonistic(a) && is_antagonistic(neg) && is_antagonistic(tr) &&
                  is_antagonistic(dc) && is_antagonistic(pm);
    const std::vector<Complex> base = eigenvalues(a).eigenvalues;
    std::vector<Complex> flipped = base;
    for (auto& z : flipped) z = -z;
    r.spectral = std::max({spectrum_distance(flipped, eigenvalues(neg).eigenvalues),
                           spectrum_distance(base, eigenvalues(tr).eigenvalues),
                           spectrum_distance(base, eigenvalues(dc).eigenvalues),
                           spectrum_distance(base, eigenvalues(pm).eigenvalues)});
    r.tol = 1e-6 * matrix_scale(dc);
    rows[k] = r;
  });

  Json checks = Json::array();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    bool structure = true;
    double worst = 0.0, tol = 0.0;
    for (std::size_t k = p * reps; k < (p + 1) * reps; ++k) {
      structure = structure && rows[k].structure;
      worst = std::max(worst, rows[k].spectral);
      tol = std::max(tol, rows[k].tol);
    }
    const std::string kind = kind_name(pairs[p]);
    checks.push_back(check("closure structure " + kind, structure, {{"draws", reps}}));
    checks.push_back(check("closure spectra " + kind, worst <= tol,
                           {{"max_distance", worst}, {"tolerance", tol}}));
  }
  return checks;
}

Json verify_exact(std::uint64_t seed, unsigned threads) {
  Json checks = Json::array();

  // pf^2 = det, pf[A^T] = (-1)^(n/2) pf[A], elimination vs matching sum.
  for (std::size_t n = 2; n <= 10; n += 2) {
    constexpr std::size_t draws = 100;
    std::vector<std::array<double, 3>> errs(draws);
    parallel_for(draws, threads, [&](std::size_t k) {
      const EnsembleSpec spec{n, AntisymmetricComposition{GaussianScalar{0.0, 1.0}},
                              derive_seed(seed, n * 1000 + k)};
      const RealMatrix a = sample_matrix(spec);
      const double pf = pfaffian(a);
      const double det = determinant(a);
      const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
      const double pft = pfaffian(transpose(a));
      const double scale = std::max(1.0, std::abs(det));
      errs[k][0] = std::abs(pf * pf - det) / scale;
      errs[k][1] = std::abs(pft - sign * pf) / std::max(1.0, std::abs(pf));
      errs[k][2] = k < 10 ? std::abs(pfaffian_by_matchings(a) - pf) / std::max(1.0, std::abs(pf))
                          : 0.0;
    });
    std::array<double, 3> worst{};
    for (const auto& e : errs)
      for (std::size_t i = 0; i < 3; ++i) worst[i] = std::max(worst[i], e[i]);
    const std::string tag = " n=" + std::to_string(n);
    checks.push_back(check("pf^2 = det" + tag, worst[0] <= 1e-10, {{"max_rel_error", worst[0]}}));
    checks.push_back(
        check("pf transpose sign" + tag, worst[1] <= 1e-10, {{"max_rel_error", worst[1]}}));
    checks.push_back(
        check("pf elimination = matchings" + tag, worst[2] <= 1e-10, {{"max_rel_error", worst[2]}}));
  }

  // Subset DP against enumeration, parity and sign of the coefficients.
  bool dp_equal = true, odd_zero = true, even_nonneg = true;
  for (std::size_t n = 1; n <= 10; ++n) {
    Stream s = Stream::for_entry(seed, 2, n);
    ThetaArray theta(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) theta.set(i, j, uniform(s, 0.0, 2.0));
    const std::vector<double> dp = matching_sums(theta);
    const std::vector<double> en = matching_sums_by_enumeration(theta);
    for (std::size_t k = 0; k < dp.size(); ++k)
      dp_equal = dp_equal && std::abs(dp[k] - en[k]) <= 1e-12 * std::max(1.0, std::abs(en[k]));
    const Polynomial p = expected_char_poly(theta);
    for (std::size_t k = 0; k < p.coefficients.size(); ++k) {
      if ((n - k) % 2 == 1) odd_zero = odd_zero && p.coefficients[k] == 0.0;
      else even_nonneg = even_nonneg && p.coefficients[k] >= 0.0;
    }
  }
  checks.push_back(check("matching DP = enumeration n<=10", dp_equal));
  checks.push_back(check("char poly odd coefficients zero", odd_zero));
  checks.push_back(check("char poly even coefficients nonnegative", even_nonneg));

  const Polynomial p4 = expected_char_poly(ThetaArray(4, 1.0));
  const std::vector<double> want{3.0, 0.0, 6.0, 0.0, 1.0};
  checks.push_back(check("n=4 unit theta polynomial", p4.coefficients == want,
                         {{"coefficients", p4.coefficients}}));

  bool counts = true;
  std::uint64_t dfact = 1;
  for (std::size_t n = 2; n <= 20; n += 2) {
    dfact *= n - 1;
    counts = counts && matching_count(n) == dfact;
  }
  checks.push_back(check("matching count (n-1)!!", counts));

  const EnsembleSpec g4{4, AntagonisticComposition{GaussianPair{}}, seed};
  const double edet = expected_det(theta_array(g4));
  const double oracle = 12.0 / (std::numbers::pi * std::numbers::pi);
  checks.push_back(check("gaussian n=4 E det = 12/pi^2", std::abs(edet - oracle) <= 1e-14,
                         {{"value", edet}, {"oracle", oracle}}));

  const Json report = expect_report(g4, parse_functional("det"), 20000, threads);
  checks.push_back(check("gaussian n=4 E det monte carlo", report.at("pass").get<bool>(), report));
  return checks;
}

}  // namespace

// ---------------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------------

FigureId parse_figure_id(std::string_view id) {
  if (id == "fig1") return FigureId::fig1;
  if (id == "fig2") return FigureId::fig2;
  if (id == "fig3") return FigureId::fig3;
  if (id == "fig4") return FigureId::fig4;
  if (id == "fig5") return FigureId::fig5;
  throw Error(ErrorCode::invalid_argument,
              "unknown figure '" + std::string(id) + "' (expected fig1..fig5)");
}

std::string figure_name(FigureId id) {
  return "fig" + std::to_string(static_cast<int>(id) + 1);
}

std::vector<PanelPreset> figure_presets(FigureId id, std::uint64_t seed) {
  std::vector<PanelPreset> out;
  auto add = [&](std::string label, auto make) {
    const std::uint64_t s = derive_seed(seed, out.size());
    out.push_back({std::move(label), make(s)});
  };
  switch (id) {
    case FigureId::fig1:
      for (double g : {0.01, 0.08, 0.5})
        add("g=" + label_number(g), [&](std::uint64_t s) { return diag_plus_antisym(500, g, s); });
      break;
    case FigureId::fig2:
      for (std::size_t n : {250, 500, 750})
        add("n=" + std::to_string(n), [&](std::uint64_t s) { return diag_plus_antisym(n, 1.0, s); });
      break;
    case FigureId::fig3:
      for (std::size_t n : {400, 600, 800})
        add("n=" + std::to_string(n), [&](std::uint64_t s) { return decaying(n, s); });
      break;
    case FigureId::fig4:
      for (std::size_t n : {400, 600, 800})
        add("n=" + std::to_string(n), [&](std::uint64_t s) { return decaying_shifted(n, s); });
      break;
    case FigureId::fig5:
      for (int k = 1; k <= 4; ++k)
        add("n=200 #" + std::to_string(k),
            [&](std::uint64_t s) { return sym_antisym(200, PointScalar{0.0}, s); });
      add("n=800", [&](std::uint64_t s) { return sym_antisym(800, PointScalar{0.0}, s); });
      add("n=800 D", [&](std::uint64_t s) {
        return sym_antisym(800, UniformScalar{-10.0, -5.0}, s);
      });
      break;
  }
  return out;
}

FigureResult run_figure(FigureId id, std::uint64_t seed, unsigned threads) {
  FigureResult fig;
  fig.id = id;
  fig.seed = seed;
  const std::vector<PanelPreset> presets = figure_presets(id, seed);
  fig.panels.resize(presets.size());
  parallel_for(presets.size(), threads, [&](std::size_t k) {
    FigurePanel& p = fig.panels[k];
    p.label = presets[k].label;
    p.spec = presets[k].spec;
    const RealMatrix m = sample_matrix(p.spec);
    p.eigenvalues = eigenvalues(m).eigenvalues;
    p.stability = stability_report(p.eigenvalues);
    p.box = bendixson_box(m);
  });
  return fig;
}

std::string figure_csv(const FigureResult& fig) {
  std::string out = "re,im,label\n";
  for (const auto& p : fig.panels) {
    for (const auto& z : p.eigenvalues) {
      out += format_double(z.real());
      out += ',';
      out += format_double(z.imag());
      out += ',';
      out += p.label;
      out += '\n';
    }
  }
  return out;
}

Json figure_sidecar(const FigureResult& fig) {
  Json panels = Json::array();
  std::size_t rows = 0;
  for (const auto& p : fig.panels) {
    rows += p.eigenvalues.size();
    panels.push_back({{"label", p.label},
                      {"seed", p.spec.seed},
                      {"spec", to_json(p.spec)},
                      {"stability", to_json(p.stability)},
                      {"bendixson_box", to_json(p.box)}});
  }
  return {{"figure", figure_name(fig.id)}, {"seed", fig.seed}, {"rows", rows}, {"panels", panels}};
}

// ---------------------------------------------------------------------------
// Exports
// ---------------------------------------------------------------------------

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

Json to_json(const Estimate& e) {
  return {{"value", e.value}, {"stderr", e.std_error}, {"trials", e.trials}, {"seed", e.seed}};
}

Json to_json(const StabilityReport& r) {
  return {{"spectral_abscissa", r.spectral_abscissa},
          {"stable", r.stable},
          {"fraction_stable", r.fraction_stable},
          {"min_real", r.min_real},
          {"max_real", r.max_real}};
}

Json to_json(const BendixsonBox& b) {
  return {{"re_lo", b.re_lo}, {"re_hi", b.re_hi}, {"im_lo", b.im_lo}, {"im_hi", b.im_hi}};
}

Json to_json(const FitReport& r) {
  return {{"inside_fraction", r.inside_fraction},
          {"radial_ks", r.radial_ks},
          {"ks_threshold", r.ks_threshold},
          {"ks_pass", r.ks_pass},
          {"eta", r.eta},
          {"rho", r.rho},
          {"n", r.n},
          {"seed", r.seed}};
}

Json to_json(const RadiusCheck& r) {
  return {{"empirical", r.empirical}, {"predicted", r.predicted}, {"ratio", r.ratio}};
}

Json to_json(const PerturbationPrediction& p) {
  Json j{{"degenerate", p.degenerate},
         {"order", p.order},
         {"strip_lower", p.strip_lower},
         {"strip_upper", p.strip_upper}};
  if (p.degenerate) {
    j["pair"] = {{"re", p.lambda_max.real()}, {"im", p.lambda_max.imag()}};
    j["cluster"] = p.cluster;
    j["unshifted"] = p.unshifted;
  } else {
    j["lambda_max"] = p.lambda_max.real();
    j["lambda_min"] = p.lambda_min.real();
  }
  return j;
}

Json to_json(const ResidualReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"eps", row.eps}, {"residual_max", row.residual_max},
                    {"residual_min", row.residual_min}});
  auto slope = [&](double s) { return r.exact ? Json() : Json(s); };
  return {{"degenerate", r.degenerate},  {"exact", r.exact},
          {"slope", slope(r.slope)},     {"slope_max", slope(r.slope_max)},
          {"slope_min", slope(r.slope_min)}, {"rows", rows}};
}

std::string matrix_csv(const RealMatrix& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string spectrum_csv(const Spectrum& s) {
  std::string out = "index,re,im\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out += std::to_string(k) + ',' + format_double(s.eigenvalues[k].real()) + ',' +
           format_double(s.eigenvalues[k].imag()) + '\n';
  }
  return out;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "re_center,im_center,count\n";
  for (std::size_t i = 0; i < h.re_bins; ++i) {
    for (std::size_t j = 0; j < h.im_bins; ++j) {
      out += format_double(h.re_center(i)) + ',' + format_double(h.im_center(j)) + ',' +
             std::to_string(h.count(i, j)) + '\n';
    }
  }
  return out;
}

std::string polynomial_csv(const Polynomial& p) {
  std::string out = "power,coefficient\n";
  for (std::size_t k = 0; k < p.coefficients.size(); ++k)
    out += std::to_string(k) + ',' + format_double(p.coefficients[k]) + '\n';
  return out;
}

std::string residual_csv(const ResidualReport& r) {
  std::string out = "eps,residual_max,residual_min,slope\n";
  for (const auto& row : r.rows) {
    out += format_double(row.eps) + ',' + format_double(row.residual_max) + ',' +
           format_double(row.residual_min) + ',' + format_double(r.slope) + '\n';
  }
  return out;
}

std::string width_csv(const WidthTrend& t) {
  std::string out = "n,seed,width\n";
  for (const auto& row : t.rows)
    out += std::to_string(row.n) + ',' + std::to_string(row.seed) + ',' + format_double(row.width) +
           '\n';
  return out;
}

Json expect_report(const EnsembleSpec& spec, const Functional& f, std::size_t trials,
                   unsigned threads) {
  const Estimate mc = mc_expect(spec, f, trials, threads);
  Json report{{"functional", functional_name(f)},
              {"spec", to_json(spec)},
              {"mc", to_json(mc)},
              {"exact", nullptr},
              {"z_score", nullptr},
              {"pass", true}};
  if (f.kind == Functional::Kind::char_poly_at) report["z"] = f.z;

  double exact = 0.0;
  try {
    exact = exact_expectation(theta_array(spec), f);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::invalid_spec && e.code() != ErrorCode::dimension_too_large) throw;
    report["exact_unavailable"] = e.what();
    if (e.code() == ErrorCode::dimension_too_large)
      report["guidance"] = "exact matching sums are limited to n <= " +
                           std::to_string(kMatchingDpCap) + "; compare against Monte Carlo only";
    return report;
  }
  const double diff = mc.value - exact;
  double z = 0.0;
  if (mc.std_error > 0.0) {
    z = diff / mc.std_error;
  } else if (std::abs(diff) > 1e-12 * (1.0 + std::abs(exact))) {
    z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  report["exact"] = exact;
  report["z_score"] = std::isfinite(z) ? Json(z) : Json(z > 0 ? "inf" : "-inf");
  report["pass"] = std::abs(z) <= 4.0;
  return report;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

Suite parse_suite(std::string_view name) {
  if (name == "strip") return Suite::strip;
  if (name == "bendixson") return Suite::bendixson;
  if (name == "perturb") return Suite::perturb;
  if (name == "elliptic") return Suite::elliptic;
  if (name == "dilute") return Suite::dilute;
  if (name == "closure") return Suite::closure;
  if (name == "exact-combinatorics") return Suite::exact_combinatorics;
  throw Error(ErrorCode::invalid_argument,
              "unknown suite '" + std::string(name) +
                  "' (expected strip, bendixson, perturb, elliptic, dilute, closure, "
                  "exact-combinatorics)");
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::strip: return "strip";
    case Suite::bendixson: return "bendixson";
    case Suite::perturb: return "perturb";
    case Suite::elliptic: return "elliptic";
    case Suite::dilute: return "dilute";
    case Suite::closure: return "closure";
    case Suite::exact_combinatorics: return "exact-combinatorics";
  }
  return "?";
}

Json run_verify(Suite suite, std::uint64_t seed, unsigned threads) {
  Json checks;
  switch (suite) {
    case Suite::strip: checks = verify_strip(seed, threads); break;
    case Suite::bendixson: checks = verify_bendixson(seed, threads); break;
    case Suite::perturb: checks = verify_perturb(seed, threads); break;
    case Suite::elliptic: checks = verify_elliptic(seed, threads); break;
    case Suite::dilute: checks = verify_dilute(seed, threads); break;
    case Suite::closure: checks = verify_closure(seed, threads); break;
    case Suite::exact_combinatorics: checks = verify_exact(seed, threads); break;
  }
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.at("pass").get<bool>();
  return {{"suite", suite_name(suite)}, {"seed", seed}, {"pass", pass}, {"checks", checks}};
}

}  // namespace antag
