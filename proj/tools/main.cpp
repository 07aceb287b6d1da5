// antag: seeded experiment runner.
//
// Exit codes: 0 pass, 1 check failed, 2 usage error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "antagonistic/error.hpp"
#include "antagonistic/exact.hpp"
#include "antagonistic/experiments.hpp"
#include "antagonistic/laws.hpp"
#include "antagonistic/matgen.hpp"
#include "antagonistic/perturb.hpp"
#include "antagonistic/spec_io.hpp"
#include "antagonistic/spectral.hpp"

namespace fs = std::filesystem;
using antag::Error;
using antag::ErrorCode;
using antag::Json;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string config_path;
  std::size_t trials = 0;
  std::string format;
  unsigned threads = 1;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* threads_opt = nullptr;

  Json config = Json::object();
};

void add_common(CLI::App* cmd, Common& c) {
  c.seed_opt = cmd->add_option("--seed", c.seed, "Master seed (default 0)");
  c.out_opt = cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--config", c.config_path, "JSON config file; flags override its values");
  c.trials_opt = cmd->add_option("--trials", c.trials, "Monte Carlo trials");
  c.format_opt = cmd->add_option("--format", c.format, "Output format")
                     ->check(CLI::IsMember({"csv", "json"}));
  c.threads_opt =
      cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::io_failure, "write to '" + path + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Flag value if given, else config value, else preset.
template <typename T>
T resolve(const CLI::Option* opt, const T& flag, const Json& config, const char* key,
          const T& preset) {
  if (opt != nullptr && opt->count() > 0) return flag;
  if (config.contains(key)) {
    try {
      return config.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::invalid_argument,
                  std::string("config field '") + key + "': " + e.what());
    }
  }
  return preset;
}

struct Resolved {
  std::uint64_t seed;
  std::string out;
  std::size_t trials;
  std::string format;
  unsigned threads;
};

Resolved resolve_common(Common& c, std::size_t default_trials, const std::string& default_format) {
  if (!c.config_path.empty()) {
    try {
      c.config = Json::parse(read_file(c.config_path));
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::invalid_argument, "config: malformed JSON: " + std::string(e.what()));
    }
    if (!c.config.is_object()) throw Error(ErrorCode::invalid_argument, "config: expected an object");
  }
  Resolved r;
  r.seed = resolve<std::uint64_t>(c.seed_opt, c.seed, c.config, "seed", 0);
  r.out = resolve<std::string>(c.out_opt, c.out, c.config, "out", "");
  r.trials = resolve<std::size_t>(c.trials_opt, c.trials, c.config, "trials", default_trials);
  r.format = resolve<std::string>(c.format_opt, c.format, c.config, "format", default_format);
  if (r.format != "csv" && r.format != "json")
    throw Error(ErrorCode::invalid_argument, "format must be csv or json");
  r.threads = resolve<unsigned>(c.threads_opt, c.threads, c.config, "threads", 1);
  if (r.threads == 0) r.threads = std::max(1u, std::thread::hardware_concurrency());
  return r;
}

/// --spec accepts a path or inline JSON; the config's "spec" object is the
/// fallback. The resolved seed always overrides the spec's own seed when a
/// seed flag is given.
antag::EnsembleSpec load_spec(const std::string& flag, const Common& c, const Resolved& r) {
  antag::EnsembleSpec spec;
  if (!flag.empty()) {
    const bool inline_json = flag.find('{') != std::string::npos;
    spec = antag::parse_spec(inline_json ? flag : read_file(flag));
  } else if (c.config.contains("spec")) {
    spec = antag::spec_from_json(c.config.at("spec"));
  } else {
    throw Error(ErrorCode::invalid_argument, "no ensemble given (use --spec or a config 'spec')");
  }
  if (c.seed_opt->count() > 0 || c.config.contains("seed")) spec.seed = r.seed;
  return spec;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_spec:
    case ErrorCode::invalid_argument:
    case ErrorCode::io_failure:
    case ErrorCode::dimension_too_large:
    case ErrorCode::odd_dimension:
      return kUsage;
    case ErrorCode::singular_diagonal:
    case ErrorCode::no_convergence:
    case ErrorCode::empty_spectrum:
    case ErrorCode::degenerate_extremes:
    case ErrorCode::not_degenerate:
    case ErrorCode::zero_variance:
      return kNumerical;
  }
  return kNumerical;
}

Json complex_list(const std::vector<antag::Complex>& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back({z.real(), z.imag()});
  return out;
}

// ---------------------------------------------------------------------------

int cmd_figure(const std::string& id, Common& c) {
  const Resolved r = resolve_common(c, 0, "csv");
  const antag::FigureResult fig = antag::run_figure(antag::parse_figure_id(id), r.seed, r.threads);
  const std::string csv = antag::figure_csv(fig);
  const std::string sidecar = dump(antag::figure_sidecar(fig));
  if (r.out.empty() || r.out == "-") {
    write_output("", r.format == "csv" ? csv : sidecar);
  } else {
    write_output(r.out, csv);
    write_output(fs::path(r.out).replace_extension(".json").string(), sidecar);
  }
  return kPass;
}

int cmd_sample(const std::string& spec_flag, std::uint64_t index, Common& c) {
  const Resolved r = resolve_common(c, 0, "csv");
  const antag::EnsembleSpec spec = load_spec(spec_flag, c, r);
  const antag::RealMatrix m = antag::sample_matrix(spec, index);
  if (r.format == "csv") {
    write_output(r.out, antag::matrix_csv(m));
  } else {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(row);
    }
    write_output(r.out, dump({{"spec", antag::to_json(spec)},
                              {"matrix_index", index},
                              {"antagonistic", antag::is_antagonistic(m)},
                              {"matrix", rows}}));
  }
  return kPass;
}

int cmd_spectrum(const std::string& spec_flag, std::vector<std::size_t> bins, Common& c) {
  const Resolved r = resolve_common(c, 0, "csv");
  const antag::EnsembleSpec spec = load_spec(spec_flag, c, r);
  const antag::RealMatrix m = antag::sample_matrix(spec);
  const antag::Spectrum s = antag::eigenvalues(m);
  if (!bins.empty()) {
    if (bins.size() != 2 || bins[0] == 0 || bins[1] == 0)
      throw Error(ErrorCode::invalid_argument, "--histogram takes two positive bin counts");
    const antag::Histogram h = antag::esd_histogram(s.eigenvalues, bins[0], bins[1]);
    if (r.format == "csv") {
      write_output(r.out, antag::histogram_csv(h));
      return kPass;
    }
    Json counts = Json::array();
    for (std::size_t i = 0; i < h.re_bins; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < h.im_bins; ++j) row.push_back(h.count(i, j));
      counts.push_back(row);
    }
    write_output(r.out, dump({{"spec", antag::to_json(spec)},
                              {"re_range", {h.re_lo, h.re_hi}},
                              {"im_range", {h.im_lo, h.im_hi}},
                              {"counts", counts}}));
    return kPass;
  }
  if (r.format == "csv") {
    write_output(r.out, antag::spectrum_csv(s));
  } else {
    write_output(r.out, dump({{"spec", antag::to_json(spec)},
                              {"residual", s.residual},
                              {"stability", antag::to_json(antag::stability_report(s))},
                              {"bendixson_box", antag::to_json(antag::bendixson_box(m))},
                              {"eigenvalues", complex_list(s.eigenvalues)}}));
  }
  return kPass;
}

int cmd_expect(const std::string& spec_flag, const std::string& functional_flag,
               std::optional<double> z_flag, Common& c) {
  const Resolved r = resolve_common(c, 10000, "json");
  const antag::EnsembleSpec spec = load_spec(spec_flag, c, r);
  const std::string name =
      !functional_flag.empty() ? functional_flag : c.config.value("functional", std::string("det"));
  const double z = z_flag ? *z_flag : c.config.value("z", 0.0);
  if (r.trials < 2) throw Error(ErrorCode::invalid_argument, "--trials must be at least 2");
  const Json report =
      antag::expect_report(spec, antag::parse_functional(name, z), r.trials, r.threads);
  if (r.format == "json") {
    write_output(r.out, dump(report));
  } else {
    auto cell = [](const Json& v) -> std::string {
      if (v.is_null()) return "";
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
      if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
      return antag::format_double(v.get<double>());
    };
    const Json& mc = report.at("mc");
    const std::string line = "functional,value,stderr,trials,exact,z_score,pass\n" +
                             cell(report.at("functional")) + ',' + cell(mc.at("value")) + ',' +
                             cell(mc.at("stderr")) + ',' + cell(mc.at("trials")) + ',' +
                             cell(report.at("exact")) + ',' + cell(report.at("z_score")) + ',' +
                             cell(report.at("pass")) + '\n';
    write_output(r.out, line);
  }
  return report.at("pass").get<bool>() ? kPass : kCheckFailed;
}

int cmd_perturb(std::size_t n, bool degenerate, std::vector<double> grid, Common& c) {
  const Resolved r = resolve_common(c, 0, "json");
  antag::PerturbationInput in;
  if (c.config.contains("d") || c.config.contains("a")) {
    try {
      in.d = c.config.at("d").get<std::vector<double>>();
      const auto rows = c.config.at("a").get<std::vector<std::vector<double>>>();
      in.a = antag::RealMatrix::Zero(static_cast<Eigen::Index>(rows.size()),
                                     static_cast<Eigen::Index>(rows.size()));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
          throw Error(ErrorCode::invalid_argument, "config 'a' must be square");
        for (std::size_t j = 0; j < rows.size(); ++j)
          in.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::invalid_argument, std::string("config 'd'/'a': ") + e.what());
    }
    if (!antag::is_antagonistic(in.a))
      throw Error(ErrorCode::invalid_argument, "config 'a' is not antagonistic");
  } else {
    if (n == 0) n = c.config.value("n", std::size_t{10});
    degenerate = degenerate || c.config.value("degenerate", false);
    in = antag::random_perturbation_instance(n, r.seed, degenerate);
  }
  if (grid.empty()) grid = c.config.value("eps_grid", std::vector<double>{1e-2, 5e-3, 2.5e-3, 1.25e-3});
  in.eps = grid.front();

  const bool deg = antag::has_degenerate_extreme(in.d);
  const antag::PerturbationPrediction pred =
      deg ? antag::predict_degenerate(in) : antag::predict_extremes(in);
  const antag::ResidualReport report = antag::verify_prediction(in, grid);
  const double threshold = deg ? 1.7 : 2.7;
  const bool pass = report.exact || report.slope >= threshold;
  if (r.format == "csv") {
    write_output(r.out, antag::residual_csv(report));
  } else {
    write_output(r.out, dump({{"seed", r.seed},
                              {"n", in.d.size()},
                              {"d", in.d},
                              {"prediction_at_first_eps", antag::to_json(pred)},
                              {"residuals", antag::to_json(report)},
                              {"slope_threshold", threshold},
                              {"pass", pass}}));
  }
  return pass ? kPass : kCheckFailed;
}

int cmd_lawfit(const std::string& spec_flag, std::string law, double eta,
               std::vector<std::size_t> sizes, std::size_t seeds, Common& c) {
  const Resolved r = resolve_common(c, 0, "json");
  const antag::EnsembleSpec spec = load_spec(spec_flag, c, r);
  if (law.empty()) law = c.config.value("law", std::string("elliptic"));
  Json out{{"law", law}, {"spec", antag::to_json(spec)}};
  bool pass = false;
  std::string csv;
  if (law == "elliptic") {
    const antag::FitReport fit = antag::elliptic_fit_ensemble(spec, eta);
    pass = fit.inside_fraction >= 0.97;
    out["fit"] = antag::to_json(fit);
    csv = "inside_fraction,radial_ks,ks_threshold,rho,n,seed\n" +
          antag::format_double(fit.inside_fraction) + ',' + antag::format_double(fit.radial_ks) +
          ',' + antag::format_double(fit.ks_threshold) + ',' + antag::format_double(fit.rho) +
          ',' + std::to_string(fit.n) + ',' + std::to_string(fit.seed) + '\n';
  } else if (law == "radius") {
    const antag::RadiusCheck rc = antag::circular_radius_check(spec);
    pass = rc.ratio >= 0.85 && rc.ratio <= 1.15;
    out["radius"] = antag::to_json(rc);
    csv = "empirical,predicted,ratio\n" + antag::format_double(rc.empirical) + ',' +
          antag::format_double(rc.predicted) + ',' + antag::format_double(rc.ratio) + '\n';
  } else if (law == "width") {
    if (sizes.empty()) sizes = c.config.value("n_list", std::vector<std::size_t>{});
    if (sizes.empty()) throw Error(ErrorCode::invalid_argument, "--law width needs --n-list");
    const antag::WidthTrend t = antag::strip_width_trend(spec, sizes, seeds, r.threads);
    pass = t.non_increasing();
    Json rows = Json::array();
    for (const auto& row : t.rows) rows.push_back({{"n", row.n}, {"seed", row.seed}, {"width", row.width}});
    out["sizes"] = t.sizes;
    out["mean_widths"] = t.mean_widths;
    out["rows"] = rows;
    csv = antag::width_csv(t);
  } else {
    throw Error(ErrorCode::invalid_argument, "--law must be elliptic, radius or width");
  }
  out["pass"] = pass;
  write_output(r.out, r.format == "json" ? dump(out) : csv);
  return pass ? kPass : kCheckFailed;
}

int cmd_verify(const std::string& suite, Common& c) {
  const Resolved r = resolve_common(c, 0, "json");
  const Json report = antag::run_verify(antag::parse_suite(suite), r.seed, r.threads);
  if (r.format == "json") {
    write_output(r.out, dump(report));
  } else {
    std::string csv = "check,pass\n";
    for (const auto& chk : report.at("checks"))
      csv += chk.at("name").get<std::string>() + ',' + (chk.at("pass").get<bool>() ? "true" : "false") + '\n';
    write_output(r.out, csv);
  }
  return report.at("pass").get<bool>() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antagonistic random matrices: sampling, spectra, exact expectations and checks"};
  app.require_subcommand(1);

  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "Eigenvalue clouds for the figure presets");
  figure->add_option("id", figure_id, "fig1 .. fig5")->required();
  Common figure_common;
  add_common(figure, figure_common);

  std::string spec_flag;
  std::uint64_t matrix_index = 0;
  auto* sample = app.add_subcommand("sample", "Draw one matrix of an ensemble");
  sample->add_option("--spec", spec_flag, "Ensemble spec: JSON file or inline JSON");
  sample->add_option("--index", matrix_index, "Matrix index within the ensemble");
  Common sample_common;
  add_common(sample, sample_common);

  std::vector<std::size_t> bins;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of one matrix");
  spectrum->add_option("--spec", spec_flag, "Ensemble spec: JSON file or inline JSON");
  spectrum->add_option("--histogram", bins, "Emit a RE_BINS IM_BINS histogram instead")
      ->expected(2);
  Common spectrum_common;
  add_common(spectrum, spectrum_common);

  std::string functional;
  std::optional<double> z_value;
  auto* expect = app.add_subcommand("expect", "Monte Carlo expectation against the exact value");
  expect->add_option("--spec", spec_flag, "Ensemble spec: JSON file or inline JSON");
  expect->add_option("--functional", functional, "det, pfpf, charpoly or trace2")
      ->check(CLI::IsMember({"det", "pfpf", "charpoly", "trace2"}));
  expect->add_option("--z", z_value, "Evaluation point for charpoly");
  Common expect_common;
  add_common(expect, expect_common);

  std::size_t perturb_n = 0;
  bool degenerate = false;
  std::vector<double> grid;
  auto* perturb = app.add_subcommand("perturb", "Perturbative extremes of D + eps A and their order");
  perturb->add_option("--n", perturb_n, "Dimension of the random instance");
  perturb->add_flag("--degenerate", degenerate, "Repeat the smallest diagonal value");
  perturb->add_option("--eps", grid, "Decreasing eps grid");
  Common perturb_common;
  add_common(perturb, perturb_common);

  std::string law;
  double eta = 0.05;
  std::vector<std::size_t> sizes;
  std::size_t width_seeds = 5;
  auto* lawfit = app.add_subcommand("lawfit", "Elliptic law, circular radius or strip width trend");
  lawfit->add_option("--spec", spec_flag, "Ensemble spec: JSON file or inline JSON");
  lawfit->add_option("--law", law, "elliptic (default), radius or width");
  lawfit->add_option("--eta", eta, "Ellipse inflation for the inside fraction");
  lawfit->add_option("--n-list", sizes, "Increasing dimensions for --law width");
  lawfit->add_option("--seeds", width_seeds, "Seeds per dimension for --law width");
  Common lawfit_common;
  add_common(lawfit, lawfit_common);

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("suite", suite,
                     "strip, bendixson, perturb, elliptic, dilute, closure, exact-combinatorics")
      ->required();
  Common verify_common;
  add_common(verify, verify_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*figure) return cmd_figure(figure_id, figure_common);
    if (*sample) return cmd_sample(spec_flag, matrix_index, sample_common);
    if (*spectrum) return cmd_spectrum(spec_flag, bins, spectrum_common);
    if (*expect) return cmd_expect(spec_flag, functional, z_value, expect_common);
    if (*perturb) return cmd_perturb(perturb_n, degenerate, grid, perturb_common);
    if (*lawfit) return cmd_lawfit(spec_flag, law, eta, sizes, width_seeds, lawfit_common);
    if (*verify) return cmd_verify(suite, verify_common);
  } catch (const Error& e) {
    std::cerr << "antag: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "antag: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
