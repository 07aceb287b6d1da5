#include "antagonistic/matgen.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "antagonistic/error.hpp"

namespace antag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::invalid_spec, field + ": " + why);
}

bool finite(double x) { return std::isfinite(x); }

enum Component : std::uint64_t { kDiag = 0, kPair = 1, kAntisym = 2 };

Stream entry_stream(const EnsembleSpec& spec, std::uint64_t matrix, Component c, std::size_t i,
                    std::size_t j) {
  const auto n = static_cast<std::uint64_t>(spec.n);
  return Stream::for_entry(spec.seed, matrix, c * n * n + i * n + j);
}

}  // namespace

double DecayingSquaresPair::delta(std::size_t separation) const {
  return c / (1.0 + std::pow(static_cast<double>(separation), p));
}

void validate(const PairDensity& d) {
  std::visit(overloaded{
                 [](const GaussianPair&) {},
                 [](const UniformPair&) {},
                 [](const TwoIntervalPair& t) {
                   if (!(t.w > 0.0 && t.w < 1.0)) invalid("pair.w", "half-width must lie in (0,1)");
                 },
                 [](const DecayingSquaresPair& t) {
                   if (!(t.c > 0.0 && finite(t.c))) invalid("pair.c", "scale must be > 0");
                   if (!(t.p > 0.0 && finite(t.p))) invalid("pair.p", "exponent must be > 0");
                 },
                 [](const GapUniformPair& t) {
                   if (!(t.lo > 0.0 && t.lo < t.hi && finite(t.hi)))
                     invalid("pair.lo/hi", "need 0 < lo < hi");
                 },
             },
             d);
}

std::pair<double, double> sample_pair(const PairDensity& d, Stream& s, std::size_t separation) {
  const double orient = random_sign(s);
  auto [ax, ay] = std::visit(
      overloaded{
          [&](const GaussianPair&) {
            const double x = std::abs(standard_normal(s));
            return std::pair{x, std::abs(standard_normal(s))};
          },
          [&](const UniformPair&) {
            const double x = uniform01(s);
            return std::pair{x, uniform01(s)};
          },
          [&](const TwoIntervalPair& t) {
            const double x = 1.0 + uniform(s, -t.w, t.w);
            return std::pair{x, 1.0 + uniform(s, -t.w, t.w)};
          },
          [&](const DecayingSquaresPair& t) {
            const double delta = t.delta(separation);
            const double x = 1.0 + delta * uniform01(s);
            return std::pair{x, 1.0 + delta * uniform01(s)};
          },
          [&](const GapUniformPair& t) {
            const double x = uniform(s, t.lo, t.hi);
            return std::pair{x, uniform(s, t.lo, t.hi)};
          },
      },
      d);
  return {orient * ax, -orient * ay};
}

PairMoments pair_moments(const PairDensity& d, std::size_t i, std::size_t k) {
  return std::visit(
      overloaded{
          [](const GaussianPair&) { return PairMoments{0.0, 1.0, 3.0, 2.0 / std::numbers::pi}; },
          [](const UniformPair&) { return PairMoments{0.0, 1.0 / 3.0, 1.0 / 5.0, 0.25}; },
          [](const TwoIntervalPair& t) {
            const double w2 = t.w * t.w;
            return PairMoments{0.0, 1.0 + w2 / 3.0, 1.0 + 2.0 * w2 + w2 * w2 / 5.0, 1.0};
          },
          [&](const DecayingSquaresPair& t) {
            const std::size_t sep = k > i ? k - i : i - k;
            const double dl = t.delta(sep);
            // |x| = 1 + u, u ~ U(0, delta)
            const double var = 1.0 + dl + dl * dl / 3.0;
            const double fourth =
                1.0 + 2.0 * dl + 2.0 * dl * dl + dl * dl * dl + dl * dl * dl * dl / 5.0;
            const double half = 1.0 + dl / 2.0;
            return PairMoments{0.0, var, fourth, half * half};
          },
          [](const GapUniformPair& t) {
            const double lo = t.lo, hi = t.hi;
            const double var = (lo * lo + lo * hi + hi * hi) / 3.0;
            const double fourth = (std::pow(hi, 5) - std::pow(lo, 5)) / (5.0 * (hi - lo));
            const double half = (lo + hi) / 2.0;
            return PairMoments{0.0, var, fourth, half * half};
          },
      },
      d);
}

void validate(const ScalarDensity& d) {
  std::visit(overloaded{
                 [](const UniformScalar& u) {
                   if (!(finite(u.a) && finite(u.b) && u.a < u.b)) invalid("uniform", "need a < b");
                 },
                 [](const GaussianScalar& g) {
                   if (!finite(g.mean) || !(g.variance >= 0.0 && finite(g.variance)))
                     invalid("gaussian", "need finite mean and variance >= 0");
                 },
                 [](const TwoIntervalScalar& t) {
                   if (!(t.w > 0.0 && t.w < 1.0)) invalid("two-interval.w", "must lie in (0,1)");
                 },
                 [](const GapUniformScalar& t) {
                   if (!(t.lo > 0.0 && t.lo < t.hi && finite(t.hi)))
                     invalid("gap-uniform", "need 0 < lo < hi");
                 },
                 [](const PointScalar& p) {
                   if (!finite(p.value)) invalid("point.value", "must be finite");
                 },
             },
             d);
}

double sample_scalar(const ScalarDensity& d, Stream& s) {
  return std::visit(
      overloaded{
          [&](const UniformScalar& u) { return uniform(s, u.a, u.b); },
          [&](const GaussianScalar& g) {
            return g.mean + std::sqrt(g.variance) * standard_normal(s);
          },
          [&](const TwoIntervalScalar& t) {
            const double sign = random_sign(s);
            return sign * (1.0 + uniform(s, -t.w, t.w));
          },
          [&](const GapUniformScalar& t) {
            const double sign = random_sign(s);
            return sign * uniform(s, t.lo, t.hi);
          },
          [](const PointScalar& p) { return p.value; },
      },
      d);
}

ScalarMoments scalar_moments(const ScalarDensity& d) {
  return std::visit(
      overloaded{
          [](const UniformScalar& u) {
            return ScalarMoments{(u.a + u.b) / 2.0, (u.b - u.a) * (u.b - u.a) / 12.0};
          },
          [](const GaussianScalar& g) { return ScalarMoments{g.mean, g.variance}; },
          [](const TwoIntervalScalar& t) { return ScalarMoments{0.0, 1.0 + t.w * t.w / 3.0}; },
          [](const GapUniformScalar& t) {
            return ScalarMoments{0.0, (t.lo * t.lo + t.lo * t.hi + t.hi * t.hi) / 3.0};
          },
          [](const PointScalar& p) { return ScalarMoments{p.value, 0.0}; },
      },
      d);
}

std::pair<double, double> scalar_support(const ScalarDensity& d) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const UniformScalar& u) { return std::pair{u.a, u.b}; },
                        [](const GaussianScalar& g) {
                          return g.variance == 0.0 ? std::pair{g.mean, g.mean}
                                                   : std::pair{-inf, inf};
                        },
                        [](const TwoIntervalScalar& t) { return std::pair{-1.0 - t.w, 1.0 + t.w}; },
                        [](const GapUniformScalar& t) { return std::pair{-t.hi, t.hi}; },
                        [](const PointScalar& p) { return std::pair{p.value, p.value}; },
                    },
                    d);
}

void validate(const EnsembleSpec& spec) {
  if (spec.n < 1) invalid("n", "dimension must be >= 1");
  std::visit(overloaded{
                 [](const AntagonisticComposition& c) { validate(c.pair); },
                 [](const AntisymmetricComposition& c) { validate(c.entry); },
                 [](const DiagPlusAntisymComposition& c) {
                   validate(c.diag);
                   validate(c.entry);
                   if (!finite(c.g)) invalid("g", "coupling must be finite");
                 },
                 [](const DiagPlusAntagonisticComposition& c) {
                   validate(c.diag);
                   validate(c.pair);
                 },
                 [](const EllipticGaussianComposition& c) {
                   if (!(std::abs(c.tau) <= 1.0)) invalid("tau", "need |tau| <= 1");
                 },
                 [](const DiluteComposition& c) {
                   validate(c.entry);
                   if (!(c.keep >= 0.0 && c.keep <= 1.0)) invalid("keep", "need 0 <= Q <= 1");
                 },
                 [](const SmallSymBigAntisymComposition& c) {
                   validate(c.diag);
                   validate(c.sym);
                   validate(c.antisym);
                 },
             },
             spec.composition);
}

RealMatrix sample_matrix(const EnsembleSpec& spec, std::uint64_t matrix_index) {
  validate(spec);
  const std::size_t n = spec.n;
  RealMatrix m = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  auto at = [&m](std::size_t i, std::size_t j) -> double& {
    return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };
  auto stream = [&](Component c, std::size_t i, std::size_t j) {
    return entry_stream(spec, matrix_index, c, i, j);
  };
  auto fill_diag = [&](const ScalarDensity& d) {
    for (std::size_t i = 0; i < n; ++i) {
      Stream s = stream(kDiag, i, i);
      at(i, i) = sample_scalar(d, s);
    }
  };
  auto fill_pairs = [&](const PairDensity& d) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Stream s = stream(kPair, i, j);
        const auto [x, y] = sample_pair(d, s, j - i);
        at(i, j) = x;
        at(j, i) = y;
      }
    }
  };
  auto add_antisym = [&](const ScalarDensity& d, double g) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Stream s = stream(kAntisym, i, j);
        const double x = g * sample_scalar(d, s);
        at(i, j) += x;
        at(j, i) -= x;
      }
    }
  };

  std::visit(
      overloaded{
          [&](const AntagonisticComposition& c) { fill_pairs(c.pair); },
          [&](const AntisymmetricComposition& c) { add_antisym(c.entry, 1.0); },
          [&](const DiagPlusAntisymComposition& c) {
            fill_diag(c.diag);
            add_antisym(c.entry, c.g);
          },
          [&](const DiagPlusAntagonisticComposition& c) {
            fill_pairs(c.pair);
            fill_diag(c.diag);
          },
          [&](const EllipticGaussianComposition& c) {
            const double dn = static_cast<double>(n);
            const double sd_diag = std::sqrt((1.0 + c.tau) / dn);
            const double sd_sym = std::sqrt((1.0 + c.tau) / (2.0 * dn));
            const double sd_anti = std::sqrt((1.0 - c.tau) / (2.0 * dn));
            for (std::size_t i = 0; i < n; ++i) {
              Stream s = stream(kDiag, i, i);
              at(i, i) = sd_diag * standard_normal(s);
              for (std::size_t j = i + 1; j < n; ++j) {
                Stream ss = stream(kPair, i, j);
                Stream sa = stream(kAntisym, i, j);
                const double sym = sd_sym * standard_normal(ss);
                const double anti = sd_anti * standard_normal(sa);
                at(i, j) = sym + anti;
                at(j, i) = sym - anti;
              }
            }
          },
          [&](const DiluteComposition& c) {
            for (std::size_t i = 0; i < n; ++i) {
              for (std::size_t j = 0; j < n; ++j) {
                Stream s = stream(kPair, i, j);
                if (uniform01(s) < c.keep) at(i, j) = sample_scalar(c.entry, s);
              }
            }
          },
          [&](const SmallSymBigAntisymComposition& c) {
            fill_diag(c.diag);
            const double scale = 1.0 / std::sqrt(static_cast<double>(n));
            for (std::size_t i = 0; i < n; ++i) {
              for (std::size_t j = i + 1; j < n; ++j) {
                Stream s = stream(kPair, i, j);
                const double x = scale * sample_scalar(c.sym, s);
                at(i, j) = x;
                at(j, i) = x;
              }
            }
            add_antisym(c.antisym, 1.0);
          },
      },
      spec.composition);
  return m;
}

bool is_antagonistic(const RealMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const Eigen::Index n = m.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) return false;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double x = m(i, j), y = m(j, i);
      const bool both_zero = x == 0.0 && y == 0.0;
      const bool opposite = (x > 0.0 && y < 0.0) || (x < 0.0 && y > 0.0);
      if (!both_zero && !opposite) return false;
    }
  }
  return true;
}

RealMatrix negate(const RealMatrix& m) { return -m; }

RealMatrix transpose(const RealMatrix& m) { return m.transpose(); }

RealMatrix diag_conjugate(const RealMatrix& m, std::span<const double> d) {
  if (static_cast<Eigen::Index>(d.size()) != m.rows())
    throw Error(ErrorCode::invalid_argument, "diagonal length does not match matrix dimension");
  for (double di : d) {
    if (di == 0.0 || !std::isfinite(di))
      throw Error(ErrorCode::singular_diagonal, "diagonal conjugator has a zero entry");
  }
  RealMatrix out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = d[i] * m(i, j) / d[j];
  return out;
}

RealMatrix permute(const RealMatrix& m, std::span<const std::size_t> perm) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (perm.size() != n) throw Error(ErrorCode::invalid_argument, "permutation length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) throw Error(ErrorCode::invalid_argument, "not a permutation");
    seen[p] = true;
  }
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j]));
  return out;
}

RealMatrix haar_orthogonal(std::size_t n, Stream& s) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = standard_normal(s);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

RealMatrix example_matrix() {
  RealMatrix m(4, 4);
  m << 0.0, 5.3, 0.0, -1.7,  //
      -3.2, 0.0, 2.3, 2.0,   //
      0.0, -8.7, 0.0, -6.3,  //
      1.1, -1.8, 1.9, 0.0;
  return m;
}

}  // namespace antag
