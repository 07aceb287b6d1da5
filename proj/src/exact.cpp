#include "antagonistic/exact.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "antagonistic/error.hpp"
#include "antagonistic/numeric.hpp"

namespace antag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_dp_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap) {
    throw Error(ErrorCode::dimension_too_large,
                std::string(what) + " supports n <= " + std::to_string(cap) + ", got n = " +
                    std::to_string(n));
  }
}

double pf_recurse(const RealMatrix& m, std::vector<Eigen::Index>& remaining) {
  if (remaining.empty()) return 1.0;
  const Eigen::Index first = remaining.front();
  CompensatedSum sum;
  for (std::size_t p = 1; p < remaining.size(); ++p) {
    const Eigen::Index partner = remaining[p];
    const double a = m(first, partner);
    if (a == 0.0) continue;
    std::vector<Eigen::Index> rest;
    rest.reserve(remaining.size() - 2);
    for (std::size_t q = 1; q < remaining.size(); ++q)
      if (q != p) rest.push_back(remaining[q]);
    const double sign = (p % 2 == 1) ? 1.0 : -1.0;
    sum += sign * a * pf_recurse(m, rest);
  }
  return sum.value();
}

void enumerate_matchings(const ThetaArray& theta, std::size_t v, std::vector<bool>& used,
                         std::size_t edges, double product, std::vector<CompensatedSum>& sums) {
  const std::size_t n = theta.n();
  while (v < n && used[v]) ++v;
  if (v >= n) {
    sums[edges] += product;
    return;
  }
  used[v] = true;
  // v left unmatched
  enumerate_matchings(theta, v + 1, used, edges, product, sums);
  for (std::size_t u = v + 1; u < n; ++u) {
    if (used[u]) continue;
    used[u] = true;
    enumerate_matchings(theta, v + 1, used, edges + 1, product * theta(v, u), sums);
    used[u] = false;
  }
  used[v] = false;
}

}  // namespace

ThetaArray::ThetaArray(std::size_t n, double fill) : n_(n), values_(n * (n - (n > 0)) / 2, fill) {
  if (!(fill >= 0.0) || !std::isfinite(fill))
    throw Error(ErrorCode::invalid_argument, "theta must be finite and nonnegative");
}

std::size_t ThetaArray::index(std::size_t i, std::size_t j) const {
  if (i == j || i >= n_ || j >= n_)
    throw Error(ErrorCode::invalid_argument, "theta index out of range");
  if (i > j) std::swap(i, j);
  // row-major packing of the strict upper triangle
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

double ThetaArray::operator()(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }

void ThetaArray::set(std::size_t i, std::size_t j, double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw Error(ErrorCode::invalid_argument, "theta must be finite and nonnegative");
  values_[index(i, j)] = value;
}

double ThetaArray::total() const {
  CompensatedSum s;
  for (double v : values_) s += v;
  return s.value();
}

double Polynomial::operator()(double z) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double pfaffian(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "matrix must be square");
  const Eigen::Index n = m.rows();
  if (n % 2 == 1) return 0.0;
  if (n == 0) return 1.0;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      a(i, j) = m(i, j);
      a(j, i) = -m(i, j);
    }
  }

  double result = 1.0;
  for (Eigen::Index k = 0; k < n - 1; k += 2) {
    Eigen::Index pivot;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&pivot);
    pivot += k + 1;
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      result = -result;
    }
    const double head = a(k, k + 1);
    if (head == 0.0) return 0.0;
    result *= head;
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      const Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / head;
      const Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return result;
}

double pfaffian_by_matchings(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "matrix must be square");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n % 2 == 1) return 0.0;
  check_dp_cap(n, kPfaffianEnumerationCap, "pfaffian_by_matchings");
  std::vector<Eigen::Index> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Eigen::Index>(i);
  return pf_recurse(m, all);
}

std::uint64_t matching_count(std::size_t n) {
  if (n % 2 == 1) throw Error(ErrorCode::odd_dimension, "perfect matchings need even n");
  if (n < 2) throw Error(ErrorCode::invalid_argument, "need n >= 2");
  std::uint64_t count = 1;
  for (std::uint64_t k = n - 1; k > 1; k -= 2) {
    if (count > std::numeric_limits<std::uint64_t>::max() / k)
      throw Error(ErrorCode::dimension_too_large, "(n-1)!! overflows 64 bits");
    count *= k;
  }
  return count;
}

std::vector<double> matching_sums(const ThetaArray& theta) {
  const std::size_t n = theta.n();
  check_dp_cap(n, kMatchingDpCap, "matching_sums");
  const std::size_t full = std::size_t{1} << n;
  // perfect[mask] = weighted count of perfect matchings of the vertex set mask
  std::vector<double> perfect(full, 0.0);
  perfect[0] = 1.0;
  std::vector<CompensatedSum> sums(n / 2 + 1);
  sums[0] += 1.0;
  for (std::size_t mask = 1; mask < full; ++mask) {
    const int bits = std::popcount(mask);
    if (bits % 2 == 1) continue;
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    const std::size_t without_low = mask & (mask - 1);
    CompensatedSum acc;
    for (std::size_t rest = without_low; rest != 0; rest &= rest - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(rest));
      const double w = theta(low, u);
      if (w == 0.0) continue;
      acc += w * perfect[without_low & ~(std::size_t{1} << u)];
    }
    perfect[mask] = acc.value();
    sums[static_cast<std::size_t>(bits) / 2] += perfect[mask];
  }
  std::vector<double> out(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k) out[k] = sums[k].value();
  return out;
}

std::vector<double> matching_sums_by_enumeration(const ThetaArray& theta) {
  const std::size_t n = theta.n();
  check_dp_cap(n, kEnumerationCap, "matching_sums_by_enumeration");
  std::vector<CompensatedSum> sums(n / 2 + 1);
  std::vector<bool> used(n, false);
  enumerate_matchings(theta, 0, used, 0, 1.0, sums);
  std::vector<double> out(sums.size());
  for (std::size_t k = 0; k < sums.size(); ++k) out[k] = sums[k].value();
  return out;
}

Polynomial expected_char_poly(const ThetaArray& theta) {
  const std::size_t n = theta.n();
  const std::vector<double> m = matching_sums(theta);
  Polynomial p;
  p.coefficients.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < m.size(); ++k) p.coefficients[n - 2 * k] = m[k];
  return p;
}

double expected_det(const ThetaArray& theta) {
  const std::size_t n = theta.n();
  if (n % 2 == 1) return 0.0;
  if (n == 0) return 1.0;
  return matching_sums(theta).back();
}

double determinant(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "matrix must be square");
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXd>(Eigen::MatrixXd(m)).determinant();
}

ThetaArray theta_array(const EnsembleSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  ThetaArray theta(n);
  std::visit(overloaded{
                 [&](const AntagonisticComposition& c) {
                   for (std::size_t i = 0; i < n; ++i)
                     for (std::size_t j = i + 1; j < n; ++j)
                       theta.set(i, j, pair_moments(c.pair, i, j).theta);
                 },
                 [&](const AntisymmetricComposition& c) {
                   const ScalarMoments mo = scalar_moments(c.entry);
                   if (mo.mean != 0.0)
                     throw Error(ErrorCode::invalid_spec,
                                 "entry: exact expectations need a zero-mean entry law");
                   for (std::size_t i = 0; i < n; ++i)
                     for (std::size_t j = i + 1; j < n; ++j) theta.set(i, j, mo.variance);
                 },
                 [](const auto&) {
                   throw Error(ErrorCode::invalid_spec,
                               "composition: exact expectations need independent zero-mean "
                               "antagonistic pairs");
                 },
             },
             spec.composition);
  return theta;
}

double Functional::operator()(const RealMatrix& m) const {
  switch (kind) {
    case Kind::det:
      return determinant(m);
    case Kind::pf_pf_transpose:
      return pfaffian(m) * pfaffian(m.transpose());
    case Kind::char_poly_at: {
      RealMatrix shifted = -m;
      shifted.diagonal().array() += z;
      return determinant(shifted);
    }
    case Kind::trace_square:
      return (m.array() * m.transpose().array()).sum();
  }
  return 0.0;
}

Functional parse_functional(std::string_view name, double z) {
  if (name == "det") return {Functional::Kind::det, z};
  if (name == "pfpf") return {Functional::Kind::pf_pf_transpose, z};
  if (name == "charpoly") return {Functional::Kind::char_poly_at, z};
  if (name == "trace2") return {Functional::Kind::trace_square, z};
  throw Error(ErrorCode::invalid_argument,
              "unknown functional '" + std::string(name) + "' (det, pfpf, charpoly, trace2)");
}

std::string functional_name(const Functional& f) {
  switch (f.kind) {
    case Functional::Kind::det: return "det";
    case Functional::Kind::pf_pf_transpose: return "pfpf";
    case Functional::Kind::char_poly_at: return "charpoly";
    case Functional::Kind::trace_square: return "trace2";
  }
  return "?";
}

double exact_expectation(const ThetaArray& theta, const Functional& f) {
  const std::size_t n = theta.n();
  switch (f.kind) {
    case Functional::Kind::det:
      return expected_det(theta);
    case Functional::Kind::pf_pf_transpose:
      if (n % 2 == 1) return 0.0;
      return ((n / 2) % 2 == 0 ? 1.0 : -1.0) * expected_det(theta);
    case Functional::Kind::char_poly_at:
      return expected_char_poly(theta)(f.z);
    case Functional::Kind::trace_square:
      return -2.0 * theta.total();
  }
  return 0.0;
}

Estimate mc_expect(const EnsembleSpec& spec, const Functional& f, std::size_t trials,
                   unsigned threads) {
  validate(spec);
  if (trials < 2) throw Error(ErrorCode::invalid_argument, "need at least 2 trials");
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t t) { values[t] = f(sample_matrix(spec, t)); });

  CompensatedSum sum;
  for (double v : values) sum += v;
  const double mean = sum.value() / static_cast<double>(trials);
  CompensatedSum sq;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double var = sq.value() / static_cast<double>(trials - 1);
  return Estimate{mean, std::sqrt(var / static_cast<double>(trials)), trials, spec.seed};
}

}  // namespace antag
