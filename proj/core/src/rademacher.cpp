#include <cmath>
#include <random>

#include "ascent.hpp"
#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"
#include "sectorial/rademacher.hpp"

namespace sectorial {

OperatorFamily::OperatorFamily(std::vector<Matrix> members, NormSpec norm)
    : members_(std::move(members)), norm_(std::move(norm)) {
  require(!members_.empty(), Errc::InvalidArgument, "operator family must be nonempty");
  for (const Matrix& m : members_) {
    require(m.rows() == norm_.dim() && m.cols() == norm_.dim(), Errc::InvalidArgument,
            "family member dimension does not match the norm");
    require(m.allFinite(), Errc::InvalidArgument, "family member has non-finite entries");
  }
  member_norms_.resize(members_.size());
  parallel_for(members_.size(), [&](std::size_t k) { member_norms_[k] = operator_norm(members_[k], norm_).value; });
  for (const double v : member_norms_) uniform_bound_ = std::max(uniform_bound_, v);
}

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::R: return "R";
    case BoundKind::WR: return "WR";
    case BoundKind::U: return "U";
  }
  return "?";
}

namespace detail {

namespace {

double sign_of(std::uint64_t mask, int bit) { return (mask >> bit) & 1u ? -1.0 : 1.0; }

}  // namespace

Patterns single_patterns(int m, const SignConfig& sign) {
  require(m >= 1, Errc::InvalidArgument, "need at least one vector");
  const bool exhaustive = sign.mode == SearchMode::Exhaustive && m <= sign.n_max;
  Patterns p;
  p.exhaustive = exhaustive;
  if (exhaustive) {
    // First sign fixed to +1: the norm is even, so half the patterns suffice.
    const Eigen::Index rows = Eigen::Index{1} << (m - 1);
    p.S.resize(rows, m);
    for (Eigen::Index r = 0; r < rows; ++r) {
      p.S(r, 0) = 1.0;
      for (int b = 1; b < m; ++b) p.S(r, b) = sign_of(static_cast<std::uint64_t>(r), b - 1);
    }
    return p;
  }
  Rng rng = make_stream(sign.seed, static_cast<std::uint64_t>(m));
  std::bernoulli_distribution coin(0.5);
  const int rows = std::max(1, sign.samples);
  p.S.resize(rows, m);
  for (int r = 0; r < rows; ++r)
    for (int b = 0; b < m; ++b) p.S(r, b) = coin(rng) ? 1.0 : -1.0;
  return p;
}

Patterns double_patterns(int n, const SignConfig& sign) {
  require(n >= 1, Errc::InvalidArgument, "need n >= 1");
  const Eigen::Index m = static_cast<Eigen::Index>(n) * n;
  Patterns p;
  p.exhaustive = sign.mode == SearchMode::Exhaustive && n <= 3;
  auto write = [&](Eigen::Index r, const std::vector<double>& eps, const std::vector<double>& eta) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) p.S(r, static_cast<Eigen::Index>(j) * n + k) = eps[j] * eta[k];
  };
  std::vector<double> eps(static_cast<std::size_t>(n)), eta(static_cast<std::size_t>(n));
  if (p.exhaustive) {
    const Eigen::Index rows = Eigen::Index{1} << (2 * n - 1);
    p.S.resize(rows, m);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto mask = static_cast<std::uint64_t>(r);
      eps[0] = 1.0;
      for (int j = 1; j < n; ++j) eps[j] = sign_of(mask, j - 1);
      for (int k = 0; k < n; ++k) eta[k] = sign_of(mask, n - 1 + k);
      write(r, eps, eta);
    }
    return p;
  }
  Rng rng = make_stream(sign.seed, 0x10000u + static_cast<std::uint64_t>(n));
  std::bernoulli_distribution coin(0.5);
  const int rows = std::max(1, sign.samples);
  p.S.resize(rows, m);
  for (int r = 0; r < rows; ++r) {
    for (auto& e : eps) e = coin(rng) ? 1.0 : -1.0;
    for (auto& e : eta) e = coin(rng) ? 1.0 : -1.0;
    write(r, eps, eta);
  }
  return p;
}

namespace {

RealVector column_norms(const Matrix& sums, const NormSpec& norm) {
  RealVector out(sums.cols());
  for (Eigen::Index c = 0; c < sums.cols(); ++c) out(c) = norm.norm(sums.col(c));
  return out;
}

}  // namespace

double rad(const Matrix& X, const Patterns& P, const NormSpec& norm) {
  const RealVector n = column_norms(X * P.S.transpose(), norm);
  return std::sqrt(n.squaredNorm() / static_cast<double>(n.size()));
}

NormValue rad_with_gradient(const Matrix& X, const Patterns& P, const NormSpec& norm) {
  const Matrix sums = X * P.S.transpose();
  const RealVector n = column_norms(sums, norm);
  const auto N = static_cast<double>(n.size());
  NormValue out;
  out.value = std::sqrt(n.squaredNorm() / N);
  if (out.value == 0.0) {
    out.gradient = Matrix::Zero(X.rows(), X.cols());
    return out;
  }
  Matrix U(X.rows(), sums.cols());
  for (Eigen::Index c = 0; c < sums.cols(); ++c) U.col(c) = n(c) * norm.dual_vector(sums.col(c));
  out.gradient = (U * P.S) / (N * out.value);
  return out;
}

double sign_max(const Matrix& X, const Patterns& P, const NormSpec& norm) {
  return column_norms(X * P.S.transpose(), norm).maxCoeff();
}

NormValue sign_max_with_gradient(const Matrix& X, const Patterns& P, const NormSpec& norm) {
  const Matrix sums = X * P.S.transpose();
  const RealVector n = column_norms(sums, norm);
  Eigen::Index arg = 0;
  NormValue out;
  out.value = n.maxCoeff(&arg);
  out.gradient = norm.dual_vector(sums.col(arg)) * P.S.row(arg);
  return out;
}

double denominator(Denominator d, const Matrix& X, const Patterns& P, const NormSpec& norm) {
  return d == Denominator::Rad ? rad(X, P, norm) : sign_max(X, P, norm);
}

std::uint64_t mix_seed(std::uint64_t seed, const std::vector<std::size_t>& key) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  std::uint64_t h = splitmix(seed);
  for (const std::size_t k : key) h = splitmix(h ^ static_cast<std::uint64_t>(k));
  return h;
}

}  // namespace detail

RademacherMean rademacher_mean(const std::vector<Vector>& vectors, const NormSpec& norm, const SignConfig& sign) {
  require(!vectors.empty(), Errc::InvalidArgument, "rademacher_mean needs at least one vector");
  Matrix X(norm.dim(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    require(vectors[k].size() == norm.dim(), Errc::InvalidArgument, "vector dimension does not match the norm");
    X.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  const detail::Patterns P = detail::single_patterns(static_cast<int>(vectors.size()), sign);
  const Matrix sums = X * P.S.transpose();
  RealVector sq(sums.cols());
  for (Eigen::Index c = 0; c < sums.cols(); ++c) sq(c) = std::pow(norm.norm(sums.col(c)), 2);
  const auto N = static_cast<double>(sq.size());
  RademacherMean r;
  const double mean = sq.sum() / N;
  r.value = std::sqrt(mean);
  r.exhaustive = P.exhaustive;
  r.patterns = static_cast<std::uint64_t>(sq.size());
  if (!P.exhaustive && N > 1 && r.value > 0.0) {
    const double var = (sq.array() - mean).square().sum() / (N - 1.0);
    r.standard_error = std::sqrt(var / N) / (2.0 * r.value);
  }
  return r;
}

}  // namespace sectorial
