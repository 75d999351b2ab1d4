#include "sign_search.hpp"

#include <bit>
#include <cmath>

#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"

namespace sectorial::detail {

namespace {

double effective_exponent(const NormSpec& n) {
  if (n.kind() == NormSpec::Kind::Lp || n.points() > 1) return n.p();
  return n.q();
}

}  // namespace

MatrixNorm::MatrixNorm(const NormSpec& norm)
    : norm_(norm), exact_(norm.has_exact_operator_norm()), exponent_(effective_exponent(norm)) {}

double MatrixNorm::operator()(const Matrix& m) const {
  if (m.rows() == 1) return std::abs(m(0, 0));
  if (exact_) {
    if (exponent_ == 2.0) return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
    if (exponent_ == 1.0) return m.cwiseAbs().colwise().sum().maxCoeff();
    return m.cwiseAbs().rowwise().sum().maxCoeff();
  }
  OperatorNormOptions opts;
  opts.starts = 4;
  opts.max_iterations = 100;
  return operator_norm(m, norm_, opts).value;
}

OperatorNormResult MatrixNorm::with_witness(const Matrix& m) const {
  OperatorNormOptions opts;
  opts.starts = 4;
  opts.max_iterations = 100;
  return operator_norm(m, norm_, opts);
}

SignSupResult exhaustive_sign_sup(const std::vector<Matrix>& members, const MatrixNorm& norm) {
  SignSupResult out;
  const std::size_t n = members.size();
  if (n == 0) return out;
  require(n <= 30, Errc::InvalidArgument, "too many terms for exhaustive sign enumeration");
  std::vector<int> eps(n, 1);
  auto rebuild = [&] {
    Matrix s = Matrix::Zero(members[0].rows(), members[0].cols());
    for (std::size_t k = 0; k < n; ++k) s += static_cast<double>(eps[k]) * members[k];
    return s;
  };
  Matrix S = rebuild();
  out.value = norm(S);
  out.signs = eps;
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(i)) + 1;
    eps[bit] = -eps[bit];
    if (i % 4096 == 0) S = rebuild();
    else S += (2.0 * eps[bit]) * members[bit];
    const double v = norm(S);
    if (v > out.value) {
      out.value = v;
      out.signs = eps;
    }
  }
  out.patterns = total;
  // Re-evaluate the winner from scratch so the value matches its witness.
  eps = out.signs;
  out.value = norm(rebuild());
  return out;
}

SignSupResult randomized_sign_sup(const std::vector<Matrix>& members, const MatrixNorm& norm,
                                  const SignSearchOptions& options) {
  SignSupResult best;
  const std::size_t n = members.size();
  if (n == 0) return best;
  best.value = -1.0;
  const int starts = std::max(1, options.starts);
  std::vector<SignSupResult> results(static_cast<std::size_t>(starts));
  parallel_for(results.size(), [&](std::size_t st) {
    std::vector<int> eps(n, 1);
    if (st > 0) {
      Rng rng = make_stream(options.seed, st);
      std::bernoulli_distribution coin(0.5);
      for (auto& e : eps) e = coin(rng) ? 1 : -1;
    }
    Matrix S = Matrix::Zero(members[0].rows(), members[0].cols());
    for (std::size_t k = 0; k < n; ++k) S += static_cast<double>(eps[k]) * members[k];
    double value = norm(S);
    std::uint64_t evals = 1;
    for (int sweep = 0; sweep < options.sweeps; ++sweep) {
      bool improved = false;
      for (std::size_t k = 0; k < n; ++k) {
        const Matrix trial = S - (2.0 * eps[k]) * members[k];
        const double v = norm(trial);
        ++evals;
        if (v > value * (1.0 + 1e-14)) {
          value = v;
          S = trial;
          eps[k] = -eps[k];
          improved = true;
        }
      }
      if (!improved) break;
    }
    results[st] = {value, eps, evals};
  });
  for (const auto& r : results) {
    best.patterns += r.patterns;
    if (r.value > best.value) {
      best.value = r.value;
      best.signs = r.signs;
    }
  }
  return best;
}

double evaluate_combination(const std::vector<Matrix>& members, const MatrixNorm& norm,
                            const std::vector<cplx>& alpha) {
  if (members.empty()) return 0.0;
  Matrix S = Matrix::Zero(members[0].rows(), members[0].cols());
  for (std::size_t k = 0; k < members.size(); ++k) S += alpha[k] * members[k];
  return norm(S);
}

double phase_ascent(const std::vector<Matrix>& members, const MatrixNorm& norm, std::vector<cplx>& alpha,
                    int sweeps) {
  if (members.empty()) return 0.0;
  const NormSpec& spec = norm.spec();
  double value = evaluate_combination(members, norm, alpha);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double start = value;
    for (std::size_t k = 0; k < members.size(); ++k) {
      Matrix S = Matrix::Zero(members[0].rows(), members[0].cols());
      for (std::size_t j = 0; j < members.size(); ++j) S += alpha[j] * members[j];
      const OperatorNormResult w = norm.with_witness(S);
      const Vector y = spec.dual_vector(S * w.witness);
      const cplx c = y.dot(members[k] * w.witness);
      if (std::abs(c) == 0.0) continue;
      const cplx candidate = std::conj(c) / std::abs(c);
      std::vector<cplx> trial = alpha;
      trial[k] = candidate;
      const double v = evaluate_combination(members, norm, trial);
      if (v > value) {
        value = v;
        alpha = std::move(trial);
      }
    }
    if (value <= start * (1.0 + 1e-13)) break;
  }
  return value;
}

}  // namespace sectorial::detail
