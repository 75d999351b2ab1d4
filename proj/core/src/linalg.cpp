#include "sectorial/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace sectorial {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

LinearMap LinearMap::from_matrix(const Matrix& m) {
  LinearMap op;
  op.rows = m.rows();
  op.cols = m.cols();
  op.apply = [m](const Vector& x) -> Vector { return m * x; };
  op.apply_adjoint = [m](const Vector& y) -> Vector { return m.adjoint() * y; };
  return op;
}

namespace {

void reorthogonalize(Vector& w, const std::vector<Vector>& basis) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) w -= b * b.dot(w);
  }
}

// Largest eigenvalue of B^T B for the upper bidiagonal B with diagonal
// `alphas` and superdiagonal `betas` (tridiagonal, so no dense SVD).
double gram_top(const std::vector<double>& alphas, const std::vector<double>& betas, Eigen::VectorXd* vector) {
  const auto k = static_cast<Eigen::Index>(alphas.size());
  Eigen::VectorXd diag(k);
  Eigen::VectorXd off(std::max<Eigen::Index>(k - 1, 0));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double a = alphas[static_cast<std::size_t>(i)];
    const double b = i > 0 ? betas[static_cast<std::size_t>(i - 1)] : 0.0;
    diag(i) = a * a + b * b;
    if (i + 1 < k) off(i) = a * betas[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (vector) *vector = es.eigenvectors().col(k - 1);
  return std::max(es.eigenvalues()(k - 1), 0.0);
}

}  // namespace

LanczosResult largest_singular_value(const LinearMap& op, int max_iterations, double rel_tol) {
  LanczosResult out;
  const Eigen::Index n = op.cols;
  if (n == 0 || op.rows == 0) return out;

  Rng rng = make_stream(0x5eedULL, 0);
  Vector v = complex_gaussian(n, rng);
  v /= v.norm();

  std::vector<Vector> us;
  std::vector<Vector> vs;
  std::vector<double> alphas;
  std::vector<double> betas;
  vs.push_back(v);

  const int kmax = static_cast<int>(std::min<Eigen::Index>(max_iterations, std::min(n, op.rows)));
  double previous = -1.0;
  int stable = 0;
  Vector u_prev;
  double beta_prev = 0.0;

  for (int j = 0; j < kmax; ++j) {
    Vector u = op.apply(vs.back());
    if (j > 0) u -= beta_prev * u_prev;
    reorthogonalize(u, us);
    const double alpha = u.norm();
    alphas.push_back(alpha);
    if (alpha <= 1e-300) {
      out.converged = true;
      break;
    }
    u /= alpha;
    us.push_back(u);

    Vector w = op.apply_adjoint(u) - alpha * vs.back();
    reorthogonalize(w, vs);
    const double beta = w.norm();

    const double sigma = std::sqrt(gram_top(alphas, betas, nullptr));
    out.value = sigma;
    out.iterations = j + 1;

    if (previous >= 0.0 && std::abs(sigma - previous) <= rel_tol * sigma) {
      if (++stable >= 3) {
        out.converged = true;
        break;
      }
    } else {
      stable = 0;
    }
    previous = sigma;

    if (beta <= 1e-14 * std::max(1.0, sigma)) {
      out.converged = true;
      break;
    }
    betas.push_back(beta);
    vs.push_back(w / beta);
    u_prev = u;
    beta_prev = beta;
  }
  if (out.iterations == kmax) out.converged = true;
  Eigen::VectorXd coeff;
  gram_top(alphas, betas, &coeff);
  Vector right = Vector::Zero(n);
  for (Eigen::Index i = 0; i < coeff.size(); ++i) right += vs[static_cast<std::size_t>(i)] * coeff(i);
  out.right_vector = right / right.norm();
  return out;
}

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9U};
  return Rng(seq);
}

Vector complex_gaussian(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

Matrix random_unitary(Eigen::Index n, Rng& rng) {
  const Matrix g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          if (failed.load()) return;
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
            return;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sectorial
