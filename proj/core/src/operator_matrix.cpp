#include "sectorial/operator_matrix.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "sectorial/error.hpp"
#include "sectorial/linalg.hpp"

namespace sectorial {

Sector::Sector(double angle) : angle_(angle) {
  require(angle > 0.0 && angle < pi, Errc::InvalidArgument, "sector angle must lie in (0, pi)");
}

Sector Sector::from_spectrum(double angle) {
  require(angle >= 0.0 && angle < pi, Errc::InvalidArgument, "spectral angle must lie in [0, pi)");
  return Sector(angle, Unchecked{});
}

bool Sector::contains(cplx z) const noexcept {
  return z != cplx{0.0, 0.0} && std::abs(std::arg(z)) < angle_;
}

OperatorMatrix::OperatorMatrix(Matrix entries)
    : entries_(std::move(entries)), cache_(std::make_shared<Cache>()) {
  require(entries_.rows() == entries_.cols() && entries_.rows() > 0, Errc::InvalidArgument,
          "operator matrix must be square and nonempty");
  require(entries_.allFinite(), Errc::InvalidArgument, "operator matrix entries must be finite");
}

double OperatorMatrix::norm() const {
  std::call_once(cache_->norm_once, [this] { cache_->norm = spectral_norm(entries_); });
  return cache_->norm;
}

const EigenData& OperatorMatrix::eigen() const {
  std::call_once(cache_->eigen_once, [this] {
    EigenData& e = cache_->eigen;
    Eigen::ComplexEigenSolver<Matrix> solver(entries_, true);
    e.values = solver.eigenvalues();
    e.vectors = solver.eigenvectors();
    Eigen::JacobiSVD<Matrix> svd(e.vectors);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    e.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    e.diagonalizable = std::isfinite(e.condition) && e.condition < ill_conditioned_threshold;
    if (e.diagonalizable) {
      e.inverse_vectors = e.vectors.partialPivLu().inverse();
      const Matrix rebuilt = e.vectors * e.values.asDiagonal() * e.inverse_vectors;
      const double scale = std::max(norm(), std::numeric_limits<double>::min());
      e.reconstruction_error = (rebuilt - entries_).norm() / scale;
      if (e.reconstruction_error > 1e-10) e.diagonalizable = false;
    }
  });
  return cache_->eigen;
}

bool OperatorMatrix::well_diagonalizable() const { return eigen().diagonalizable; }

}  // namespace sectorial
