#ifndef BPLS_LINALG_HPP
#define BPLS_LINALG_HPP

#include <Eigen/Dense>
#include <utility>

#include "bpls/errors.hpp"
#include "bpls/rng.hpp"

namespace bpls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense symmetric positive-definite matrix. Symmetry is enforced at
// construction (1e-12 relative tolerance); positive-definiteness is only
// established once a factorization succeeds.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& entries() const { return m_; }

  static SpdMatrix identity(Eigen::Index n) { return SpdMatrix(Matrix::Identity(n, n)); }

 private:
  Matrix m_;
};

// Lower-triangular L with L*L^T = a. On an initial pivot failure a single
// jitter of 1e-10*trace/dim is added to the diagonal and the factorization
// retried once; a second failure throws NotPositiveDefinite.
Matrix cholesky_factor(const SpdMatrix& a);

// Same factorization and jitter policy on a raw symmetric matrix; used by
// the sampler kernels where wrapping every conditional covariance in
// SpdMatrix would cost an extra symmetry scan.
Matrix cholesky_lower(const Matrix& a, const char* context);

// Draw from N(mean, cov).
Vector sample_mvn(const Vector& mean, const SpdMatrix& cov, RngStream& rng);

// Eigenvalues (descending) of the sample covariance of the column-centered
// matrix x, with orthonormal loadings as columns. Uses the N x N Gram matrix
// when N < P, the P x P covariance otherwise.
std::pair<Vector, Matrix> pca_spectrum(const Matrix& x);

}  // namespace bpls

#endif  // BPLS_LINALG_HPP
