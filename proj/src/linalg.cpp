#include "bpls/linalg.hpp"

#include <cmath>
#include <string>

namespace bpls {

SpdMatrix::SpdMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw InvalidParameter("SpdMatrix: matrix must be square and non-empty");
  const double scale = m_.cwiseAbs().maxCoeff();
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * (scale > 0.0 ? scale : 1.0))
    throw InvalidParameter("SpdMatrix: matrix is not symmetric");
  // Average out representation-level asymmetry.
  m_ = 0.5 * (m_ + m_.transpose()).eval();
}

Matrix cholesky_lower(const Matrix& a, const char* context) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // One shot of jitter, then give up. Escalating jitter would mask modeling
  // bugs upstream.
  const double jitter = 1e-10 * a.trace() / static_cast<double>(a.rows());
  Matrix aj = a;
  aj.diagonal().array() += jitter;
  llt.compute(aj);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  throw NotPositiveDefinite(std::string(context) +
                            ": matrix not positive definite after jitter");
}

Matrix cholesky_factor(const SpdMatrix& a) {
  return cholesky_lower(a.entries(), "cholesky_factor");
}

Vector sample_mvn(const Vector& mean, const SpdMatrix& cov, RngStream& rng) {
  if (mean.size() != cov.dim())
    throw ShapeMismatch("sample_mvn: mean length does not match cov dimension");
  const Matrix l = cholesky_factor(cov);
  Vector u(mean.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.normal();
  return mean + l * u;
}

std::pair<Vector, Matrix> pca_spectrum(const Matrix& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n < 2) throw DegenerateInput("pca_spectrum: need at least 2 rows");
  const Eigen::Index k = std::min(n, p);
  const double denom = static_cast<double>(n - 1);

  Vector evals(k);
  Matrix loadings(p, k);
  if (n < p) {
    // Gram route: eigenvectors u of X X^T / (n-1) give loadings X^T u / (d
    // sqrt(n-1)) with d the singular value.
    Matrix gram = x * x.transpose() / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    if (es.info() != Eigen::Success)
      throw DegenerateInput("pca_spectrum: Gram eigendecomposition failed");
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::Index src = n - 1 - j;  // ascending -> descending
      const double lam = std::max(es.eigenvalues()[src], 0.0);
      evals[j] = lam;
      Vector v = x.transpose() * es.eigenvectors().col(src);
      const double norm = v.norm();
      loadings.col(j) = norm > 1e-300 ? Vector(v / norm) : Vector::Unit(p, j % p);
    }
  } else {
    Matrix cov = x.transpose() * x / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    if (es.info() != Eigen::Success)
      throw DegenerateInput("pca_spectrum: covariance eigendecomposition failed");
    for (Eigen::Index j = 0; j < k; ++j) {
      const Eigen::Index src = p - 1 - j;
      evals[j] = std::max(es.eigenvalues()[src], 0.0);
      loadings.col(j) = es.eigenvectors().col(src);
    }
  }
  return {evals, loadings};
}

}  // namespace bpls
