#include "bpls/kernels.hpp"

#include <atomic>
#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bpls {
namespace kernels {

bool cholesky_in_place(Matrix& a) {
  const Eigen::Index n = a.rows();
  double* d = a.data();  // column-major
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = d[j * n + j];
    for (Eigen::Index k = 0; k < j; ++k) {
      const double v = d[k * n + j];
      diag -= v * v;
    }
    if (!(diag > 0.0)) return false;
    const double ljj = std::sqrt(diag);
    d[j * n + j] = ljj;
    const double inv = 1.0 / ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = d[j * n + i];
      for (Eigen::Index k = 0; k < j; ++k) s -= d[k * n + i] * d[k * n + j];
      d[j * n + i] = s * inv;
    }
  }
  return true;
}

void cholesky_in_place_or_throw(Matrix& a, const char* context) {
  Matrix saved = a;
  if (cholesky_in_place(a)) return;
  const double jitter = 1e-10 * saved.trace() / static_cast<double>(saved.rows());
  a = saved;
  a.diagonal().array() += jitter;
  if (cholesky_in_place(a)) return;
  throw NotPositiveDefinite(std::string(context) + ": conditional covariance not SPD");
}

void solve_lower(const Matrix& l, Vector& x) {
  const Eigen::Index n = l.rows();
  const double* d = l.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = x[i];
    for (Eigen::Index k = 0; k < i; ++k) s -= d[k * n + i] * x[k];
    x[i] = s / d[i * n + i];
  }
}

void solve_lower_transposed(const Matrix& l, Vector& x) {
  const Eigen::Index n = l.rows();
  const double* d = l.data();
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (Eigen::Index k = i + 1; k < n; ++k) s -= d[i * n + k] * x[k];
    x[i] = s / d[i * n + i];
  }
}

namespace {

// Shared loop harness: runs body(j) over 0..count-1 under the requested
// policy, deferring any kernel exception until after the parallel region.
template <typename Body>
void for_each_row(Eigen::Index count, ExecPolicy policy, const Body& body) {
  if (policy == ExecPolicy::kSerial) {
    for (Eigen::Index j = 0; j < count; ++j) body(j);
    return;
  }
  std::atomic<bool> failed{false};
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < count; ++j) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(j);
    } catch (...) {
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (failed.load())
    throw NotPositiveDefinite("kernel row update failed in parallel region");
}

}  // namespace

void draw_score_rows(Matrix& z, const Matrix& h, const Matrix& l_sinv,
                     const RngStream& base, std::uint64_t iter, ExecPolicy policy) {
  const Eigen::Index n = z.rows();
  const Eigen::Index q = z.cols();
  const std::uint64_t tag = block_tag(kTagScores, iter);
  for_each_row(n, policy, [&](Eigen::Index row) {
    Vector v = h.row(row);
    solve_lower(l_sinv, v);
    solve_lower_transposed(l_sinv, v);  // v = S h_row
    RngStream rng = base.child(tag, static_cast<std::uint64_t>(row));
    Vector u(q);
    for (Eigen::Index k = 0; k < q; ++k) u[k] = rng.normal();
    solve_lower_transposed(l_sinv, u);  // cov(L^-T u) = S
    z.row(row) = (v + u).transpose();
  });
}

void draw_loading_rows(Matrix& loadings, const Matrix& gram, const Matrix& h,
                       const Vector& noise_prec, const Matrix& prior_prec,
                       const RngStream& base, std::uint64_t iter, std::uint64_t tag,
                       ExecPolicy policy) {
  const Eigen::Index rows = loadings.rows();
  const Eigen::Index q = loadings.cols();
  const std::uint64_t block = block_tag(tag, iter);
  for_each_row(rows, policy, [&](Eigen::Index j) {
    Matrix a = noise_prec[j] * gram;
    a.diagonal() += prior_prec.row(j);
    cholesky_in_place_or_throw(a, "draw_loading_rows");
    Vector mean = noise_prec[j] * h.col(j);
    solve_lower(a, mean);
    solve_lower_transposed(a, mean);
    RngStream rng = base.child(block, static_cast<std::uint64_t>(j));
    Vector u(q);
    for (Eigen::Index k = 0; k < q; ++k) u[k] = rng.normal();
    solve_lower_transposed(a, u);
    loadings.row(j) = (mean + u).transpose();
  });
}

Vector column_residual_sums(const Matrix& data, const Matrix& scores,
                            const Matrix& loadings, ExecPolicy policy) {
  const Eigen::Index cols = data.cols();
  Vector out(cols);
  for_each_row(cols, policy, [&](Eigen::Index j) {
    Vector resid = data.col(j);
    for (Eigen::Index k = 0; k < scores.cols(); ++k)
      resid.noalias() -= loadings(j, k) * scores.col(k);
    out[j] = resid.squaredNorm();
  });
  return out;
}

void draw_gamma_matrix(Matrix& out, double shape, const Matrix& rate,
                       const RngStream& base, std::uint64_t iter, std::uint64_t tag,
                       ExecPolicy policy) {
  const Eigen::Index rows = out.rows();
  const Eigen::Index cols = out.cols();
  const std::uint64_t block = block_tag(tag, iter);
  for_each_row(rows, policy, [&](Eigen::Index j) {
    RngStream rng = base.child(block, static_cast<std::uint64_t>(j));
    for (Eigen::Index k = 0; k < cols; ++k) out(j, k) = rng.gamma(shape, rate(j, k));
  });
}

void draw_gamma_vector(Vector& out, double shape, const Vector& rate,
                       const RngStream& base, std::uint64_t iter, std::uint64_t tag,
                       ExecPolicy policy) {
  const Eigen::Index n = out.size();
  const std::uint64_t block = block_tag(tag, iter);
  for_each_row(n, policy, [&](Eigen::Index j) {
    RngStream rng = base.child(block, static_cast<std::uint64_t>(j));
    out[j] = rng.gamma(shape, rate[j]);
  });
}

}  // namespace kernels
}  // namespace bpls
