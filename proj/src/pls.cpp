#include "bpls/pls.hpp"

#include <cmath>

#include "bpls/dataset.hpp"

namespace bpls {

namespace {
constexpr int kMaxInner = 500;
constexpr double kInnerTol = 1e-10;
}  // namespace

PlsModel fit_nipals(const Matrix& x, const Matrix& y, int q) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  const Eigen::Index r = y.cols();
  if (y.rows() != n) throw ShapeMismatch("fit_nipals: X and Y row counts differ");
  if (q < 1 || q > std::min<Eigen::Index>(n - 1, p))
    throw InvalidParameter("fit_nipals: need 1 <= Q <= min(N-1, P)");

  Matrix ex = x;
  Matrix ey = y;
  PlsModel m;
  m.q = q;
  m.weights.resize(p, q);
  m.x_loadings.resize(p, q);
  m.y_loadings.resize(r, q);

  for (int a = 0; a < q; ++a) {
    // Start u from the y column with the largest residual variance.
    Eigen::Index start = 0;
    ey.colwise().squaredNorm().maxCoeff(&start);
    Vector u = ey.col(start);
    Vector w = Vector::Zero(p);
    Vector t(n), c(r);
    bool converged = false;
    for (int it = 0; it < kMaxInner; ++it) {
      Vector w_new = ex.transpose() * u;
      const double wn = w_new.norm();
      if (!(wn > 1e-300)) throw RankDeficient("fit_nipals: zero weight vector");
      w_new /= wn;
      t.noalias() = ex * w_new;
      const double tt = t.squaredNorm();
      if (!(tt > 1e-300)) throw RankDeficient("fit_nipals: degenerate scores");
      c.noalias() = ey.transpose() * t / tt;
      const double cc = c.squaredNorm();
      if (!(cc > 1e-300)) throw RankDeficient("fit_nipals: response fully deflated");
      u.noalias() = ey * c / cc;
      if ((w_new - w).norm() < kInnerTol) {
        w = w_new;
        converged = true;
        break;
      }
      w = w_new;
    }
    if (!converged)
      throw ConvergenceFailure("fit_nipals: inner iteration cap reached at component " +
                               std::to_string(a + 1));
    t.noalias() = ex * w;
    const double tt = t.squaredNorm();
    const Vector pl = ex.transpose() * t / tt;
    c.noalias() = ey.transpose() * t / tt;
    ex.noalias() -= t * pl.transpose();
    ey.noalias() -= t * c.transpose();
    m.weights.col(a) = w;
    m.x_loadings.col(a) = pl;
    m.y_loadings.col(a) = c;
  }

  // B = W (P^T W)^{-1} C^T maps x directly to y-hat.
  const Matrix ptw = m.x_loadings.transpose() * m.weights;  // Q x Q, upper triangular-ish
  m.coef = m.weights * ptw.partialPivLu().solve(m.y_loadings.transpose());
  return m;
}

Matrix predict_pls(const PlsModel& m, const Matrix& x_new) {
  if (x_new.cols() != m.coef.rows())
    throw ShapeMismatch("predict_pls: predictor count differs from training");
  return x_new * m.coef;
}

Matrix predict_pls_by_scores(const PlsModel& m, const Matrix& x_new) {
  if (x_new.cols() != m.weights.rows())
    throw ShapeMismatch("predict_pls_by_scores: predictor count differs from training");
  Matrix ex = x_new;
  Matrix yhat = Matrix::Zero(x_new.rows(), m.y_loadings.rows());
  for (int a = 0; a < m.q; ++a) {
    const Vector t = ex * m.weights.col(a);
    yhat.noalias() += t * m.y_loadings.col(a).transpose();
    ex.noalias() -= t * m.x_loadings.col(a).transpose();
  }
  return yhat;
}

CvResult cross_validate_q(const Matrix& x, const Matrix& y, int q_max, int folds,
                          CvRule rule, RngStream& rng) {
  const int n = static_cast<int>(x.rows());
  if (folds < 2 || folds > n) throw InvalidFolds("cross_validate_q: need 2 <= folds <= N");
  if (q_max < 1) throw InvalidParameter("cross_validate_q: q_max must be positive");

  const auto fold_idx = make_folds(n, folds, rng);
  Matrix fold_mse = Matrix::Zero(folds, q_max);  // per fold, per q

  for (int f = 0; f < folds; ++f) {
    const auto& test = fold_idx[f];
    const auto train = complement_indices(n, test);
    Matrix xtr(train.size(), x.cols()), ytr(train.size(), y.cols());
    for (size_t i = 0; i < train.size(); ++i) {
      xtr.row(i) = x.row(train[i]);
      ytr.row(i) = y.row(train[i]);
    }
    Matrix xte(test.size(), x.cols()), yte(test.size(), y.cols());
    for (size_t i = 0; i < test.size(); ++i) {
      xte.row(i) = x.row(test[i]);
      yte.row(i) = y.row(test[i]);
    }
    const int q_fit =
        std::min<int>(q_max, static_cast<int>(std::min<Eigen::Index>(xtr.rows() - 1, x.cols())));
    const PlsModel m = fit_nipals(xtr, ytr, q_fit);
    // Nested predictions: accumulate components one at a time.
    Matrix ex = xte;
    Matrix yhat = Matrix::Zero(xte.rows(), y.cols());
    for (int a = 0; a < q_max; ++a) {
      if (a < q_fit) {
        const Vector t = ex * m.weights.col(a);
        yhat.noalias() += t * m.y_loadings.col(a).transpose();
        ex.noalias() -= t * m.x_loadings.col(a).transpose();
      }
      // Unweighted average of per-trait MSEs.
      double mse = 0.0;
      for (Eigen::Index j = 0; j < y.cols(); ++j)
        mse += (yhat.col(j) - yte.col(j)).squaredNorm() / static_cast<double>(yte.rows());
      fold_mse(f, a) = mse / static_cast<double>(y.cols());
    }
  }

  CvResult out;
  out.rmse_by_q.resize(q_max);
  out.se_by_q.resize(q_max);
  for (int a = 0; a < q_max; ++a) {
    const Vector col = fold_mse.col(a);
    const double mean = col.mean();
    out.rmse_by_q[a] = std::sqrt(mean);
    const double var =
        (col.array() - mean).square().sum() / static_cast<double>(folds - 1);
    out.se_by_q[a] = std::sqrt(var / folds);  // se of the mean MSE
  }

  Eigen::Index best = 0;
  Vector mean_mse = out.rmse_by_q.array().square();
  mean_mse.minCoeff(&best);
  if (rule == CvRule::kMin) {
    out.q = static_cast<int>(best) + 1;
    return out;
  }
  const double cutoff = mean_mse[best] + out.se_by_q[best];
  for (int a = 0; a < q_max; ++a) {
    if (mean_mse[a] <= cutoff) {
      out.q = a + 1;
      return out;
    }
  }
  out.q = static_cast<int>(best) + 1;
  return out;
}

}  // namespace bpls
