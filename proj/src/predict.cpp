#include "bpls/predict.hpp"

#include <algorithm>
#include <cmath>

#include "bpls/diagnostics.hpp"

namespace bpls {

void predictive_moments_given_params(const ParamState& s, const ModelVariant& variant,
                                     const Vector& x_plus, Vector& mean, Matrix& cov) {
  if (x_plus.size() != s.p())
    throw ShapeMismatch("predictive_moments_given_params: x length != P");
  const Eigen::Index q = s.q();
  const Matrix ceff = s.effective_c(variant);
  const Matrix a = s.W.array().colwise() / s.sigma2.array();
  Matrix sz_inv = Matrix::Identity(q, q);
  sz_inv.noalias() += s.W.transpose() * a;
  Matrix l = sz_inv;
  kernels::cholesky_in_place_or_throw(l, "predictive_moments_given_params");

  Vector h = a.transpose() * x_plus;  // W^T Sigma^-1 x
  kernels::solve_lower(l, h);
  kernels::solve_lower_transposed(l, h);  // S_z W^T Sigma^-1 x
  mean = ceff * h;

  Matrix sz_ct = ceff.transpose();
  l.triangularView<Eigen::Lower>().solveInPlace(sz_ct);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(sz_ct);
  cov = ceff * sz_ct;
  cov.diagonal() += s.psi2;
  cov = 0.5 * (cov + cov.transpose()).eval();
}

RaoBlackwellMoments rao_blackwell_predict(const ChainOutput& chain,
                                          const Matrix& x_test_std) {
  const int m = chain.retained();
  if (m < 2) throw InsufficientChain("rao_blackwell_predict: need >= 2 retained states");
  const Eigen::Index n = x_test_std.rows();
  const Eigen::Index r = chain.proj[0].rows();
  if (x_test_std.cols() != chain.proj[0].cols())
    throw ShapeMismatch("rao_blackwell_predict: column count mismatch");

  Matrix cov_avg = Matrix::Zero(r, r);
  for (const auto& v : chain.pred_cov) cov_avg += v;
  cov_avg /= static_cast<double>(m);

  RaoBlackwellMoments out;
  out.mean = Matrix::Zero(n, r);
  out.cov.assign(n, Matrix::Zero(r, r));
  Matrix sum_outer = Matrix::Zero(r, r);
  Vector mu(r);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector sum = Vector::Zero(r);
    sum_outer.setZero();
    const Vector x = x_test_std.row(i);
    for (int k = 0; k < m; ++k) {
      mu.noalias() = chain.proj[k] * x;
      sum += mu;
      sum_outer.noalias() += mu * mu.transpose();
    }
    const Vector mean = sum / static_cast<double>(m);
    Matrix v_theta = sum_outer / static_cast<double>(m) - mean * mean.transpose();
    // The between-state term is PSD up to rounding; clamp the diagonal dust.
    for (Eigen::Index j = 0; j < r; ++j)
      if (v_theta(j, j) < 0.0) {
        if (v_theta(j, j) < -1e-8 * (1.0 + std::abs(mean[j])))
          throw NotPositiveDefinite("rao_blackwell_predict: negative between-state variance");
        v_theta(j, j) = 0.0;
      }
    out.mean.row(i) = mean.transpose();
    out.cov[i] = cov_avg + v_theta;
  }
  return out;
}

Matrix predictive_mean_trace(const ChainOutput& chain, const Vector& x_plus) {
  const int m = chain.retained();
  if (m < 1) throw InsufficientChain("predictive_mean_trace: empty chain");
  Matrix trace(m, chain.proj[0].rows());
  for (int k = 0; k < m; ++k) trace.row(k) = (chain.proj[k] * x_plus).transpose();
  return trace;
}

namespace {

// Type-7 empirical quantile on an unsorted copy.
double quantile_type7(std::vector<double>& v, double p) {
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo_idx = static_cast<std::ptrdiff_t>(std::floor(h));
  std::nth_element(v.begin(), v.begin() + lo_idx, v.end());
  const double lo = v[lo_idx];
  if (lo_idx + 1 >= static_cast<std::ptrdiff_t>(v.size())) return lo;
  const double hi =
      *std::min_element(v.begin() + lo_idx + 1, v.end());  // next order statistic
  return lo + (h - std::floor(h)) * (hi - lo);
}

}  // namespace

ChainEvaluation evaluate_chain(const ChainOutput& chain, const Matrix& x_test_std,
                               const EvalOptions& opts) {
  const int m = chain.retained();
  if (m < 2) throw InsufficientChain("evaluate_chain: need >= 2 retained states");
  if (!(opts.level > 0.0 && opts.level < 1.0))
    throw InvalidParameter("evaluate_chain: level must lie in (0,1)");
  const Eigen::Index n = x_test_std.rows();
  const Eigen::Index r = chain.proj[0].rows();
  if (x_test_std.cols() != chain.proj[0].cols())
    throw ShapeMismatch("evaluate_chain: column count mismatch");

  ChainEvaluation ev;
  ev.pred.level = opts.level;
  ev.pred.mean_std.resize(n, r);
  ev.pred.var_std.resize(n, r);
  ev.pred.lo_std.resize(n, r);
  ev.pred.hi_std.resize(n, r);

  Matrix cov_avg = Matrix::Zero(r, r);
  for (const auto& v : chain.pred_cov) cov_avg += v;
  cov_avg /= static_cast<double>(m);

  std::vector<Matrix> chol;
  if (opts.want_intervals) {
    chol.reserve(m);
    for (const auto& v : chain.pred_cov) {
      Matrix l = v;
      kernels::cholesky_in_place_or_throw(l, "evaluate_chain: predictive covariance");
      chol.push_back(std::move(l));
    }
  }

  const RngStream base(opts.interval_seed);
  const double p_lo = 0.5 * (1.0 - opts.level);
  const double p_hi = 0.5 * (1.0 + opts.level);
  std::vector<double> ess_values;
  if (opts.want_ess) ess_values.reserve(static_cast<size_t>(n) * r);

  const int block = std::max(1, opts.block);
  std::vector<double> trace_buf;  // (sample-in-block, trait) -> m-trace
  std::vector<double> draw_buf;
  std::vector<double> tmp(m);
  Vector mu(r), u(r), y(r);

  for (Eigen::Index b0 = 0; b0 < n; b0 += block) {
    const Eigen::Index b1 = std::min<Eigen::Index>(b0 + block, n);
    const Eigen::Index bs = b1 - b0;
    trace_buf.assign(static_cast<size_t>(bs) * r * m, 0.0);
    if (opts.want_intervals) draw_buf.assign(static_cast<size_t>(bs) * r * m, 0.0);

    for (int k = 0; k < m; ++k) {
      const Matrix means = x_test_std.middleRows(b0, bs) * chain.proj[k].transpose();
      for (Eigen::Index i = 0; i < bs; ++i) {
        for (Eigen::Index j = 0; j < r; ++j)
          trace_buf[(static_cast<size_t>(i) * r + j) * m + k] = means(i, j);
        if (opts.want_intervals) {
          RngStream rng = base.child(
              kernels::block_tag(kernels::kTagPredictive, static_cast<std::uint64_t>(k) + 1),
              static_cast<std::uint64_t>(b0 + i));
          for (Eigen::Index j = 0; j < r; ++j) u[j] = rng.normal();
          y = means.row(i).transpose();
          y.noalias() += chol[k].triangularView<Eigen::Lower>() * u;
          for (Eigen::Index j = 0; j < r; ++j)
            draw_buf[(static_cast<size_t>(i) * r + j) * m + k] = y[j];
        }
      }
    }

    for (Eigen::Index i = 0; i < bs; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) {
        const double* tr = &trace_buf[(static_cast<size_t>(i) * r + j) * m];
        double sum = 0.0, sumsq = 0.0;
        for (int k = 0; k < m; ++k) {
          sum += tr[k];
          sumsq += tr[k] * tr[k];
        }
        const double mean = sum / m;
        double v_theta = sumsq / m - mean * mean;
        if (v_theta < 0.0) v_theta = 0.0;
        ev.pred.mean_std(b0 + i, j) = mean;
        ev.pred.var_std(b0 + i, j) = cov_avg(j, j) + v_theta;
        if (opts.want_intervals) {
          const double* dr = &draw_buf[(static_cast<size_t>(i) * r + j) * m];
          tmp.assign(dr, dr + m);
          ev.pred.lo_std(b0 + i, j) = quantile_type7(tmp, p_lo);
          tmp.assign(dr, dr + m);
          ev.pred.hi_std(b0 + i, j) = quantile_type7(tmp, p_hi);
        }
        if (opts.want_ess) {
          Eigen::Map<const Vector> trv(tr, m);
          double ess;
          try {
            ess = effective_sample_size(trv);
          } catch (const DegenerateTrace&) {
            ess = static_cast<double>(m);  // constant trace: nothing to mix
          }
          ess_values.push_back(ess);
        }
      }
    }
  }

  if (opts.want_ess && !ess_values.empty()) {
    std::vector<double> sorted = ess_values;
    std::sort(sorted.begin(), sorted.end());
    ev.ess_min = sorted.front();
    ev.ess_median = sorted[sorted.size() / 2];
    ev.ess_ok = ev.ess_min >= 1000.0;
  }
  return ev;
}

void prediction_interval(const ChainOutput& chain, const Matrix& x_test_std, double level,
                         std::uint64_t seed, Matrix& lo, Matrix& hi) {
  EvalOptions opts;
  opts.level = level;
  opts.interval_seed = seed;
  opts.want_intervals = true;
  opts.want_ess = false;
  const ChainEvaluation ev = evaluate_chain(chain, x_test_std, opts);
  lo = ev.pred.lo_std;
  hi = ev.pred.hi_std;
}

Matrix predict_from_mode(const ChainOutput& chain, const Matrix& x_test_std,
                         ModeScope scope) {
  const int m = chain.retained();
  if (m < 1) throw InsufficientChain("predict_from_mode: empty chain");
  if (chain.log_joint_retained.size() != static_cast<size_t>(m))
    throw InsufficientChain("predict_from_mode: chain lacks per-state log densities");
  const auto it =
      std::max_element(chain.log_joint_retained.begin(), chain.log_joint_retained.end());
  const int mode_idx = static_cast<int>(it - chain.log_joint_retained.begin());

  if (scope == ModeScope::kAllParams)
    return x_test_std * chain.proj[mode_idx].transpose();

  if (!chain.has_mode_path || chain.score_proj.empty())
    throw InsufficientChain(
        "predict_from_mode: C-only scope requires a chain with the mode path stored");
  const Matrix& c_mode = chain.c_states[mode_idx];
  Matrix sum = Matrix::Zero(x_test_std.rows(), c_mode.rows());
  for (int k = 0; k < m; ++k)
    sum.noalias() += x_test_std * (c_mode * chain.score_proj[k]).transpose();
  return sum / static_cast<double>(m);
}

PredictiveResult to_original_scale(PredictiveResult pr, const Standardizer& std_,
                                   const ResponseTransform& transform) {
  pr.mean_orig = transform.invert(std_.invert_y(pr.mean_std));
  if (pr.lo_std.size() > 0) {
    pr.lo_orig = transform.invert(std_.invert_y(pr.lo_std));
    pr.hi_orig = transform.invert(std_.invert_y(pr.hi_std));
  }
  pr.has_original = true;
  return pr;
}

}  // namespace bpls
