#include "bpls/sampler.hpp"

#include <chrono>
#include <cmath>

namespace bpls {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

Matrix masked_gram(const Matrix& gram, const Eigen::VectorXi& b) {
  Matrix g = gram;
  for (Eigen::Index q = 0; q < b.size(); ++q) {
    if (b[q] == 0) {
      g.row(q).setZero();
      g.col(q).setZero();
    }
  }
  return g;
}

}  // namespace

int select_truncation(const Matrix& x_std, const Hyperparameters& hp) {
  const Eigen::Index n = x_std.rows();
  const Eigen::Index p = x_std.cols();
  if (hp.q_star_override) {
    const int q = *hp.q_star_override;
    if (q < 1 || q > std::min<Eigen::Index>(n, p))
      throw InvalidParameter("q_star_override outside [1, min(N, P)]");
    return q;
  }
  const auto [evals, loadings] = pca_spectrum(x_std);
  const double total = evals.sum();
  if (!(total > 0.0)) throw DegenerateInput("select_truncation: zero total variance");
  const int hi = static_cast<int>(std::min<Eigen::Index>(n - 1, p));
  int q = hi;
  double cum = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    cum += evals[i];
    if (cum / total >= hp.q_star_variance_threshold) {
      q = static_cast<int>(i) + 1;
      break;
    }
  }
  return std::max(2, std::min(q, hi));
}

ParamState init_chain(const Matrix& x_std, const Matrix& y_std, int q_star,
                      const Hyperparameters& hp, const ModelVariant& variant,
                      RngStream& rng) {
  const int n = static_cast<int>(x_std.rows());
  const int p = static_cast<int>(x_std.cols());
  const int r = static_cast<int>(y_std.cols());
  if (y_std.rows() != n) throw ShapeMismatch("init_chain: X and Y row counts differ");
  if (q_star > std::min(n, p))
    throw InvalidParameter("init_chain: q_star exceeds available PCA loadings");

  const auto [evals, loadings] = pca_spectrum(x_std);

  // Start from a full prior draw, then overwrite the pieces the warm start
  // pins down.
  ParamState s = draw_state_from_prior(n, p, r, q_star, hp, variant, rng);
  s.b = Eigen::VectorXi::Ones(q_star);

  s.W = loadings.leftCols(q_star);
  double rest = 0.0;
  int count = 0;
  for (Eigen::Index i = q_star; i < evals.size(); ++i) {
    rest += evals[i];
    ++count;
  }
  const double sigma2_init = count > 0 ? std::max(rest / count, 1e-8) : 1e-8;
  s.sigma2.setConstant(sigma2_init);

  // Z = X Sigma^-1 W S_z with S_z = (I + W^T Sigma^-1 W)^-1.
  const Matrix a = s.W / sigma2_init;  // Sigma^-1 W, isotropic at init
  Matrix sz_inv = Matrix::Identity(q_star, q_star) + s.W.transpose() * a;
  Matrix l = sz_inv;
  kernels::cholesky_in_place_or_throw(l, "init_chain: S_z");
  Matrix zt = (x_std * a).transpose();  // Q x N
  l.triangularView<Eigen::Lower>().solveInPlace(zt);
  l.transpose().triangularView<Eigen::Upper>().solveInPlace(zt);
  s.Z = zt.transpose();

  // C^T = (Z^T Z)^-1 Z^T Y.
  Matrix ztz = s.Z.transpose() * s.Z;
  Matrix lz = ztz;
  if (!kernels::cholesky_in_place(lz)) {
    ztz.diagonal().array() += 1e-10 * ztz.trace() / q_star;
    lz = ztz;
    if (!kernels::cholesky_in_place(lz))
      throw SingularScores("init_chain: Z^T Z singular after jitter");
  }
  Matrix ct = s.Z.transpose() * y_std;  // Q x R
  lz.triangularView<Eigen::Lower>().solveInPlace(ct);
  lz.transpose().triangularView<Eigen::Upper>().solveInPlace(ct);
  s.C = ct.transpose();

  return s;
}

void update_scores(ParamState& s, const Matrix& x, const Matrix& y,
                   const ModelVariant& variant, const RngStream& base,
                   std::uint64_t iter, ExecPolicy policy) {
  const Eigen::Index q = s.q();
  const Matrix ceff = s.effective_c(variant);
  const Matrix a = s.W.array().colwise() / s.sigma2.array();       // Sigma^-1 W
  const Matrix bmat = ceff.array().colwise() / s.psi2.array();     // Psi^-1 C_eff
  Matrix s_inv = Matrix::Identity(q, q);
  s_inv.noalias() += s.W.transpose() * a;
  s_inv.noalias() += ceff.transpose() * bmat;
  Matrix h = x * a;
  h.noalias() += y * bmat;
  kernels::cholesky_in_place_or_throw(s_inv, "update_scores");
  kernels::draw_score_rows(s.Z, h, s_inv, base, iter, policy);
}

void update_loadings_w(ParamState& s, const Matrix& x, const RngStream& base,
                       std::uint64_t iter, ExecPolicy policy) {
  const Matrix gram = s.Z.transpose() * s.Z;
  const Matrix h = s.Z.transpose() * x;  // Q x P
  const Matrix prior = s.phi.array().rowwise() * s.tau.transpose().array();
  const Vector noise_prec = s.sigma2.cwiseInverse();
  kernels::draw_loading_rows(s.W, gram, h, noise_prec, prior, base, iter,
                             kernels::kTagLoadingsW, policy);
}

void update_loadings_c(ParamState& s, const Matrix& y, const ModelVariant& variant,
                       const RngStream& base, std::uint64_t iter, ExecPolicy policy) {
  Matrix gram = s.Z.transpose() * s.Z;
  Matrix h = s.Z.transpose() * y;  // Q x R
  if (variant.kind == Variant::kSsBpls) {
    // Regressor is ZB: switched-off coordinates lose their data terms and
    // fall back to their prior, which keeps the (B, C) chain irreducible.
    gram = masked_gram(gram, s.b);
    for (Eigen::Index q = 0; q < s.b.size(); ++q)
      if (s.b[q] == 0) h.row(q).setZero();
  }
  const Matrix prior = s.phi_dot.array().rowwise() * s.tau.transpose().array();
  const Vector noise_prec = s.psi2.cwiseInverse();
  kernels::draw_loading_rows(s.C, gram, h, noise_prec, prior, base, iter,
                             kernels::kTagLoadingsC, policy);
}

void update_uniquenesses(ParamState& s, const Matrix& x, const Matrix& y,
                         const ModelVariant& variant, const Hyperparameters& hp,
                         const RngStream& base, RngStream& chain_rng, std::uint64_t iter,
                         ExecPolicy policy, Vector& resid_x, Vector& resid_y) {
  const double n = static_cast<double>(s.n());
  resid_x = kernels::column_residual_sums(x, s.Z, s.W, policy);
  const Matrix ceff = s.effective_c(variant);
  resid_y = kernels::column_residual_sums(y, s.Z, ceff, policy);

  if (variant.isotropic_sigma) {
    const double prec =
        chain_rng.gamma(hp.a_sigma + 0.5 * n * s.p(), hp.b_sigma + 0.5 * resid_x.sum());
    s.sigma2.setConstant(1.0 / prec);
  } else {
    Vector prec(s.p());
    kernels::draw_gamma_vector(prec, hp.a_sigma + 0.5 * n,
                               Vector(hp.b_sigma + 0.5 * resid_x.array()), base, iter,
                               kernels::kTagSigma, policy);
    s.sigma2 = prec.cwiseInverse();
  }
  if (variant.isotropic_psi) {
    const double prec =
        chain_rng.gamma(hp.a_psi + 0.5 * n * s.r(), hp.b_psi + 0.5 * resid_y.sum());
    s.psi2.setConstant(1.0 / prec);
  } else {
    for (Eigen::Index j = 0; j < s.r(); ++j)
      s.psi2[j] = 1.0 / chain_rng.gamma(hp.a_psi + 0.5 * n, hp.b_psi + 0.5 * resid_y[j]);
  }
}

void update_local_precisions(ParamState& s, const ModelVariant& variant,
                             const Hyperparameters& hp, const RngStream& base,
                             RngStream& chain_rng, std::uint64_t iter, ExecPolicy policy) {
  const Matrix rate_w =
      hp.nu2_w + 0.5 * (s.W.array().square().rowwise() * s.tau.transpose().array());
  kernels::draw_gamma_matrix(s.phi, hp.nu1_w + 0.5, rate_w, base, iter, kernels::kTagPhi,
                             policy);
  if (variant.kind == Variant::kLBpls) return;  // phi_dot owned by the LASSO block
  for (Eigen::Index j = 0; j < s.r(); ++j)
    for (Eigen::Index k = 0; k < s.q(); ++k)
      s.phi_dot(j, k) = chain_rng.gamma(
          hp.nu1_c + 0.5, hp.nu2_c + 0.5 * s.C(j, k) * s.C(j, k) * s.tau[k]);
}

void update_global_shrinkage(ParamState& s, const Hyperparameters& hp,
                             RngStream& chain_rng) {
  const Eigen::Index q = s.q();
  // Column sums of phi w^2 + phi_dot c^2; fixed through the delta scan.
  Vector col_sum(q);
  for (Eigen::Index k = 0; k < q; ++k) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < s.p(); ++j) acc += s.phi(j, k) * s.W(j, k) * s.W(j, k);
    for (Eigen::Index j = 0; j < s.r(); ++j)
      acc += s.phi_dot(j, k) * s.C(j, k) * s.C(j, k);
    col_sum[k] = acc;
  }
  const double dims =
      static_cast<double>(s.p()) + (hp.delta_shape_includes_r ? s.r() : 0);
  // delta_1 is pinned at 1; scan k = 2..Q* with tau recomputed on the fly.
  for (Eigen::Index k = 1; k < q; ++k) {
    double prefix = 1.0;  // prod_{l<k} delta_l (current values)
    for (Eigen::Index l = 0; l < k; ++l) prefix *= s.delta[l];
    double rate = hp.beta;
    double loo = prefix;  // prod_{l<=qq, l!=k} delta_l
    for (Eigen::Index qq = k; qq < q; ++qq) {
      if (qq > k) loo *= s.delta[qq];
      rate += 0.5 * loo * col_sum[qq];
    }
    const double shape = hp.alpha + 0.5 * dims * static_cast<double>(q - k);
    s.delta[k] = chain_rng.gamma(shape, rate);
  }
  s.recompute_tau();
}

double spike_flip_log_ratio(const ParamState& s, const Matrix& resid, int q) {
  const double gamma = 1.0 - 2.0 * s.b[q];
  const Vector cq = s.C.col(q);
  const Vector zq = s.Z.col(q);
  const Vector c_over_psi = cq.array() / s.psi2.array();
  const double quad = cq.dot(c_over_psi) * zq.squaredNorm();
  const double cross = c_over_psi.dot(resid.transpose() * zq);
  const double log_odds = std::log(s.p0) - std::log1p(-s.p0);
  return -0.5 * (quad - 2.0 * gamma * cross) + gamma * log_odds;
}

void update_spike_slab(ParamState& s, const Matrix& y, const Hyperparameters& hp,
                       RngStream& chain_rng) {
  const Eigen::Index q = s.q();
  ModelVariant ss;
  ss.kind = Variant::kSsBpls;
  Matrix resid = y - s.Z * s.effective_c(ss).transpose();
  for (Eigen::Index k = 0; k < q; ++k) {
    const double gamma = 1.0 - 2.0 * s.b[k];
    const double log_ratio = spike_flip_log_ratio(s, resid, static_cast<int>(k));
    if (std::log(chain_rng.uniform()) < log_ratio) {
      s.b[k] = 1 - s.b[k];
      resid.noalias() -= gamma * s.Z.col(k) * s.C.col(k).transpose();
    }
  }
  const double ones = static_cast<double>(s.b.sum());
  s.p0 = chain_rng.beta(hp.alpha_s + ones, hp.beta_s + static_cast<double>(q) - ones);
}

void update_lasso(ParamState& s, const Hyperparameters& hp, RngStream& chain_rng) {
  double inv_sum = 0.0;
  for (Eigen::Index j = 0; j < s.r(); ++j) {
    for (Eigen::Index k = 0; k < s.q(); ++k) {
      double c = std::abs(s.C(j, k));
      if (c < 1e-12) c = 1e-12;
      const double mu = std::sqrt(s.lambda2 / (s.tau[k] * c * c));
      const double draw = chain_rng.inverse_gaussian(mu, s.lambda2);
      s.phi_dot(j, k) = draw;
      inv_sum += 1.0 / draw;
    }
  }
  s.lambda2 = chain_rng.gamma(hp.a_lambda + static_cast<double>(s.r() * s.q()),
                              hp.b_lambda + 0.5 * inv_sum);
}

double log_joint_density(const ParamState& s, const Matrix& x, const Matrix& y,
                         const ModelVariant& variant, const Hyperparameters& hp) {
  const double n = static_cast<double>(s.n());
  const Eigen::Index q = s.q();
  double lp = 0.0;

  const Vector rx = kernels::column_residual_sums(x, s.Z, s.W, ExecPolicy::kSerial);
  const Matrix ceff = s.effective_c(variant);
  const Vector ry = kernels::column_residual_sums(y, s.Z, ceff, ExecPolicy::kSerial);
  for (Eigen::Index j = 0; j < s.p(); ++j)
    lp += -0.5 * n * (kLogTwoPi + std::log(s.sigma2[j])) - 0.5 * rx[j] / s.sigma2[j];
  for (Eigen::Index j = 0; j < s.r(); ++j)
    lp += -0.5 * n * (kLogTwoPi + std::log(s.psi2[j])) - 0.5 * ry[j] / s.psi2[j];
  lp += -0.5 * s.Z.squaredNorm() - 0.5 * n * q * kLogTwoPi;

  // Loading priors given the local/global precisions.
  for (Eigen::Index k = 0; k < q; ++k) {
    const double log_tau = std::log(s.tau[k]);
    for (Eigen::Index j = 0; j < s.p(); ++j) {
      const double prec = s.phi(j, k) * s.tau[k];
      lp += 0.5 * (std::log(s.phi(j, k)) + log_tau - kLogTwoPi) -
            0.5 * prec * s.W(j, k) * s.W(j, k);
    }
    for (Eigen::Index j = 0; j < s.r(); ++j) {
      const double prec = s.phi_dot(j, k) * s.tau[k];
      lp += 0.5 * (std::log(s.phi_dot(j, k)) + log_tau - kLogTwoPi) -
            0.5 * prec * s.C(j, k) * s.C(j, k);
    }
  }

  auto log_gamma_density = [](double v, double shape, double rate) {
    return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(v) -
           rate * v;
  };

  // Uniqueness precisions.
  if (variant.isotropic_sigma) {
    lp += log_gamma_density(1.0 / s.sigma2[0], hp.a_sigma, hp.b_sigma);
  } else {
    for (Eigen::Index j = 0; j < s.p(); ++j)
      lp += log_gamma_density(1.0 / s.sigma2[j], hp.a_sigma, hp.b_sigma);
  }
  if (variant.isotropic_psi) {
    lp += log_gamma_density(1.0 / s.psi2[0], hp.a_psi, hp.b_psi);
  } else {
    for (Eigen::Index j = 0; j < s.r(); ++j)
      lp += log_gamma_density(1.0 / s.psi2[j], hp.a_psi, hp.b_psi);
  }

  for (Eigen::Index j = 0; j < s.p(); ++j)
    for (Eigen::Index k = 0; k < q; ++k)
      lp += log_gamma_density(s.phi(j, k), hp.nu1_w, hp.nu2_w);

  if (variant.kind == Variant::kLBpls) {
    // phi_dot density: phi_dot^-1 ~ Exp(lambda^2/2).
    for (Eigen::Index j = 0; j < s.r(); ++j)
      for (Eigen::Index k = 0; k < q; ++k)
        lp += std::log(0.5 * s.lambda2) - 2.0 * std::log(s.phi_dot(j, k)) -
              0.5 * s.lambda2 / s.phi_dot(j, k);
    lp += log_gamma_density(s.lambda2, hp.a_lambda, hp.b_lambda);
  } else {
    for (Eigen::Index j = 0; j < s.r(); ++j)
      for (Eigen::Index k = 0; k < q; ++k)
        lp += log_gamma_density(s.phi_dot(j, k), hp.nu1_c, hp.nu2_c);
  }

  for (Eigen::Index k = 1; k < q; ++k)
    lp += log_gamma_density(s.delta[k], hp.alpha, hp.beta);

  if (variant.kind == Variant::kSsBpls) {
    const double ones = static_cast<double>(s.b.sum());
    const double qd = static_cast<double>(q);
    lp += ones * std::log(s.p0) + (qd - ones) * std::log1p(-s.p0);
    lp += (hp.alpha_s - 1.0) * std::log(s.p0) + (hp.beta_s - 1.0) * std::log1p(-s.p0);
  }
  return lp;
}

double gibbs_sweep(ParamState& s, const Matrix& x, const Matrix& y,
                   const ModelVariant& variant, const Hyperparameters& hp,
                   const RngStream& base, RngStream& chain_rng, std::uint64_t iter,
                   ExecPolicy policy) {
  Vector rx, ry;
  update_scores(s, x, y, variant, base, iter, policy);
  update_loadings_w(s, x, base, iter, policy);
  update_loadings_c(s, y, variant, base, iter, policy);
  update_uniquenesses(s, x, y, variant, hp, base, chain_rng, iter, policy, rx, ry);
  update_local_precisions(s, variant, hp, base, chain_rng, iter, policy);
  if (variant.kind == Variant::kLBpls) update_lasso(s, hp, chain_rng);
  update_global_shrinkage(s, hp, chain_rng);
  if (variant.kind == Variant::kSsBpls) update_spike_slab(s, y, hp, chain_rng);
  return log_joint_density(s, x, y, variant, hp);
}

ChainOutput run_gibbs(const Matrix& x_std, const Matrix& y_std, const Hyperparameters& hp,
                      const ModelVariant& variant, const ChainConfig& cc,
                      const GibbsOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const int r = static_cast<int>(y_std.cols());

  RngStream chain_rng(cc.seed);
  const RngStream base(cc.seed);

  const int q_star = select_truncation(x_std, hp);
  ParamState s = init_chain(x_std, y_std, q_star, hp, variant, chain_rng);

  ChainOutput out;
  out.variant = variant;
  out.hp = hp;
  out.q_star = q_star;
  out.seed = cc.seed;
  out.burn_in = cc.burn_in;
  out.keep = cc.keep;
  out.thin = cc.thin;
  out.has_mode_path = opts.store_mode_path;

  const int total = cc.burn_in + cc.keep;
  const int n_retained = cc.keep / cc.thin;
  out.proj.reserve(n_retained);
  out.pred_cov.reserve(n_retained);
  out.log_joint_all.reserve(total);
  out.log_joint_retained.reserve(n_retained);
  out.tau_states.reserve(n_retained);
  out.c_post_mean = Matrix::Zero(r, q_star);
  out.w_col_abs_mean = Vector::Zero(q_star);
  out.c_col_abs_mean = Vector::Zero(q_star);

  for (int it = 0; it < total; ++it) {
    double lp;
    try {
      lp = gibbs_sweep(s, x_std, y_std, variant, hp, base, chain_rng,
                       static_cast<std::uint64_t>(it) + 1, opts.policy);
    } catch (const Error& e) {
      throw NotPositiveDefinite("gibbs iteration " + std::to_string(it) + ": " + e.what());
    }
    if (!std::isfinite(lp))
      throw NotPositiveDefinite("gibbs iteration " + std::to_string(it) +
                                ": non-finite log joint density");
    out.log_joint_all.push_back(lp);

    if (it + 1 == cc.warm_up_for_truncation && cc.warm_up_for_truncation > 0) {
      const Vector col_max = s.W.cwiseAbs().colwise().maxCoeff();
      const double ref = col_max.maxCoeff();
      int advice = 0;
      for (int k = 0; k < q_star; ++k)
        if (col_max[k] >= 0.01 * ref) advice = k + 1;
      out.truncation_advice_q = advice;
      out.truncation_flagged = advice >= q_star;
      if (out.truncation_flagged)
        out.warnings.push_back(
            "warm-up: no negligible loading columns at Q* = " + std::to_string(q_star) +
            "; consider a larger truncation");
    }

    const int k = it - cc.burn_in;
    if (k < 0 || k % cc.thin != 0 || static_cast<int>(out.proj.size()) >= n_retained)
      continue;

    // Predictive summaries of the retained state.
    const Matrix ceff = s.effective_c(variant);
    const Matrix a = s.W.array().colwise() / s.sigma2.array();  // Sigma^-1 W
    Matrix sz_inv = Matrix::Identity(q_star, q_star);
    sz_inv.noalias() += s.W.transpose() * a;
    Matrix l = sz_inv;
    kernels::cholesky_in_place_or_throw(l, "run_gibbs: S_z");
    Matrix g = a.transpose();  // becomes S_z W^T Sigma^-1
    l.triangularView<Eigen::Lower>().solveInPlace(g);
    l.transpose().triangularView<Eigen::Upper>().solveInPlace(g);
    out.proj.push_back(ceff * g);
    Matrix sz_ct = ceff.transpose();  // Q x R, becomes S_z C_eff^T
    l.triangularView<Eigen::Lower>().solveInPlace(sz_ct);
    l.transpose().triangularView<Eigen::Upper>().solveInPlace(sz_ct);
    Matrix v = ceff * sz_ct;
    v.diagonal() += s.psi2;
    out.pred_cov.push_back(0.5 * (v + v.transpose()));
    out.log_joint_retained.push_back(lp);
    out.c_post_mean += ceff;
    out.w_col_abs_mean += s.W.cwiseAbs().colwise().mean().transpose();
    out.c_col_abs_mean += ceff.cwiseAbs().colwise().mean().transpose();
    out.tau_states.push_back(s.tau);
    if (opts.store_mode_path) {
      out.score_proj.push_back(g);
      Matrix sz = Matrix::Identity(q_star, q_star);
      l.triangularView<Eigen::Lower>().solveInPlace(sz);
      l.transpose().triangularView<Eigen::Upper>().solveInPlace(sz);
      out.s_z_states.push_back(0.5 * (sz + sz.transpose()));
      out.c_states.push_back(ceff);
      out.psi2_states.push_back(s.psi2);
    }
  }

  const double m = static_cast<double>(out.retained());
  if (m > 0) {
    out.c_post_mean /= m;
    out.w_col_abs_mean /= m;
    out.c_col_abs_mean /= m;
  }
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace bpls
