#include "bpls/state.hpp"

#include <cmath>
#include <string>

namespace bpls {

void ParamState::recompute_tau() {
  tau.resize(delta.size());
  double prod = 1.0;
  for (Eigen::Index k = 0; k < delta.size(); ++k) {
    prod *= delta[k];
    tau[k] = prod;
  }
}

Matrix ParamState::effective_c(const ModelVariant& variant) const {
  if (variant.kind != Variant::kSsBpls) return C;
  Matrix cb = C;
  for (Eigen::Index q = 0; q < cb.cols(); ++q)
    if (b[q] == 0) cb.col(q).setZero();
  return cb;
}

void ParamState::check_invariants(const ModelVariant& variant) const {
  auto positive = [](const auto& a) { return (a.array() > 0.0).all(); };
  if (delta.size() != q() || tau.size() != q())
    throw InvalidParameter("ParamState: delta/tau length mismatch");
  if (delta[0] != 1.0) throw InvalidParameter("ParamState: delta[0] must equal 1");
  if (!positive(sigma2)) throw InvalidParameter("ParamState: sigma2 must be positive");
  if (!positive(psi2)) throw InvalidParameter("ParamState: psi2 must be positive");
  if (!positive(phi)) throw InvalidParameter("ParamState: phi must be positive");
  if (!positive(phi_dot)) throw InvalidParameter("ParamState: phi_dot must be positive");
  if (!positive(delta)) throw InvalidParameter("ParamState: delta must be positive");
  double prod = 1.0;
  for (Eigen::Index k = 0; k < delta.size(); ++k) {
    prod *= delta[k];
    if (tau[k] != prod)
      throw InvalidParameter("ParamState: tau[" + std::to_string(k) +
                             "] is stale; call recompute_tau()");
  }
  if (variant.kind == Variant::kSsBpls) {
    for (Eigen::Index k = 0; k < b.size(); ++k)
      if (b[k] != 0 && b[k] != 1)
        throw InvalidParameter("ParamState: b entries must be binary");
    if (!(p0 > 0.0 && p0 < 1.0))
      throw InvalidParameter("ParamState: p0 must lie in (0,1)");
  }
  if (variant.kind == Variant::kLBpls && !(lambda2 > 0.0))
    throw InvalidParameter("ParamState: lambda2 must be positive");
}

ParamState draw_state_from_prior(int n, int p, int r, int q, const Hyperparameters& hp,
                                 const ModelVariant& variant, RngStream& rng) {
  ParamState s;
  s.delta.resize(q);
  s.delta[0] = 1.0;
  for (int k = 1; k < q; ++k) s.delta[k] = rng.gamma(hp.alpha, hp.beta);
  s.recompute_tau();

  s.lambda2 = variant.kind == Variant::kLBpls ? rng.gamma(hp.a_lambda, hp.b_lambda) : 1.0;

  s.phi.resize(p, q);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < q; ++k) s.phi(j, k) = rng.gamma(hp.nu1_w, hp.nu2_w);
  s.phi_dot.resize(r, q);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < q; ++k)
      s.phi_dot(j, k) = variant.kind == Variant::kLBpls
                            ? 1.0 / rng.exponential(0.5 * s.lambda2)
                            : rng.gamma(hp.nu1_c, hp.nu2_c);

  s.W.resize(p, q);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < q; ++k)
      s.W(j, k) = rng.normal() / std::sqrt(s.phi(j, k) * s.tau[k]);
  s.C.resize(r, q);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < q; ++k)
      s.C(j, k) = rng.normal() / std::sqrt(s.phi_dot(j, k) * s.tau[k]);

  s.sigma2.resize(p);
  if (variant.isotropic_sigma) {
    s.sigma2.setConstant(1.0 / rng.gamma(hp.a_sigma, hp.b_sigma));
  } else {
    for (int j = 0; j < p; ++j) s.sigma2[j] = 1.0 / rng.gamma(hp.a_sigma, hp.b_sigma);
  }
  s.psi2.resize(r);
  if (variant.isotropic_psi) {
    s.psi2.setConstant(1.0 / rng.gamma(hp.a_psi, hp.b_psi));
  } else {
    for (int j = 0; j < r; ++j) s.psi2[j] = 1.0 / rng.gamma(hp.a_psi, hp.b_psi);
  }

  s.Z.resize(n, q);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < q; ++k) s.Z(i, k) = rng.normal();

  s.b = Eigen::VectorXi::Ones(q);
  s.p0 = 0.5;
  if (variant.kind == Variant::kSsBpls) {
    s.p0 = rng.beta(hp.alpha_s, hp.beta_s);
    for (int k = 0; k < q; ++k) s.b[k] = rng.bernoulli(s.p0);
  }
  return s;
}

}  // namespace bpls
