#ifndef BPLS_SAMPLER_HPP
#define BPLS_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bpls/config.hpp"
#include "bpls/kernels.hpp"
#include "bpls/linalg.hpp"
#include "bpls/rng.hpp"
#include "bpls/state.hpp"

namespace bpls {

// Retained chain: per-state predictive summaries rather than raw parameter
// states. The R x P projection and R x R covariance are all prediction ever
// needs, and at spectral-data sizes storing W chains would be prohibitive.
struct ChainOutput {
  ModelVariant variant;
  Hyperparameters hp;
  int q_star = 0;
  std::uint64_t seed = 0;
  int burn_in = 0;
  int keep = 0;
  int thin = 1;

  std::vector<Matrix> proj;      // per retained state: C_eff S_z W^T Sigma^-1 (R x P)
  std::vector<Matrix> pred_cov;  // per retained state: C_eff S_z C_eff^T + Psi (R x R)
  std::vector<double> log_joint_all;       // every iteration incl. burn-in
  std::vector<double> log_joint_retained;  // aligned with proj/pred_cov

  // Online posterior summaries.
  Matrix c_post_mean;        // R x Q*: mean of effective C
  Vector w_col_abs_mean;     // Q*: mean over p and states of |w_pq|
  Vector c_col_abs_mean;     // Q*: mean over r and states of |c_eff,rq|
  std::vector<Vector> tau_states;

  // Optional per-state pieces for posterior-mode re-averaging.
  bool has_mode_path = false;
  std::vector<Matrix> score_proj;  // Q* x P: S_z W^T Sigma^-1
  std::vector<Matrix> s_z_states;  // Q* x Q*
  std::vector<Matrix> c_states;    // R x Q* (effective C)
  std::vector<Vector> psi2_states;

  // Warm-up truncation diagnostic: highest column index (1-based) whose
  // max |w| is still >= 1% of the global max. Equal to q_star means no
  // negligible tail was seen, i.e. the truncation may be too tight.
  int truncation_advice_q = 0;
  bool truncation_flagged = false;

  double elapsed_seconds = 0.0;
  std::vector<std::string> warnings;

  int retained() const { return static_cast<int>(proj.size()); }
};

// Smallest q whose leading eigenvalues explain at least the configured
// fraction of total variance, clamped to [2, min(N-1, P)]; the override
// wins when set.
int select_truncation(const Matrix& x_std, const Hyperparameters& hp);

// Warm start: PCA loadings for W, eigenvalue remainder for the uniquenesses,
// conditional-mean scores, least-squares C, priors for the rest.
ParamState init_chain(const Matrix& x_std, const Matrix& y_std, int q_star,
                      const Hyperparameters& hp, const ModelVariant& variant,
                      RngStream& rng);

// Full-conditional updates. Each consumes the chain stream and/or per-row
// child streams keyed by (iter, block, row); `policy` switches between the
// serial reference and the OpenMP path without changing the draw.
void update_scores(ParamState& s, const Matrix& x, const Matrix& y,
                   const ModelVariant& variant, const RngStream& base,
                   std::uint64_t iter, ExecPolicy policy);
void update_loadings_w(ParamState& s, const Matrix& x, const RngStream& base,
                       std::uint64_t iter, ExecPolicy policy);
void update_loadings_c(ParamState& s, const Matrix& y, const ModelVariant& variant,
                       const RngStream& base, std::uint64_t iter, ExecPolicy policy);
// Draws the uniqueness precisions and reports the residual sums it used.
void update_uniquenesses(ParamState& s, const Matrix& x, const Matrix& y,
                         const ModelVariant& variant, const Hyperparameters& hp,
                         const RngStream& base, RngStream& chain_rng, std::uint64_t iter,
                         ExecPolicy policy, Vector& resid_x, Vector& resid_y);
void update_local_precisions(ParamState& s, const ModelVariant& variant,
                             const Hyperparameters& hp, const RngStream& base,
                             RngStream& chain_rng, std::uint64_t iter, ExecPolicy policy);
void update_global_shrinkage(ParamState& s, const Hyperparameters& hp,
                             RngStream& chain_rng);
void update_spike_slab(ParamState& s, const Matrix& y, const Hyperparameters& hp,
                       RngStream& chain_rng);
void update_lasso(ParamState& s, const Hyperparameters& hp, RngStream& chain_rng);

// Log acceptance ratio for flipping switch q of B given the current residual
// Y - Z B C^T; exposed for the detailed-balance and oracle tests.
double spike_flip_log_ratio(const ParamState& s, const Matrix& resid, int q);

// One full sweep in the fixed scan order Z, W, C, Sigma/Psi, phi,
// (phi_dot | lasso), delta/tau, (B, p0). Returns the unnormalized log joint
// density of the post-sweep state.
double gibbs_sweep(ParamState& s, const Matrix& x, const Matrix& y,
                   const ModelVariant& variant, const Hyperparameters& hp,
                   const RngStream& base, RngStream& chain_rng, std::uint64_t iter,
                   ExecPolicy policy);

// Unnormalized log p(X, Y, Z, Theta); precisions are the integration
// variables for the variance-type parameters.
double log_joint_density(const ParamState& s, const Matrix& x, const Matrix& y,
                         const ModelVariant& variant, const Hyperparameters& hp);

struct GibbsOptions {
  ExecPolicy policy = ExecPolicy::kSerial;
  bool store_mode_path = false;
};

ChainOutput run_gibbs(const Matrix& x_std, const Matrix& y_std, const Hyperparameters& hp,
                      const ModelVariant& variant, const ChainConfig& cc,
                      const GibbsOptions& opts = {});

}  // namespace bpls

#endif  // BPLS_SAMPLER_HPP
