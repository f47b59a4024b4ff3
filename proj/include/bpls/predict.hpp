#ifndef BPLS_PREDICT_HPP
#define BPLS_PREDICT_HPP

#include <cstdint>
#include <vector>

#include "bpls/sampler.hpp"
#include "bpls/transform.hpp"

namespace bpls {

// Posterior-predictive output for a batch of test samples. Standardized
// (transformed) scale always; original-scale columns are filled by
// to_original_scale. Predictive variances are only reported on the
// standardized scale: the response transform is nonlinear below its
// changepoint, so only interval endpoints map across exactly.
struct PredictiveResult {
  Matrix mean_std;  // N x R
  Matrix var_std;   // N x R
  Matrix lo_std;    // N x R
  Matrix hi_std;    // N x R
  Matrix mean_orig, lo_orig, hi_orig;
  bool has_original = false;
  double level = 0.95;
};

// Exact single-state moments: mean = C_eff S_z W^T Sigma^-1 x, cov =
// C_eff S_z C_eff^T + Psi with S_z = (I + W^T Sigma^-1 W)^-1.
void predictive_moments_given_params(const ParamState& s, const ModelVariant& variant,
                                     const Vector& x_plus, Vector& mean, Matrix& cov);

struct RaoBlackwellMoments {
  Matrix mean;              // N x R
  std::vector<Matrix> cov;  // per sample, R x R
};

// Appendix-style chain-averaged moments: mean of per-state means; average
// per-state covariance plus the (population-normalized) covariance of the
// per-state means. Straightforward per-sample reference implementation.
RaoBlackwellMoments rao_blackwell_predict(const ChainOutput& chain,
                                          const Matrix& x_test_std);

// Equal-tail interval from one predictive draw per retained state.
// Deterministic given `seed`; independent of internal blocking.
void prediction_interval(const ChainOutput& chain, const Matrix& x_test_std, double level,
                         std::uint64_t seed, Matrix& lo, Matrix& hi);

// Per-state predictive means for a single sample: an M x R trace of the
// rotation-invariant prediction statistic, as used for mixing diagnostics.
Matrix predictive_mean_trace(const ChainOutput& chain, const Vector& x_plus);

enum class ModeScope { kAllParams, kCOnly };

// Point predictions at the highest-density retained state (kAllParams), or
// re-averaged over the chain with C_eff pinned at that state (kCOnly; needs
// the chain's mode path).
Matrix predict_from_mode(const ChainOutput& chain, const Matrix& x_test_std,
                         ModeScope scope);

struct ChainEvaluation {
  PredictiveResult pred;
  double ess_min = 0.0;
  double ess_median = 0.0;
  bool ess_ok = true;  // min ESS >= 1000
};

struct EvalOptions {
  double level = 0.95;
  std::uint64_t interval_seed = 0;
  bool want_intervals = true;
  bool want_ess = false;
  int block = 64;  // samples per pass; affects memory only, not results
};

// Single blocked pass producing Rao-Blackwell moments, intervals and the
// per-entry ESS gate together; this is what fit/benchmark run on test sets.
ChainEvaluation evaluate_chain(const ChainOutput& chain, const Matrix& x_test_std,
                               const EvalOptions& opts);

// Maps means and interval endpoints back to original trait units.
PredictiveResult to_original_scale(PredictiveResult pr, const Standardizer& std_,
                                   const ResponseTransform& transform);

}  // namespace bpls

#endif  // BPLS_PREDICT_HPP
