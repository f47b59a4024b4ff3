#ifndef BPLS_STATE_HPP
#define BPLS_STATE_HPP

#include <vector>

#include "bpls/config.hpp"
#include "bpls/linalg.hpp"
#include "bpls/rng.hpp"

namespace bpls {

// Complete parameter state of one Gibbs iteration. ss-BPLS and L-BPLS fields
// are present but inert for the plain variant; keeping a single state type
// keeps serialization and the chain driver uniform.
//
// Isotropic uniquenesses are stored expanded (all entries equal) so the
// conditional formulas need no special-casing.
struct ParamState {
  Matrix W;        // P x Q*
  Matrix C;        // R x Q*
  Matrix Z;        // N x Q*
  Vector sigma2;   // P
  Vector psi2;     // R
  Matrix phi;      // P x Q* local precisions for W
  Matrix phi_dot;  // R x Q* local precisions for C
  Vector delta;    // Q*, delta[0] == 1 always
  Vector tau;      // Q*, cumulative products of delta

  // ss-BPLS switches
  Eigen::VectorXi b;  // Q* in {0,1}
  double p0 = 0.5;

  // L-BPLS penalty
  double lambda2 = 1.0;

  Eigen::Index n() const { return Z.rows(); }
  Eigen::Index p() const { return W.rows(); }
  Eigen::Index r() const { return C.rows(); }
  Eigen::Index q() const { return W.cols(); }

  // tau is derived state: call after any change to delta.
  void recompute_tau();

  // C with spike-and-slab switches applied (C itself for other variants).
  Matrix effective_c(const ModelVariant& variant) const;

  // Throws InvalidParameter naming the first violated invariant.
  void check_invariants(const ModelVariant& variant) const;
};

// Draw all parameters (except Z, which has a fixed standard-normal prior and
// is drawn per row) from their priors; used for chain warm starts and for
// joint-distribution testing of the sampler.
ParamState draw_state_from_prior(int n, int p, int r, int q, const Hyperparameters& hp,
                                 const ModelVariant& variant, RngStream& rng);

}  // namespace bpls

#endif  // BPLS_STATE_HPP
