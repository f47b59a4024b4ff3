#ifndef BPLS_DIAGNOSTICS_HPP
#define BPLS_DIAGNOSTICS_HPP

#include <string>
#include <vector>

#include "bpls/linalg.hpp"
#include "bpls/sampler.hpp"

namespace bpls {

// Geyer initial-positive-sequence estimator. Deterministic; throws
// DegenerateTrace on a constant trace.
double effective_sample_size(const Vector& trace);

// Count of latent columns with |posterior-mean c| at or above
// threshold_fraction of the global max, per trait. Zero everywhere when the
// posterior mean of C is identically zero.
Eigen::VectorXi effective_dimension(const Matrix& c_post_mean,
                                    double threshold_fraction = 0.05);

Vector rmsep(const Matrix& pred, const Matrix& truth);            // per trait
double rmsep_average(const Matrix& pred, const Matrix& truth);    // mean across traits

// Fraction of truths inside the closed interval [lo, hi], per trait.
Vector empirical_coverage(const Matrix& lo, const Matrix& hi, const Matrix& truth);

double median_of(Vector v);

struct TauColumnSummary {
  double mean = 0.0;
  double sd = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

struct DiagnosticsReport {
  int q_star = 0;
  double ess_min = 0.0;
  double ess_median = 0.0;
  bool ess_ok = true;
  int ess_entries = 0;
  std::vector<TauColumnSummary> tau;
  Eigen::VectorXi q_hat;       // per trait
  bool truncation_flagged = false;
  int truncation_advice_q = 0;
  Vector rmsep_per_trait;      // empty when no truth supplied
  double rmsep_avg = 0.0;
  Vector coverage_per_trait;
  double coverage_median = 0.0;
  double level = 0.95;
  std::vector<std::string> notes;

  std::string to_text(const std::vector<std::string>& trait_names) const;
};

std::vector<TauColumnSummary> summarize_tau(const ChainOutput& chain);

// Per-column magnitude profile of the loadings (posterior mean of |w| and
// |c_eff| pooled); used to judge how sharply the tail columns shrink.
Vector shrinkage_profile(const ChainOutput& chain);

}  // namespace bpls

#endif  // BPLS_DIAGNOSTICS_HPP
