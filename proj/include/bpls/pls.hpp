#ifndef BPLS_PLS_HPP
#define BPLS_PLS_HPP

#include "bpls/linalg.hpp"
#include "bpls/rng.hpp"

namespace bpls {

// Classical PLS regression fitted by NIPALS with deflation, multivariate
// responses included. Operates on standardized data.
struct PlsModel {
  int q = 0;
  Matrix weights;      // P x Q (w vectors, unit norm)
  Matrix x_loadings;   // P x Q (p vectors)
  Matrix y_loadings;   // R x Q (c vectors)
  Matrix coef;         // P x R assembled regression coefficients
};

PlsModel fit_nipals(const Matrix& x, const Matrix& y, int q);

Matrix predict_pls(const PlsModel& m, const Matrix& x_new);

// Score-propagation prediction (deflating x_new through the components);
// algebraically equal to the coefficient route and kept as a second path
// for testing.
Matrix predict_pls_by_scores(const PlsModel& m, const Matrix& x_new);

enum class CvRule { kMin, kOneSigma };

struct CvResult {
  int q = 0;
  Vector rmse_by_q;       // 1..q_max
  Vector se_by_q;         // standard error across folds
};

// K-fold cross-validated component count. Multivariate responses score by
// the unweighted average of per-trait MSEs. one_sigma picks the smallest q
// within one standard error of the minimum.
CvResult cross_validate_q(const Matrix& x, const Matrix& y, int q_max, int folds,
                          CvRule rule, RngStream& rng);

}  // namespace bpls

#endif  // BPLS_PLS_HPP
