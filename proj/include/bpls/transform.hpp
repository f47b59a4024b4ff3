#ifndef BPLS_TRANSFORM_HPP
#define BPLS_TRANSFORM_HPP

#include <string>
#include <vector>

#include "bpls/linalg.hpp"

namespace bpls {

struct RawDataset;

/// Changepoint transform for strictly positive traits: logarithmic below the
/// changepoint y0, identity above it. Strictly increasing and C^1 on (0,inf),
/// so interval endpoints map through it exactly.
double transform_response(double y_raw, double y0);

/// Exact inverse of transform_response; total on the reals.
double inverse_transform_response(double y, double y0);

enum class ChangepointPolicy { kMinObserved, kMeanMinusTwoSd };

// Per-trait transform configuration. Traits with positive_valued=false pass
// through untouched. y0 values are fit on training data only.
struct ResponseTransform {
  std::vector<bool> positive_valued;  // length R
  std::vector<double> y0;             // length R; meaningful where positive
  ChangepointPolicy policy = ChangepointPolicy::kMinObserved;

  static ResponseTransform none(int r);
  // Fit y0 per flagged trait from the training responses. mean-2sd falls back
  // to min-observed when non-positive.
  static ResponseTransform fit(const Matrix& y_train, const std::vector<bool>& positive,
                               ChangepointPolicy policy);

  Matrix apply(const Matrix& y_raw) const;
  Matrix invert(const Matrix& y) const;
  double apply_one(int trait, double v) const;
  double invert_one(int trait, double v) const;
};

// Per-column location/scale for X and transformed Y. Fit on training folds
// only; applying the training standardizer to test folds is what keeps the
// evaluation honest.
class Standardizer {
 public:
  Standardizer() = default;

  // d's responses are transformed with t before fitting the Y side.
  static Standardizer fit(const RawDataset& d, const ResponseTransform& t);
  static Standardizer fit_matrices(const Matrix& x, const Matrix& y_transformed,
                                   const std::vector<std::string>& x_names,
                                   const std::vector<std::string>& y_names);

  Matrix apply_x(const Matrix& x) const;
  Matrix apply_y(const Matrix& y_transformed) const;
  Matrix invert_x(const Matrix& x_std) const;
  Matrix invert_y(const Matrix& y_std) const;
  double invert_y_one(int trait, double v) const { return y_mean_[trait] + y_sd_[trait] * v; }
  double apply_y_one(int trait, double v) const { return (v - y_mean_[trait]) / y_sd_[trait]; }

  const Vector& x_mean() const { return x_mean_; }
  const Vector& x_sd() const { return x_sd_; }
  const Vector& y_mean() const { return y_mean_; }
  const Vector& y_sd() const { return y_sd_; }

  void set(Vector xm, Vector xs, Vector ym, Vector ys);

 private:
  Vector x_mean_, x_sd_, y_mean_, y_sd_;
};

}  // namespace bpls

#endif  // BPLS_TRANSFORM_HPP
