#include "bpls/transform.hpp"

#include <cmath>

#include "bpls/dataset.hpp"

namespace bpls {

double transform_response(double y_raw, double y0) {
  if (!(y_raw > 0.0)) throw InvalidParameter("transform_response: y_raw must be positive");
  if (!(y0 > 0.0)) throw InvalidParameter("transform_response: y0 must be positive");
  if (y_raw < y0) return y0 * (std::log(y_raw / y0) + 1.0);
  return y_raw;
}

double inverse_transform_response(double y, double y0) {
  if (!(y0 > 0.0))
    throw InvalidParameter("inverse_transform_response: y0 must be positive");
  if (y < y0) return y0 * std::exp(y / y0 - 1.0);
  return y;
}

ResponseTransform ResponseTransform::none(int r) {
  ResponseTransform t;
  t.positive_valued.assign(r, false);
  t.y0.assign(r, 0.0);
  return t;
}

ResponseTransform ResponseTransform::fit(const Matrix& y_train,
                                         const std::vector<bool>& positive,
                                         ChangepointPolicy policy) {
  const int r = static_cast<int>(y_train.cols());
  if (static_cast<int>(positive.size()) != r)
    throw ShapeMismatch("ResponseTransform::fit: flag count != trait count");
  ResponseTransform t;
  t.positive_valued = positive;
  t.y0.assign(r, 0.0);
  t.policy = policy;
  for (int j = 0; j < r; ++j) {
    if (!positive[j]) continue;
    const Vector col = y_train.col(j);
    const double lo = col.minCoeff();
    if (!(lo > 0.0))
      throw InvalidParameter("ResponseTransform::fit: trait " + std::to_string(j) +
                             " flagged positive but has non-positive values");
    double y0 = lo;
    if (policy == ChangepointPolicy::kMeanMinusTwoSd) {
      const double mean = col.mean();
      const double sd = std::sqrt((col.array() - mean).square().sum() /
                                  static_cast<double>(col.size() - 1));
      const double cand = mean - 2.0 * sd;
      if (cand > 0.0) y0 = cand;  // otherwise keep min-observed
    }
    t.y0[j] = y0;
  }
  return t;
}

Matrix ResponseTransform::apply(const Matrix& y_raw) const {
  Matrix out = y_raw;
  for (int j = 0; j < out.cols(); ++j) {
    if (!positive_valued[j]) continue;
    for (int i = 0; i < out.rows(); ++i) out(i, j) = transform_response(out(i, j), y0[j]);
  }
  return out;
}

Matrix ResponseTransform::invert(const Matrix& y) const {
  Matrix out = y;
  for (int j = 0; j < out.cols(); ++j) {
    if (!positive_valued[j]) continue;
    for (int i = 0; i < out.rows(); ++i)
      out(i, j) = inverse_transform_response(out(i, j), y0[j]);
  }
  return out;
}

double ResponseTransform::apply_one(int trait, double v) const {
  return positive_valued[trait] ? transform_response(v, y0[trait]) : v;
}

double ResponseTransform::invert_one(int trait, double v) const {
  return positive_valued[trait] ? inverse_transform_response(v, y0[trait]) : v;
}

namespace {

void fit_columns(const Matrix& m, const std::vector<std::string>& names, const char* side,
                 Vector& mean, Vector& sd) {
  const Eigen::Index cols = m.cols();
  mean.resize(cols);
  sd.resize(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    mean[j] = m.col(j).mean();
    const double ss = (m.col(j).array() - mean[j]).square().sum();
    sd[j] = std::sqrt(ss / static_cast<double>(m.rows() - 1));
    if (!(sd[j] > 0.0)) {
      const std::string name =
          j < static_cast<Eigen::Index>(names.size()) ? names[j] : std::to_string(j);
      throw ConstantColumn(std::string(side) + " column '" + name +
                           "' has zero sample standard deviation");
    }
  }
}

Matrix apply_cols(const Matrix& m, const Vector& mean, const Vector& sd) {
  if (m.cols() != mean.size())
    throw ShapeMismatch("Standardizer: column count mismatch");
  return (m.rowwise() - mean.transpose()).array().rowwise() / sd.transpose().array();
}

Matrix invert_cols(const Matrix& m, const Vector& mean, const Vector& sd) {
  if (m.cols() != mean.size())
    throw ShapeMismatch("Standardizer: column count mismatch");
  return (m.array().rowwise() * sd.transpose().array()).matrix().rowwise() +
         mean.transpose();
}

}  // namespace

Standardizer Standardizer::fit(const RawDataset& d, const ResponseTransform& t) {
  return fit_matrices(d.X, t.apply(d.Y), d.x_names, d.y_names);
}

Standardizer Standardizer::fit_matrices(const Matrix& x, const Matrix& y_transformed,
                                        const std::vector<std::string>& x_names,
                                        const std::vector<std::string>& y_names) {
  if (x.rows() != y_transformed.rows())
    throw ShapeMismatch("Standardizer: X and Y row counts differ");
  if (x.rows() < 2) throw DegenerateInput("Standardizer: need at least 2 rows");
  Standardizer s;
  fit_columns(x, x_names, "predictor", s.x_mean_, s.x_sd_);
  fit_columns(y_transformed, y_names, "response", s.y_mean_, s.y_sd_);
  return s;
}

Matrix Standardizer::apply_x(const Matrix& x) const { return apply_cols(x, x_mean_, x_sd_); }
Matrix Standardizer::apply_y(const Matrix& y) const { return apply_cols(y, y_mean_, y_sd_); }
Matrix Standardizer::invert_x(const Matrix& x) const { return invert_cols(x, x_mean_, x_sd_); }
Matrix Standardizer::invert_y(const Matrix& y) const { return invert_cols(y, y_mean_, y_sd_); }

void Standardizer::set(Vector xm, Vector xs, Vector ym, Vector ys) {
  x_mean_ = std::move(xm);
  x_sd_ = std::move(xs);
  y_mean_ = std::move(ym);
  y_sd_ = std::move(ys);
}

}  // namespace bpls
