#include "bpls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bpls {

double effective_sample_size(const Vector& trace) {
  const Eigen::Index n = trace.size();
  if (n < 10) throw InvalidParameter("effective_sample_size: trace too short");
  const double mean = trace.mean();
  Vector centered = trace.array() - mean;
  const double c0 = centered.squaredNorm() / static_cast<double>(n);
  if (!(c0 > 0.0)) throw DegenerateTrace("effective_sample_size: zero-variance trace");

  auto autocov = [&](Eigen::Index lag) {
    double s = 0.0;
    for (Eigen::Index t = 0; t + lag < n; ++t) s += centered[t] * centered[t + lag];
    return s / static_cast<double>(n);
  };

  // Sum of paired autocovariances while the pairs stay positive.
  double sigma2 = -c0;
  for (Eigen::Index k = 0; 2 * k + 1 < n; ++k) {
    const double pair = autocov(2 * k) + autocov(2 * k + 1);
    if (pair <= 0.0) break;
    sigma2 += 2.0 * pair;
  }
  if (sigma2 < c0) sigma2 = c0;  // never report ESS above n
  return static_cast<double>(n) * c0 / sigma2;
}

Eigen::VectorXi effective_dimension(const Matrix& c_post_mean, double threshold_fraction) {
  const double c_star = c_post_mean.cwiseAbs().maxCoeff();
  Eigen::VectorXi out = Eigen::VectorXi::Zero(c_post_mean.rows());
  if (!(c_star > 0.0)) return out;
  const double cut = threshold_fraction * c_star;
  for (Eigen::Index j = 0; j < c_post_mean.rows(); ++j)
    for (Eigen::Index k = 0; k < c_post_mean.cols(); ++k)
      if (std::abs(c_post_mean(j, k)) >= cut) ++out[j];
  return out;
}

Vector rmsep(const Matrix& pred, const Matrix& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw ShapeMismatch("rmsep: shape mismatch");
  Vector out(pred.cols());
  for (Eigen::Index j = 0; j < pred.cols(); ++j)
    out[j] = std::sqrt((pred.col(j) - truth.col(j)).squaredNorm() /
                       static_cast<double>(pred.rows()));
  return out;
}

double rmsep_average(const Matrix& pred, const Matrix& truth) {
  return rmsep(pred, truth).mean();
}

Vector empirical_coverage(const Matrix& lo, const Matrix& hi, const Matrix& truth) {
  if (lo.rows() != truth.rows() || lo.cols() != truth.cols() || hi.rows() != truth.rows() ||
      hi.cols() != truth.cols())
    throw ShapeMismatch("empirical_coverage: shape mismatch");
  Vector out = Vector::Zero(truth.cols());
  for (Eigen::Index j = 0; j < truth.cols(); ++j) {
    int inside = 0;
    for (Eigen::Index i = 0; i < truth.rows(); ++i)
      if (truth(i, j) >= lo(i, j) && truth(i, j) <= hi(i, j)) ++inside;
    out[j] = static_cast<double>(inside) / static_cast<double>(truth.rows());
  }
  return out;
}

double median_of(Vector v) {
  if (v.size() == 0) throw InvalidParameter("median_of: empty vector");
  std::sort(v.data(), v.data() + v.size());
  const Eigen::Index n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<TauColumnSummary> summarize_tau(const ChainOutput& chain) {
  std::vector<TauColumnSummary> out;
  if (chain.tau_states.empty()) return out;
  const Eigen::Index q = chain.tau_states[0].size();
  const size_t m = chain.tau_states.size();
  std::vector<double> col(m);
  for (Eigen::Index k = 0; k < q; ++k) {
    for (size_t i = 0; i < m; ++i) col[i] = chain.tau_states[i][k];
    TauColumnSummary s;
    double sum = 0.0, sumsq = 0.0;
    for (double v : col) {
      sum += v;
      sumsq += v * v;
    }
    s.mean = sum / static_cast<double>(m);
    s.sd = m > 1 ? std::sqrt(std::max(
                       0.0, (sumsq - sum * sum / static_cast<double>(m)) /
                                static_cast<double>(m - 1)))
                 : 0.0;
    std::sort(col.begin(), col.end());
    s.q05 = col[static_cast<size_t>(0.05 * (m - 1))];
    s.q95 = col[static_cast<size_t>(0.95 * (m - 1))];
    out.push_back(s);
  }
  return out;
}

Vector shrinkage_profile(const ChainOutput& chain) {
  const Eigen::Index q = chain.w_col_abs_mean.size();
  const double p = static_cast<double>(chain.proj.empty() ? 1 : chain.proj[0].cols());
  const double r = static_cast<double>(chain.c_post_mean.rows());
  Vector out(q);
  for (Eigen::Index k = 0; k < q; ++k)
    out[k] = (p * chain.w_col_abs_mean[k] + r * chain.c_col_abs_mean[k]) / (p + r);
  return out;
}

std::string DiagnosticsReport::to_text(const std::vector<std::string>& trait_names) const {
  std::ostringstream os;
  os.precision(6);
  os << "q_star = " << q_star << '\n';
  os << "truncation_advice_q = " << truncation_advice_q << '\n';
  os << "truncation_flagged = " << (truncation_flagged ? "true" : "false") << '\n';
  if (ess_entries > 0) {
    os << "ess_entries = " << ess_entries << '\n';
    os << "ess_min = " << ess_min << '\n';
    os << "ess_median = " << ess_median << '\n';
    os << "ess_ok = " << (ess_ok ? "true" : "false") << '\n';
  }
  auto name = [&](Eigen::Index j) {
    return j < static_cast<Eigen::Index>(trait_names.size()) ? trait_names[j]
                                                             : "y" + std::to_string(j + 1);
  };
  if (q_hat.size() > 0) {
    os << "# effective regression dimension per trait\n";
    for (Eigen::Index j = 0; j < q_hat.size(); ++j)
      os << "q_hat[" << name(j) << "] = " << q_hat[j] << '\n';
  }
  if (rmsep_per_trait.size() > 0) {
    os << "# standardized-scale prediction error\n";
    for (Eigen::Index j = 0; j < rmsep_per_trait.size(); ++j)
      os << "rmsep[" << name(j) << "] = " << rmsep_per_trait[j] << '\n';
    os << "rmsep_avg = " << rmsep_avg << '\n';
  }
  if (coverage_per_trait.size() > 0) {
    os << "# empirical coverage at level " << level << '\n';
    for (Eigen::Index j = 0; j < coverage_per_trait.size(); ++j)
      os << "coverage[" << name(j) << "] = " << coverage_per_trait[j] << '\n';
    os << "coverage_median = " << coverage_median << '\n';
  }
  if (!tau.empty()) {
    os << "# tau posterior per column: mean sd q05 q95\n";
    for (size_t k = 0; k < tau.size(); ++k)
      os << "tau[" << k + 1 << "] = " << tau[k].mean << ' ' << tau[k].sd << ' '
         << tau[k].q05 << ' ' << tau[k].q95 << '\n';
  }
  for (const auto& note : notes) os << "# note: " << note << '\n';
  return os.str();
}

}  // namespace bpls
