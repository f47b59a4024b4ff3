#include "bpls/synth.hpp"

#include <cmath>

namespace bpls {

std::string sparsity_name(Sparsity s) {
  switch (s) {
    case Sparsity::kNone: return "none";
    case Sparsity::kColumnWise: return "column_wise";
    case Sparsity::kElementWise: return "element_wise";
  }
  return "none";
}

Sparsity parse_sparsity(const std::string& s) {
  if (s == "none") return Sparsity::kNone;
  if (s == "column_wise" || s == "column-wise") return Sparsity::kColumnWise;
  if (s == "element_wise" || s == "element-wise") return Sparsity::kElementWise;
  throw InvalidParameter("unknown sparsity mode '" + s + "'");
}

Matrix sparsify_c(const Matrix& c0, Sparsity mode, RngStream& rng) {
  if (mode == Sparsity::kNone) return c0;
  const Eigen::Index r = c0.rows();
  const Eigen::Index q = c0.cols();
  const Eigen::Index zeros = q / 2;
  // Survivors rescale by sqrt(q / (q - zeros)); sqrt(2) for even q.
  const double scale = std::sqrt(static_cast<double>(q) / static_cast<double>(q - zeros));
  Matrix c = c0;
  if (mode == Sparsity::kColumnWise) {
    for (Eigen::Index k = 0; k < q; ++k) {
      if (k % 2 == 0) {  // 1-indexed odd columns
        c.col(k).setZero();
      } else {
        c.col(k) *= scale;
      }
    }
    return c;
  }
  // Element-wise: exactly `zeros` zeroed entries per row, chosen uniformly.
  for (Eigen::Index j = 0; j < r; ++j) {
    std::vector<Eigen::Index> idx(q);
    for (Eigen::Index k = 0; k < q; ++k) idx[k] = k;
    for (Eigen::Index k = q - 1; k > 0; --k) {
      const Eigen::Index pick =
          static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(k + 1));
      std::swap(idx[k], idx[pick]);
    }
    for (Eigen::Index k = 0; k < q; ++k) {
      if (k < zeros) {
        c(j, idx[k]) = 0.0;
      } else {
        c(j, idx[k]) *= scale;
      }
    }
  }
  return c;
}

SynthData generate(const SynthConfig& config, RngStream& rng) {
  const int p = config.p, r = config.r, q = config.q_true;
  if (p < 1 || r < 1 || q < 1 || config.n_train < 2 || config.n_test < 1)
    throw InvalidParameter("generate: dimensions must be positive (n_train >= 2)");
  if (!(config.sigma2 > 0.0) || !(config.psi2 > 0.0))
    throw InvalidParameter("generate: noise variances must be positive");

  const double load_sd = 1.0 / std::sqrt(static_cast<double>(q));
  SynthData d;
  d.w0.resize(p, q);
  for (int j = 0; j < p; ++j)
    for (int k = 0; k < q; ++k) d.w0(j, k) = load_sd * rng.normal();
  d.c0.resize(r, q);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < q; ++k) d.c0(j, k) = load_sd * rng.normal();
  d.c0 = sparsify_c(d.c0, config.sparsity, rng);

  const double sx = std::sqrt(config.sigma2);
  const double sy = std::sqrt(config.psi2);
  auto simulate = [&](int n) {
    RawDataset ds;
    Matrix z(n, q);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < q; ++k) z(i, k) = rng.normal();
    ds.X = z * d.w0.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) ds.X(i, j) += sx * rng.normal();
    ds.Y = z * d.c0.transpose();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < r; ++j) ds.Y(i, j) += sy * rng.normal();
    for (int j = 0; j < p; ++j) ds.x_names.push_back("x" + std::to_string(j + 1));
    for (int j = 0; j < r; ++j) ds.y_names.push_back("y" + std::to_string(j + 1));
    return ds;
  };
  d.train = simulate(config.n_train);
  d.test = simulate(config.n_test);
  return d;
}

}  // namespace bpls
