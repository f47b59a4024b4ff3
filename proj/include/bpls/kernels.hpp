#ifndef BPLS_KERNELS_HPP
#define BPLS_KERNELS_HPP

#include <cstdint>

#include "bpls/linalg.hpp"
#include "bpls/rng.hpp"

namespace bpls {

// Row-level sampler kernels exist in two flavors: a serial reference and an
// OpenMP version. Both draw each row's variates from a child stream derived
// from (seed, iteration, block, row), so the two policies produce
// bit-identical output; the tests hold them to that.
enum class ExecPolicy { kSerial, kParallel };

namespace kernels {

// Stream block tags.
inline constexpr std::uint64_t kTagScores = 1;
inline constexpr std::uint64_t kTagLoadingsW = 2;
inline constexpr std::uint64_t kTagLoadingsC = 3;
inline constexpr std::uint64_t kTagSigma = 4;
inline constexpr std::uint64_t kTagPhi = 5;
inline constexpr std::uint64_t kTagPredictive = 6;

inline std::uint64_t block_tag(std::uint64_t tag, std::uint64_t iter) {
  return (tag << 40) ^ iter;
}

// In-place lower-triangular Cholesky of the lower triangle of a; returns
// false on a non-positive pivot. Hand-rolled: the sampler factors one small
// Q* x Q* matrix per data row and Eigen's LLT overhead dominates at that
// size.
bool cholesky_in_place(Matrix& a);

// Retry wrapper with the standard one-shot jitter policy.
void cholesky_in_place_or_throw(Matrix& a, const char* context);

void solve_lower(const Matrix& l, Vector& x);        // L x = b (in place)
void solve_lower_transposed(const Matrix& l, Vector& x);  // L^T x = b (in place)

// Draw z_n ~ N(S h_n, S) for every row of z, where S^{-1} = l_sinv l_sinv^T.
// h is N x Q (one row per observation).
void draw_score_rows(Matrix& z, const Matrix& h, const Matrix& l_sinv,
                     const RngStream& base, std::uint64_t iter, ExecPolicy policy);

// Draw loading row j ~ N(A_j^{-1} noise_prec[j] h.col(j), A_j^{-1}) with
// A_j = diag(prior_prec.row(j)) + noise_prec[j] * gram. h is Q x J.
void draw_loading_rows(Matrix& loadings, const Matrix& gram, const Matrix& h,
                       const Vector& noise_prec, const Matrix& prior_prec,
                       const RngStream& base, std::uint64_t iter, std::uint64_t tag,
                       ExecPolicy policy);

// Squared norms of the columns of (data - scores * loadings^T).
Vector column_residual_sums(const Matrix& data, const Matrix& scores,
                            const Matrix& loadings, ExecPolicy policy);

// out(j,k) ~ Gamma(shape, rate(j,k)), one child stream per row j.
void draw_gamma_matrix(Matrix& out, double shape, const Matrix& rate,
                       const RngStream& base, std::uint64_t iter, std::uint64_t tag,
                       ExecPolicy policy);

// out[j] ~ Gamma(shape, rate[j]), one child stream per index.
void draw_gamma_vector(Vector& out, double shape, const Vector& rate,
                       const RngStream& base, std::uint64_t iter, std::uint64_t tag,
                       ExecPolicy policy);

}  // namespace kernels
}  // namespace bpls

#endif  // BPLS_KERNELS_HPP
