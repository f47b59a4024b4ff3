#ifndef BPLS_SYNTH_HPP
#define BPLS_SYNTH_HPP

#include <cstdint>

#include "bpls/dataset.hpp"
#include "bpls/linalg.hpp"
#include "bpls/rng.hpp"

namespace bpls {

enum class Sparsity { kNone, kColumnWise, kElementWise };

std::string sparsity_name(Sparsity s);
Sparsity parse_sparsity(const std::string& s);

// Factor-structured synthetic designs: loadings N(0, 1/Q) on both sides,
// standard-normal scores, isotropic noise. Train and test share the loading
// matrices and differ only in scores and noise.
struct SynthConfig {
  int n_train = 500;
  int n_test = 1000;
  int p = 100;
  int r = 4;
  int q_true = 10;
  double sigma2 = 0.1;
  double psi2 = 0.1;
  Sparsity sparsity = Sparsity::kNone;
  std::uint64_t seed = 1;
};

struct SynthData {
  RawDataset train;
  RawDataset test;
  Matrix w0;  // P x Q
  Matrix c0;  // R x Q
};

// Zero out half of C by the chosen pattern (odd columns, or half of each
// row at random) and rescale the survivors so each row's prior variance sum
// stays at 1.
Matrix sparsify_c(const Matrix& c0, Sparsity mode, RngStream& rng);

SynthData generate(const SynthConfig& config, RngStream& rng);

}  // namespace bpls

#endif  // BPLS_SYNTH_HPP
