#ifndef BPLS_CONFIG_HPP
#define BPLS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bpls {

enum class Variant { kBpls, kSsBpls, kLBpls };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct ModelVariant {
  Variant kind = Variant::kBpls;
  bool isotropic_sigma = false;
  bool isotropic_psi = false;
};

// Prior constants. Defaults follow the reference analysis; note the
// (nu1, nu2) defaults deliberately break the nu2 <= nu1 - 1 sparsity
// guideline, which validate() reports as a warning rather than an error.
struct Hyperparameters {
  double a_sigma = 2.5;
  double b_sigma = 0.1;
  double a_psi = 2.5;
  double b_psi = 1.5;
  double alpha = 2.2;  // column-increment shape; keep alpha > beta + 1
  double beta = 1.0;
  double nu1_w = 2.0;
  double nu2_w = 3.0;
  double nu1_c = 2.0;
  double nu2_c = 3.0;
  double a_lambda = 1.0;  // L-BPLS penalty prior
  double b_lambda = 1.0;
  double alpha_s = 1.0;  // spike-and-slab p0 ~ Beta(1,1) = Unif(0,1)
  double beta_s = 1.0;
  double q_star_variance_threshold = 0.99;
  std::optional<int> q_star_override;
  // The delta_k conditional shape: the written form counts only the P
  // loading rows, but the rate sums both W- and C-contributions; the
  // symmetric shape adds R(Q*-k+1)/2. Both are available; symmetric is the
  // default (and is the form that passes joint-distribution testing).
  bool delta_shape_includes_r = true;
};

struct ChainConfig {
  int burn_in = 9000;
  int keep = 21000;
  int thin = 1;
  std::uint64_t seed = 1;
  int warm_up_for_truncation = 5000;
  // Retain per-state score projections/S_z/C for posterior-mode
  // re-averaging. Off by default: costs O(states * Q* * P) memory.
  bool store_mode_path = false;

  int retained() const { return keep / thin; }
};

struct Violation {
  std::string field;
  std::string rule;
  bool hard = true;  // hard violations reject the config; soft ones warn
};

// Checks every hyperparameter invariant; returns an empty list when ok.
std::vector<Violation> validate(const Hyperparameters& hp);
std::vector<Violation> validate(const ChainConfig& cc);

// Flat `key = value` config file mirroring the field names above plus the
// chain settings and variant flags. Unknown keys are errors.
struct RunConfig {
  Hyperparameters hp;
  ChainConfig chain;
  ModelVariant variant;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);
std::string config_to_text(const RunConfig& c);

// Shared low-level parser for flat key-value files.
std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& origin);

}  // namespace bpls

#endif  // BPLS_CONFIG_HPP
