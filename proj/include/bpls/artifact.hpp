#ifndef BPLS_ARTIFACT_HPP
#define BPLS_ARTIFACT_HPP

#include <string>
#include <vector>

#include "bpls/config.hpp"
#include "bpls/sampler.hpp"
#include "bpls/transform.hpp"

namespace bpls {

// Self-describing model container: a human-readable key-value header
// (hyperparameters, variant, truncation, standardizer, response transform)
// followed by a raw little-endian double payload with the per-state
// predictive summaries. Numeric header fields round-trip exactly (17
// significant digits); the payload is bit-exact by construction.
struct ModelArtifact {
  int version = 0;
  std::string software_version;
  RunConfig config;
  int q_star = 0;
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
  Standardizer standardizer;
  ResponseTransform transform;
  ChainOutput chain;
};

void save_artifact(const std::string& path, const ModelArtifact& a);
ModelArtifact load_artifact(const std::string& path);

}  // namespace bpls

#endif  // BPLS_ARTIFACT_HPP
