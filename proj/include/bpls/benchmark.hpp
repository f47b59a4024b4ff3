#ifndef BPLS_BENCHMARK_HPP
#define BPLS_BENCHMARK_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bpls/config.hpp"
#include "bpls/dataset.hpp"
#include "bpls/kernels.hpp"
#include "bpls/synth.hpp"
#include "bpls/transform.hpp"

namespace bpls {

// One synthetic-study scenario: replicated generate/fit/evaluate runs for a
// set of model variants, optionally with the cross-validated PLS baseline.
struct ScenarioConfig {
  SynthConfig synth;
  int replicates = 10;
  std::vector<Variant> variants = {Variant::kBpls};
  bool isotropic_sigma = false;
  bool isotropic_psi = false;
  bool baseline_pls = false;
  double level = 0.95;
  Hyperparameters hp;
  ChainConfig chain;
  ExecPolicy policy = ExecPolicy::kSerial;
  int pls_q_max = 30;
  int pls_folds = 10;
};

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin);
ScenarioConfig load_scenario(const std::string& path);

// One fitted-and-evaluated run (one replicate or one fold combination).
struct BenchRow {
  std::string method;
  int unit = 0;            // replicate or fold-combination index
  std::string unit_kind;   // "replicate" | "fold"
  Vector rmsep;            // per trait, standardized scale
  double rmsep_avg = 0.0;
  Vector coverage;         // per trait; empty for the PLS baseline
  double coverage_median = 0.0;
  Eigen::VectorXi q_hat;
  double ess_min = 0.0;
  bool ess_ok = true;
  int q_star = 0;
  double seconds = 0.0;
  Vector shrink;           // loading-column magnitude profile
};

std::vector<BenchRow> run_synth_scenario(const ScenarioConfig& sc, std::ostream* log);

struct FoldSpec {
  int k = 4;
  int test_folds = 1;  // 3-1 => 1 of 4; 2-2 => 2 of 4
};

// Accepts "3-1", "2-2", or a fold count like "5".
FoldSpec parse_fold_spec(const std::string& s);

std::vector<BenchRow> run_fold_benchmark(const RawDataset& data,
                                         const std::vector<bool>& positive_traits,
                                         ChangepointPolicy y0_policy, const FoldSpec& spec,
                                         const ScenarioConfig& sc, std::ostream* log);

struct BenchAggregate {
  std::string method;
  int count = 0;
  Vector rmsep_mean, rmsep_sd;
  double rmsep_avg_mean = 0.0, rmsep_avg_sd = 0.0;
  double coverage_median_mean = 0.0, coverage_median_sd = 0.0;
  bool has_coverage = false;
  Vector q_hat_mean, q_hat_sd;
};

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows);

// Table in the usual `mean (sd)` layout, one method per line.
std::string render_table(const std::vector<BenchAggregate>& aggs,
                         const std::vector<std::string>& trait_names);

void write_rows_csv(const std::string& path, const std::vector<BenchRow>& rows,
                    const std::vector<std::string>& trait_names);

// Worker-pool size: BPLS_WORKERS, default 1 (jobs are fanned out with
// OpenMP; per-job chains then run with the serial kernels).
int benchmark_workers();

}  // namespace bpls

#endif  // BPLS_BENCHMARK_HPP
