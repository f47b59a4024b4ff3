#include "bpls/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "bpls/diagnostics.hpp"
#include "bpls/pls.hpp"
#include "bpls/predict.hpp"
#include "bpls/sampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bpls {

namespace {

constexpr std::uint64_t kTagDataSeed = 0xDA7A;
constexpr std::uint64_t kTagChainSeed = 0xC4A1;
constexpr std::uint64_t kTagIntervalSeed = 0x17E6;
constexpr std::uint64_t kTagFoldSeed = 0xF01D;

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t idx) {
  return RngStream(master).child(tag, idx).seed();
}

struct EvalInput {
  Matrix x_train, y_train, x_test, y_test;  // standardized
};

BenchRow fit_and_evaluate_bpls(const EvalInput& d, Variant kind, const ScenarioConfig& sc,
                               std::uint64_t chain_seed, std::uint64_t interval_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  ModelVariant variant;
  variant.kind = kind;
  variant.isotropic_sigma = sc.isotropic_sigma;
  variant.isotropic_psi = sc.isotropic_psi;

  ChainConfig cc = sc.chain;
  cc.seed = chain_seed;
  GibbsOptions opts;
  opts.policy = sc.policy;
  const ChainOutput chain = run_gibbs(d.x_train, d.y_train, sc.hp, variant, cc, opts);

  EvalOptions eopts;
  eopts.level = sc.level;
  eopts.interval_seed = interval_seed;
  eopts.want_intervals = true;
  eopts.want_ess = true;
  const ChainEvaluation ev = evaluate_chain(chain, d.x_test, eopts);

  BenchRow row;
  row.method = variant_name(kind);
  row.rmsep = rmsep(ev.pred.mean_std, d.y_test);
  row.rmsep_avg = row.rmsep.mean();
  row.coverage = empirical_coverage(ev.pred.lo_std, ev.pred.hi_std, d.y_test);
  row.coverage_median = median_of(row.coverage);
  row.q_hat = effective_dimension(chain.c_post_mean);
  row.ess_min = ev.ess_min;
  row.ess_ok = ev.ess_ok;
  row.q_star = chain.q_star;
  row.shrink = shrinkage_profile(chain);
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

// Paper-style baseline: an independent univariate cross-validated PLS fit
// per trait.
BenchRow fit_and_evaluate_pls(const EvalInput& d, CvRule rule, const ScenarioConfig& sc,
                              std::uint64_t cv_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::Index r = d.y_train.cols();
  BenchRow row;
  row.method = rule == CvRule::kMin ? "pls" : "pls-1s";
  row.rmsep.resize(r);
  row.q_hat.resize(r);
  for (Eigen::Index j = 0; j < r; ++j) {
    RngStream cv_rng(derive_seed(cv_seed, 0x6F0, static_cast<std::uint64_t>(j)));
    const int q_cap = static_cast<int>(std::min<Eigen::Index>(
        {static_cast<Eigen::Index>(sc.pls_q_max),
         d.x_train.rows() - d.x_train.rows() / sc.pls_folds - 1, d.x_train.cols()}));
    const Matrix ycol = d.y_train.col(j);
    const CvResult cv =
        cross_validate_q(d.x_train, ycol, std::max(q_cap, 1), sc.pls_folds, rule, cv_rng);
    const PlsModel m = fit_nipals(d.x_train, ycol, cv.q);
    const Matrix pred = predict_pls(m, d.x_test);
    row.rmsep[j] = std::sqrt((pred.col(0) - d.y_test.col(j)).squaredNorm() /
                             static_cast<double>(d.y_test.rows()));
    row.q_hat[j] = cv.q;
  }
  row.rmsep_avg = row.rmsep.mean();
  row.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::vector<BenchRow> run_jobs(
    int n_units, const std::string& unit_kind, const ScenarioConfig& sc,
    const std::function<EvalInput(int)>& make_input, std::uint64_t master,
    std::ostream* log) {
  struct Job {
    int unit;
    int method;  // index into methods list
  };
  std::vector<std::string> methods;
  for (Variant v : sc.variants) methods.push_back(variant_name(v));
  if (sc.baseline_pls) {
    methods.push_back("pls");
    methods.push_back("pls-1s");
  }
  std::vector<Job> jobs;
  for (int u = 0; u < n_units; ++u)
    for (int mth = 0; mth < static_cast<int>(methods.size()); ++mth)
      jobs.push_back({u, mth});

  std::vector<BenchRow> rows(jobs.size());
  const int workers = benchmark_workers();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (size_t jb = 0; jb < jobs.size(); ++jb) {
    const Job job = jobs[jb];
    const EvalInput input = make_input(job.unit);
    const std::uint64_t unit_tag = static_cast<std::uint64_t>(job.unit);
    BenchRow row;
    const std::string& name = methods[job.method];
    if (name == "pls" || name == "pls-1s") {
      row = fit_and_evaluate_pls(input, name == "pls" ? CvRule::kMin : CvRule::kOneSigma,
                                 sc, derive_seed(master, kTagFoldSeed, unit_tag));
    } else {
      ScenarioConfig sc_job = sc;
      if (workers > 1) sc_job.policy = ExecPolicy::kSerial;
      row = fit_and_evaluate_bpls(
          input, parse_variant(name), sc_job,
          derive_seed(master, kTagChainSeed,
                      unit_tag * 8 + static_cast<std::uint64_t>(job.method)),
          derive_seed(master, kTagIntervalSeed,
                      unit_tag * 8 + static_cast<std::uint64_t>(job.method)));
    }
    row.unit = job.unit;
    row.unit_kind = unit_kind;
    rows[jb] = row;
    if (log) {
#pragma omp critical(bpls_bench_log)
      {
        (*log) << unit_kind << ' ' << job.unit << ' ' << row.method
               << ": rmsep_avg = " << row.rmsep_avg;
        if (row.coverage.size() > 0)
          (*log) << ", coverage_median = " << row.coverage_median;
        (*log) << " (" << row.seconds << " s)\n" << std::flush;
      }
    }
  }
  return rows;
}

}  // namespace

int benchmark_workers() {
  const char* env = std::getenv("BPLS_WORKERS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin) {
  ScenarioConfig sc;
  sc.hp.q_star_override = 15;  // reference choice for the synthetic designs
  const auto kv = parse_key_values(text, origin);
  auto geti = [&](const std::string& v) { return std::stoi(v); };
  auto getd = [&](const std::string& v) { return std::stod(v); };
  for (const auto& [key, value] : kv) {
    if (key == "n_train") sc.synth.n_train = geti(value);
    else if (key == "n_test") sc.synth.n_test = geti(value);
    else if (key == "p") sc.synth.p = geti(value);
    else if (key == "r") sc.synth.r = geti(value);
    else if (key == "q_true") sc.synth.q_true = geti(value);
    else if (key == "sigma2") sc.synth.sigma2 = getd(value);
    else if (key == "psi2") sc.synth.psi2 = getd(value);
    else if (key == "sparsity") sc.synth.sparsity = parse_sparsity(value);
    else if (key == "seed") {
      sc.synth.seed = std::stoull(value);
      sc.chain.seed = sc.synth.seed;
    } else if (key == "replicates") sc.replicates = geti(value);
    else if (key == "variants") {
      sc.variants.clear();
      std::istringstream vs(value);
      std::string tok;
      while (std::getline(vs, tok, ','))
        if (!tok.empty()) sc.variants.push_back(parse_variant(tok));
    } else if (key == "baseline_pls") sc.baseline_pls = value == "true" || value == "1";
    else if (key == "isotropic_sigma") sc.isotropic_sigma = value == "true" || value == "1";
    else if (key == "isotropic_psi") sc.isotropic_psi = value == "true" || value == "1";
    else if (key == "level") sc.level = getd(value);
    else if (key == "q_star") sc.hp.q_star_override = geti(value);
    else if (key == "burn_in") sc.chain.burn_in = geti(value);
    else if (key == "keep") sc.chain.keep = geti(value);
    else if (key == "thin") sc.chain.thin = geti(value);
    else if (key == "pls_q_max") sc.pls_q_max = geti(value);
    else if (key == "pls_folds") sc.pls_folds = geti(value);
    else throw ParseError(origin + ": unknown scenario key '" + key + "'");
  }
  if (sc.variants.empty()) sc.variants.push_back(Variant::kBpls);
  return sc;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::vector<BenchRow> run_synth_scenario(const ScenarioConfig& sc, std::ostream* log) {
  const std::uint64_t master = sc.synth.seed;
  auto make_input = [&](int rep) {
    SynthConfig conf = sc.synth;
    RngStream rng(derive_seed(master, kTagDataSeed, static_cast<std::uint64_t>(rep)));
    const SynthData data = generate(conf, rng);
    const ResponseTransform none = ResponseTransform::none(conf.r);
    const Standardizer st = Standardizer::fit(data.train, none);
    EvalInput in;
    in.x_train = st.apply_x(data.train.X);
    in.y_train = st.apply_y(data.train.Y);
    in.x_test = st.apply_x(data.test.X);
    in.y_test = st.apply_y(data.test.Y);
    return in;
  };
  return run_jobs(sc.replicates, "replicate", sc, make_input, master, log);
}

FoldSpec parse_fold_spec(const std::string& s) {
  if (s == "3-1") return {4, 1};
  if (s == "2-2") return {4, 2};
  try {
    size_t pos = 0;
    const int k = std::stoi(s, &pos);
    if (pos == s.size() && k >= 2) return {k, 1};
  } catch (const std::exception&) {
  }
  throw InvalidParameter("fold spec must be '3-1', '2-2', or a fold count >= 2");
}

std::vector<BenchRow> run_fold_benchmark(const RawDataset& data,
                                         const std::vector<bool>& positive_traits,
                                         ChangepointPolicy y0_policy, const FoldSpec& spec,
                                         const ScenarioConfig& sc, std::ostream* log) {
  const int n = static_cast<int>(data.n());
  RngStream fold_rng(derive_seed(sc.chain.seed, kTagFoldSeed, 0));
  const auto folds = make_folds(n, spec.k, fold_rng);

  // Enumerate test-fold combinations.
  std::vector<std::vector<int>> combos;
  if (spec.test_folds == 1) {
    for (int f = 0; f < spec.k; ++f) combos.push_back({f});
  } else if (spec.test_folds == 2) {
    for (int f1 = 0; f1 < spec.k; ++f1)
      for (int f2 = f1 + 1; f2 < spec.k; ++f2) combos.push_back({f1, f2});
  } else {
    throw InvalidParameter("run_fold_benchmark: test_folds must be 1 or 2");
  }

  auto make_input = [&](int unit) {
    std::vector<int> test_idx;
    for (int f : combos[unit])
      test_idx.insert(test_idx.end(), folds[f].begin(), folds[f].end());
    const std::vector<int> train_idx = complement_indices(n, test_idx);
    const RawDataset train = data.rows(train_idx);
    const RawDataset test = data.rows(test_idx);
    const ResponseTransform tr =
        ResponseTransform::fit(train.Y, positive_traits, y0_policy);
    const Standardizer st = Standardizer::fit(train, tr);
    EvalInput in;
    in.x_train = st.apply_x(train.X);
    in.y_train = st.apply_y(tr.apply(train.Y));
    in.x_test = st.apply_x(test.X);
    in.y_test = st.apply_y(tr.apply(test.Y));
    return in;
  };
  return run_jobs(static_cast<int>(combos.size()), "fold", sc, make_input, sc.chain.seed,
                  log);
}

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows) {
  std::vector<std::string> methods;
  for (const auto& row : rows)
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
      methods.push_back(row.method);

  std::vector<BenchAggregate> out;
  for (const auto& method : methods) {
    std::vector<const BenchRow*> group;
    for (const auto& row : rows)
      if (row.method == method) group.push_back(&row);
    BenchAggregate a;
    a.method = method;
    a.count = static_cast<int>(group.size());
    const Eigen::Index r = group[0]->rmsep.size();
    auto mean_sd = [&](auto getter, Vector& mean, Vector& sd) {
      mean = Vector::Zero(r);
      sd = Vector::Zero(r);
      for (const BenchRow* g : group) mean += getter(*g);
      mean /= static_cast<double>(a.count);
      if (a.count > 1) {
        for (const BenchRow* g : group) {
          const Vector d = getter(*g) - mean;
          sd += d.cwiseProduct(d);
        }
        sd = (sd / static_cast<double>(a.count - 1)).cwiseSqrt();
      }
    };
    mean_sd([](const BenchRow& g) { return g.rmsep; }, a.rmsep_mean, a.rmsep_sd);
    mean_sd([](const BenchRow& g) { return Vector(g.q_hat.cast<double>()); }, a.q_hat_mean,
            a.q_hat_sd);
    double s1 = 0.0, s2 = 0.0, c1 = 0.0, c2 = 0.0;
    a.has_coverage = group[0]->coverage.size() > 0;
    for (const BenchRow* g : group) {
      s1 += g->rmsep_avg;
      s2 += g->rmsep_avg * g->rmsep_avg;
      if (a.has_coverage) {
        c1 += g->coverage_median;
        c2 += g->coverage_median * g->coverage_median;
      }
    }
    const double cnt = static_cast<double>(a.count);
    a.rmsep_avg_mean = s1 / cnt;
    a.rmsep_avg_sd =
        a.count > 1 ? std::sqrt(std::max(0.0, (s2 - s1 * s1 / cnt) / (cnt - 1))) : 0.0;
    if (a.has_coverage) {
      a.coverage_median_mean = c1 / cnt;
      a.coverage_median_sd =
          a.count > 1 ? std::sqrt(std::max(0.0, (c2 - c1 * c1 / cnt) / (cnt - 1))) : 0.0;
    }
    out.push_back(a);
  }
  return out;
}

std::string render_table(const std::vector<BenchAggregate>& aggs,
                         const std::vector<std::string>& trait_names) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << "method";
  for (const auto& t : trait_names) os << " | " << t << " RMSEP | " << t << " Q_y";
  os << " | avg RMSEP | median coverage\n";
  for (const auto& a : aggs) {
    os << a.method;
    for (Eigen::Index j = 0; j < a.rmsep_mean.size(); ++j) {
      os << " | " << a.rmsep_mean[j] << " (" << a.rmsep_sd[j] << ")";
      os << " | " << a.q_hat_mean[j] << " (" << a.q_hat_sd[j] << ")";
    }
    os << " | " << a.rmsep_avg_mean << " (" << a.rmsep_avg_sd << ")";
    if (a.has_coverage)
      os << " | " << a.coverage_median_mean << " (" << a.coverage_median_sd << ")";
    else
      os << " | --";
    os << '\n';
  }
  return os.str();
}

void write_rows_csv(const std::string& path, const std::vector<BenchRow>& rows,
                    const std::vector<std::string>& trait_names) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.precision(10);
  out << "method,unit_kind,unit";
  for (const auto& t : trait_names) out << ",rmsep_" << t << ",coverage_" << t << ",q_hat_" << t;
  out << ",rmsep_avg,coverage_median,ess_min,ess_ok,q_star,seconds\n";
  for (const auto& row : rows) {
    out << row.method << ',' << row.unit_kind << ',' << row.unit;
    for (Eigen::Index j = 0; j < row.rmsep.size(); ++j) {
      out << ',' << row.rmsep[j] << ',';
      if (row.coverage.size() > 0) out << row.coverage[j];
      out << ',' << (j < row.q_hat.size() ? row.q_hat[j] : 0);
    }
    out << ',' << row.rmsep_avg << ',';
    if (row.coverage.size() > 0) out << row.coverage_median;
    out << ',' << row.ess_min << ',' << (row.ess_ok ? 1 : 0) << ',' << row.q_star << ','
        << row.seconds << '\n';
  }
}

}  // namespace bpls
