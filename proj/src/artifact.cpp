#include "bpls/artifact.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bpls/version.hpp"

namespace bpls {

namespace {

static_assert(std::endian::native == std::endian::little,
              "artifact payload assumes a little-endian host");

void write_doubles(std::ostream& out, const double* p, size_t n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

void read_doubles(std::istream& in, double* p, size_t n) {
  in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw ParseError("artifact: truncated binary payload");
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back(',');
    out += v[i];
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_doubles(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  return os.str();
}

Vector parse_doubles(const std::string& s, const char* field) {
  const auto parts = split_csv(s);
  Vector v(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) {
    try {
      v[i] = std::stod(parts[i]);
    } catch (const std::exception&) {
      throw ParseError(std::string("artifact: bad number in ") + field);
    }
  }
  return v;
}

const std::string& require(const std::map<std::string, std::string>& kv,
                           const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("artifact: missing header key '" + key + "'");
  return it->second;
}

}  // namespace

void save_artifact(const std::string& path, const ModelArtifact& a) {
  const int m = a.chain.retained();
  const Eigen::Index p = m > 0 ? a.chain.proj[0].cols() : 0;
  const Eigen::Index r = m > 0 ? a.chain.proj[0].rows() : 0;
  const int q = a.q_star;

  std::ostringstream header;
  header.precision(17);
  header << "artifact_version = " << kArtifactVersion << '\n';
  header << "software_version = " << kVersion << '\n';
  header << config_to_text(a.config);
  header << "q_star = " << q << '\n';
  header << "states = " << m << '\n';
  header << "iterations = " << a.chain.log_joint_all.size() << '\n';
  header << "p = " << p << '\n';
  header << "r = " << r << '\n';
  header << "x_names = " << join(a.x_names) << '\n';
  header << "y_names = " << join(a.y_names) << '\n';
  header << "x_mean = " << join_doubles(a.standardizer.x_mean()) << '\n';
  header << "x_sd = " << join_doubles(a.standardizer.x_sd()) << '\n';
  header << "y_mean = " << join_doubles(a.standardizer.y_mean()) << '\n';
  header << "y_sd = " << join_doubles(a.standardizer.y_sd()) << '\n';
  std::string flags;
  for (bool b : a.transform.positive_valued) flags += b ? "1," : "0,";
  if (!flags.empty()) flags.pop_back();
  header << "transform_positive = " << flags << '\n';
  std::ostringstream y0s;
  y0s.precision(17);
  for (size_t i = 0; i < a.transform.y0.size(); ++i) {
    if (i) y0s << ',';
    y0s << a.transform.y0[i];
  }
  header << "transform_y0 = " << y0s.str() << '\n';
  header << "transform_policy = "
         << (a.transform.policy == ChangepointPolicy::kMinObserved ? "min" : "mean2sd")
         << '\n';
  header << "truncation_advice_q = " << a.chain.truncation_advice_q << '\n';
  header << "truncation_flagged = " << (a.chain.truncation_flagged ? "true" : "false")
         << '\n';
  const std::string header_text = header.str();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write artifact '" + path + "'");
  out << "BPLS-ARTIFACT " << kArtifactVersion << '\n';
  out << "header_bytes = " << header_text.size() << '\n';
  out << header_text;
  out << "BINARY\n";
  for (int k = 0; k < m; ++k) {
    write_doubles(out, a.chain.proj[k].data(), static_cast<size_t>(r * p));
    write_doubles(out, a.chain.pred_cov[k].data(), static_cast<size_t>(r * r));
    write_doubles(out, a.chain.tau_states[k].data(), static_cast<size_t>(q));
  }
  if (m > 0) write_doubles(out, a.chain.log_joint_retained.data(), m);
  if (!a.chain.log_joint_all.empty())
    write_doubles(out, a.chain.log_joint_all.data(), a.chain.log_joint_all.size());
  write_doubles(out, a.chain.c_post_mean.data(), static_cast<size_t>(r * q));
  write_doubles(out, a.chain.w_col_abs_mean.data(), static_cast<size_t>(q));
  write_doubles(out, a.chain.c_col_abs_mean.data(), static_cast<size_t>(q));
  if (!out) throw IoError("write failed for artifact '" + path + "'");
}

ModelArtifact load_artifact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open artifact '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("BPLS-ARTIFACT ", 0) != 0)
    throw ParseError("artifact: bad magic in '" + path + "'");
  const int file_version = std::stoi(line.substr(14));
  if (file_version != kArtifactVersion)
    throw ParseError("artifact: unsupported version " + std::to_string(file_version));
  if (!std::getline(in, line) || line.rfind("header_bytes = ", 0) != 0)
    throw ParseError("artifact: missing header size");
  const size_t header_bytes = std::stoull(line.substr(15));
  std::string header_text(header_bytes, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_bytes));
  if (!in) throw ParseError("artifact: truncated header");
  if (!std::getline(in, line) || line != "BINARY")
    throw ParseError("artifact: missing BINARY marker");

  const auto kv = parse_key_values(header_text, path);

  ModelArtifact a;
  a.version = file_version;
  a.software_version = require(kv, "software_version");

  // Rebuild the run config from the config-compatible subset of keys.
  std::string config_text;
  for (const auto& [key, value] : kv) {
    static const char* config_keys[] = {
        "variant", "isotropic_sigma", "isotropic_psi", "a_sigma", "b_sigma", "a_psi",
        "b_psi", "alpha", "beta", "nu1_w", "nu2_w", "nu1_c", "nu2_c", "a_lambda",
        "b_lambda", "alpha_s", "beta_s", "q_star_variance_threshold", "q_star_override",
        "delta_shape_includes_r", "burn_in", "keep", "thin", "seed",
        "warm_up_for_truncation", "store_mode_path"};
    for (const char* ck : config_keys)
      if (key == ck) config_text += key + " = " + value + "\n";
  }
  a.config = parse_config_text(config_text, path + " (header)");

  a.q_star = std::stoi(require(kv, "q_star"));
  const int m = std::stoi(require(kv, "states"));
  const size_t iterations = std::stoull(require(kv, "iterations"));
  const Eigen::Index p = std::stoll(require(kv, "p"));
  const Eigen::Index r = std::stoll(require(kv, "r"));
  a.x_names = split_csv(require(kv, "x_names"));
  a.y_names = split_csv(require(kv, "y_names"));
  if (static_cast<Eigen::Index>(a.x_names.size()) != p ||
      static_cast<Eigen::Index>(a.y_names.size()) != r)
    throw ParseError("artifact: name counts disagree with dimensions");

  a.standardizer.set(parse_doubles(require(kv, "x_mean"), "x_mean"),
                     parse_doubles(require(kv, "x_sd"), "x_sd"),
                     parse_doubles(require(kv, "y_mean"), "y_mean"),
                     parse_doubles(require(kv, "y_sd"), "y_sd"));

  a.transform.positive_valued.clear();
  for (const auto& f : split_csv(require(kv, "transform_positive")))
    a.transform.positive_valued.push_back(f == "1");
  const Vector y0 = parse_doubles(require(kv, "transform_y0"), "transform_y0");
  a.transform.y0.assign(y0.data(), y0.data() + y0.size());
  a.transform.policy = require(kv, "transform_policy") == "mean2sd"
                           ? ChangepointPolicy::kMeanMinusTwoSd
                           : ChangepointPolicy::kMinObserved;

  ChainOutput& ch = a.chain;
  ch.variant = a.config.variant;
  ch.hp = a.config.hp;
  ch.q_star = a.q_star;
  ch.seed = a.config.chain.seed;
  ch.burn_in = a.config.chain.burn_in;
  ch.keep = a.config.chain.keep;
  ch.thin = a.config.chain.thin;
  ch.truncation_advice_q = std::stoi(require(kv, "truncation_advice_q"));
  ch.truncation_flagged = require(kv, "truncation_flagged") == "true";

  ch.proj.resize(m, Matrix(r, p));
  ch.pred_cov.resize(m, Matrix(r, r));
  ch.tau_states.resize(m, Vector(a.q_star));
  for (int k = 0; k < m; ++k) {
    read_doubles(in, ch.proj[k].data(), static_cast<size_t>(r * p));
    read_doubles(in, ch.pred_cov[k].data(), static_cast<size_t>(r * r));
    read_doubles(in, ch.tau_states[k].data(), static_cast<size_t>(a.q_star));
  }
  ch.log_joint_retained.resize(m);
  if (m > 0) read_doubles(in, ch.log_joint_retained.data(), m);
  ch.log_joint_all.resize(iterations);
  if (iterations > 0) read_doubles(in, ch.log_joint_all.data(), iterations);
  ch.c_post_mean.resize(r, a.q_star);
  read_doubles(in, ch.c_post_mean.data(), static_cast<size_t>(r * a.q_star));
  ch.w_col_abs_mean.resize(a.q_star);
  read_doubles(in, ch.w_col_abs_mean.data(), static_cast<size_t>(a.q_star));
  ch.c_col_abs_mean.resize(a.q_star);
  read_doubles(in, ch.c_col_abs_mean.data(), static_cast<size_t>(a.q_star));
  return a;
}

}  // namespace bpls
