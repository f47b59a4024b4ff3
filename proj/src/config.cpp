#include "bpls/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bpls/errors.hpp"

namespace bpls {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kBpls: return "bpls";
    case Variant::kSsBpls: return "ss-bpls";
    case Variant::kLBpls: return "l-bpls";
  }
  return "bpls";
}

Variant parse_variant(const std::string& s) {
  if (s == "bpls") return Variant::kBpls;
  if (s == "ss-bpls" || s == "ss_bpls") return Variant::kSsBpls;
  if (s == "l-bpls" || s == "l_bpls") return Variant::kLBpls;
  throw InvalidParameter("unknown variant '" + s + "' (expected bpls|ss-bpls|l-bpls)");
}

namespace {

void require_positive(std::vector<Violation>& v, const char* field, double x) {
  if (!(x > 0.0)) v.push_back({field, "must be strictly positive", true});
}

}  // namespace

std::vector<Violation> validate(const Hyperparameters& hp) {
  std::vector<Violation> v;
  require_positive(v, "a_sigma", hp.a_sigma);
  require_positive(v, "b_sigma", hp.b_sigma);
  require_positive(v, "a_psi", hp.a_psi);
  require_positive(v, "b_psi", hp.b_psi);
  require_positive(v, "alpha", hp.alpha);
  require_positive(v, "beta", hp.beta);
  require_positive(v, "nu1_w", hp.nu1_w);
  require_positive(v, "nu2_w", hp.nu2_w);
  require_positive(v, "nu1_c", hp.nu1_c);
  require_positive(v, "nu2_c", hp.nu2_c);
  require_positive(v, "a_lambda", hp.a_lambda);
  require_positive(v, "b_lambda", hp.b_lambda);
  require_positive(v, "alpha_s", hp.alpha_s);
  require_positive(v, "beta_s", hp.beta_s);
  if (!(hp.a_sigma > 1.0))
    v.push_back({"a_sigma", "must exceed 1 for finite uniqueness prior moments", true});
  if (!(hp.a_psi > 1.0))
    v.push_back({"a_psi", "must exceed 1 for finite uniqueness prior moments", true});
  if (!(hp.q_star_variance_threshold > 0.0 && hp.q_star_variance_threshold < 1.0))
    v.push_back({"q_star_variance_threshold", "must lie in (0,1)", true});
  if (hp.q_star_override && *hp.q_star_override < 1)
    v.push_back({"q_star_override", "must be a positive integer", true});
  // Guidelines; the stock defaults violate the second one, so these warn
  // instead of rejecting.
  if (!(hp.alpha > hp.beta + 1.0))
    v.push_back({"alpha", "alpha > beta + 1 recommended for reliable shrinkage", false});
  if (!(hp.nu2_w <= hp.nu1_w - 1.0))
    v.push_back({"nu2_w", "nu2_w <= nu1_w - 1 recommended for sparser loadings", false});
  if (!(hp.nu2_c <= hp.nu1_c - 1.0))
    v.push_back({"nu2_c", "nu2_c <= nu1_c - 1 recommended for sparser loadings", false});
  return v;
}

std::vector<Violation> validate(const ChainConfig& cc) {
  std::vector<Violation> v;
  if (cc.burn_in < 0) v.push_back({"burn_in", "must be non-negative", true});
  if (cc.keep < 1) v.push_back({"keep", "must be positive", true});
  if (cc.thin < 1) v.push_back({"thin", "must be positive", true});
  if (cc.warm_up_for_truncation < 0)
    v.push_back({"warm_up_for_truncation", "must be non-negative", true});
  if (cc.keep / std::max(cc.thin, 1) < 1000)
    v.push_back({"keep", "keep/thin >= 1000 required for stable predictive summaries", true});
  return v;
}

std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& origin) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      const size_t b = s.find_first_not_of(" \t");
      if (b == std::string::npos) return std::string();
      const size_t e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    const std::string stripped = strip(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = strip(stripped.substr(0, eq));
    const std::string value = strip(stripped.substr(eq + 1));
    if (key.empty())
      throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      throw ParseError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "': cannot parse '" + v + "' as a number");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("config key '" + key + "': cannot parse '" + v + "' as an integer");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("config key '" + key + "': cannot parse '" + v + "' as a boolean");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig c;
  const auto kv = parse_key_values(text, origin);
  for (const auto& [key, value] : kv) {
    if (key == "a_sigma") c.hp.a_sigma = to_double(key, value);
    else if (key == "b_sigma") c.hp.b_sigma = to_double(key, value);
    else if (key == "a_psi") c.hp.a_psi = to_double(key, value);
    else if (key == "b_psi") c.hp.b_psi = to_double(key, value);
    else if (key == "alpha") c.hp.alpha = to_double(key, value);
    else if (key == "beta") c.hp.beta = to_double(key, value);
    else if (key == "nu1_w") c.hp.nu1_w = to_double(key, value);
    else if (key == "nu2_w") c.hp.nu2_w = to_double(key, value);
    else if (key == "nu1_c") c.hp.nu1_c = to_double(key, value);
    else if (key == "nu2_c") c.hp.nu2_c = to_double(key, value);
    else if (key == "a_lambda") c.hp.a_lambda = to_double(key, value);
    else if (key == "b_lambda") c.hp.b_lambda = to_double(key, value);
    else if (key == "alpha_s") c.hp.alpha_s = to_double(key, value);
    else if (key == "beta_s") c.hp.beta_s = to_double(key, value);
    else if (key == "q_star_variance_threshold")
      c.hp.q_star_variance_threshold = to_double(key, value);
    else if (key == "q_star_override")
      c.hp.q_star_override = static_cast<int>(to_int(key, value));
    else if (key == "delta_shape_includes_r")
      c.hp.delta_shape_includes_r = to_bool(key, value);
    else if (key == "burn_in") c.chain.burn_in = static_cast<int>(to_int(key, value));
    else if (key == "keep") c.chain.keep = static_cast<int>(to_int(key, value));
    else if (key == "thin") c.chain.thin = static_cast<int>(to_int(key, value));
    else if (key == "seed") c.chain.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "warm_up_for_truncation")
      c.chain.warm_up_for_truncation = static_cast<int>(to_int(key, value));
    else if (key == "store_mode_path") c.chain.store_mode_path = to_bool(key, value);
    else if (key == "variant") c.variant.kind = parse_variant(value);
    else if (key == "isotropic_sigma") c.variant.isotropic_sigma = to_bool(key, value);
    else if (key == "isotropic_psi") c.variant.isotropic_psi = to_bool(key, value);
    else throw ParseError(origin + ": unknown config key '" + key + "'");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "variant = " << variant_name(c.variant.kind) << '\n';
  out << "isotropic_sigma = " << (c.variant.isotropic_sigma ? "true" : "false") << '\n';
  out << "isotropic_psi = " << (c.variant.isotropic_psi ? "true" : "false") << '\n';
  out << "a_sigma = " << c.hp.a_sigma << '\n';
  out << "b_sigma = " << c.hp.b_sigma << '\n';
  out << "a_psi = " << c.hp.a_psi << '\n';
  out << "b_psi = " << c.hp.b_psi << '\n';
  out << "alpha = " << c.hp.alpha << '\n';
  out << "beta = " << c.hp.beta << '\n';
  out << "nu1_w = " << c.hp.nu1_w << '\n';
  out << "nu2_w = " << c.hp.nu2_w << '\n';
  out << "nu1_c = " << c.hp.nu1_c << '\n';
  out << "nu2_c = " << c.hp.nu2_c << '\n';
  out << "a_lambda = " << c.hp.a_lambda << '\n';
  out << "b_lambda = " << c.hp.b_lambda << '\n';
  out << "alpha_s = " << c.hp.alpha_s << '\n';
  out << "beta_s = " << c.hp.beta_s << '\n';
  out << "q_star_variance_threshold = " << c.hp.q_star_variance_threshold << '\n';
  if (c.hp.q_star_override) out << "q_star_override = " << *c.hp.q_star_override << '\n';
  out << "delta_shape_includes_r = " << (c.hp.delta_shape_includes_r ? "true" : "false")
      << '\n';
  out << "burn_in = " << c.chain.burn_in << '\n';
  out << "keep = " << c.chain.keep << '\n';
  out << "thin = " << c.chain.thin << '\n';
  out << "seed = " << c.chain.seed << '\n';
  out << "warm_up_for_truncation = " << c.chain.warm_up_for_truncation << '\n';
  out << "store_mode_path = " << (c.chain.store_mode_path ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace bpls
