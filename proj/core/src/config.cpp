#include "rmflab/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rmflab/version.hpp"

namespace rmflab {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_int(const std::string& tok, std::int64_t& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool parse_uint(const std::string& tok, std::uint64_t& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool parse_float(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string> split_items(const std::string& body) {
  std::vector<std::string> items;
  std::string current;
  for (char c : body) {
    if (c == ',') {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  const std::string tail = trim(current);
  if (!tail.empty()) items.push_back(tail);
  return items;
}

ConfigValue parse_value(const std::string& raw, int line_no) {
  const std::string tok = trim(raw);
  if (tok.empty()) throw std::domain_error("config line " + std::to_string(line_no) + ": empty value");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') {
      throw std::domain_error("config line " + std::to_string(line_no) + ": unterminated string");
    }
    return tok.substr(1, tok.size() - 2);
  }
  if (tok.front() == '[') {
    if (tok.back() != ']') {
      throw std::domain_error("config line " + std::to_string(line_no) + ": unterminated array");
    }
    const auto items = split_items(tok.substr(1, tok.size() - 2));
    std::vector<std::int64_t> ints;
    bool all_int = true;
    for (const auto& item : items) {
      std::int64_t v;
      if (parse_int(item, v)) {
        ints.push_back(v);
      } else {
        all_int = false;
        break;
      }
    }
    if (all_int) return ints;
    std::vector<double> doubles;
    for (const auto& item : items) {
      double v;
      if (!parse_float(item, v)) {
        throw std::domain_error("config line " + std::to_string(line_no) + ": bad array item '" +
                                item + "'");
      }
      doubles.push_back(v);
    }
    return doubles;
  }
  std::int64_t i;
  if (parse_int(tok, i)) return i;
  double d;
  if (parse_float(tok, d)) return d;
  throw std::domain_error("config line " + std::to_string(line_no) + ": cannot parse value '" +
                          tok + "'");
}

std::string format_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  std::string s(buf, end);
  // Keep floats recognizable as floats on re-parse.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

std::string format_value(const ConfigValue& value) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return '"' + v + '"'; }
    std::string operator()(const std::vector<std::int64_t>& v) const {
      std::string out = "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
      }
      return out + "]";
    }
    std::string operator()(const std::vector<double>& v) const {
      std::string out = "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
      }
      return out + "]";
    }
  };
  return std::visit(Visitor{}, value);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      // Keep # inside quoted strings.
      const auto quote = line.find('"');
      if (quote == std::string::npos || hash < quote) line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::domain_error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string raw = line.substr(eq + 1);
    if (key.empty()) {
      throw std::domain_error("config line " + std::to_string(line_no) + ": empty key");
    }
    if (key == "experiment") {
      const auto v = parse_value(raw, line_no);
      if (!std::holds_alternative<std::string>(v)) {
        throw std::domain_error("config: experiment must be a quoted string");
      }
      config.experiment = std::get<std::string>(v);
    } else if (key == "master_seed") {
      std::uint64_t seed;
      if (!parse_uint(trim(raw), seed)) {
        throw std::domain_error("config: master_seed must be an unsigned integer");
      }
      config.master_seed = seed;
    } else if (key == "workers") {
      std::int64_t w;
      if (!parse_int(trim(raw), w) || w < 0) {
        throw std::domain_error("config: workers must be a non-negative integer");
      }
      config.workers = static_cast<int>(w);
    } else if (key == "out") {
      const auto v = parse_value(raw, line_no);
      if (!std::holds_alternative<std::string>(v)) {
        throw std::domain_error("config: out must be a quoted string");
      }
      config.out_path = std::get<std::string>(v);
    } else {
      config.params[key] = parse_value(raw, line_no);
    }
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  out += "experiment = \"" + config.experiment + "\"\n";
  out += "master_seed = " + std::to_string(config.master_seed) + "\n";
  out += "workers = " + std::to_string(config.workers) + "\n";
  if (!config.out_path.empty()) out += "out = \"" + config.out_path + "\"\n";
  for (const auto& [key, value] : config.params) {
    out += key + " = " + format_value(value) + "\n";
  }
  return out;
}

std::int64_t ExperimentConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  throw std::domain_error("config: parameter '" + key + "' must be an integer");
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* v = std::get_if<double>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*v);
  throw std::domain_error("config: parameter '" + key + "' must be a number");
}

std::vector<std::int64_t> ExperimentConfig::get_int_grid(
    const std::string& key, std::vector<std::int64_t> fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* v = std::get_if<std::vector<std::int64_t>>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return {*v};
  throw std::domain_error("config: parameter '" + key + "' must be an integer array");
}

std::vector<double> ExperimentConfig::get_double_grid(const std::string& key,
                                                      std::vector<double> fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::vector<std::int64_t>>(&it->second)) {
    return std::vector<double>(v->begin(), v->end());
  }
  if (const auto* v = std::get_if<double>(&it->second)) return {*v};
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return {static_cast<double>(*v)};
  throw std::domain_error("config: parameter '" + key + "' must be a number array");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "exp_harper_ratio", "exp_threshold",  "exp_reduction",
      "exp_correlation",  "exp_geometric",  "exp_clt_energy",
  };
  return names;
}

void apply_experiment_defaults(ExperimentConfig& config) {
  auto set_int = [&](const char* key, std::int64_t v) {
    if (!config.has(key)) config.params[key] = v;
  };
  auto set_double = [&](const char* key, double v) {
    if (!config.has(key)) config.params[key] = v;
  };
  auto set_int_grid = [&](const char* key, std::vector<std::int64_t> v) {
    if (!config.has(key)) config.params[key] = std::move(v);
  };
  auto set_double_grid = [&](const char* key, std::vector<double> v) {
    if (!config.has(key)) config.params[key] = std::move(v);
  };

  if (config.experiment == "exp_harper_ratio") {
    set_int_grid("x_grid", {1000, 10000, 100000});
    set_int("trials", 10000);
  } else if (config.experiment == "exp_threshold") {
    set_int("x", 100000);
    set_double_grid("r_grid", {2.0, 10.0, 100.0, 300.0});
    set_int("trials", 10000);
  } else if (config.experiment == "exp_reduction") {
    set_int("x", 100000);
    set_double("r", 11.0);
    set_int("trials", 2000);
  } else if (config.experiment == "exp_correlation") {
    set_double("x", 1e6);
    set_double("r", std::exp(std::exp(1.5)));
    set_double("v", 8.0);
    set_int("samples", 100);
  } else if (config.experiment == "exp_geometric") {
    set_int("p", 2);
    set_int_grid("k_grid", {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1000});
  } else if (config.experiment == "exp_clt_energy") {
    set_int_grid("n_grid", {1, 100, 500, 2000});
    set_double("theta", std::sqrt(2.0));
  } else {
    throw std::domain_error("unknown experiment '" + config.experiment + "'");
  }
}

CsvTable run_experiment(const ExperimentConfig& config, bool force, SeedLedger* ledger) {
  const auto& name = config.experiment;
  if (name == "exp_harper_ratio") {
    return exp_harper_ratio(config.get_int_grid("x_grid", {}), config.get_int("trials", 0),
                            config.master_seed, config.workers, force, ledger);
  }
  if (name == "exp_threshold") {
    std::string family = "rough";
    if (const auto it = config.params.find("family"); it != config.params.end()) {
      if (const auto* v = std::get_if<std::string>(&it->second)) {
        family = *v;
      } else {
        throw std::domain_error("config: parameter 'family' must be a string");
      }
    }
    return exp_threshold(config.get_int("x", 0), config.get_double_grid("r_grid", {}),
                         config.get_int("trials", 0), config.master_seed, config.workers, force,
                         ledger, family);
  }
  if (name == "exp_reduction") {
    return exp_reduction(config.get_int("x", 0), config.get_double("r", 0.0),
                         config.get_int("trials", 0), config.master_seed, config.workers, force,
                         ledger);
  }
  if (name == "exp_correlation") {
    return exp_correlation(config.get_double("x", 0.0), config.get_double("r", 0.0),
                           config.get_double("v", 0.0), config.get_int("samples", 0),
                           config.master_seed, config.workers, force, ledger);
  }
  if (name == "exp_geometric") {
    return exp_geometric(config.get_int("p", 2), config.get_int_grid("k_grid", {}), ledger);
  }
  if (name == "exp_clt_energy") {
    return exp_clt_energy(config.get_int_grid("n_grid", {}), config.get_double("theta", 0.0),
                          ledger);
  }
  throw std::domain_error("unknown experiment '" + name + "'");
}

std::string manifest_json(const ExperimentConfig& config, double wall_seconds,
                          const SeedLedger& ledger, const std::string& csv_path) {
  nlohmann::json j;
  j["artifact_version"] = kVersion;
  j["experiment"] = config.experiment;
  j["master_seed"] = config.master_seed;
  j["workers"] = config.workers;
  j["csv_path"] = csv_path;
  j["wall_clock_seconds"] = wall_seconds;
  j["config_text"] = serialize_config(config);
  nlohmann::json seeds = nlohmann::json::object();
  for (const auto& [label, seed] : ledger.entries) seeds[label] = seed;
  j["seed_ledger"] = seeds;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_manifest(const std::string& manifest_text) {
  const auto j = nlohmann::json::parse(manifest_text);
  if (!j.contains("config_text")) {
    throw std::domain_error("manifest: missing config_text");
  }
  return parse_config(j["config_text"].get<std::string>());
}

std::string experiment_help() {
  return
      "experiments and config keys (defaults in parentheses):\n"
      "  exp_harper_ratio   x_grid ([1000, 10000, 100000]), trials (10000)\n"
      "                     rows: x, E1_hat, stderr, ratio = E1_hat (ln ln x)^{1/4} / sqrt(x)\n"
      "  exp_threshold      x (100000), r_grid ([2, 10, 100, 300]), trials (10000),\n"
      "                     family (\"rough\"; \"interval\" sums over (x, x+y] with the\n"
      "                     grid entries as lengths y)\n"
      "                     rows: R, |A_R|, E1_hat, stderr, ratio = E1_hat / sqrt(|A_R|)\n"
      "  exp_reduction      x (100000), r (11.0), trials (2000)\n"
      "                     row: lhs, rhs, ratio\n"
      "  exp_correlation    x (1e6), r (e^{e^{1.5}}), v (8.0), samples (100)\n"
      "                     row: lhs, bound, ratio\n"
      "  exp_geometric      p (2), k_grid ([1, 2, 4, ..., 1000])\n"
      "                     rows: K, E1, ratio = E1 / ln K\n"
      "  exp_clt_energy     n_grid ([1, 100, 500, 2000]), theta (sqrt 2)\n"
      "                     rows: N, allones_energy_ratio, achar_energy_ratio,\n"
      "                           allones_kurtosis, achar_kurtosis\n"
      "\n"
      "common config keys: experiment (string), master_seed (unsigned), workers\n"
      "(0 = auto), out (string). CLI flags --seed/--workers/--out override the\n"
      "config; RMFLAB_WORKERS is the fallback when neither is given.\n";
}

}  // namespace rmflab
