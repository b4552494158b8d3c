#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aotsim/experiment.hpp"

// Run configuration files.
//
// Grammar (line oriented):
//   file    := line*
//   line    := blank | comment | section | assignment
//   comment := ('#' | ';') rest-of-line
//   section := '[' name ']'
//   key     := [A-Za-z0-9_.]+          (dotted keys may bypass the section)
//   value   := rest of line, trimmed; lists are comma separated
//
// The full key is "<section>.<key>" unless the key already contains a dot.
// Unknown keys and duplicate keys are errors. Omitted keys take the values
// from the defaults table. An empty file is a valid all-defaults config.

namespace aotsim {

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& origin, int line, int col, const std::string& msg)
      : ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool valid_key(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

struct RawValue {
  std::string text;
  int line;
};

struct ParsedFile {
  std::string origin;
  std::map<std::string, RawValue> values;
};

inline ParsedFile parse_lines(std::istream& in, const std::string& origin) {
  ParsedFile out;
  out.origin = origin;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ParseError(origin, lineno, static_cast<int>(t.size()), "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (!valid_key(section)) throw ParseError(origin, lineno, 2, "invalid section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin, lineno, 1, "expected 'key = value' or section header");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) throw ParseError(origin, lineno, 1, "invalid key '" + key + "'");
    std::string full = key.find('.') != std::string::npos
                           ? key
                           : (section.empty() ? key : section + "." + key);
    if (key.find('.') == std::string::npos && section.empty())
      throw ParseError(origin, lineno, 1, "key '" + key + "' outside any section");
    if (out.values.count(full))
      throw ParseError(origin, lineno, 1,
                       "duplicate key '" + full + "' (first at line " +
                           std::to_string(out.values[full].line) + ")");
    out.values[full] = RawValue{trim(line.substr(eq + 1)), lineno};
  }
  return out;
}

class ValueReader {
 public:
  ValueReader(const ParsedFile& file) : file_(file) {}

  bool has(const std::string& key) {
    auto it = file_.values.find(key);
    if (it == file_.values.end()) return false;
    consumed_.push_back(key);
    return true;
  }

  const RawValue& raw(const std::string& key) { return file_.values.at(key); }

  double get_double(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return parse_double(key);
  }
  std::int64_t get_i64(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    return parse_i64(key);
  }
  int get_int(const std::string& key, int fallback) {
    return static_cast<int>(get_i64(key, fallback));
  }
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    return parse_u64(key);
  }
  std::string get_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return raw(key).text;
  }

  std::vector<std::string> split_list(const std::string& key) {
    std::vector<std::string> items;
    std::stringstream ss(raw(key).text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
    }
    if (items.empty()) fail(key, "empty list");
    return items;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& msg) {
    const RawValue& v = raw(key);
    throw ParseError(file_.origin, v.line, 1, key + ": " + msg + " (got '" + v.text + "')");
  }

  double parse_double(const std::string& key) { return to_double(key, raw(key).text); }
  std::int64_t parse_i64(const std::string& key) { return to_i64(key, raw(key).text); }
  std::uint64_t parse_u64(const std::string& key) { return to_u64(key, raw(key).text); }

  double to_double(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') fail(key, "expected a number");
    return v;
  }
  std::int64_t to_i64(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0') fail(key, "expected an integer");
    return v;
  }
  std::uint64_t to_u64(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || text.front() == '-')
      fail(key, "expected an unsigned integer");
    return v;
  }

  // Every key present in the file must have been consumed by a known-key
  // read; anything left over is unknown.
  void check_unknown() const {
    for (const auto& [key, value] : file_.values) {
      bool known = false;
      for (const auto& c : consumed_)
        if (c == key) known = true;
      if (!known)
        throw ParseError(file_.origin, value.line, 1, "unknown key '" + key + "'");
    }
  }

 private:
  const ParsedFile& file_;
  std::vector<std::string> consumed_;
};

inline PolicyKind parse_policy_name(const std::string& name, ValueReader& reader,
                                    const std::string& key) {
  if (name == "laot") return PolicyKind::kLaot;
  if (name == "fifo") return PolicyKind::kFifo;
  if (name == "lfu") return PolicyKind::kLfu;
  if (name == "cloud") return PolicyKind::kCloudOnly;
  reader.fail(key, "expected one of laot|fifo|lfu|cloud");
}

}  // namespace config_detail

inline ExperimentSpec parse_config_stream(std::istream& in, const std::string& origin) {
  using namespace config_detail;
  const ParsedFile file = parse_lines(in, origin);
  ValueReader r(file);

  ExperimentSpec spec;
  spec.base = default_sim_config();
  SimConfig& cfg = spec.base;

  cfg.workload.n_services = r.get_int("workload.n_services", cfg.workload.n_services);
  cfg.workload.n_agents = r.get_int("workload.n_agents", cfg.workload.n_agents);
  cfg.workload.zipf_exponent = r.get_double("workload.zipf_s", cfg.workload.zipf_exponent);
  cfg.workload.arrivals_per_slot_mean =
      r.get_double("workload.arrivals_per_slot", cfg.workload.arrivals_per_slot_mean);
  cfg.workload.seed = r.get_u64("workload.seed", cfg.workload.seed);
  cfg.workload.n_slots = r.get_i64("workload.n_slots", cfg.workload.n_slots);
  cfg.workload.req_tokens_min = r.get_i64("workload.req_tokens_min", cfg.workload.req_tokens_min);
  cfg.workload.req_tokens_max = r.get_i64("workload.req_tokens_max", cfg.workload.req_tokens_max);

  cfg.catalog.n_models = r.get_int("catalog.n_models", cfg.catalog.n_models);
  if (r.has("catalog.window_tiers")) {
    cfg.catalog.window_tiers.clear();
    for (const auto& item : r.split_list("catalog.window_tiers"))
      cfg.catalog.window_tiers.push_back(r.to_i64("catalog.window_tiers", item));
  }
  if (r.has("catalog.mem_tiers")) {
    cfg.catalog.mem_tiers.clear();
    for (const auto& item : r.split_list("catalog.mem_tiers"))
      cfg.catalog.mem_tiers.push_back(r.to_double("catalog.mem_tiers", item));
  }
  cfg.catalog.base_loss = r.get_double("catalog.base_loss", cfg.catalog.base_loss);
  cfg.catalog.cot_steps = r.get_int("catalog.cot_steps", cfg.catalog.cot_steps);
  cfg.catalog.tokens_per_step =
      r.get_i64("catalog.tokens_per_step", cfg.catalog.tokens_per_step);
  cfg.catalog.edge_rate = r.get_double("catalog.edge_rate", cfg.catalog.edge_rate);
  cfg.catalog.edge_tok_per_slot =
      r.get_double("catalog.edge_tok_per_slot", cfg.catalog.edge_tok_per_slot);
  cfg.catalog.cloud_rate = r.get_double("catalog.cloud_rate", cfg.catalog.cloud_rate);
  cfg.catalog.cloud_latency_slots =
      r.get_double("catalog.cloud_latency_slots", cfg.catalog.cloud_latency_slots);
  cfg.catalog.switch_rate = r.get_double("catalog.switch_rate", cfg.catalog.switch_rate);
  cfg.catalog.load_gb_per_slot =
      r.get_double("catalog.load_gb_per_slot", cfg.catalog.load_gb_per_slot);

  if (r.has("policy.kind"))
    cfg.policy.kind = config_detail::parse_policy_name(r.raw("policy.kind").text, r, "policy.kind");

  cfg.aot.gamma = r.get_double("aot.gamma", cfg.aot.gamma);
  cfg.aot.tokens_per_step = r.get_i64("aot.tau", cfg.aot.tokens_per_step);
  cfg.acc.beta = r.get_double("acc.beta", cfg.acc.beta);

  cfg.weights.acc = r.get_double("weights.acc", cfg.weights.acc);
  cfg.weights.switching = r.get_double("weights.switch", cfg.weights.switching);
  cfg.weights.edge = r.get_double("weights.edge", cfg.weights.edge);
  cfg.weights.latency = r.get_double("weights.latency", cfg.weights.latency);
  cfg.weights.cloud = r.get_double("weights.cloud", cfg.weights.cloud);

  cfg.capacity_gb = r.get_double("cache.capacity_gb", cfg.capacity_gb);
  if (r.has("cache.overflow")) {
    const std::string& text = r.raw("cache.overflow").text;
    if (text == "evict-model")
      cfg.overflow = OverflowPolicy::kEvictModel;
    else if (text == "trim-oldest")
      cfg.overflow = OverflowPolicy::kTrimOldest;
    else
      r.fail("cache.overflow", "expected evict-model|trim-oldest");
  }

  if (r.has("experiment.policies")) {
    spec.policies.clear();
    for (const auto& item : r.split_list("experiment.policies"))
      spec.policies.push_back(config_detail::parse_policy_name(item, r, "experiment.policies"));
  }
  if (r.has("experiment.seeds")) {
    spec.seeds.clear();
    for (const auto& item : r.split_list("experiment.seeds"))
      spec.seeds.push_back(r.to_u64("experiment.seeds", item));
    spec.seeds_explicit = true;
  }
  spec.output_dir = r.get_string("experiment.output_dir", spec.output_dir.string());
  if (r.has("experiment.format")) {
    const std::string& text = r.raw("experiment.format").text;
    if (text == "csv")
      spec.emit = EmitFormat::kCsv;
    else if (text == "json")
      spec.emit = EmitFormat::kJson;
    else if (text == "both")
      spec.emit = EmitFormat::kBoth;
    else
      r.fail("experiment.format", "expected csv|json|both");
  }
  spec.jobs = r.get_int("experiment.jobs", spec.jobs);

  r.check_unknown();

  // The eviction policy shares the decay parameters of the value model.
  cfg.policy.aot = cfg.aot;

  const auto problems = validate_experiment(spec);
  if (!problems.empty()) {
    std::string msg = origin + ": invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return spec;
}

inline ExperimentSpec parse_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path.string());
  return parse_config_stream(f, path.string());
}

}  // namespace aotsim
