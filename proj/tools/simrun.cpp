// simrun: runs the edge model-caching simulator over a policy x seed
// matrix and writes per-run JSON reports, a seed-averaged per-slot CSV and
// a comparison summary.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal
// error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aotsim/config_file.hpp"
#include "aotsim/defaults.hpp"
#include "aotsim/experiment.hpp"
#include "aotsim/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

void print_defaults_text() {
  std::size_t key_w = 0, val_w = 0;
  for (const auto& e : aotsim::defaults_table()) {
    key_w = std::max(key_w, e.key.size());
    val_w = std::max(val_w, e.value.size());
  }
  for (const auto& e : aotsim::defaults_table()) {
    std::printf("%-*s  %-*s  %-8s  %s\n", static_cast<int>(key_w), e.key.c_str(),
                static_cast<int>(val_w), e.value.c_str(),
                aotsim::provenance_name(e.provenance), e.note.c_str());
  }
}

void print_defaults_json() {
  aotsim::json arr = aotsim::json::array();
  for (const auto& e : aotsim::defaults_table()) {
    arr.push_back(aotsim::json{{"key", e.key},
                               {"value", e.value},
                               {"provenance", aotsim::provenance_name(e.provenance)},
                               {"note", e.note}});
  }
  std::printf("%s\n", arr.dump(2).c_str());
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = aotsim::config_detail::trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(item.c_str(), &end, 10);
    if (end == item.c_str() || *end != '\0' || item.front() == '-')
      throw aotsim::ConfigError("--seeds: expected an unsigned integer, got '" + item + "'");
    seeds.push_back(v);
  }
  if (seeds.empty()) throw aotsim::ConfigError("--seeds: empty list");
  return seeds;
}

aotsim::PolicyKind parse_policy_flag(const std::string& name) {
  if (name == "laot") return aotsim::PolicyKind::kLaot;
  if (name == "fifo") return aotsim::PolicyKind::kFifo;
  if (name == "lfu") return aotsim::PolicyKind::kLfu;
  if (name == "cloud") return aotsim::PolicyKind::kCloudOnly;
  throw aotsim::ConfigError("--policy: expected one of laot|fifo|lfu|cloud, got '" + name + "'");
}

void print_summary(const aotsim::ComparisonSummary& summary) {
  std::printf("%-8s %14s %14s %10s %10s %10s %10s %10s\n", "policy", "mean_total", "stddev",
              "acc", "switch", "edge", "latency", "cloud");
  for (const auto& [name, stats] : summary.per_policy) {
    std::printf("%-8s %14.4f %14.4f %10.4f %10.4f %10.4f %10.4f %10.4f\n", name.c_str(),
                stats.mean_total_per_slot, stats.stddev_total_per_slot,
                stats.mean_components.acc_loss, stats.mean_components.switch_cost,
                stats.mean_components.edge_cost, stats.mean_components.edge_latency,
                stats.mean_components.cloud_cost);
  }
  for (const auto& [name, stats] : summary.per_policy) {
    for (const auto& [other, rate] : stats.win_rate)
      std::printf("win_rate %s vs %s: %.2f\n", name.c_str(), other.c_str(), rate);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge model-caching simulator (AoT/LAoT vs FIFO, LFU, cloud-only)"};

  std::string config_path;
  std::vector<std::string> policy_flags;
  std::string seeds_flag;
  std::int64_t slots_flag = -1;
  std::string out_flag;
  std::string format_flag;
  int jobs_flag = -1;
  bool summary_flag = false;
  bool print_defaults_flag = false;

  app.add_option("--config", config_path, "Run configuration file");
  app.add_option("--policy", policy_flags, "Policy to run (repeatable): laot|fifo|lfu|cloud");
  app.add_option("--seeds", seeds_flag, "Comma-separated seed list");
  app.add_option("--slots", slots_flag, "Number of slots to simulate");
  app.add_option("--out", out_flag, "Output directory");
  app.add_option("--format", format_flag, "Report format: csv|json|both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--jobs", jobs_flag, "Worker threads (0 = available parallelism)");
  app.add_flag("--summary", summary_flag, "Print the policy comparison to stdout");
  app.add_flag("--print-defaults", print_defaults_flag,
               "Print the defaults table (text, or JSON with --format json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (print_defaults_flag) {
      if (format_flag == "json")
        print_defaults_json();
      else
        print_defaults_text();
      return kExitOk;
    }

    aotsim::ExperimentSpec spec;
    if (!config_path.empty()) {
      spec = aotsim::parse_config(config_path);
    } else {
      spec.base = aotsim::default_sim_config();
    }

    if (!policy_flags.empty()) {
      spec.policies.clear();
      for (const auto& name : policy_flags) spec.policies.push_back(parse_policy_flag(name));
    }
    if (!seeds_flag.empty()) {
      spec.seeds = parse_seed_list(seeds_flag);
      spec.seeds_explicit = true;
    }
    if (!spec.seeds_explicit) {
      if (const char* env = std::getenv("SIMRUN_SEED")) {
        spec.seeds = parse_seed_list(env);
      }
    }
    if (slots_flag >= 0) spec.base.workload.n_slots = slots_flag;
    if (!out_flag.empty()) spec.output_dir = out_flag;
    if (format_flag == "csv") spec.emit = aotsim::EmitFormat::kCsv;
    if (format_flag == "json") spec.emit = aotsim::EmitFormat::kJson;
    if (format_flag == "both") spec.emit = aotsim::EmitFormat::kBoth;
    if (jobs_flag >= 0) spec.jobs = jobs_flag;

    const aotsim::ExperimentResult result = aotsim::run_experiment(spec);
    std::printf("wrote %zu files to %s\n", result.files_written.size(),
                spec.output_dir.string().c_str());
    if (summary_flag) print_summary(result.summary);
    return kExitOk;
  } catch (const aotsim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const aotsim::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
}
