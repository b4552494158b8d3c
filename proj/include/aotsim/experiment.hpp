#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "aotsim/defaults.hpp"
#include "aotsim/report.hpp"
#include "aotsim/sim.hpp"

// Experiment orchestration: the policy x seed matrix, run concurrently and
// merged deterministically, plus the comparison summary. Between runs only
// policy.kind and workload.seed vary; everything else in the base config
// is shared. File writes happen after all runs complete, in (policy, seed)
// order, so identical specs produce identical bytes.

namespace aotsim {

enum class EmitFormat { kCsv, kJson, kBoth };

struct ExperimentSpec {
  SimConfig base;
  std::vector<PolicyKind> policies{PolicyKind::kLaot, PolicyKind::kFifo, PolicyKind::kLfu,
                                   PolicyKind::kCloudOnly};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::filesystem::path output_dir = "out";
  EmitFormat emit = EmitFormat::kBoth;
  int jobs = 0;  // 0 = available parallelism
  bool seeds_explicit = false;  // set by the config parser; gates the env fallback
};

inline std::vector<std::string> validate_experiment(const ExperimentSpec& spec) {
  std::vector<std::string> problems = validate_config(spec.base);
  if (spec.policies.empty()) problems.push_back("experiment.policies: must be non-empty");
  if (spec.seeds.empty()) problems.push_back("experiment.seeds: must be non-empty");
  auto sorted = spec.seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    problems.push_back("experiment.seeds: must be distinct");
  if (spec.jobs < 0) problems.push_back("experiment.jobs: must be >= 0");
  return problems;
}

struct PolicyStats {
  double mean_total_per_slot = 0.0;    // mean over seeds
  double stddev_total_per_slot = 0.0;  // sample stddev over seeds
  CostBreakdown mean_components;       // per-slot means, averaged over seeds
  std::map<std::string, double> win_rate;  // fraction of seeds strictly cheaper than other
};

struct ComparisonSummary {
  std::vector<std::pair<std::string, PolicyStats>> per_policy;  // in spec.policies order
  std::vector<std::uint64_t> seeds;
  std::int64_t n_slots = 0;
};

struct ExperimentResult {
  std::vector<RunReport> reports;  // policy-major, seed-minor
  ComparisonSummary summary;
  std::vector<std::filesystem::path> files_written;
};

namespace detail {

inline std::vector<RunReport> execute_matrix(const ExperimentSpec& spec) {
  const std::size_t n_jobs = spec.policies.size() * spec.seeds.size();
  std::vector<RunReport> reports(n_jobs);

  unsigned workers = spec.jobs > 0 ? static_cast<unsigned>(spec.jobs)
                                   : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_jobs));

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_jobs) return;
      SimConfig cfg = spec.base;
      cfg.policy.kind = spec.policies[i / spec.seeds.size()];
      cfg.workload.seed = spec.seeds[i % spec.seeds.size()];
      reports[i] = run(cfg);
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return reports;
}

inline CostBreakdown scale(const CostBreakdown& b, double f) {
  CostBreakdown out;
  out.acc_loss = b.acc_loss * f;
  out.switch_cost = b.switch_cost * f;
  out.edge_cost = b.edge_cost * f;
  out.edge_latency = b.edge_latency * f;
  out.cloud_cost = b.cloud_cost * f;
  out.total = b.total * f;
  return out;
}

}  // namespace detail

inline ComparisonSummary summarize(const ExperimentSpec& spec,
                                   const std::vector<RunReport>& reports) {
  ComparisonSummary summary;
  summary.seeds = spec.seeds;
  summary.n_slots = spec.base.workload.n_slots;

  const std::size_t n_seeds = spec.seeds.size();
  const double slots = std::max<std::int64_t>(spec.base.workload.n_slots, 1);

  std::vector<std::vector<double>> per_seed_mean(spec.policies.size(),
                                                 std::vector<double>(n_seeds, 0.0));
  for (std::size_t p = 0; p < spec.policies.size(); ++p)
    for (std::size_t s = 0; s < n_seeds; ++s)
      per_seed_mean[p][s] = reports[p * n_seeds + s].mean_total_per_slot;

  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    PolicyStats stats;
    double sum = 0.0;
    for (double v : per_seed_mean[p]) sum += v;
    stats.mean_total_per_slot = sum / static_cast<double>(n_seeds);
    if (n_seeds > 1) {
      double ss = 0.0;
      for (double v : per_seed_mean[p]) {
        const double d = v - stats.mean_total_per_slot;
        ss += d * d;
      }
      stats.stddev_total_per_slot = std::sqrt(ss / static_cast<double>(n_seeds - 1));
    }
    CostBreakdown acc;
    for (std::size_t s = 0; s < n_seeds; ++s)
      acc += detail::scale(reports[p * n_seeds + s].totals, 1.0 / slots);
    stats.mean_components = detail::scale(acc, 1.0 / static_cast<double>(n_seeds));

    for (std::size_t q = 0; q < spec.policies.size(); ++q) {
      if (q == p) continue;
      std::size_t wins = 0;
      for (std::size_t s = 0; s < n_seeds; ++s)
        if (per_seed_mean[p][s] < per_seed_mean[q][s]) ++wins;
      stats.win_rate[policy_name(spec.policies[q])] =
          static_cast<double>(wins) / static_cast<double>(n_seeds);
    }
    summary.per_policy.emplace_back(policy_name(spec.policies[p]), std::move(stats));
  }
  return summary;
}

inline json summary_to_json(const ComparisonSummary& summary) {
  json policies = json::object();
  for (const auto& [name, stats] : summary.per_policy) {
    json w = json::object();
    for (const auto& [other, rate] : stats.win_rate) w[other] = rate;
    policies[name] = json{{"mean_total_per_slot", stats.mean_total_per_slot},
                          {"stddev_total_per_slot", stats.stddev_total_per_slot},
                          {"mean_components", breakdown_to_json(stats.mean_components)},
                          {"win_rate", std::move(w)}};
  }
  return json{{"schema", "v1"},
              {"n_slots", summary.n_slots},
              {"seeds", summary.seeds},
              {"policies", std::move(policies)}};
}

// Seed-averaged per-slot series for the CSV, one per policy.
inline std::vector<PolicySeries> average_series(const ExperimentSpec& spec,
                                                const std::vector<RunReport>& reports) {
  std::vector<PolicySeries> series;
  const std::size_t n_seeds = spec.seeds.size();
  const auto n_slots = static_cast<std::size_t>(spec.base.workload.n_slots);
  for (std::size_t p = 0; p < spec.policies.size(); ++p) {
    PolicySeries s;
    s.policy = policy_name(spec.policies[p]);
    s.per_slot.resize(n_slots);
    for (std::size_t sd = 0; sd < n_seeds; ++sd) {
      const RunReport& r = reports[p * n_seeds + sd];
      for (std::size_t slot = 0; slot < n_slots; ++slot)
        s.per_slot[slot] += r.per_slot[slot].breakdown;
    }
    for (CostBreakdown& b : s.per_slot) b = detail::scale(b, 1.0 / static_cast<double>(n_seeds));
    series.push_back(std::move(s));
  }
  return series;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  {
    const auto problems = validate_experiment(spec);
    if (!problems.empty()) {
      std::string msg = "invalid experiment:";
      for (const auto& p : problems) msg += "\n  " + p;
      throw ConfigError(msg);
    }
  }

  // Fail on an unwritable output directory before any run starts.
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.output_dir, ec);
  if (ec) throw IoError("cannot create output dir " + spec.output_dir.string() + ": " + ec.message());
  {
    const fs::path probe = spec.output_dir / ".write_probe";
    std::ofstream f(probe);
    if (!f) throw IoError("output dir not writable: " + spec.output_dir.string());
    f.close();
    fs::remove(probe, ec);
  }

  ExperimentResult result;
  result.reports = detail::execute_matrix(spec);
  result.summary = summarize(spec, result.reports);

  const bool want_json = spec.emit != EmitFormat::kCsv;
  const bool want_csv = spec.emit != EmitFormat::kJson;
  const std::size_t n_seeds = spec.seeds.size();

  if (want_json) {
    for (std::size_t p = 0; p < spec.policies.size(); ++p) {
      for (std::size_t s = 0; s < n_seeds; ++s) {
        const RunReport& r = result.reports[p * n_seeds + s];
        const fs::path path =
            spec.output_dir / ("report_" + r.policy + "_" + std::to_string(r.seed) + ".json");
        write_report_json(r, path);
        result.files_written.push_back(path);
      }
    }
  }
  if (want_csv) {
    const fs::path path = spec.output_dir / "per_slot.csv";
    write_text_file(path, build_per_slot_csv(average_series(spec, result.reports)));
    result.files_written.push_back(path);
  }
  {
    const fs::path path = spec.output_dir / "summary.json";
    write_text_file(path, summary_to_json(result.summary).dump(2) + "\n");
    result.files_written.push_back(path);
  }
  return result;
}

}  // namespace aotsim
