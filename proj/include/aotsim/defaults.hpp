#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aotsim/sim.hpp"

// Single authoritative table of every default parameter. Each entry names
// its provenance: "scenario" values are fixed by the modeled edge-serving
// scenario (service count, context windows, GPU memory); "choice" values
// are modeling defaults of this simulator. `simrun --print-defaults`
// renders the table.

namespace aotsim {

enum class Provenance { kScenario, kChoice };

inline const char* provenance_name(Provenance p) {
  return p == Provenance::kScenario ? "scenario" : "choice";
}

struct DefaultsEntry {
  std::string key;
  std::string value;
  Provenance provenance = Provenance::kChoice;
  std::string note;
};

namespace defaults {

inline constexpr int kNServices = 30;
inline constexpr int kNAgents = 10;
inline constexpr double kZipfExponent = 1.0;
inline constexpr double kArrivalsPerSlot = 5.0;
inline constexpr std::uint64_t kSeed = 1;
inline constexpr std::int64_t kNSlots = 500;
inline constexpr std::int64_t kReqTokensMin = 64;
inline constexpr std::int64_t kReqTokensMax = 512;

inline constexpr int kNModels = 0;  // one model per service
inline constexpr std::int64_t kWindowTiers[3] = {4096, 16384, 32768};
inline constexpr double kMemTiers[3] = {160.0, 640.0, 1600.0};
inline constexpr double kBaseLoss = 0.3;
inline constexpr int kCotSteps = 3;
inline constexpr std::int64_t kTokensPerStep = 200;
inline constexpr double kEdgeRate = 2.0;
inline constexpr double kEdgeTokPerSlot = 4000.0;
inline constexpr double kCloudRate = 6.0;
inline constexpr double kCloudLatencySlots = 0.8;
inline constexpr double kSwitchRate = 0.01;
inline constexpr double kLoadGbPerSlot = 2000.0;

inline constexpr double kCapacityGb = 5120.0;  // 64 GPUs x 80 GB
inline constexpr double kGamma = 0.9;
inline constexpr double kBeta = 0.5;
inline constexpr double kWeightAcc = 10.0;
inline constexpr double kWeightSwitch = 1.0;
inline constexpr double kWeightEdge = 1.0;
inline constexpr double kWeightLatency = 1.0;
inline constexpr double kWeightCloud = 1.0;

// Recorded for reference; the cost formulas do not consume these.
inline constexpr double kGpuTflops = 312.0;
inline constexpr double kGpuPowerW = 300.0;

}  // namespace defaults

inline SimConfig default_sim_config() {
  SimConfig cfg;
  cfg.workload.n_services = defaults::kNServices;
  cfg.workload.n_agents = defaults::kNAgents;
  cfg.workload.zipf_exponent = defaults::kZipfExponent;
  cfg.workload.arrivals_per_slot_mean = defaults::kArrivalsPerSlot;
  cfg.workload.seed = defaults::kSeed;
  cfg.workload.n_slots = defaults::kNSlots;
  cfg.workload.req_tokens_min = defaults::kReqTokensMin;
  cfg.workload.req_tokens_max = defaults::kReqTokensMax;

  cfg.catalog.n_models = defaults::kNModels;
  cfg.catalog.window_tiers.assign(std::begin(defaults::kWindowTiers),
                                  std::end(defaults::kWindowTiers));
  cfg.catalog.mem_tiers.assign(std::begin(defaults::kMemTiers), std::end(defaults::kMemTiers));
  cfg.catalog.base_loss = defaults::kBaseLoss;
  cfg.catalog.cot_steps = defaults::kCotSteps;
  cfg.catalog.tokens_per_step = defaults::kTokensPerStep;
  cfg.catalog.edge_rate = defaults::kEdgeRate;
  cfg.catalog.edge_tok_per_slot = defaults::kEdgeTokPerSlot;
  cfg.catalog.cloud_rate = defaults::kCloudRate;
  cfg.catalog.cloud_latency_slots = defaults::kCloudLatencySlots;
  cfg.catalog.switch_rate = defaults::kSwitchRate;
  cfg.catalog.load_gb_per_slot = defaults::kLoadGbPerSlot;

  cfg.policy.kind = PolicyKind::kLaot;
  cfg.policy.aot.gamma = defaults::kGamma;
  cfg.policy.aot.tokens_per_step = defaults::kTokensPerStep;

  cfg.weights.acc = defaults::kWeightAcc;
  cfg.weights.switching = defaults::kWeightSwitch;
  cfg.weights.edge = defaults::kWeightEdge;
  cfg.weights.latency = defaults::kWeightLatency;
  cfg.weights.cloud = defaults::kWeightCloud;

  cfg.acc.beta = defaults::kBeta;
  cfg.aot.gamma = defaults::kGamma;
  cfg.aot.tokens_per_step = defaults::kTokensPerStep;
  cfg.capacity_gb = defaults::kCapacityGb;
  cfg.overflow = OverflowPolicy::kEvictModel;
  return cfg;
}

inline const std::vector<DefaultsEntry>& defaults_table() {
  static const std::vector<DefaultsEntry> table = {
      {"workload.n_services", "30", Provenance::kScenario, "30 types of services"},
      {"workload.n_agents", "10", Provenance::kScenario, "10 edge LLM agents"},
      {"workload.zipf_s", "1.0", Provenance::kChoice, "popularity skew of service requests"},
      {"workload.arrivals_per_slot", "5", Provenance::kChoice, "Poisson arrival mean per slot"},
      {"workload.seed", "1", Provenance::kChoice, "single-run seed; sweeps use experiment.seeds"},
      {"workload.n_slots", "500", Provenance::kChoice, "horizon length in slots"},
      {"workload.req_tokens_min", "64", Provenance::kChoice,
       "lower bound on offloaded request tokens"},
      {"workload.req_tokens_max", "512", Provenance::kChoice,
       "upper bound; below the smallest context window"},
      {"catalog.n_models", "0", Provenance::kChoice, "0 binds one model per service"},
      {"catalog.window_tiers", "4096,16384,32768", Provenance::kScenario,
       "the context window of LLaMA is 4K tokens; GPT-3.5-turbo 16K; GPT-4 32K"},
      {"catalog.mem_tiers", "160,640,1600", Provenance::kChoice,
       "small/medium/large model footprints (2/8/20 GPUs); catalog must exceed capacity"},
      {"catalog.base_loss", "0.3", Provenance::kChoice, "edge accuracy loss with empty context"},
      {"catalog.cot_steps", "3", Provenance::kChoice, "reasoning steps per edge-served request"},
      {"catalog.tokens_per_step", "200", Provenance::kScenario,
       "maximum token consumption for each CoT step is set to 200"},
      {"catalog.edge_rate", "2.0", Provenance::kChoice, "edge inference cost per 1K tokens"},
      {"catalog.edge_tok_per_slot", "4000", Provenance::kChoice,
       "edge serving throughput, tokens per slot"},
      {"catalog.cloud_rate", "6.0", Provenance::kChoice, "3x the edge rate; cloud is premium"},
      {"catalog.cloud_latency_slots", "0.8", Provenance::kChoice, "fixed WAN round-trip penalty"},
      {"catalog.switch_rate", "0.01", Provenance::kChoice, "load cost per GB of model weights"},
      {"catalog.load_gb_per_slot", "2000", Provenance::kChoice,
       "load bandwidth; drives per-load latency"},
      {"cache.capacity_gb", "5120", Provenance::kScenario, "64 GPUs with 80 GB memory"},
      {"cache.overflow", "evict-model", Provenance::kChoice,
       "context overflow evicts the model; trim-oldest keeps it with a shortened ledger"},
      {"policy.kind", "laot", Provenance::kChoice, "default eviction policy"},
      {"aot.gamma", "0.9", Provenance::kChoice, "per-slot decay of thought value"},
      {"aot.tau", "200", Provenance::kScenario,
       "value normalization equals the 200-token CoT step"},
      {"acc.beta", "0.5", Provenance::kChoice, "sensitivity of accuracy loss to thought value"},
      {"weights.acc", "10", Provenance::kChoice, "accuracy loss carries the dominant weight"},
      {"weights.switch", "1", Provenance::kChoice, ""},
      {"weights.edge", "1", Provenance::kChoice, ""},
      {"weights.latency", "1", Provenance::kChoice, ""},
      {"weights.cloud", "1", Provenance::kChoice, ""},
      {"experiment.policies", "laot,fifo,lfu,cloud", Provenance::kChoice,
       "policies compared by default"},
      {"experiment.seeds", "1,2,3,4,5,6,7,8,9,10", Provenance::kChoice, "default seed sweep"},
      {"experiment.output_dir", "out", Provenance::kChoice, ""},
      {"experiment.format", "both", Provenance::kChoice, "csv, json or both"},
      {"experiment.jobs", "0", Provenance::kChoice, "0 uses available parallelism"},
      {"info.gpu_tflops", "312", Provenance::kScenario,
       "312 TFLOPS per GPU; informational, not used by the cost model"},
      {"info.gpu_power_w", "300", Provenance::kScenario,
       "300W max thermal design power; informational, not used by the cost model"},
  };
  return table;
}

// Looks up one entry; returns nullptr when the key is absent.
inline const DefaultsEntry* defaults_lookup(const std::string& key) {
  for (const DefaultsEntry& e : defaults_table())
    if (e.key == key) return &e;
  return nullptr;
}

}  // namespace aotsim
