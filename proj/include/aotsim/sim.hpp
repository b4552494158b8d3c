#pragma once

#include <cassert>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "aotsim/cache.hpp"
#include "aotsim/cost.hpp"
#include "aotsim/ledger.hpp"
#include "aotsim/rng.hpp"
#include "aotsim/workload.hpp"

// The time-slotted engine. Per slot: draw the request stream, serve each
// request in arrival order via the cache or the cloud, record the thoughts
// produced, enforce context windows, and accumulate the weighted cost.

namespace aotsim {

struct SimConfig {
  WorkloadConfig workload;
  CatalogParams catalog;
  Policy policy;
  CostWeights weights;
  AccuracyParams acc;
  AotParams aot;
  double capacity_gb = 5120.0;
  OverflowPolicy overflow = OverflowPolicy::kEvictModel;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Collects every violated invariant; empty means valid.
inline std::vector<std::string> validate_config(const SimConfig& cfg) {
  std::vector<std::string> problems;
  auto bad = [&problems](const std::string& msg) { problems.push_back(msg); };

  if (cfg.workload.n_services < 1) bad("workload.n_services: must be >= 1");
  if (cfg.workload.n_agents < 1) bad("workload.n_agents: must be >= 1");
  if (cfg.workload.zipf_exponent < 0.0) bad("workload.zipf_s: must be >= 0");
  if (cfg.workload.arrivals_per_slot_mean < 0.0) bad("workload.arrivals_per_slot: must be >= 0");
  if (cfg.workload.n_slots < 0) bad("workload.n_slots: must be >= 0");
  if (cfg.workload.req_tokens_min <= 0) bad("workload.req_tokens_min: must be > 0");
  if (cfg.workload.req_tokens_max < cfg.workload.req_tokens_min)
    bad("workload.req_tokens_max: must be >= workload.req_tokens_min");

  if (cfg.catalog.n_models < 0) bad("catalog.n_models: must be >= 0");
  if (cfg.catalog.window_tiers.empty()) bad("catalog.window_tiers: must be non-empty");
  for (auto w : cfg.catalog.window_tiers)
    if (w <= 0) { bad("catalog.window_tiers: entries must be > 0"); break; }
  if (cfg.catalog.mem_tiers.empty()) bad("catalog.mem_tiers: must be non-empty");
  for (auto m : cfg.catalog.mem_tiers)
    if (m <= 0.0) { bad("catalog.mem_tiers: entries must be > 0"); break; }
  if (cfg.catalog.base_loss < 0.0 || cfg.catalog.base_loss > 1.0)
    bad("catalog.base_loss: must be in [0,1]");
  if (cfg.catalog.cot_steps < 0) bad("catalog.cot_steps: must be >= 0");
  if (cfg.catalog.tokens_per_step <= 0) bad("catalog.tokens_per_step: must be > 0");
  if (cfg.catalog.edge_rate < 0.0) bad("catalog.edge_rate: must be >= 0");
  if (cfg.catalog.edge_tok_per_slot <= 0.0) bad("catalog.edge_tok_per_slot: must be > 0");
  if (cfg.catalog.cloud_rate < 0.0) bad("catalog.cloud_rate: must be >= 0");
  if (cfg.catalog.cloud_latency_slots < 0.0) bad("catalog.cloud_latency_slots: must be >= 0");
  if (cfg.catalog.switch_rate < 0.0) bad("catalog.switch_rate: must be >= 0");
  if (cfg.catalog.load_gb_per_slot <= 0.0) bad("catalog.load_gb_per_slot: must be > 0");

  if (!(cfg.weights.acc >= 0.0 && cfg.weights.switching >= 0.0 && cfg.weights.edge >= 0.0 &&
        cfg.weights.latency >= 0.0 && cfg.weights.cloud >= 0.0))
    bad("weights: all must be >= 0");
  if (cfg.weights.acc + cfg.weights.switching + cfg.weights.edge + cfg.weights.latency +
          cfg.weights.cloud <=
      0.0)
    bad("weights: at least one must be > 0");

  if (cfg.acc.beta <= 0.0) bad("acc.beta: must be > 0");
  if (!(cfg.aot.gamma > 0.0 && cfg.aot.gamma <= 1.0)) bad("aot.gamma: must be in (0,1]");
  if (cfg.aot.tokens_per_step <= 0) bad("aot.tau: must be > 0");
  if (cfg.capacity_gb <= 0.0) bad("cache.capacity_gb: must be > 0");
  return problems;
}

inline void require_valid(const SimConfig& cfg) {
  const auto problems = validate_config(cfg);
  if (problems.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw ConfigError(msg);
}

struct SlotMetrics {
  std::int64_t slot = 0;
  CostBreakdown breakdown;
  std::int64_t hits = 0;
  std::int64_t misses = 0;
  std::int64_t cloud_served = 0;
  std::int64_t loads = 0;
  std::int64_t evictions_policy = 0;
  std::int64_t evictions_context = 0;
  double mean_acc_loss = 0.0;  // unweighted accuracy loss averaged over the slot's requests
};

struct RunReport {
  std::string config_digest;
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<SlotMetrics> per_slot;
  CostBreakdown totals;
  double mean_total_per_slot = 0.0;
};

enum class ServeDecision { kEdgeHit, kEdgeLoad, kCloud };

struct ServeOutcome {
  ServeDecision decision = ServeDecision::kCloud;
  double acc_loss = 0.0;
  double switch_cost = 0.0;
  double edge_cost = 0.0;
  double latency = 0.0;
  double cloud_cost = 0.0;
  std::int64_t evictions_policy = 0;
  std::int64_t evictions_context = 0;
};

// Serves one request at `now`. On a hit the accuracy loss is computed from
// the ledger value before this request's thoughts are appended: the
// current answer benefits from past reasoning only. The window check runs
// after serving, so an overflowing request still succeeds at the edge and
// the eviction lands afterwards. A model loaded this slot serves with zero
// retained value; its load latency (mem / load bandwidth) is added to the
// request's latency term.
inline ServeOutcome serve_request(CacheState& state, const Request& request,
                                  const Catalog& catalog, const SimConfig& cfg,
                                  std::int64_t now) {
  if (request.service_id < 0 ||
      static_cast<std::size_t>(request.service_id) >= catalog.services.size())
    throw std::invalid_argument("serve_request: unknown service id");
  const ServiceSpec& service = catalog.services[static_cast<std::size_t>(request.service_id)];
  if (service.model_id < 0 ||
      static_cast<std::size_t>(service.model_id) >= catalog.models.size())
    throw std::invalid_argument("serve_request: unknown model id");
  const ModelSpec& model = catalog.models[static_cast<std::size_t>(service.model_id)];

  ServeOutcome out;
  bool serve_at_edge = false;

  if (lookup(state, model.model_id)) {
    out.decision = ServeDecision::kEdgeHit;
    serve_at_edge = true;
  } else {
    const AdmitResult admitted = admit(state, model, cfg.policy, now);
    if (admitted.loaded) {
      out.decision = ServeDecision::kEdgeLoad;
      out.evictions_policy = static_cast<std::int64_t>(admitted.evicted.size());
      out.switch_cost = switching_cost(model);
      out.latency += model.mem_gb / cfg.catalog.load_gb_per_slot;
      serve_at_edge = true;
    } else {
      out.decision = ServeDecision::kCloud;
      const CloudServe cloud = cloud_serve_cost(request, service, model);
      out.cloud_cost = cloud.cloud_cost;
      out.latency = cloud.latency;
      return out;
    }
  }

  if (serve_at_edge) {
    CacheEntry& entry = state.entries.at(model.model_id);
    record_access(state, model.model_id);
    const double value = ledger_value(entry.ledger, now, cfg.aot);
    out.acc_loss = accuracy_loss(model, value, cfg.acc);
    const EdgeServe edge = edge_serve_cost(request, service, model);
    out.edge_cost = edge.edge_cost;
    out.latency += edge.latency;
    record_thoughts(entry.ledger, now, service.cot_steps, service.tokens_per_step);
    if (enforce_window(entry.ledger, model.context_window, cfg.overflow) ==
        WindowOutcome::kModelEvicted) {
      evict(state, model.model_id);
      out.evictions_context = 1;
    }
  }
  return out;
}

// Runs one slot: samples arrivals and serves them in order.
inline SlotMetrics step(CacheState& state, std::int64_t slot, const SimConfig& cfg,
                        const Catalog& catalog) {
  SlotMetrics m;
  m.slot = slot;
  Pcg32 rng = make_slot_rng(cfg.workload.seed, slot);
  const std::vector<Request> requests =
      sample_requests(slot, rng, cfg.workload, catalog.services);

  for (const Request& r : requests) {
    const ServeOutcome o = serve_request(state, r, catalog, cfg, slot);
    switch (o.decision) {
      case ServeDecision::kEdgeHit: m.hits += 1; break;
      case ServeDecision::kEdgeLoad: m.misses += 1; m.loads += 1; break;
      case ServeDecision::kCloud: m.misses += 1; m.cloud_served += 1; break;
    }
    m.evictions_policy += o.evictions_policy;
    m.evictions_context += o.evictions_context;
    m.breakdown.acc_loss += o.acc_loss;
    m.breakdown.switch_cost += o.switch_cost;
    m.breakdown.edge_cost += o.edge_cost;
    m.breakdown.edge_latency += o.latency;
    m.breakdown.cloud_cost += o.cloud_cost;
    assert(memory_invariant_holds(state));
  }

  m.breakdown.total = slot_total(m.breakdown, cfg.weights);
  m.mean_acc_loss =
      requests.empty() ? 0.0 : m.breakdown.acc_loss / static_cast<double>(requests.size());
  assert(m.hits + m.loads + m.cloud_served == static_cast<std::int64_t>(requests.size()));
  return m;
}

// Canonical text form of a configuration; the digest hashes this.
inline std::string canonical_config_text(const SimConfig& cfg) {
  char buf[64];
  std::string s;
  auto put = [&s, &buf](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%s=%.17g\n", key, v);
    s += buf;
  };
  auto put_i = [&s, &buf](const char* key, long long v) {
    std::snprintf(buf, sizeof(buf), "%s=%lld\n", key, v);
    s += buf;
  };
  put_i("workload.n_services", cfg.workload.n_services);
  put_i("workload.n_agents", cfg.workload.n_agents);
  put("workload.zipf_s", cfg.workload.zipf_exponent);
  put("workload.arrivals_per_slot", cfg.workload.arrivals_per_slot_mean);
  put_i("workload.seed", static_cast<long long>(cfg.workload.seed));
  put_i("workload.n_slots", cfg.workload.n_slots);
  put_i("workload.req_tokens_min", cfg.workload.req_tokens_min);
  put_i("workload.req_tokens_max", cfg.workload.req_tokens_max);
  put_i("catalog.n_models", cfg.catalog.n_models);
  for (std::size_t i = 0; i < cfg.catalog.window_tiers.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "catalog.window_tiers[%zu]=%lld\n", i,
                  static_cast<long long>(cfg.catalog.window_tiers[i]));
    s += buf;
  }
  for (std::size_t i = 0; i < cfg.catalog.mem_tiers.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "catalog.mem_tiers[%zu]=%.17g\n", i,
                  cfg.catalog.mem_tiers[i]);
    s += buf;
  }
  put("catalog.base_loss", cfg.catalog.base_loss);
  put_i("catalog.cot_steps", cfg.catalog.cot_steps);
  put_i("catalog.tokens_per_step", cfg.catalog.tokens_per_step);
  put("catalog.edge_rate", cfg.catalog.edge_rate);
  put("catalog.edge_tok_per_slot", cfg.catalog.edge_tok_per_slot);
  put("catalog.cloud_rate", cfg.catalog.cloud_rate);
  put("catalog.cloud_latency_slots", cfg.catalog.cloud_latency_slots);
  put("catalog.switch_rate", cfg.catalog.switch_rate);
  put("catalog.load_gb_per_slot", cfg.catalog.load_gb_per_slot);
  s += "policy.kind=";
  s += policy_name(cfg.policy.kind);
  s += "\n";
  put("aot.gamma", cfg.aot.gamma);
  put_i("aot.tau", cfg.aot.tokens_per_step);
  put("acc.beta", cfg.acc.beta);
  put("weights.acc", cfg.weights.acc);
  put("weights.switch", cfg.weights.switching);
  put("weights.edge", cfg.weights.edge);
  put("weights.latency", cfg.weights.latency);
  put("weights.cloud", cfg.weights.cloud);
  put("cache.capacity_gb", cfg.capacity_gb);
  s += "cache.overflow=";
  s += (cfg.overflow == OverflowPolicy::kEvictModel ? "evict-model" : "trim-oldest");
  s += "\n";
  return s;
}

inline std::string config_digest(const SimConfig& cfg) {
  // FNV-1a 64 over the canonical text.
  const std::string text = canonical_config_text(cfg);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

inline RunReport run(const SimConfig& cfg) {
  require_valid(cfg);

  RunReport report;
  report.config_digest = config_digest(cfg);
  report.policy = policy_name(cfg.policy.kind);
  report.seed = cfg.workload.seed;

  const Catalog catalog = build_catalog(cfg.workload, cfg.catalog);
  CacheState state;
  state.capacity_gb = cfg.capacity_gb;

  report.per_slot.reserve(static_cast<std::size_t>(cfg.workload.n_slots));
  for (std::int64_t slot = 0; slot < cfg.workload.n_slots; ++slot) {
    SlotMetrics m = step(state, slot, cfg, catalog);
    report.totals += m.breakdown;
    report.per_slot.push_back(std::move(m));
  }
  report.mean_total_per_slot =
      cfg.workload.n_slots == 0
          ? 0.0
          : report.totals.total / static_cast<double>(cfg.workload.n_slots);
  return report;
}

}  // namespace aotsim
