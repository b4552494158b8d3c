#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "aotsim/rng.hpp"
#include "aotsim/sim.hpp"
#include "aotsim/workload.hpp"

// Straight-line verification oracle for the engine. Deliberately naive:
// every eviction candidate is recomputed by a full scan, every ledger
// value by full summation, memory by re-adding footprints. It shares only
// the domain types, the request sampler and the report shape with the
// engine in sim.hpp; the caching and accounting logic is re-derived here
// from first principles. Keep it dumb.

namespace aotsim {
namespace reference {

struct RefThought {
  std::int64_t slot;
  std::int64_t tokens;
};

struct RefModel {
  int model_id;
  std::int64_t load_slot;
  std::int64_t access_count;
  std::vector<RefThought> thoughts;  // oldest first
};

inline double ref_ledger_value(const RefModel& m, std::int64_t now, const AotParams& aot) {
  double sum = 0.0;
  for (const RefThought& t : m.thoughts) {
    const double age = static_cast<double>(now - t.slot);
    sum += (static_cast<double>(t.tokens) / static_cast<double>(aot.tokens_per_step)) *
           std::pow(aot.gamma, age);
  }
  return sum;
}

inline double ref_used_gb(const std::vector<RefModel>& loaded,
                          const std::vector<ModelSpec>& models) {
  double used = 0.0;
  for (const RefModel& m : loaded)
    used += models[static_cast<std::size_t>(m.model_id)].mem_gb;
  return used;
}

// Full-scan victim selection with the documented tie-break:
// (criterion, load_slot, model_id), all minimized.
inline std::size_t ref_victim(const std::vector<RefModel>& loaded, const Policy& policy,
                              std::int64_t now) {
  std::size_t best = 0;
  bool have = false;
  double best_key = 0.0;
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    double key = 0.0;
    if (policy.kind == PolicyKind::kLaot)
      key = ref_ledger_value(loaded[i], now, policy.aot);
    else if (policy.kind == PolicyKind::kFifo)
      key = static_cast<double>(loaded[i].load_slot);
    else
      key = static_cast<double>(loaded[i].access_count);
    bool better = !have;
    if (have) {
      if (key < best_key)
        better = true;
      else if (key == best_key) {
        if (loaded[i].load_slot < loaded[best].load_slot)
          better = true;
        else if (loaded[i].load_slot == loaded[best].load_slot &&
                 loaded[i].model_id < loaded[best].model_id)
          better = true;
      }
    }
    if (better) {
      have = true;
      best = i;
      best_key = key;
    }
  }
  return best;
}

}  // namespace reference

inline RunReport reference_run(const SimConfig& cfg) {
  using reference::RefModel;
  using reference::RefThought;

  require_valid(cfg);

  RunReport report;
  report.config_digest = config_digest(cfg);
  report.policy = policy_name(cfg.policy.kind);
  report.seed = cfg.workload.seed;

  const Catalog catalog = build_catalog(cfg.workload, cfg.catalog);
  std::vector<RefModel> loaded;

  for (std::int64_t slot = 0; slot < cfg.workload.n_slots; ++slot) {
    Pcg32 rng = make_slot_rng(cfg.workload.seed, slot);
    const std::vector<Request> requests =
        sample_requests(slot, rng, cfg.workload, catalog.services);

    SlotMetrics m;
    m.slot = slot;

    for (const Request& r : requests) {
      const ServiceSpec& svc = catalog.services[static_cast<std::size_t>(r.service_id)];
      const ModelSpec& model = catalog.models[static_cast<std::size_t>(svc.model_id)];

      std::ptrdiff_t pos = -1;
      for (std::size_t i = 0; i < loaded.size(); ++i)
        if (loaded[i].model_id == model.model_id) pos = static_cast<std::ptrdiff_t>(i);

      bool at_edge = false;
      double lat = 0.0;

      if (pos >= 0) {
        m.hits += 1;
        at_edge = true;
      } else {
        m.misses += 1;
        bool can_load = cfg.policy.kind != PolicyKind::kCloudOnly &&
                        model.mem_gb <= cfg.capacity_gb;
        if (can_load) {
          while (reference::ref_used_gb(loaded, catalog.models) + model.mem_gb >
                 cfg.capacity_gb) {
            const std::size_t victim = reference::ref_victim(loaded, cfg.policy, slot);
            loaded.erase(loaded.begin() + static_cast<std::ptrdiff_t>(victim));
            m.evictions_policy += 1;
          }
          RefModel fresh;
          fresh.model_id = model.model_id;
          fresh.load_slot = slot;
          fresh.access_count = 1;
          loaded.push_back(fresh);
          pos = static_cast<std::ptrdiff_t>(loaded.size()) - 1;
          m.loads += 1;
          m.breakdown.switch_cost += model.switch_rate * model.mem_gb;
          lat += model.mem_gb / cfg.catalog.load_gb_per_slot;
          at_edge = true;
        } else {
          m.cloud_served += 1;
          const std::int64_t toks =
              r.req_tokens + static_cast<std::int64_t>(svc.cot_steps) * svc.tokens_per_step;
          m.breakdown.cloud_cost += model.cloud_rate * static_cast<double>(toks) / 1000.0;
          m.breakdown.edge_latency += model.cloud_latency_slots;
        }
      }

      if (at_edge) {
        RefModel& entry = loaded[static_cast<std::size_t>(pos)];
        entry.access_count += 1;
        const double value = reference::ref_ledger_value(entry, slot, cfg.aot);
        m.breakdown.acc_loss += model.base_loss * std::exp(-cfg.acc.beta * value);
        const std::int64_t toks =
            r.req_tokens + static_cast<std::int64_t>(svc.cot_steps) * svc.tokens_per_step;
        m.breakdown.edge_cost += model.edge_rate * static_cast<double>(toks) / 1000.0;
        lat += static_cast<double>(toks) / model.edge_tok_per_slot;
        m.breakdown.edge_latency += lat;
        for (int i = 0; i < svc.cot_steps; ++i)
          entry.thoughts.push_back(RefThought{slot, svc.tokens_per_step});

        std::int64_t token_sum = 0;
        for (const RefThought& t : entry.thoughts) token_sum += t.tokens;
        if (token_sum > model.context_window) {
          if (cfg.overflow == OverflowPolicy::kEvictModel) {
            loaded.erase(loaded.begin() + pos);
            m.evictions_context += 1;
          } else {
            std::size_t drop = 0;
            while (token_sum > model.context_window) {
              token_sum -= entry.thoughts[drop].tokens;
              ++drop;
            }
            entry.thoughts.erase(entry.thoughts.begin(),
                                 entry.thoughts.begin() + static_cast<std::ptrdiff_t>(drop));
          }
        }
      }
    }

    m.breakdown.total = slot_total(m.breakdown, cfg.weights);
    m.mean_acc_loss =
        requests.empty() ? 0.0 : m.breakdown.acc_loss / static_cast<double>(requests.size());
    report.totals += m.breakdown;
    report.per_slot.push_back(m);
  }

  report.mean_total_per_slot =
      cfg.workload.n_slots == 0
          ? 0.0
          : report.totals.total / static_cast<double>(cfg.workload.n_slots);
  return report;
}

}  // namespace aotsim
