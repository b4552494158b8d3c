#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aotsim/ledger.hpp"
#include "aotsim/workload.hpp"

// Memory-budgeted model cache with pluggable eviction policies.
//
// Policies: LAoT (least aggregate thought value), FIFO (earliest load),
// LFU (fewest accesses) and cloud-only (nothing is ever cached). Ties are
// broken by earlier load slot, then smaller model id, so eviction is a
// total order and runs are deterministic.

namespace aotsim {

enum class PolicyKind { kLaot, kFifo, kLfu, kCloudOnly };

struct Policy {
  PolicyKind kind = PolicyKind::kLaot;
  AotParams aot;  // used by LAoT only
};

inline const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kLaot: return "laot";
    case PolicyKind::kFifo: return "fifo";
    case PolicyKind::kLfu: return "lfu";
    case PolicyKind::kCloudOnly: return "cloud";
  }
  return "?";
}

struct CacheEntry {
  Ledger ledger;
  double mem_gb = 0.0;
  std::int64_t load_slot = 0;
  std::int64_t access_count = 0;
};

struct CacheState {
  double capacity_gb = 5120.0;
  std::map<int, CacheEntry> entries;  // keyed by model_id
  double used_gb = 0.0;
};

struct AdmitResult {
  bool loaded = false;                // false means rejected to cloud
  std::vector<int> evicted;           // ids removed to make room, in order
};

inline bool lookup(const CacheState& state, int model_id) {
  return state.entries.count(model_id) > 0;
}

inline void evict(CacheState& state, int model_id) {
  auto it = state.entries.find(model_id);
  if (it == state.entries.end()) throw std::invalid_argument("evict: model not cached");
  state.used_gb -= it->second.mem_gb;
  state.entries.erase(it);
}

inline void record_access(CacheState& state, int model_id) {
  auto it = state.entries.find(model_id);
  if (it == state.entries.end()) throw std::invalid_argument("record_access: model not cached");
  it->second.access_count += 1;
}

// Chooses the entry the policy would evict at `now`. The comparison key is
// (policy criterion, load_slot, model_id), minimized lexicographically.
inline int evict_candidate(const CacheState& state, const Policy& policy, std::int64_t now) {
  if (state.entries.empty()) throw std::logic_error("evict_candidate: cache is empty");
  if (policy.kind == PolicyKind::kCloudOnly)
    throw std::logic_error("evict_candidate: cloud-only policy never evicts");

  bool first = true;
  int best_id = -1;
  double best_key = 0.0;
  std::int64_t best_load = 0;
  for (const auto& [id, entry] : state.entries) {
    double key = 0.0;
    switch (policy.kind) {
      case PolicyKind::kLaot: key = ledger_value(entry.ledger, now, policy.aot); break;
      case PolicyKind::kFifo: key = static_cast<double>(entry.load_slot); break;
      case PolicyKind::kLfu: key = static_cast<double>(entry.access_count); break;
      case PolicyKind::kCloudOnly: break;
    }
    const bool better =
        first || key < best_key ||
        (key == best_key && (entry.load_slot < best_load ||
                             (entry.load_slot == best_load && id < best_id)));
    if (better) {
      first = false;
      best_id = id;
      best_key = key;
      best_load = entry.load_slot;
    }
  }
  return best_id;
}

// Loads a model on a miss, evicting per policy until it fits. Models that
// can never fit, and every request under cloud-only, are rejected to the
// cloud; rejection is an outcome, not an error.
inline AdmitResult admit(CacheState& state, const ModelSpec& model, const Policy& policy,
                         std::int64_t now) {
  AdmitResult result;
  if (policy.kind == PolicyKind::kCloudOnly) return result;
  if (model.mem_gb > state.capacity_gb) return result;

  while (state.used_gb + model.mem_gb > state.capacity_gb) {
    const int victim = evict_candidate(state, policy, now);
    evict(state, victim);
    result.evicted.push_back(victim);
  }

  CacheEntry entry;
  entry.mem_gb = model.mem_gb;
  entry.load_slot = now;
  entry.access_count = 1;
  state.entries.emplace(model.model_id, std::move(entry));
  state.used_gb += model.mem_gb;
  result.loaded = true;
  return result;
}

// Test support: recomputed memory bookkeeping.
inline double recompute_used_gb(const CacheState& state) {
  double sum = 0.0;
  for (const auto& [id, entry] : state.entries) sum += entry.mem_gb;
  return sum;
}

inline bool memory_invariant_holds(const CacheState& state) {
  return state.used_gb <= state.capacity_gb && state.used_gb == recompute_used_gb(state);
}

}  // namespace aotsim
