#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <stdexcept>

// Per-model thought ledger.
//
// Every edge-served request appends chain-of-thought steps ("thoughts") to
// the serving model's context. A thought's value decays geometrically with
// its age in slots; the sum over a ledger is the model's retained
// reasoning value, which both the accuracy model and the LAoT eviction
// policy consume. The context window bounds the ledger's token total.

namespace aotsim {

struct Thought {
  std::int64_t created_slot = 0;
  std::int64_t tokens = 0;
};

struct Ledger {
  std::deque<Thought> thoughts;   // oldest first
  std::int64_t token_total = 0;
};

struct AotParams {
  double gamma = 0.9;              // per-slot decay of thought value, in (0,1]
  std::int64_t tokens_per_step = 200;  // normalization: one standard step is worth 1
};

enum class OverflowPolicy {
  kEvictModel,  // context overflow evicts the whole model
  kTrimOldest,  // drop oldest thoughts until the window fits
};

enum class WindowOutcome {
  kFits,
  kModelEvicted,
  kTrimmed,
};

// Age of a thought in whole slots.
inline std::int64_t aot(const Thought& t, std::int64_t now) {
  if (now < t.created_slot) throw std::invalid_argument("aot: now precedes creation slot");
  return now - t.created_slot;
}

// Discounted value: (tokens / tau) * gamma^age.
inline double thought_value(const Thought& t, std::int64_t now, const AotParams& params) {
  const std::int64_t age = aot(t, now);
  const double norm = static_cast<double>(t.tokens) / static_cast<double>(params.tokens_per_step);
  return norm * std::pow(params.gamma, static_cast<double>(age));
}

inline double ledger_value(const Ledger& ledger, std::int64_t now, const AotParams& params) {
  double sum = 0.0;
  for (const Thought& t : ledger.thoughts) sum += thought_value(t, now, params);
  return sum;
}

// Appends `steps` thoughts of tokens_per_step tokens each, created now.
inline void record_thoughts(Ledger& ledger, std::int64_t now, int steps,
                            std::int64_t tokens_per_step) {
  if (steps < 0) throw std::invalid_argument("record_thoughts: steps must be >= 0");
  assert(ledger.thoughts.empty() || ledger.thoughts.back().created_slot <= now);
  for (int i = 0; i < steps; ++i) {
    ledger.thoughts.push_back(Thought{now, tokens_per_step});
    ledger.token_total += tokens_per_step;
  }
}

// Applies the context-window constraint. Under kEvictModel the ledger is
// left untouched and the caller is expected to evict the model (which
// discards the ledger with it). Under kTrimOldest the oldest thoughts are
// dropped, preserving order, until the total fits.
inline WindowOutcome enforce_window(Ledger& ledger, std::int64_t window,
                                    OverflowPolicy policy) {
  if (window <= 0) throw std::invalid_argument("enforce_window: window must be > 0");
  if (ledger.token_total <= window) return WindowOutcome::kFits;
  if (policy == OverflowPolicy::kEvictModel) return WindowOutcome::kModelEvicted;
  while (ledger.token_total > window && !ledger.thoughts.empty()) {
    ledger.token_total -= ledger.thoughts.front().tokens;
    ledger.thoughts.pop_front();
  }
  return WindowOutcome::kTrimmed;
}

// Test support: recomputes the token total from scratch.
inline std::int64_t recompute_token_total(const Ledger& ledger) {
  std::int64_t sum = 0;
  for (const Thought& t : ledger.thoughts) sum += t.tokens;
  return sum;
}

}  // namespace aotsim
