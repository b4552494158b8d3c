#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "aotsim/workload.hpp"

// The five execution-cost components: edge accuracy loss, model switching
// cost, edge inference cost, edge inference latency and cloud inference
// cost. A slot's scalar cost is their fixed weighted sum.

namespace aotsim {

struct CostWeights {
  double acc = 10.0;
  double switching = 1.0;
  double edge = 1.0;
  double latency = 1.0;
  double cloud = 1.0;
};

struct CostBreakdown {
  double acc_loss = 0.0;
  double switch_cost = 0.0;
  double edge_cost = 0.0;
  double edge_latency = 0.0;
  double cloud_cost = 0.0;
  double total = 0.0;

  CostBreakdown& operator+=(const CostBreakdown& o) {
    acc_loss += o.acc_loss;
    switch_cost += o.switch_cost;
    edge_cost += o.edge_cost;
    edge_latency += o.edge_latency;
    cloud_cost += o.cloud_cost;
    total += o.total;
    return *this;
  }
};

struct AccuracyParams {
  double beta = 0.5;  // sensitivity of accuracy loss to retained thought value
};

// Edge accuracy loss shrinks exponentially with retained thought value:
// base_loss * exp(-beta * V). Cloud-served requests contribute zero.
inline double accuracy_loss(const ModelSpec& model, double thought_value,
                            const AccuracyParams& params) {
  if (thought_value < 0.0) throw std::invalid_argument("accuracy_loss: negative thought value");
  return model.base_loss * std::exp(-params.beta * thought_value);
}

// Charged once per load event.
inline double switching_cost(const ModelSpec& model) {
  return model.switch_rate * model.mem_gb;
}

struct EdgeServe {
  double edge_cost = 0.0;
  double latency = 0.0;
  std::int64_t tokens_processed = 0;
};

inline EdgeServe edge_serve_cost(const Request& request, const ServiceSpec& service,
                                 const ModelSpec& model) {
  EdgeServe out;
  out.tokens_processed =
      request.req_tokens + static_cast<std::int64_t>(service.cot_steps) * service.tokens_per_step;
  out.edge_cost = model.edge_rate * static_cast<double>(out.tokens_processed) / 1000.0;
  out.latency = static_cast<double>(out.tokens_processed) / model.edge_tok_per_slot;
  return out;
}

struct CloudServe {
  double cloud_cost = 0.0;
  double latency = 0.0;
  std::int64_t tokens_processed = 0;
};

// Cloud serving prices the same token volume at the cloud rate and pays a
// fixed WAN latency regardless of size.
inline CloudServe cloud_serve_cost(const Request& request, const ServiceSpec& service,
                                   const ModelSpec& model) {
  CloudServe out;
  out.tokens_processed =
      request.req_tokens + static_cast<std::int64_t>(service.cot_steps) * service.tokens_per_step;
  out.cloud_cost = model.cloud_rate * static_cast<double>(out.tokens_processed) / 1000.0;
  out.latency = model.cloud_latency_slots;
  return out;
}

inline double slot_total(const CostBreakdown& parts, const CostWeights& weights) {
  return weights.acc * parts.acc_loss + weights.switching * parts.switch_cost +
         weights.edge * parts.edge_cost + weights.latency * parts.edge_latency +
         weights.cloud * parts.cloud_cost;
}

}  // namespace aotsim
