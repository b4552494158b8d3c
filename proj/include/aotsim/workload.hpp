#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aotsim/rng.hpp"

// Model/service catalog and the synthetic request stream.
//
// The edge server caches large model instances; mobile agents issue
// requests for services, each service bound to one model. Popularity
// follows a Zipf law over service rank and arrivals are Poisson per slot.

namespace aotsim {

// A cacheable model instance hosted by the edge server.
struct ModelSpec {
  int model_id = 0;
  double mem_gb = 0.0;             // memory footprint when loaded
  std::int64_t context_window = 0; // token capacity for accumulated thoughts
  double base_loss = 0.0;          // edge accuracy loss with an empty context, in [0,1]
  double edge_rate = 0.0;          // edge inference cost per 1K tokens
  double edge_tok_per_slot = 1.0;  // serving throughput, tokens per slot
  double cloud_rate = 0.0;         // cloud inference cost per 1K tokens
  double cloud_latency_slots = 0.0;
  double switch_rate = 0.0;        // load cost per GB
};

// A service type; each request names a service and is served by its model.
struct ServiceSpec {
  int service_id = 0;
  int model_id = 0;
  int popularity_rank = 1;      // 1-based Zipf rank
  int cot_steps = 0;            // reasoning steps generated per edge-served request
  std::int64_t tokens_per_step = 200;
};

// One offloaded request from a mobile agent.
struct Request {
  std::int64_t slot = 0;
  int agent_id = 0;
  int service_id = 0;
  std::int64_t req_tokens = 0;  // size of the offloaded intermediate results
};

struct WorkloadConfig {
  int n_services = 30;
  int n_agents = 10;
  double zipf_exponent = 1.0;
  double arrivals_per_slot_mean = 5.0;
  std::uint64_t seed = 1;
  std::int64_t n_slots = 500;
  std::int64_t req_tokens_min = 64;
  std::int64_t req_tokens_max = 512;
};

// Catalog construction knobs. Tiers cycle over the model index; a single
// entry pins every model to that tier. n_models == 0 binds one model per
// service; a smaller value folds services onto models round-robin.
struct CatalogParams {
  int n_models = 0;
  std::vector<std::int64_t> window_tiers{4096, 16384, 32768};
  std::vector<double> mem_tiers{160.0, 640.0, 1600.0};
  double base_loss = 0.3;
  int cot_steps = 3;
  std::int64_t tokens_per_step = 200;
  double edge_rate = 2.0;
  double edge_tok_per_slot = 4000.0;
  double cloud_rate = 6.0;
  double cloud_latency_slots = 0.8;
  double switch_rate = 0.05;
  double load_gb_per_slot = 2000.0;  // model load bandwidth, drives load latency
};

struct Catalog {
  std::vector<ModelSpec> models;
  std::vector<ServiceSpec> services;
};

// Normalized Zipf weights over n ranks: w[k] proportional to 1/(k+1)^s.
inline std::vector<double> zipf_weights(std::size_t n, double s) {
  if (n == 0) throw std::invalid_argument("zipf_weights: n must be >= 1");
  if (s < 0.0) throw std::invalid_argument("zipf_weights: exponent must be >= 0");
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::pow(static_cast<double>(k + 1), -s);
    sum += w[k];
  }
  for (double& x : w) x /= sum;
  return w;
}

inline Catalog build_catalog(const WorkloadConfig& config, const CatalogParams& params) {
  if (config.n_services < 1) throw std::invalid_argument("build_catalog: n_services must be >= 1");
  if (params.window_tiers.empty() || params.mem_tiers.empty())
    throw std::invalid_argument("build_catalog: tier lists must be non-empty");

  Catalog cat;
  const int n_models = params.n_models > 0 ? params.n_models : config.n_services;
  cat.models.reserve(static_cast<std::size_t>(n_models));
  for (int m = 0; m < n_models; ++m) {
    ModelSpec spec;
    spec.model_id = m;
    spec.mem_gb = params.mem_tiers[static_cast<std::size_t>(m) % params.mem_tiers.size()];
    spec.context_window =
        params.window_tiers[static_cast<std::size_t>(m) % params.window_tiers.size()];
    spec.base_loss = params.base_loss;
    spec.edge_rate = params.edge_rate;
    spec.edge_tok_per_slot = params.edge_tok_per_slot;
    spec.cloud_rate = params.cloud_rate;
    spec.cloud_latency_slots = params.cloud_latency_slots;
    spec.switch_rate = params.switch_rate;
    cat.models.push_back(spec);
  }

  cat.services.reserve(static_cast<std::size_t>(config.n_services));
  for (int s = 0; s < config.n_services; ++s) {
    ServiceSpec svc;
    svc.service_id = s;
    svc.model_id = s % n_models;
    svc.popularity_rank = s + 1;
    svc.cot_steps = params.cot_steps;
    svc.tokens_per_step = params.tokens_per_step;
    cat.services.push_back(svc);
  }
  return cat;
}

// Popularity weights for a concrete service list (rank-based Zipf).
inline std::vector<double> service_weights(const std::vector<ServiceSpec>& services, double s) {
  if (services.empty()) throw std::invalid_argument("service_weights: no services");
  std::vector<double> w(services.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < services.size(); ++i) {
    w[i] = std::pow(static_cast<double>(services[i].popularity_rank), -s);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

// Draws the slot's request list from an already positioned generator.
// Per arrival the draw order is: service, agent, req_tokens. Output order
// is the draw order. Callers wanting the reproducibility contract should
// pass make_slot_rng(config.seed, slot).
inline std::vector<Request> sample_requests(std::int64_t slot, Pcg32& rng,
                                            const WorkloadConfig& config,
                                            const std::vector<ServiceSpec>& services) {
  std::vector<Request> out;
  const std::int64_t count = rng.poisson(config.arrivals_per_slot_mean);
  if (count == 0) return out;

  DiscreteCdf service_cdf(service_weights(services, config.zipf_exponent));
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    Request r;
    r.slot = slot;
    r.service_id = services[service_cdf.sample(rng)].service_id;
    r.agent_id = static_cast<int>(rng.uniform_int(0, config.n_agents - 1));
    r.req_tokens = rng.uniform_int(config.req_tokens_min, config.req_tokens_max);
    out.push_back(r);
  }
  return out;
}

// Convenience overload deriving the slot substream from the config seed.
inline std::vector<Request> sample_requests(std::int64_t slot, const WorkloadConfig& config,
                                            const std::vector<ServiceSpec>& services) {
  Pcg32 rng = make_slot_rng(config.seed, slot);
  return sample_requests(slot, rng, config, services);
}

}  // namespace aotsim
