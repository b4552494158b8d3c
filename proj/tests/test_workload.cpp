#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "aotsim/workload.hpp"

using namespace aotsim;

namespace {

// Straight-line re-implementation of the documented sampling recipe, used
// as an independent oracle against the library sampler. Every generator
// step is written out inline on purpose.
struct RawPcg {
  std::uint64_t state, inc;
};

std::uint32_t raw_next(RawPcg& g) {
  std::uint64_t old = g.state;
  g.state = old * 6364136223846793005ULL + g.inc;
  auto xs = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  auto rot = static_cast<std::uint32_t>(old >> 59u);
  return (xs >> rot) | (xs << ((~rot + 1u) & 31u));
}

double raw_double(RawPcg& g) {
  std::uint64_t hi = raw_next(g);
  std::uint64_t v = (hi << 32) | raw_next(g);
  return static_cast<double>(v >> 11) * 0x1.0p-53;
}

std::int64_t raw_uniform(RawPcg& g, std::int64_t lo, std::int64_t hi) {
  auto r = static_cast<std::uint32_t>(hi - lo + 1);
  std::uint32_t t = (~r + 1u) % r;
  for (;;) {
    std::uint32_t x = raw_next(g);
    if (x >= t) return lo + static_cast<std::int64_t>(x % r);
  }
}

std::uint64_t sm(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<Request> straight_line_sample(std::uint64_t seed, std::int64_t slot,
                                          const WorkloadConfig& cfg) {
  std::uint64_t hs = static_cast<std::uint64_t>(slot);
  std::uint64_t stream = seed ^ sm(hs);
  std::uint64_t s2 = stream;
  std::uint64_t a = sm(s2), b = sm(s2);
  RawPcg g{0, (b << 1) | 1u};
  raw_next(g);
  g.state += a;
  raw_next(g);

  std::vector<Request> out;
  std::int64_t count = 0;
  if (cfg.arrivals_per_slot_mean > 0.0) {
    const double limit = std::exp(-cfg.arrivals_per_slot_mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= raw_double(g);
    } while (p > limit);
    count = k - 1;
  }
  if (count == 0) return out;

  const int n = cfg.n_services;
  std::vector<double> w(static_cast<std::size_t>(n));
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] =
        std::pow(static_cast<double>(i + 1), -cfg.zipf_exponent);
    sum += w[static_cast<std::size_t>(i)];
  }
  std::vector<double> cdf(static_cast<std::size_t>(n));
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    acc += w[static_cast<std::size_t>(i)] / sum;
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  cdf[static_cast<std::size_t>(n - 1)] = 1.0;

  for (std::int64_t i = 0; i < count; ++i) {
    const double u = raw_double(g);
    int svc = 0;
    while (svc < n - 1 && u >= cdf[static_cast<std::size_t>(svc)]) ++svc;
    Request r;
    r.slot = slot;
    r.service_id = svc;
    r.agent_id = static_cast<int>(raw_uniform(g, 0, cfg.n_agents - 1));
    r.req_tokens = raw_uniform(g, cfg.req_tokens_min, cfg.req_tokens_max);
    out.push_back(r);
  }
  return out;
}

bool same_requests(const std::vector<Request>& a, const std::vector<Request>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].slot != b[i].slot || a[i].service_id != b[i].service_id ||
        a[i].agent_id != b[i].agent_id || a[i].req_tokens != b[i].req_tokens)
      return false;
  return true;
}

}  // namespace

TEST_CASE("zipf_weights basics", "[workload]") {
  SECTION("single element") {
    auto w = zipf_weights(1, 1.0);
    REQUIRE(w.size() == 1);
    REQUIRE(w[0] == Catch::Approx(1.0));
  }
  SECTION("zero exponent is uniform") {
    auto w = zipf_weights(4, 0.0);
    for (double x : w) REQUIRE(x == Catch::Approx(0.25));
  }
  SECTION("harmonic normalization") {
    auto w = zipf_weights(3, 1.0);
    REQUIRE(w[0] == Catch::Approx(6.0 / 11.0).epsilon(1e-12));
    REQUIRE(w[1] == Catch::Approx(3.0 / 11.0).epsilon(1e-12));
    REQUIRE(w[2] == Catch::Approx(2.0 / 11.0).epsilon(1e-12));
  }
  SECTION("n = 0 rejected") { REQUIRE_THROWS_AS(zipf_weights(0, 1.0), std::invalid_argument); }
}

TEST_CASE("zipf_weights sums to one and is non-increasing", "[workload][property]") {
  Pcg32 rng(123, 456);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 200));
    const double s = 2.0 * rng.next_double();
    auto w = zipf_weights(n, s);
    double sum = 0;
    for (double x : w) sum += x;
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-12));
    for (std::size_t i = 1; i < w.size(); ++i) REQUIRE(w[i] <= w[i - 1]);
  }
}

TEST_CASE("build_catalog shapes the default catalog", "[workload]") {
  WorkloadConfig cfg;
  CatalogParams params;
  auto cat = build_catalog(cfg, params);

  REQUIRE(cat.services.size() == 30);
  REQUIRE(cat.models.size() == 30);
  for (std::size_t m = 0; m < cat.models.size(); ++m) {
    const std::int64_t expected[] = {4096, 16384, 32768};
    REQUIRE(cat.models[m].context_window == expected[m % 3]);
  }
  for (const auto& svc : cat.services) {
    REQUIRE(svc.tokens_per_step == 200);
    REQUIRE(svc.model_id == svc.service_id);  // one model per service
    REQUIRE(svc.popularity_rank == svc.service_id + 1);
  }
}

TEST_CASE("build_catalog single service", "[workload]") {
  WorkloadConfig cfg;
  cfg.n_services = 1;
  auto cat = build_catalog(cfg, CatalogParams{});
  REQUIRE(cat.services.size() == 1);
  REQUIRE(cat.services[0].model_id == 0);
}

TEST_CASE("build_catalog folds services onto fewer models", "[workload]") {
  WorkloadConfig cfg;
  cfg.n_services = 6;
  CatalogParams params;
  params.n_models = 2;
  auto cat = build_catalog(cfg, params);
  REQUIRE(cat.models.size() == 2);
  for (const auto& svc : cat.services) REQUIRE(svc.model_id == svc.service_id % 2);
}

TEST_CASE("sample_requests with zero arrival rate is empty", "[workload]") {
  WorkloadConfig cfg;
  cfg.arrivals_per_slot_mean = 0.0;
  auto cat = build_catalog(cfg, CatalogParams{});
  REQUIRE(sample_requests(0, cfg, cat.services).empty());
}

TEST_CASE("sample_requests is deterministic in (seed, slot, config)", "[workload]") {
  WorkloadConfig cfg;
  cfg.seed = 987654321;
  auto cat = build_catalog(cfg, CatalogParams{});
  for (std::int64_t slot : {0, 3, 99}) {
    auto a = sample_requests(slot, cfg, cat.services);
    auto b = sample_requests(slot, cfg, cat.services);
    REQUIRE(same_requests(a, b));
  }
}

TEST_CASE("sample_requests matches the frozen golden draw", "[workload]") {
  WorkloadConfig cfg;
  cfg.seed = 42;
  cfg.arrivals_per_slot_mean = 4.0;
  cfg.zipf_exponent = 1.0;
  auto cat = build_catalog(cfg, CatalogParams{});

  // Values produced once by the straight-line sampler and frozen:
  // (service_id, agent_id, req_tokens) per arrival, in draw order.
  const std::vector<std::array<std::int64_t, 3>> slot0 = {{1, 7, 460}};
  const std::vector<std::array<std::int64_t, 3>> slot1 = {{0, 5, 397}};
  const std::vector<std::array<std::int64_t, 3>> slot7 = {
      {25, 2, 364}, {8, 6, 258}, {1, 3, 148}, {0, 2, 159}, {1, 9, 355}};

  auto check = [&](std::int64_t slot, const std::vector<std::array<std::int64_t, 3>>& want) {
    auto got = sample_requests(slot, cfg, cat.services);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      INFO("slot " << slot << " arrival " << i);
      REQUIRE(got[i].service_id == want[i][0]);
      REQUIRE(got[i].agent_id == want[i][1]);
      REQUIRE(got[i].req_tokens == want[i][2]);
    }
  };
  check(0, slot0);
  check(1, slot1);
  check(7, slot7);
}

TEST_CASE("sample_requests equals the straight-line oracle", "[workload][property]") {
  Pcg32 meta(7, 11);
  for (int trial = 0; trial < 25; ++trial) {
    WorkloadConfig cfg;
    cfg.seed = meta.next_u64();
    cfg.n_services = static_cast<int>(meta.uniform_int(1, 40));
    cfg.n_agents = static_cast<int>(meta.uniform_int(1, 12));
    cfg.zipf_exponent = 1.5 * meta.next_double();
    cfg.arrivals_per_slot_mean = 8.0 * meta.next_double();
    auto cat = build_catalog(cfg, CatalogParams{});
    const std::int64_t slot = meta.uniform_int(0, 1000);
    auto got = sample_requests(slot, cfg, cat.services);
    auto want = straight_line_sample(cfg.seed, slot, cfg);
    REQUIRE(same_requests(got, want));
  }
}

TEST_CASE("empirical service frequencies follow the weights", "[workload][slow]") {
  WorkloadConfig cfg;
  cfg.seed = 2024;
  cfg.zipf_exponent = 1.0;
  auto cat = build_catalog(cfg, CatalogParams{});
  auto w = zipf_weights(static_cast<std::size_t>(cfg.n_services), cfg.zipf_exponent);

  std::vector<std::int64_t> counts(static_cast<std::size_t>(cfg.n_services), 0);
  std::int64_t total = 0;
  std::int64_t slot = 0;
  while (total < 100000) {
    for (const auto& r : sample_requests(slot, cfg, cat.services)) {
      counts[static_cast<std::size_t>(r.service_id)] += 1;
      ++total;
    }
    ++slot;
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double freq = static_cast<double>(counts[i]) / static_cast<double>(total);
    REQUIRE(std::abs(freq - w[i]) <= 0.01);
  }
}
