#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "aotsim/cache.hpp"
#include "aotsim/rng.hpp"

using namespace aotsim;

namespace {

ModelSpec make_model(int id, double mem_gb) {
  ModelSpec m;
  m.model_id = id;
  m.mem_gb = mem_gb;
  m.context_window = 4096;
  return m;
}

// Exhaustive re-scan of the eviction criterion, independent of the
// bookkeeping inside evict_candidate.
int scan_victim(const CacheState& state, const Policy& policy, std::int64_t now) {
  int best = -1;
  double best_key = 0.0;
  std::int64_t best_load = 0;
  for (const auto& [id, e] : state.entries) {
    double key;
    if (policy.kind == PolicyKind::kLaot) {
      key = 0.0;
      for (const Thought& t : e.ledger.thoughts)
        key += (static_cast<double>(t.tokens) /
                static_cast<double>(policy.aot.tokens_per_step)) *
               std::pow(policy.aot.gamma, static_cast<double>(now - t.created_slot));
    } else if (policy.kind == PolicyKind::kFifo) {
      key = static_cast<double>(e.load_slot);
    } else {
      key = static_cast<double>(e.access_count);
    }
    if (best < 0 || key < best_key || (key == best_key && e.load_slot < best_load) ||
        (key == best_key && e.load_slot == best_load && id < best)) {
      best = id;
      best_key = key;
      best_load = e.load_slot;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("lookup reflects residency", "[cache]") {
  CacheState state;
  state.capacity_gb = 5120;
  REQUIRE_FALSE(lookup(state, 3));

  Policy policy;
  REQUIRE(admit(state, make_model(3, 140), policy, 0).loaded);
  REQUIRE(lookup(state, 3));

  evict(state, 3);
  REQUIRE_FALSE(lookup(state, 3));
}

TEST_CASE("admit loads, rejects oversized models, evicts for space", "[cache]") {
  Policy fifo;
  fifo.kind = PolicyKind::kFifo;

  SECTION("ample capacity loads without eviction") {
    CacheState state;
    state.capacity_gb = 5120;
    auto r = admit(state, make_model(0, 140), fifo, 0);
    REQUIRE(r.loaded);
    REQUIRE(r.evicted.empty());
    REQUIRE(state.used_gb == 140.0);
  }
  SECTION("a model larger than total capacity goes to the cloud") {
    CacheState state;
    state.capacity_gb = 5120;
    auto r = admit(state, make_model(0, 6000), fifo, 0);
    REQUIRE_FALSE(r.loaded);
    REQUIRE(state.entries.empty());
  }
  SECTION("FIFO makes room by load order") {
    CacheState state;
    state.capacity_gb = 300;
    REQUIRE(admit(state, make_model(0, 140), fifo, 1).loaded);
    REQUIRE(admit(state, make_model(1, 140), fifo, 2).loaded);
    auto r = admit(state, make_model(2, 140), fifo, 3);
    REQUIRE(r.loaded);
    REQUIRE(r.evicted == std::vector<int>{0});
    REQUIRE(state.used_gb == 280.0);
  }
}

TEST_CASE("record_access counts serves and nothing else", "[cache]") {
  CacheState state;
  state.capacity_gb = 1000;
  Policy policy;
  admit(state, make_model(5, 100), policy, 0);
  REQUIRE(state.entries.at(5).access_count == 1);

  record_access(state, 5);
  REQUIRE(state.entries.at(5).access_count == 2);
  for (int i = 0; i < 7; ++i) record_access(state, 5);
  REQUIRE(state.entries.at(5).access_count == 9);
  REQUIRE(state.used_gb == 100.0);

  REQUIRE_THROWS_AS(record_access(state, 77), std::invalid_argument);
}

TEST_CASE("evict removes exactly one entry and its thoughts", "[cache]") {
  CacheState state;
  state.capacity_gb = 1000;
  Policy policy;
  admit(state, make_model(1, 100), policy, 0);
  admit(state, make_model(2, 200), policy, 0);
  record_thoughts(state.entries.at(1).ledger, 0, 3, 200);

  evict(state, 1);
  REQUIRE(state.used_gb == 200.0);
  REQUIRE(lookup(state, 2));
  REQUIRE(state.entries.at(2).access_count == 1);

  // re-admission starts from an empty ledger
  admit(state, make_model(1, 100), policy, 5);
  REQUIRE(ledger_value(state.entries.at(1).ledger, 5, policy.aot) == 0.0);

  CacheState single;
  single.capacity_gb = 100;
  admit(single, make_model(9, 50), policy, 0);
  evict(single, 9);
  REQUIRE(single.used_gb == 0.0);
  REQUIRE_THROWS_AS(evict(single, 9), std::invalid_argument);
}

TEST_CASE("evict_candidate picks the policy minimum", "[cache]") {
  SECTION("a lone entry is the candidate under every policy") {
    for (auto kind : {PolicyKind::kLaot, PolicyKind::kFifo, PolicyKind::kLfu}) {
      CacheState state;
      state.capacity_gb = 1000;
      Policy policy;
      policy.kind = kind;
      admit(state, make_model(4, 100), policy, 2);
      REQUIRE(evict_candidate(state, policy, 5) == 4);
    }
  }
  SECTION("LAoT takes the least valuable ledger") {
    CacheState state;
    state.capacity_gb = 1000;
    Policy policy;  // laot, gamma 0.9, tau 200
    admit(state, make_model(1, 100), policy, 0);
    admit(state, make_model(2, 100), policy, 0);
    record_thoughts(state.entries.at(1).ledger, 0, 1, 60);   // value 0.3
    record_thoughts(state.entries.at(2).ledger, 0, 1, 140);  // value 0.7
    REQUIRE(evict_candidate(state, policy, 0) == 1);
  }
  SECTION("ties break on load slot, then model id") {
    CacheState state;
    state.capacity_gb = 1000;
    Policy policy;
    policy.kind = PolicyKind::kLfu;
    admit(state, make_model(7, 100), policy, 3);
    admit(state, make_model(2, 100), policy, 1);
    admit(state, make_model(5, 100), policy, 1);
    // all counts equal 1; slot 1 beats slot 3; id 2 beats id 5
    REQUIRE(evict_candidate(state, policy, 4) == 2);
  }
  SECTION("empty cache is a precondition violation") {
    CacheState state;
    Policy policy;
    REQUIRE_THROWS_AS(evict_candidate(state, policy, 0), std::logic_error);
  }
}

TEST_CASE("evict_candidate matches an exhaustive scan", "[cache][property]") {
  Pcg32 rng(3, 5);
  for (int trial = 0; trial < 300; ++trial) {
    CacheState state;
    state.capacity_gb = 1e9;
    Policy policy;
    policy.kind = static_cast<PolicyKind>(rng.uniform_int(0, 2));
    const std::int64_t now = 50;
    const int n = 6;
    for (int id = 0; id < n; ++id) {
      const auto load_slot = rng.uniform_int(0, 20);
      admit(state, make_model(id, 100), policy, load_slot);
      auto& e = state.entries.at(id);
      e.access_count = rng.uniform_int(1, 10);
      std::int64_t slot = load_slot;
      const int thoughts = static_cast<int>(rng.uniform_int(0, 10));
      for (int t = 0; t < thoughts; ++t) {
        slot += rng.uniform_int(0, 3);
        if (slot > now) slot = now;
        record_thoughts(e.ledger, slot, 1, rng.uniform_int(1, 400));
      }
    }
    const int got = evict_candidate(state, policy, now);
    REQUIRE(got == scan_victim(state, policy, now));
    REQUIRE(got == evict_candidate(state, policy, now));  // pure function of its inputs
  }
}

TEST_CASE("LAoT choice is invariant under common token scaling", "[cache][property]") {
  Pcg32 rng(8, 9);
  for (int trial = 0; trial < 100; ++trial) {
    CacheState state;
    state.capacity_gb = 1e9;
    Policy policy;
    for (int id = 0; id < 5; ++id) {
      admit(state, make_model(id, 10), policy, rng.uniform_int(0, 5));
      auto& e = state.entries.at(id);
      const int thoughts = static_cast<int>(rng.uniform_int(0, 8));
      for (int t = 0; t < thoughts; ++t)
        record_thoughts(e.ledger, rng.uniform_int(0, 30), 1, rng.uniform_int(1, 200));
    }
    const int before = evict_candidate(state, policy, 30);
    for (auto& [id, e] : state.entries) {
      Ledger scaled;
      for (const Thought& t : e.ledger.thoughts)
        record_thoughts(scaled, t.created_slot, 1, t.tokens * 4);
      e.ledger = std::move(scaled);
    }
    REQUIRE(evict_candidate(state, policy, 30) == before);
  }
}

TEST_CASE("LFU always evicts the strictly fewest-accessed entry", "[cache]") {
  CacheState state;
  state.capacity_gb = 1000;
  Policy lfu;
  lfu.kind = PolicyKind::kLfu;
  for (int id = 0; id < 4; ++id) admit(state, make_model(id, 100), lfu, id);
  for (int i = 0; i < 5; ++i) record_access(state, 0);
  for (int i = 0; i < 2; ++i) record_access(state, 1);
  for (int i = 0; i < 9; ++i) record_access(state, 3);
  // counts: {0:6, 1:3, 2:1, 3:10}
  REQUIRE(evict_candidate(state, lfu, 10) == 2);
}

TEST_CASE("cloud-only never caches and never mutates", "[cache]") {
  CacheState state;
  state.capacity_gb = 5120;
  Policy cloud;
  cloud.kind = PolicyKind::kCloudOnly;
  for (int i = 0; i < 20; ++i) {
    auto r = admit(state, make_model(i, 10), cloud, i);
    REQUIRE_FALSE(r.loaded);
    REQUIRE(r.evicted.empty());
  }
  REQUIRE(state.entries.empty());
  REQUIRE(state.used_gb == 0.0);
}

TEST_CASE("random operation sequences keep the memory invariant", "[cache][property]") {
  Pcg32 rng(100, 200);
  for (int trial = 0; trial < 20; ++trial) {
    CacheState state;
    state.capacity_gb = 500.0;
    Policy policy;
    policy.kind = static_cast<PolicyKind>(rng.uniform_int(0, 2));
    for (int op = 0; op < 500; ++op) {
      const int id = static_cast<int>(rng.uniform_int(0, 9));
      const double mem = 0.25 * static_cast<double>(rng.uniform_int(1, 800));
      switch (rng.uniform_int(0, 3)) {
        case 0:
          if (!lookup(state, id)) admit(state, make_model(id, mem), policy, op);
          break;
        case 1:
          if (lookup(state, id)) evict(state, id);
          break;
        case 2:
          if (lookup(state, id)) record_access(state, id);
          break;
        default:
          lookup(state, id);
          break;
      }
      REQUIRE(memory_invariant_holds(state));
    }
  }
}
