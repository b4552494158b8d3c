#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aotsim/sim.hpp"

// Report serialization. JSON reports follow the documented "v1" schema;
// the CSV holds seed-averaged per-slot totals, one row per (slot, policy),
// suitable for plotting one curve per policy.

namespace aotsim {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

using json = nlohmann::ordered_json;

inline json breakdown_to_json(const CostBreakdown& b) {
  return json{{"acc_loss", b.acc_loss},       {"switch_cost", b.switch_cost},
              {"edge_cost", b.edge_cost},     {"edge_latency", b.edge_latency},
              {"cloud_cost", b.cloud_cost},   {"total", b.total}};
}

inline json report_to_json(const RunReport& r) {
  json per_slot = json::array();
  for (const SlotMetrics& m : r.per_slot) {
    json row = breakdown_to_json(m.breakdown);
    row["slot"] = m.slot;
    row["hits"] = m.hits;
    row["misses"] = m.misses;
    row["cloud_served"] = m.cloud_served;
    row["loads"] = m.loads;
    row["evictions_policy"] = m.evictions_policy;
    row["evictions_context"] = m.evictions_context;
    row["mean_acc_loss"] = m.mean_acc_loss;
    per_slot.push_back(std::move(row));
  }
  return json{{"schema", "v1"},
              {"config_digest", r.config_digest},
              {"policy", r.policy},
              {"seed", r.seed},
              {"totals", breakdown_to_json(r.totals)},
              {"mean_total_per_slot", r.mean_total_per_slot},
              {"per_slot", std::move(per_slot)}};
}

// One policy's seed-averaged per-slot cost curve.
struct PolicySeries {
  std::string policy;
  std::vector<CostBreakdown> per_slot;
};

// Rows ordered by (slot, policy name); six fixed fractional digits.
inline std::string build_per_slot_csv(std::vector<PolicySeries> series) {
  if (!series.empty()) {
    for (const PolicySeries& s : series)
      if (s.per_slot.size() != series.front().per_slot.size())
        throw std::invalid_argument("build_per_slot_csv: series lengths differ");
  }
  std::sort(series.begin(), series.end(),
            [](const PolicySeries& a, const PolicySeries& b) { return a.policy < b.policy; });

  std::string out = "slot,policy,total,acc_loss,switch_cost,edge_cost,edge_latency,cloud_cost\n";
  const std::size_t n_slots = series.empty() ? 0 : series.front().per_slot.size();
  char buf[256];
  for (std::size_t slot = 0; slot < n_slots; ++slot) {
    for (const PolicySeries& s : series) {
      const CostBreakdown& b = s.per_slot[slot];
      std::snprintf(buf, sizeof(buf), "%zu,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", slot,
                    s.policy.c_str(), b.total, b.acc_loss, b.switch_cost, b.edge_cost,
                    b.edge_latency, b.cloud_cost);
      out += buf;
    }
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << content;
  f.flush();
  if (!f) throw IoError("write failed: " + path.string());
}

inline void write_report_json(const RunReport& r, const std::filesystem::path& path) {
  write_text_file(path, report_to_json(r).dump(2) + "\n");
}

}  // namespace aotsim
