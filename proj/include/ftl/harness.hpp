#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftl/decoder.hpp"
#include "ftl/labels.hpp"
#include "ftl/tz.hpp"

namespace ftl {

// splitmix64; all harness randomness is derived from explicit seeds so that
// regeneration is byte-identical
struct SeededRng {
  uint64_t state;
  explicit SeededRng(uint64_t seed) : state(seed) {}
  uint64_t next();
  uint64_t below(uint64_t bound);
  long long range(long long lo, long long hi);  // inclusive
};

struct InstanceProfile {
  uint64_t seed = 1;
  int n_min = 2;
  int n_max = 12;
  int m_max = 20;
  Len len_max = 8;
  int max_failures = 2;
  LabelParams labels;  // s_nc = 2, s_ed = 100, d = 2, f = 2, k = 2 defaults
};

struct TestInstance {
  uint64_t seed = 0;
  Graph g;
  std::vector<std::vector<int>> failure_sets;   // every |F| <= max_failures
  std::vector<std::pair<int, int>> query_pairs; // all ordered pairs p < q
};

Graph generate_graph(uint64_t seed, int n_min, int n_max, int m_max, Len len_max);
TestInstance generate_instance(const InstanceProfile& profile, uint64_t index);

// ground truth: Dijkstra on g with the failed edge ids removed
Len brute_distance(const Graph& g, const std::vector<int>& failed_ids, int p, int q);

struct CriterionResult {
  std::string name;
  bool pass = false;
  bool asserted = true;  // diagnostics-only entries report pass = true
  long long checked = 0;
  long long failed = 0;
  std::string detail;
};

struct SuiteConfig {
  uint64_t seed = 7;
  int sweep_graphs = 200;       // criterion 1/2/7 instance count
  int euler_instances = 1000;   // criterion 3
  int tz_graphs = 24;           // criterion 6 seeded graphs up to n_max_tz
  int tz_n_max = 50;
  int pack_samples = 50;        // criterion 8
  int determinism_graphs = 3;   // criterion 10
  InstanceProfile profile;
  bool progress = false;        // print per-graph progress lines
};

struct SuiteReport {
  std::vector<CriterionResult> criteria;
  bool pass = false;
  std::string to_json() const;  // stable key order
};

SuiteReport validate_suite(const SuiteConfig& cfg);

struct BenchRow {
  uint64_t seed;
  int n, m;
  long long vlabel_bytes_max, elabel_bytes_max, store_bytes;
  double build_seconds, query_micros_avg, fastquery_micros_avg;
};

std::vector<BenchRow> run_bench(const SuiteConfig& cfg);

// hierarchy dump with per-level sizes and sparse entries, stable key order
std::string hierarchy_to_json(const Hierarchy& h);

}  // namespace ftl
