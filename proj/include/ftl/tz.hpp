#pragma once

#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "ftl/decoder.hpp"
#include "ftl/store.hpp"

namespace ftl {

struct TzVertexLabel {
  int vertex = -1;
  std::vector<int> pivots;  // index i in 0..k-1; -1 when A_i is unreachable
  // landmark -> (distance, Euler tour start/end in the landmark's cluster-tree)
  std::map<int, std::tuple<Len, int, int>> bunch;
};

struct TzClusterTree {
  int root = -1;
  std::map<int, std::pair<int, int>> parent;  // child -> (parent, edge id)
  EulerTour tour;
};

struct TZStructure {
  int k = 1;
  std::vector<std::vector<int>> sets;  // A_0 .. A_k, sorted; A_k empty
  std::map<int, TzClusterTree> cluster_trees;  // per landmark in any bunch
  std::map<int, TzVertexLabel> labels;
};

// Deterministic Thorup-Zwick structure: landmark sets by greedy hitting of
// near-balls, bunches, pivots, shortest-path cluster-trees with Euler tours.
// Errors when some bunch exceeds c_b * k * n^(1/k) * ln(n) entries.
TZStructure tz_build(const Graph& g, int k, double c_b = 8.0);

// plain TZ estimate from two labels: min_i dist(p,w) + dist(w,q) at the first
// level whose pivot lands in the other bunch
struct TzEstimate {
  bool reachable = false;
  Len estimate = 0;
  int landmark = -1;
};
TzEstimate tz_query(const TzVertexLabel& p, const TzVertexLabel& q);

struct LaminarInterval {
  int owner = -1;  // failed-edge endpoint vertex
  int start = 0, end = 0;
};

// laminar interval family with O(log) point queries for the shortest and
// longest interval containing a point, precomputed at the +-1 critical points
struct LaminarStructure {
  std::vector<LaminarInterval> intervals;
  std::vector<int> points;                       // sorted precomputed points
  std::vector<std::pair<int, int>> answers;      // (shortest, longest) owner; -1 none

  std::pair<int, int> query(int x) const;        // binary search
  std::pair<int, int> query_linear(int x) const; // scan oracle
};

LaminarStructure build_laminar(std::vector<LaminarInterval> intervals);

struct CompiledOracle {
  std::vector<int> failed_ids;  // sorted; the F this was compiled for
  std::vector<int> s_vertices;  // failed-edge endpoints, sorted
  std::map<std::pair<int, int>, QueryResult> table;  // keyed u < v
  std::map<int, LaminarStructure> per_landmark;
};

// pairwise decoder table over failed endpoints plus per-landmark laminar
// structures over their cluster-tree intervals
CompiledOracle compile_oracle(const LabelStore& ft, const TZStructure& tz,
                              const std::vector<int>& failed_ids);

struct FastQueryResult {
  bool unreachable = true;
  Len estimate = 0;
};

FastQueryResult fast_query(const CompiledOracle& co, const TzVertexLabel& p,
                           const TzVertexLabel& q);

std::vector<uint8_t> serialize_compiled(const CompiledOracle& co);
CompiledOracle deserialize_compiled(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> serialize_tz(const TZStructure& tz);
TZStructure deserialize_tz(const std::vector<uint8_t>& bytes);

// Sensitivity-oracle wrapper: all vertex labels, the non-trivial edge labels
// (trivial ones are reconstructed from ids at query time), and the TZ side.
class SensitivityOracle {
 public:
  SensitivityOracle(LabelStore ft, TZStructure tz);

  // per-query decoding (labels -> discovered graph -> distance)
  QueryResult query(int p, int q, const std::vector<int>& failed_ids) const;

  // two-stage path
  void change_failures(const std::vector<int>& failed_ids);
  FastQueryResult fast_distance(int p, int q) const;
  const CompiledOracle& compiled() const;

  // stored bytes excluding trivial edge labels
  long long store_size_bytes() const;
  const LabelStore& ft() const { return ft_; }
  const TZStructure& tz() const { return tz_; }

  std::vector<const ELabel*> resolve_failures(const std::vector<int>& ids) const;

 private:
  LabelStore ft_;
  TZStructure tz_;
  mutable std::map<int, ELabel> trivial_pool_;  // reconstructed labels, by id
  bool has_compiled_ = false;
  CompiledOracle compiled_;
};

}  // namespace ftl
