#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ftl/cover.hpp"
#include "ftl/flow.hpp"
#include "ftl/graph.hpp"
#include "ftl/hierarchy.hpp"

namespace ftl {

struct LabelParams {
  int s_nc = 2;
  long long s_ed = 100;
  int d = 2;
  int f = 2;
  int k = 2;            // Thorup-Zwick parameter carried by the scheme
  double c_tau = 4.0;   // tau_heavy constant
  double c_omega = 4.0; // cover width cap constant
  std::optional<Rat> phi_override;  // per-scale hierarchy sparsity, else recipe
  FlowOpts flow;

  // overall decoder stretch guarantee
  long long stretch() const { return 50LL * s_nc * s_ed * d; }
};

struct ScaleParams {
  int i = 0;
  Len h = 1;       // 2^i
  Len h_cov = 0;   // 2h
  Len h_diam = 0;  // 2h s_nc
  Len h_ed = 0;    // 4h s_nc
  Len hs_ed = 0;   // h_ed * s_ed, the cut grid and derived-length scale
  Rat tau_hit;
  Rat tau_heavy;
  Rat phi;
};

using ClusterId = unsigned long long;

ClusterId cluster_id_of(const std::vector<int>& sorted_vertices);

// one distinct vertex set, shared across the levels whose covers contain it;
// its tree is built once on the derived graph of the lowest such level
struct ClusterEntry {
  ClusterId id = 0;
  std::vector<int> vertices;  // sorted
  std::vector<int> levels;    // ascending
  int min_level = 0;
  ClusterTree tree;
};

struct FingerprintClusterEntry {
  ClusterId cluster = 0;
  std::vector<int> levels;
  int cluster_size = 0;
  int start = 0, end = 0;      // tour interval of the vertex in T_S
  std::vector<Rat> a_cluster;  // A_j(S) for j = 0..d
  std::vector<Rat> a_subtree;  // A_j(subtree of v in T_S) for j = 0..d
};

struct VertexFingerprint {
  int vertex = -1;
  std::vector<FingerprintClusterEntry> entries;  // sorted by cluster id

  const FingerprintClusterEntry* find(ClusterId c) const;
};

struct EdgeFingerprint {
  int edge_id = -1;
  int u = -1, v = -1;
  Len length = 0;
  VertexFingerprint fu, fv;
};

struct ScaleVLabel {
  VertexFingerprint self;
  std::vector<EdgeFingerprint> stored_edges;  // sorted by edge id
};

struct VLabel {
  int vertex = -1;
  std::vector<ScaleVLabel> scales;
};

// the per-(cluster, orientation, level) maximal interval and its stored edges
struct ELabelWindow {
  int j = 0;
  int pos = 0, pos_end = 0;        // [pos, pos_end) on the tour
  std::vector<int> stored_edges;   // edge ids, sorted; fingerprints live in the pool
};

struct ELabelClusterBlock {
  ClusterId cluster = 0;
  std::vector<int> levels;
  int cluster_size = 0;
  std::vector<ELabelWindow> fwd, bwd;  // one window per j, both orientations
  int fwd_pos = 0, bwd_pos = 0;
};

struct ScaleELabel {
  EdgeFingerprint self;                      // fingerprint of the edge itself
  std::vector<ELabelClusterBlock> clusters;  // clusters whose tree uses these endpoints
  std::map<int, EdgeFingerprint> edge_pool;  // stored L_j edges, deduped by id

  bool empty() const { return clusters.empty(); }
};

struct ELabel {
  int edge_id = -1;
  std::vector<ScaleELabel> scales;
  // full vertex labels of the stored edges' endpoints, deduped; expanded on
  // serialization for size accounting
  std::map<int, VLabel> endpoint_vlabels;

  bool trivial() const;
};

struct ScaleBundle {
  ScaleParams params;
  Hierarchy hier;
  std::vector<Graph> derived;             // G_j for j = 0..d
  std::vector<NeighborhoodCover> covers;  // N_j on G_j
  std::vector<ClusterEntry> clusters;
  std::map<ClusterId, int> cluster_index;
  std::vector<std::set<int>> sampled;     // L_j; L_0 = all edge ids
  std::vector<HierarchyCheck> level_certs;  // tau_heavy routing certification
};

struct LabelScheme {
  Graph g;
  LabelParams params;
  int i_max = 0;
  std::vector<ScaleBundle> bundles;
  std::map<int, VLabel> vlabels;
  std::map<int, ELabel> elabels;
  long long nontrivial_elabels = 0;
  long long cluster_size_bound = 0;  // sum over scales, levels, clusters of |S|
};

ScaleParams make_scale_params(const Graph& g, int i, const LabelParams& p,
                              const Rat& phi);
ScaleBundle build_scale_structures(const Graph& g, int i, const LabelParams& p);
void assemble_labels(LabelScheme& scheme);
LabelScheme build_labels(const Graph& g, const LabelParams& p);

int scale_count(const Graph& g);  // i_max + 1 with i_max = ceil(log2(n L))

}  // namespace ftl
