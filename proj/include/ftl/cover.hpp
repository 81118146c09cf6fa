#pragma once

#include <map>
#include <utility>
#include <vector>

#include "ftl/graph.hpp"

namespace ftl {

struct Clustering {
  std::vector<std::vector<int>> clusters;  // disjoint, each sorted
};

struct NeighborhoodCover {
  Len h_cov = 0;
  Len h_diam = 0;
  std::vector<Clustering> clusterings;

  int width() const { return (int)clusterings.size(); }
  // flattened view: (clustering index, cluster index) pairs in order
  std::vector<const std::vector<int>*> all_clusters() const;
};

// Deterministic region-growing sparse cover: every Ball(v, h_cov) lies inside
// some cluster, clusters have strong diameter <= h_diam = s_nc * h_cov, and
// the number of clusterings is capped at c_omega * s_nc * n^(1/s_nc).
NeighborhoodCover build_cover(const Graph& g, Len h_cov, int s_nc,
                              double c_omega = 4.0);

// exhaustive contract check, used by tests and the validation suite
bool check_cover(const Graph& g, const NeighborhoodCover& nc, std::string* why = nullptr);

struct EulerTour {
  std::vector<int> seq;  // 2|S|-1 vertices, seq.front() == seq.back() == root for |S|>1
  std::map<std::pair<int, int>, int> pos;  // oriented tree edge -> index t, seq[t-1]=u, seq[t]=v
  std::map<int, int> start, end;

  int period() const { return (int)seq.size() - 1; }
  int at(int i) const { return seq[i % period()]; }
};

struct ClusterTree {
  std::vector<int> vertices;  // sorted
  int root = -1;
  // child -> (parent, edge_id); root absent
  std::map<int, std::pair<int, int>> parent;
  EulerTour tour;

  bool has_tree_edge(int u, int v) const;
};

// SSSP tree of the induced subgraph, rooted at the lowest-id vertex. Errors
// if the cluster is disconnected in the induced subgraph.
ClusterTree build_cluster_tree(const Graph& g_j, const std::vector<int>& cluster);

// Largest t' with t <= t' <= t + 2(|S|-1) and the set-sum of a over
// tour[t, t') at most tau.
int maximal_interval(const EulerTour& tour, int t, const NodeWeighting& a, const Rat& tau);

// exactly the per-subtree fields edge labels carry
struct SubtreeRecord {
  int start = 0, end = 0;
  std::vector<Rat> a_sub;  // indexed by hierarchy level j'
};

struct RecoveredComponent {
  std::vector<std::pair<int, int>> intervals;  // disjoint inclusive position ranges
  std::vector<Rat> a_mass;                     // per level j'
};

// Components of T_S minus failed tree edges, from the root record plus one
// record per failed edge's child side. Throws CorruptLabelError when the
// intervals are not laminar.
std::vector<RecoveredComponent> recover_components(
    int cluster_size, const std::vector<Rat>& a_root,
    std::vector<SubtreeRecord> failed_children);

// index of the component owning tour position pos, or -1
int locate_component(const std::vector<RecoveredComponent>& comps, int pos);

}  // namespace ftl
