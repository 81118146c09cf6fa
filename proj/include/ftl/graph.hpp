#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ftl/rat.hpp"

namespace ftl {

struct Edge {
  int id = 0;
  int u = 0, v = 0;
  Len length = 1;
  Rat capacity = 1;

  int other(int w) const { return w == u ? v : u; }
};

// Undirected multigraph on vertices {0..n-1} with integer lengths >= 1 and
// rational capacities >= 1. Edge ids are distinct; parallel edges allowed;
// self loops are rejected. Immutable after construction.
class Graph {
 public:
  Graph() = default;
  Graph(int n, std::vector<Edge> edges, long long m_cap_factor = 10);

  int n() const { return n_; }
  int m() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int idx) const { return edges_[idx]; }
  // index into edges() for an edge id, or -1
  int index_of_id(int edge_id) const;
  const Edge* edge_by_id(int edge_id) const;
  const std::vector<int>& incident(int v) const { return inc_[v]; }
  Len max_length() const { return max_length_; }
  Rat max_capacity() const { return max_capacity_; }
  Len declared_length_bound() const { return declared_L_; }
  void set_declared_length_bound(Len L) { declared_L_ = L; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;             // sorted by id
  std::vector<std::vector<int>> inc_;   // vertex -> edge indices
  Len max_length_ = 1;
  Rat max_capacity_ = 1;
  Len declared_L_ = 1;
};

// Sparse vertex -> nonnegative rational map. Zero entries are not stored.
class NodeWeighting {
 public:
  NodeWeighting() = default;

  Rat value(int v) const;
  void set(int v, const Rat& x);
  void add(int v, const Rat& x);
  Rat total() const;  // |A|
  bool is_zero() const { return w_.empty(); }
  // pointwise <=
  bool leq(const NodeWeighting& other) const;
  NodeWeighting plus(const NodeWeighting& other) const;
  // this - other; throws if any entry would go negative
  NodeWeighting minus(const NodeWeighting& other) const;
  Rat sum_over(const std::vector<int>& vs) const;
  const std::map<int, Rat>& entries() const { return w_; }
  bool operator==(const NodeWeighting& other) const { return w_ == other.w_; }

 private:
  std::map<int, Rat> w_;
};

// Fractional edge cut. Values are multiples of 1/h; applying the cut at scale
// h adds h*C(e) to each length, which keeps lengths integral. Accumulated
// cuts may exceed 1 on an edge; the unit-range invariant is enforced where
// the contracts require it (freshly extracted cuts).
struct MovingCut {
  Len h = 1;
  std::map<int, Rat> values;  // edge_id -> nonzero value

  Rat value(int edge_id) const;
  void set(int edge_id, const Rat& x);
  bool is_zero() const { return values.empty(); }
  Rat size(const Graph& g) const;  // |C| = sum C(e)*u(e)
  Rat of_path(const std::vector<int>& edge_ids) const;
  bool on_grid() const;      // every value a nonnegative multiple of 1/h
  bool within_unit() const;  // every value <= 1
  void add(const MovingCut& other);  // same h required
  bool operator==(const MovingCut& other) const {
    return h == other.h && values == other.values;
  }
};

// Demand on ordered vertex pairs with a claimed length bound.
struct Demand {
  Len length_bound = 0;
  std::map<std::pair<int, int>, Rat> values;

  Rat value(int u, int v) const;
  void add(int u, int v, const Rat& x);
  Rat total() const;  // |D|
  bool is_zero() const { return values.empty(); }
  NodeWeighting load() const;
  bool respects(const NodeWeighting& a) const { return load().leq(a); }
};

struct SsspResult {
  std::vector<Len> dist;        // kInfLen if unreachable
  std::vector<int> parent_edge; // edge index on a shortest path tree, -1 at source/unreachable
};

SsspResult sssp(const Graph& g, int source);
// restricted to an induced vertex set (vertices not in `allowed` are skipped)
SsspResult sssp_induced(const Graph& g, int source, const std::vector<char>& allowed);
Len graph_dist(const Graph& g, int u, int v);

NodeWeighting deg_weighting(const Graph& g);
NodeWeighting deg_of_cut(const Graph& g, const MovingCut& c);

// G - C: lengths l(e) + scale_h * C(e). Throws if the cut names an unknown
// edge id or a length would be fractional.
Graph apply_cut(const Graph& g, const MovingCut& c, Len scale_h);

struct LexmaxPath {
  bool reachable = false;
  std::vector<int> edge_ids;
  Len length = kInfLen;
};

// Among all shortest (u,v)-paths, the one maximizing the edge indicator
// vector (by ascending edge id) lexicographically. Unique; subpath-closed.
LexmaxPath lexmax_shortest_path(const Graph& g, int u, int v);
// all-targets variant sharing one search
std::vector<LexmaxPath> lexmax_shortest_paths_from(const Graph& g, int u);

struct DemandStats {
  Rat sep;
  bool sparsity_infinite = false;
  Rat sparsity;  // valid when !sparsity_infinite
};

// sep_h(C,D) and spars_h(C,D) measured in g - c at scale h.
DemandStats demand_stats(const MovingCut& c, const Demand& d, const Graph& g, Len h);

// Text format: "n m L" then one line "edge_id u v length cap_num cap_den"
// per edge, ordered by edge id.
void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);
std::string graph_to_string(const Graph& g);
Graph graph_from_string(const std::string& s);

}  // namespace ftl
