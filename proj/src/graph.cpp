#include "ftl/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace ftl {

Graph::Graph(int n, std::vector<Edge> edges, long long m_cap_factor) : n_(n) {
  if (n < 0) throw ConstructionError("graph: negative vertex count");
  if (m_cap_factor > 0 &&
      (long long)edges.size() > m_cap_factor * (long long)n * (long long)n)
    throw ConstructionError("graph: edge count exceeds cap");
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    if (edges[i].id == edges[i + 1].id)
      throw ConstructionError("graph: duplicate edge id");
  for (Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw ConstructionError("graph: edge endpoint out of range");
    if (e.u == e.v) throw ConstructionError("graph: self loop");
    if (e.length < 1) throw ConstructionError("graph: length < 1");
    e.capacity.canonicalize();
    if (e.capacity < 1) throw ConstructionError("graph: capacity < 1");
  }
  edges_ = std::move(edges);
  inc_.assign(n_, {});
  for (int i = 0; i < (int)edges_.size(); ++i) {
    inc_[edges_[i].u].push_back(i);
    inc_[edges_[i].v].push_back(i);
    max_length_ = std::max(max_length_, edges_[i].length);
    if (edges_[i].capacity > max_capacity_) max_capacity_ = edges_[i].capacity;
  }
  declared_L_ = max_length_;
}

int Graph::index_of_id(int edge_id) const {
  int lo = 0, hi = m() - 1;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    if (edges_[mid].id == edge_id) return mid;
    if (edges_[mid].id < edge_id) lo = mid + 1;
    else hi = mid - 1;
  }
  return -1;
}

const Edge* Graph::edge_by_id(int edge_id) const {
  int i = index_of_id(edge_id);
  return i < 0 ? nullptr : &edges_[i];
}

Rat NodeWeighting::value(int v) const {
  auto it = w_.find(v);
  return it == w_.end() ? Rat(0) : it->second;
}

void NodeWeighting::set(int v, const Rat& x) {
  if (x < 0) throw Error("node weighting: negative value");
  if (x == 0) {
    w_.erase(v);
  } else {
    Rat c = x;
    c.canonicalize();
    w_[v] = std::move(c);
  }
}

void NodeWeighting::add(int v, const Rat& x) { set(v, value(v) + x); }

Rat NodeWeighting::total() const {
  Rat s = 0;
  for (const auto& [v, x] : w_) s += x;
  return s;
}

bool NodeWeighting::leq(const NodeWeighting& other) const {
  for (const auto& [v, x] : w_)
    if (x > other.value(v)) return false;
  return true;
}

NodeWeighting NodeWeighting::plus(const NodeWeighting& other) const {
  NodeWeighting r = *this;
  for (const auto& [v, x] : other.w_) r.add(v, x);
  return r;
}

NodeWeighting NodeWeighting::minus(const NodeWeighting& other) const {
  NodeWeighting r = *this;
  for (const auto& [v, x] : other.w_) {
    Rat nv = r.value(v) - x;
    if (nv < 0) throw Error("node weighting: subtraction went negative");
    r.set(v, nv);
  }
  return r;
}

Rat NodeWeighting::sum_over(const std::vector<int>& vs) const {
  Rat s = 0;
  for (int v : vs) s += value(v);
  return s;
}

Rat MovingCut::value(int edge_id) const {
  auto it = values.find(edge_id);
  return it == values.end() ? Rat(0) : it->second;
}

void MovingCut::set(int edge_id, const Rat& x) {
  if (x < 0) throw Error("moving cut: negative value");
  if (x == 0) {
    values.erase(edge_id);
  } else {
    Rat c = x;
    c.canonicalize();
    values[edge_id] = std::move(c);
  }
}

Rat MovingCut::size(const Graph& g) const {
  Rat s = 0;
  for (const auto& [id, x] : values) {
    const Edge* e = g.edge_by_id(id);
    if (!e) throw Error("moving cut: unknown edge id " + std::to_string(id));
    s += x * e->capacity;
  }
  return s;
}

Rat MovingCut::of_path(const std::vector<int>& edge_ids) const {
  Rat s = 0;
  for (int id : edge_ids) s += value(id);
  return s;
}

bool MovingCut::on_grid() const {
  for (const auto& [id, x] : values) {
    Rat scaled = x * rat_len(h);
    if (!rat_is_int(scaled) || scaled < 0) return false;
  }
  return true;
}

bool MovingCut::within_unit() const {
  for (const auto& [id, x] : values)
    if (x > 1) return false;
  return true;
}

void MovingCut::add(const MovingCut& other) {
  if (h != other.h) throw Error("moving cut: mixing grids");
  for (const auto& [id, x] : other.values) set(id, value(id) + x);
}

Rat Demand::value(int u, int v) const {
  auto it = values.find({u, v});
  return it == values.end() ? Rat(0) : it->second;
}

void Demand::add(int u, int v, const Rat& x) {
  if (x < 0) throw Error("demand: negative value");
  auto key = std::make_pair(u, v);
  Rat nv = value(u, v) + x;
  nv.canonicalize();
  if (nv == 0) values.erase(key);
  else values[key] = std::move(nv);
}

Rat Demand::total() const {
  Rat s = 0;
  for (const auto& [p, x] : values) s += x;
  return s;
}

NodeWeighting Demand::load() const {
  NodeWeighting l;
  for (const auto& [p, x] : values) {
    l.add(p.first, x);
    l.add(p.second, x);
  }
  return l;
}

namespace {

SsspResult dijkstra(const Graph& g, int source, const std::vector<char>* allowed) {
  SsspResult r;
  r.dist.assign(g.n(), kInfLen);
  r.parent_edge.assign(g.n(), -1);
  if (source < 0 || source >= g.n()) throw Error("sssp: bad source");
  if (allowed && !(*allowed)[source]) return r;
  using Item = std::pair<Len, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  r.dist[source] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (dv != r.dist[v]) continue;
    for (int ei : g.incident(v)) {
      const Edge& e = g.edge(ei);
      int w = e.other(v);
      if (allowed && !(*allowed)[w]) continue;
      Len nd = dv + e.length;
      if (nd < r.dist[w]) {
        r.dist[w] = nd;
        r.parent_edge[w] = ei;
        pq.push({nd, w});
      }
    }
  }
  return r;
}

}  // namespace

SsspResult sssp(const Graph& g, int source) { return dijkstra(g, source, nullptr); }

SsspResult sssp_induced(const Graph& g, int source, const std::vector<char>& allowed) {
  return dijkstra(g, source, &allowed);
}

Len graph_dist(const Graph& g, int u, int v) {
  if (u == v) return 0;
  return sssp(g, u).dist[v];
}

NodeWeighting deg_weighting(const Graph& g) {
  NodeWeighting a;
  for (const Edge& e : g.edges()) {
    a.add(e.u, e.capacity);
    a.add(e.v, e.capacity);
  }
  return a;
}

NodeWeighting deg_of_cut(const Graph& g, const MovingCut& c) {
  NodeWeighting a;
  for (const auto& [id, x] : c.values) {
    const Edge* e = g.edge_by_id(id);
    if (!e) throw Error("deg_of_cut: unknown edge id");
    a.add(e->u, x * e->capacity);
    a.add(e->v, x * e->capacity);
  }
  return a;
}

Graph apply_cut(const Graph& g, const MovingCut& c, Len scale_h) {
  std::vector<Edge> edges = g.edges();
  std::map<int, size_t> idx;
  for (size_t i = 0; i < edges.size(); ++i) idx[edges[i].id] = i;
  for (const auto& [id, x] : c.values) {
    auto it = idx.find(id);
    if (it == idx.end())
      throw Error("apply_cut: cut references unknown edge id " + std::to_string(id));
    Rat inc = x * rat_len(scale_h);
    if (!rat_is_int(inc))
      throw Error("apply_cut: fractional length increase; cut off grid");
    edges[it->second].length += inc.get_num().get_si();
  }
  Graph out(g.n(), std::move(edges), 0);
  out.set_declared_length_bound(g.declared_length_bound());
  return out;
}

namespace {

struct LexLabel {
  Len dist = kInfLen;
  mpz_class ind;  // bit (m-1-rank) set iff edge of that rank on the path
  bool settled = false;
};

}  // namespace

std::vector<LexmaxPath> lexmax_shortest_paths_from(const Graph& g, int u) {
  // Dijkstra under the order (dist asc, indicator desc): equivalent to exact
  // shortest paths with infinitesimal bonuses favoring low-id edges.
  int n = g.n(), m = g.m();
  std::vector<LexLabel> lab(n);
  std::vector<int> parent_edge(n, -1);
  lab[u].dist = 0;
  lab[u].ind = 0;
  auto better = [](Len d1, const mpz_class& i1, Len d2, const mpz_class& i2) {
    if (d1 != d2) return d1 < d2;
    return i1 > i2;
  };
  std::vector<char> done(n, 0);
  for (;;) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (done[v] || lab[v].dist == kInfLen) continue;
      if (best < 0 || better(lab[v].dist, lab[v].ind, lab[best].dist, lab[best].ind))
        best = v;
    }
    if (best < 0) break;
    done[best] = 1;
    for (int ei : g.incident(best)) {
      const Edge& e = g.edge(ei);
      int w = e.other(best);
      if (done[w]) continue;
      Len nd = lab[best].dist + e.length;
      mpz_class ni = lab[best].ind;
      mpz_setbit(ni.get_mpz_t(), m - 1 - ei);  // edges are id-sorted; rank = index
      if (better(nd, ni, lab[w].dist, lab[w].ind)) {
        lab[w].dist = nd;
        lab[w].ind = ni;
        parent_edge[w] = ei;
      }
    }
  }
  std::vector<LexmaxPath> out(n);
  for (int v = 0; v < n; ++v) {
    if (lab[v].dist == kInfLen) continue;
    LexmaxPath p;
    p.reachable = true;
    p.length = lab[v].dist;
    int w = v;
    while (w != u) {
      int ei = parent_edge[w];
      p.edge_ids.push_back(g.edge(ei).id);
      w = g.edge(ei).other(w);
    }
    std::reverse(p.edge_ids.begin(), p.edge_ids.end());
    out[v] = std::move(p);
  }
  return out;
}

LexmaxPath lexmax_shortest_path(const Graph& g, int u, int v) {
  if (u == v) {
    LexmaxPath p;
    p.reachable = true;
    p.length = 0;
    return p;
  }
  return lexmax_shortest_paths_from(g, u)[v];
}

DemandStats demand_stats(const MovingCut& c, const Demand& d, const Graph& g, Len h) {
  Graph cut_graph = apply_cut(g, c, h);
  DemandStats st;
  st.sep = 0;
  std::map<int, SsspResult> from;
  for (const auto& [p, x] : d.values) {
    auto it = from.find(p.first);
    if (it == from.end()) it = from.emplace(p.first, sssp(cut_graph, p.first)).first;
    if (it->second.dist[p.second] > h) st.sep += x;
  }
  if (st.sep == 0) {
    st.sparsity_infinite = true;
  } else {
    st.sparsity = c.size(g) / st.sep;
  }
  return st;
}

void write_graph(std::ostream& os, const Graph& g) {
  os << g.n() << ' ' << g.m() << ' ' << g.declared_length_bound() << '\n';
  for (const Edge& e : g.edges())
    os << e.id << ' ' << e.u << ' ' << e.v << ' ' << e.length << ' '
       << e.capacity.get_num().get_str() << ' ' << e.capacity.get_den().get_str()
       << '\n';
}

Graph read_graph(std::istream& is) {
  int n = 0, m = 0;
  Len L = 0;
  if (!(is >> n >> m >> L)) throw ParseError("graph header: expected 'n m L'");
  std::vector<Edge> edges;
  edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    Edge e;
    std::string num, den;
    if (!(is >> e.id >> e.u >> e.v >> e.length >> num >> den))
      throw ParseError("graph edge line " + std::to_string(i) + ": malformed");
    e.capacity = rat_parse(num + "/" + den);
    if (e.length > L) throw ParseError("graph: edge length exceeds declared bound L");
    edges.push_back(std::move(e));
  }
  Graph g(n, std::move(edges));
  g.set_declared_length_bound(L);
  return g;
}

std::string graph_to_string(const Graph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

Graph graph_from_string(const std::string& s) {
  std::istringstream is(s);
  return read_graph(is);
}

}  // namespace ftl
