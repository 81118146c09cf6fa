#pragma once

#include <map>
#include <memory>
#include <set>
#include <vector>

#include "ftl/store.hpp"

namespace ftl {

struct QueryResult {
  bool unreachable = true;
  Len estimate = 0;       // distance in the packed discovered graph
  long long stretch = 0;  // estimate/stretch <= true distance <= estimate
};

std::set<int> extract_waypoints(const VLabel& p, const VLabel& q,
                                const std::vector<const ELabel*>& failed);

// everything one scale of labels taught us, merged across the inputs
struct ScaleSoup {
  struct ClusterMeta {
    int size = 0;
    std::vector<int> levels;
    std::vector<Rat> a_cluster;
    // per member vertex: tour interval and per-level subtree mass
    std::map<int, SubtreeRecord> members;  // SubtreeRecord.a_sub = subtree sums
    std::vector<SubtreeRecord> failed_children;
  };
  std::map<ClusterId, ClusterMeta> clusters;
  std::set<int> vertices;                                     // fingerprinted
  std::map<int, std::tuple<int, int, Len>> edges;             // id -> (u, v, length)

  void ingest_vfp(const VertexFingerprint& fp);
  void ingest_efp(const EdgeFingerprint& fp);
};

// Label-only decoder: built from the scheme parameters, consumes only labels.
// Failure decoding is shared across queries against the same failed set.
class Decoder {
 public:
  Decoder(LabelParams params, std::vector<ScaleParams> scale_params);
  explicit Decoder(const LabelStore& st) : Decoder(st.params, st.scale_params) {}

  void set_failures(std::vector<const ELabel*> failed);
  QueryResult query(const VLabel& p, const VLabel& q) const;

  // distances between original vertices in the union of per-scale graphs;
  // the unpacked variant materializes the explicit component-to-component
  // edges and exists for the equivalence check
  Len packed_distance(const VLabel& p, const VLabel& q) const;
  Len unpacked_distance(const VLabel& p, const VLabel& q) const;

 private:
  LabelParams params_;
  std::vector<ScaleParams> scales_;
  std::vector<const ELabel*> failed_;
  std::set<int> failed_ids_;
  std::set<int> waypoints_from_failures_;
  std::vector<ScaleSoup> failure_soup_;   // per scale
  std::shared_ptr<const void> prepared_;  // resolved component/heaviness state

  Len distance(const VLabel& p, const VLabel& q, bool packed) const;
  Len unpacked_distance_slow(const VLabel& p, const VLabel& q) const;
};

// convenience wrapper over (set_failures, query)
QueryResult decode_query(const LabelStore& store, int p, int q,
                         const std::vector<int>& failed_edge_ids);

}  // namespace ftl
