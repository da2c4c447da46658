#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relhyp/groups.hpp"

namespace relhyp {

struct EdgeLabel {
  enum class Kind { Generator, Parabolic, CosetTriple, Cone };
  Kind kind = Kind::Generator;
  Letter gen{};              // Generator
  int i = -1, j = -1;        // Parabolic(i, h), CosetTriple(i, j, x), Cone(i)
  Word h;                    // parabolic element
  std::optional<Letter> x;   // coset-triple letter; nullopt encodes x = 1
  std::string text;          // canonical rendering, also the dedupe key
};

struct GraphVertex {
  enum class Kind { Element, Coset, Cone };
  std::string key;
  std::string text;  // printable payload
  Kind kind = Kind::Element;
  int pindex = -1;
  Word word;  // representative word; invalid on graphs loaded from JSON
};

struct GraphEdge {
  int u = 0, v = 0;
  int length = 1;  // in scaled units
  EdgeLabel label;
  std::optional<std::pair<Word, Word>> witness;  // (a, b) with b = a x
};

struct GraphMeta {
  std::string kind = "loaded";
  int radius = 0;
  int rh = 0;
  int scale = 1;
  bool exact = false;
  bool exactness_checked = false;
  std::string note;
};

/// Finite ball of one of the graph models, with integer edge lengths (all
/// lengths are scale * true length) and cached shortest-path rows.
class LabeledGraph {
 public:
  LabeledGraph() = default;
  LabeledGraph(LabeledGraph&&) noexcept = default;
  LabeledGraph& operator=(LabeledGraph&&) noexcept = default;

  int add_vertex(GraphVertex v);
  int find_vertex(const std::string& key) const;
  bool add_edge(GraphEdge e);  // false when an identical (endpoints, label) edge exists

  int vertex_count() const noexcept { return static_cast<int>(verts_.size()); }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const GraphVertex& vertex(int id) const { return verts_.at(static_cast<size_t>(id)); }
  const GraphEdge& edge(int id) const { return edges_.at(static_cast<size_t>(id)); }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }

  GraphMeta& meta() noexcept { return meta_; }
  const GraphMeta& meta() const noexcept { return meta_; }

  /// (neighbor, edge id) pairs, both directions.
  const std::vector<std::pair<int, int>>& neighbors(int v) const;

  /// Scaled distances from src to every vertex; rows are cached and safe to
  /// request from concurrent readers.
  std::shared_ptr<const std::vector<std::int64_t>> dist_row(int src) const;
  std::int64_t distance(int u, int v) const;  // errors on a disconnected pair
  bool connected() const;
  bool acyclic() const;

  std::vector<int> geodesic(int u, int v) const;
  /// Up to cap geodesics; the flag marks a truncated enumeration.
  std::pair<std::vector<std::vector<int>>, bool> all_geodesics(int u, int v,
                                                               std::size_t cap) const;

  std::string to_json() const;
  static LabeledGraph from_json(const std::string& text);
  std::string to_dot() const;

 private:
  GraphMeta meta_;
  std::vector<GraphVertex> verts_;
  std::vector<GraphEdge> edges_;
  std::unordered_map<std::string, int> key_to_id_;
  std::unordered_map<std::string, int> edge_keys_;
  mutable std::vector<std::vector<std::pair<int, int>>> adj_;
  mutable bool adj_built_ = false;
  mutable std::vector<std::shared_ptr<const std::vector<std::int64_t>>> rows_;
  mutable std::unique_ptr<std::mutex> lock_ = std::make_unique<std::mutex>();
};

struct BallParams {
  int radius = 2;
  int rh = 2;
  std::size_t vertex_budget = 0;  // 0 = default 200000, overridable via RELHYP_BUDGET
  std::size_t edge_budget = 2000000;
  bool exactness_check = true;
  std::size_t exactness_gate = 4000;  // skip the R_H + 2 comparison above this size
};

std::size_t effective_vertex_budget(const BallParams& p);

/// BFS ball of the relative Cayley graph. Discovery uses generator edges and
/// parabolic jumps of canonical length <= rh; the edge set then carries every
/// parabolic edge between discovered same-coset vertices, so reported
/// distances are honest upper bounds that the rh + 2 rebuild can certify.
LabeledGraph relative_ball(const GroupPtr& group, const std::vector<std::string>& x_names,
                           const std::vector<SubgroupSpec>& parabolics, const BallParams& p);

/// Left coset graph ball around H_1, edges labeled (i, j, x).
LabeledGraph coset_ball(const GroupPtr& group, const std::vector<std::string>& x_names,
                        const std::vector<SubgroupSpec>& parabolics, const BallParams& p);

/// Coned-off Cayley ball at scale 2: generator edges length 2, cone edges 1.
LabeledGraph coned_off_ball(const GroupPtr& group, const std::vector<std::string>& x_names,
                            const std::vector<SubgroupSpec>& parabolics, const BallParams& p);

/// Bass-Serre tree ball for an HNN extension (cosets of the base) or an
/// amalgam (cosets of both factors); rh truncates the transversals.
LabeledGraph bass_serre_ball(const GroupPtr& group, const BallParams& p);

/// Witness w = a2 a1^-1 taking the first edge's coset pair to the second's;
/// verified against the coset structure before returning.
Element edge_orbit_witness(const LabeledGraph& g, const GroupPtr& group,
                           const std::vector<SubgroupSpec>& parabolics, int e_id, int f_id);

}  // namespace relhyp
