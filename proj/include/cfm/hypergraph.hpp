#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cfm/core.hpp"

namespace cfm {

/// k-uniform hypergraph with canonical edge ids and a vertex incidence index.
///
/// Edges are stored with sorted vertex lists and the edge sequence is sorted
/// lexicographically at construction, so ids do not depend on input order.
/// Duplicate edges are rejected. Immutable after construction.
class Hypergraph {
 public:
  Hypergraph() = default;

  /// Throws InputError on wrong edge size, repeated or out-of-range vertices,
  /// or duplicate edges.
  Hypergraph(std::size_t k, std::size_t n, std::vector<std::vector<VertexId>> edges);

  std::size_t k() const noexcept { return k_; }
  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return k_ == 0 ? 0 : verts_.size() / k_; }

  std::span<const VertexId> edge(EdgeId e) const {
    return {verts_.data() + static_cast<std::size_t>(e) * k_, k_};
  }
  std::vector<VertexId> edge_vector(EdgeId e) const {
    auto s = edge(e);
    return {s.begin(), s.end()};
  }
  /// Edge ids containing v, ascending.
  std::span<const EdgeId> incident(VertexId v) const {
    return {inc_.data() + inc_off_[v], inc_off_[v + 1] - inc_off_[v]};
  }

  /// Id of the edge with exactly these (sorted) vertices, or kNoEdge.
  EdgeId find_edge(std::span<const VertexId> sorted_vertices) const;

  /// Number of edges containing every vertex of `vs`. Throws InputError on
  /// empty `vs` or invalid ids.
  std::size_t degree(std::span<const VertexId> vs) const;

  /// Maximum j-degree over j-sets that lie inside some edge; 0 if none.
  std::size_t codegree_max(std::size_t j) const;

  /// Maximum and minimum vertex degree over all vertices.
  std::size_t max_degree() const;
  std::size_t min_degree() const;

  /// True iff the listed edges are pairwise vertex-disjoint.
  bool is_matching(std::span<const EdgeId> edges) const;

  bool disjoint(EdgeId a, EdgeId b) const;

  /// Link of v as a (k-1)-uniform hypergraph on the same vertex ids.
  Hypergraph link(VertexId v) const;

  /// Recomputes the incidence index from scratch and compares; used by tests.
  bool incidence_consistent() const;

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

 private:
  void build_incidence();

  std::size_t k_ = 0;
  std::size_t n_ = 0;
  std::vector<VertexId> verts_;
  std::vector<std::size_t> inc_off_{0};
  std::vector<EdgeId> inc_;
};

}  // namespace cfm
