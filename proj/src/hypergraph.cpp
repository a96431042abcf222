#include "cfm/hypergraph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace cfm {

Hypergraph::Hypergraph(std::size_t k, std::size_t n, std::vector<std::vector<VertexId>> edges)
    : k_(k), n_(n) {
  if (k < 1) throw InputError("uniformity must be at least 1");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto& e = edges[i];
    if (e.size() != k)
      throw InputError("edge " + std::to_string(i) + " has " + std::to_string(e.size()) +
                       " vertices, expected " + std::to_string(k));
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw InputError("edge " + std::to_string(i) + " repeats a vertex");
    if (e.back() >= n)
      throw InputError("edge " + std::to_string(i) + " has vertex id " + std::to_string(e.back()) +
                       " >= n = " + std::to_string(n));
  }
  std::sort(edges.begin(), edges.end());
  if (auto it = std::adjacent_find(edges.begin(), edges.end()); it != edges.end())
    throw InputError("duplicate edge in input");
  verts_.reserve(edges.size() * k);
  for (const auto& e : edges) verts_.insert(verts_.end(), e.begin(), e.end());
  build_incidence();
}

void Hypergraph::build_incidence() {
  inc_off_.assign(n_ + 1, 0);
  for (VertexId v : verts_) ++inc_off_[v + 1];
  std::partial_sum(inc_off_.begin(), inc_off_.end(), inc_off_.begin());
  inc_.assign(verts_.size(), 0);
  std::vector<std::size_t> pos(inc_off_.begin(), inc_off_.end() - 1);
  const std::size_t m = num_edges();
  for (std::size_t e = 0; e < m; ++e)
    for (VertexId v : edge(static_cast<EdgeId>(e))) inc_[pos[v]++] = static_cast<EdgeId>(e);
}

bool Hypergraph::incidence_consistent() const {
  Hypergraph copy = *this;
  copy.build_incidence();
  return copy.inc_off_ == inc_off_ && copy.inc_ == inc_;
}

EdgeId Hypergraph::find_edge(std::span<const VertexId> sorted_vertices) const {
  if (sorted_vertices.size() != k_ || sorted_vertices.empty() || sorted_vertices[0] >= n_) return kNoEdge;
  for (EdgeId e : incident(sorted_vertices[0])) {
    auto ev = edge(e);
    if (std::equal(ev.begin(), ev.end(), sorted_vertices.begin())) return e;
  }
  return kNoEdge;
}

std::size_t Hypergraph::degree(std::span<const VertexId> vs) const {
  if (vs.empty()) throw InputError("degree of the empty vertex set is undefined");
  for (VertexId v : vs)
    if (v >= n_) throw InputError("vertex id " + std::to_string(v) + " out of range");
  // Scan the shortest incidence list.
  VertexId best = vs[0];
  for (VertexId v : vs)
    if (incident(v).size() < incident(best).size()) best = v;
  std::size_t count = 0;
  for (EdgeId e : incident(best)) {
    auto ev = edge(e);
    bool all = true;
    for (VertexId v : vs)
      if (!std::binary_search(ev.begin(), ev.end(), v)) {
        all = false;
        break;
      }
    count += all;
  }
  return count;
}

std::size_t Hypergraph::codegree_max(std::size_t j) const {
  if (j < 1 || j > k_) throw InputError("codegree order must lie in [1, k]");
  if (j == 1) return max_degree();
  if (j == k_) return num_edges() > 0 ? 1 : 0;
  std::unordered_map<std::vector<VertexId>, std::size_t, IdVectorHash> counts;
  std::size_t best = 0;
  const std::size_t m = num_edges();
  for (std::size_t e = 0; e < m; ++e) {
    for_each_subset(edge_vector(static_cast<EdgeId>(e)), j, [&](const std::vector<VertexId>& sub) {
      best = std::max(best, ++counts[sub]);
    });
  }
  return best;
}

std::size_t Hypergraph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < n_; ++v) best = std::max(best, inc_off_[v + 1] - inc_off_[v]);
  return best;
}

std::size_t Hypergraph::min_degree() const {
  if (n_ == 0) return 0;
  std::size_t best = inc_off_[1] - inc_off_[0];
  for (std::size_t v = 0; v < n_; ++v) best = std::min(best, inc_off_[v + 1] - inc_off_[v]);
  return best;
}

bool Hypergraph::disjoint(EdgeId a, EdgeId b) const {
  auto x = edge(a), y = edge(b);
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) return false;
    if (x[i] < y[j]) ++i; else ++j;
  }
  return true;
}

bool Hypergraph::is_matching(std::span<const EdgeId> edges) const {
  std::vector<VertexId> seen;
  seen.reserve(edges.size() * k_);
  for (EdgeId e : edges) {
    if (e >= num_edges()) throw InputError("edge id " + std::to_string(e) + " out of range");
    auto ev = edge(e);
    seen.insert(seen.end(), ev.begin(), ev.end());
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

Hypergraph Hypergraph::link(VertexId v) const {
  if (v >= n_) throw InputError("vertex id " + std::to_string(v) + " out of range");
  std::vector<std::vector<VertexId>> out;
  for (EdgeId e : incident(v)) {
    std::vector<VertexId> rest;
    for (VertexId u : edge(e))
      if (u != v) rest.push_back(u);
    out.push_back(std::move(rest));
  }
  if (k_ == 1) {
    // The link of a 1-graph consists of empty sets; represent it as edgeless.
    Hypergraph h;
    h.k_ = 0;
    h.n_ = n_;
    h.inc_off_.assign(n_ + 1, 0);
    return h;
  }
  return Hypergraph(k_ - 1, n_, std::move(out));
}

}  // namespace cfm
