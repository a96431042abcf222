#pragma once

// Shared fixtures and brute-force reference evaluators for the test suites.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "cfm/conflicts.hpp"
#include "cfm/core.hpp"
#include "cfm/hypergraph.hpp"
#include "cfm/rng.hpp"

namespace cfm::testing {

/// K4 as a 2-graph. Edge ids: 01=0, 02=1, 03=2, 12=3, 13=4, 23=5.
inline Hypergraph k4() { return Hypergraph(2, 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }

/// K4 with the single conflict {01, 23}.
inline ConflictSystem k4_conflict() { return normalize(k4(), ConflictSystem(6, {{0, 5}})).system; }

/// Random k-graph on n vertices with up to `edges` distinct edges.
inline Hypergraph random_host(Rng& rng, std::size_t n, std::size_t k, std::size_t edges) {
  std::set<std::vector<VertexId>> seen;
  for (std::size_t tries = 0; seen.size() < edges && tries < 50 * edges; ++tries) {
    std::vector<VertexId> e;
    while (e.size() < k) {
      auto v = static_cast<VertexId>(uniform_below(rng, n));
      if (std::find(e.begin(), e.end(), v) == e.end()) e.push_back(v);
    }
    std::sort(e.begin(), e.end());
    seen.insert(e);
  }
  return Hypergraph(k, n, {seen.begin(), seen.end()});
}

/// Random raw conflicts of sizes 2..max_size (not necessarily matchings).
inline std::vector<EdgeSet> random_conflicts(Rng& rng, std::size_t num_edges, std::size_t count,
                                             std::size_t max_size) {
  std::set<EdgeSet> out;
  if (num_edges < 2) return {};
  for (std::size_t tries = 0; out.size() < count && tries < 50 * count; ++tries) {
    const std::size_t size = 2 + uniform_below(rng, std::min(max_size, num_edges) - 1);
    EdgeSet c;
    while (c.size() < size) {
      auto e = static_cast<EdgeId>(uniform_below(rng, num_edges));
      if (std::find(c.begin(), c.end(), e) == c.end()) c.push_back(e);
    }
    std::sort(c.begin(), c.end());
    out.insert(c);
  }
  return {out.begin(), out.end()};
}

inline bool naive_is_matching(const Hypergraph& h, const EdgeSet& es) {
  std::set<VertexId> used;
  for (EdgeId e : es)
    for (VertexId v : h.edge(e))
      if (!used.insert(v).second) return false;
  return true;
}

inline bool naive_cfree(const std::vector<EdgeSet>& conflicts, const EdgeSet& es) {
  return std::none_of(conflicts.begin(), conflicts.end(),
                      [&](const EdgeSet& c) { return std::includes(es.begin(), es.end(), c.begin(), c.end()); });
}

/// All C-free matchings of h, by enumeration over edge subsets (|H| <= 20).
inline std::set<EdgeSet> cfree_matchings(const Hypergraph& h, const std::vector<EdgeSet>& conflicts) {
  std::set<EdgeSet> out;
  const std::size_t m = h.num_edges();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    EdgeSet es;
    for (std::size_t e = 0; e < m; ++e)
      if (mask >> e & 1) es.push_back(static_cast<EdgeId>(e));
    if (naive_is_matching(h, es) && naive_cfree(conflicts, es)) out.insert(es);
  }
  return out;
}

// Number of j-sets S with S + e and S + f both conflicts.
inline std::size_t naive_shared_links(const std::vector<EdgeSet>& cs, EdgeId e, EdgeId f, std::size_t j) {
  std::set<EdgeSet> le, lf;
  for (const auto& c : cs) {
    if (c.size() != j + 1) continue;
    auto strip = [&](EdgeId x, std::set<EdgeSet>& out) {
      if (!std::binary_search(c.begin(), c.end(), x)) return;
      EdgeSet s;
      for (EdgeId y : c)
        if (y != x) s.push_back(y);
      out.insert(s);
    };
    strip(e, le);
    strip(f, lf);
  }
  std::size_t n = 0;
  for (const auto& s : le) n += lf.count(s);
  return n;
}

}  // namespace cfm::testing
