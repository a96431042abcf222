#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cfm/conflicts.hpp"
#include "cfm/hypergraph.hpp"
#include "cfm/tracking.hpp"

namespace cfm {

using Point = std::uint32_t;
using Block = std::vector<Point>;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Span threshold (s - t) j + t + 1.
long long pi(long long s, long long t, long long j);
/// floor((p - t - 1) / (s - t)); throws DomainError when p < t + 1.
long long kappa(long long s, long long t, long long p);

/// Colexicographic rank of a sorted subset of {0, 1, ...}.
std::uint64_t colex_rank(std::span<const Point> subset);
/// Inverse of colex_rank for subsets of the given size.
Block colex_unrank(std::uint64_t rank, std::size_t size);

/// Collection of s-subsets of [m] in which every t-subset lies in at most one block.
struct PartialSystem {
  std::vector<Block> blocks;
};

/// Sorts the points of each block (block order is kept) and checks sizes,
/// point range and the packing property.
PartialSystem make_partial_system(std::size_t m, std::size_t s, std::size_t t, std::vector<Block> blocks);

/// Host and conflicts for building a partial Steiner system.
///
/// Vertices are t-subsets of the points (vertex id = colex rank), each edge
/// is the set of t-subsets of one admissible s-set, and conflicts are the
/// minimal forbidden matchings of 2..ell blocks.
struct SteinerInstance {
  std::size_t m = 0, s = 0, t = 0, ell = 0;
  std::vector<Block> vertex_sets;  // vertex id -> t-set
  std::vector<Block> edge_blocks;  // edge id -> s-set
  Hypergraph h;
  ConflictSystem c;

  std::vector<VertexId> vertex_rank_index;  // colex rank of a t-set -> vertex id or kNoVertex
  std::vector<EdgeId> edge_rank_index;      // colex rank of an s-set -> edge id or kNoEdge

  /// Vertex id of a sorted t-set, or kNoVertex.
  VertexId vertex_of(std::span<const Point> tset) const;
  /// Edge id of a sorted s-set, or kNoEdge if it is not a block of the host.
  EdgeId edge_of(std::span<const Point> sset) const;
};

/// Complete instance on [m]. Throws BudgetError with a size estimate when
/// the host or the number of conflicts would exceed `budget`.
SteinerInstance build(std::size_t m, std::size_t s, std::size_t t, std::size_t ell,
                      std::uint64_t budget = 50'000'000);

/// Instance restricted to the given cliques of a t-uniform graph on [g.n].
/// Throws InputError if some s-set does not induce a clique.
SteinerInstance packing_build(const Hypergraph& g, const std::vector<Block>& cliques, std::size_t s,
                              std::size_t t, std::size_t ell, std::uint64_t budget = 50'000'000);

/// floor(log log m / (3 s log log log m)), at least 2. Returns 2 while
/// log log m < e, where the expression is still decreasing in m.
std::size_t default_ell(double m, std::size_t s);

struct SparseVerdict {
  bool sparse = true;
  /// Block indices of the first violating subset and its span.
  std::vector<std::size_t> witness;
  std::size_t witness_span = 0;
};

/// Every j-subset of blocks (2 <= j <= ell) spans at least pi(j) points.
SparseVerdict verify_sparse(const PartialSystem& sys, std::size_t s, std::size_t t, std::size_t ell);

PartialSystem to_system(const SteinerInstance& inst, std::span<const EdgeId> matching);
/// Throws InputError if a t-set is covered twice or a block is not in the host.
EdgeSet to_matching(const SteinerInstance& inst, const PartialSystem& sys);

/// One singleton test system per (t-1)-set Y: edges whose block contains Y.
std::vector<TestSystem> degree_test_systems(const SteinerInstance& inst);

/// Latin-square host: vertices are row-column, row-symbol and column-symbol
/// pairs, edges are cells (r, c, symbol); conflicts are minimal cell sets of
/// size 2..ell lying on at most |cells| + 2 lines.
struct LatinInstance {
  std::size_t m = 0, ell = 0;
  std::vector<std::array<std::uint32_t, 3>> cells;  // edge id -> (row, column, symbol)
  Hypergraph h;
  ConflictSystem c;

  std::vector<EdgeId> cell_index;  // (row * m + col) * m + sym -> edge id

  EdgeId edge_of(std::uint32_t row, std::uint32_t col, std::uint32_t sym) const;
};

LatinInstance latin_build(std::size_t m, std::size_t ell, std::uint64_t budget = 50'000'000);

/// Smallest g >= 4 such that g lines (rows, columns, symbols together)
/// contain at least g - 2 of the cells; nullopt when no such g exists.
/// Exhaustive over line subsets; throws InputError when 3m > 24.
std::optional<std::size_t> latin_girth(std::size_t m, const std::vector<std::array<std::uint32_t, 3>>& cells);

/// True iff some 2x2 subsquare (two rows, two columns, two symbols) exists.
/// Throws InputError unless the cells form a partial Latin square.
bool has_intercalate(std::size_t m, const std::vector<std::array<std::uint32_t, 3>>& cells);

struct HostRegularization {
  Hypergraph h;                  // on 3n vertices; ids >= n are new
  std::size_t crossing_edges = 0;  // edges meeting both old and new vertices
  std::size_t inner_edges = 0;     // edges entirely on new vertices
  double target_degree = 0;
  /// Exact expected degree of each new vertex under the sampling weights.
  double expected_new_degree = 0;
};

/// Embeds h as an induced subgraph of a nearly d-regular host on 3n vertices
/// by sampling filler edges with deficit-proportional probabilities.
/// Requires (1 - eps) d <= min degree <= max degree <= d (InputError otherwise);
/// throws BudgetError if
/// the candidate edge count exceeds `budget`.
HostRegularization regularize_host(const Hypergraph& h, double d, double eps, std::uint64_t seed,
                                   std::uint64_t budget = 20'000'000);

}  // namespace cfm
