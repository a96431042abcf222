#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cfm/bounds.hpp"
#include "cfm/conflicts.hpp"
#include "cfm/hypergraph.hpp"
#include "cfm/process.hpp"
#include "cfm/tracking.hpp"

namespace cfm {

/// Sorted, deduplicated family of edge sets (a hypergraph on edge ids).
using Family = std::vector<EdgeSet>;

Family canonical_family(std::vector<EdgeSet> sets);

/// A test system together with its origin: either supplied externally, or
/// the link of edge `link_of` in the size-(j+1) conflicts.
struct TrackedSystem {
  TestSystem system;
  std::optional<EdgeId> link_of;
};

/// The link system {C \ {e} : e in C, |C| = j + 1}.
TrackedSystem link_system(const ConflictSystem& c, EdgeId e, std::size_t j);

/// Link of e in the whole conflict system, all sizes: {C \ {e} : e in C}.
Family conflict_link(const ConflictSystem& c, EdgeId e);

/// Whether selecting g immediately evicts z: only link systems of some f
/// have evictors, namely edges meeting f or forming a 2-conflict with f.
bool immediate_evictor(const Hypergraph& h, const ConflictSystem& c, EdgeId g, const TrackedSystem& z);

enum class InteractionKind { Zv, Ze, Ze2, Z2, Ce2, Cef2Star };

std::string to_string(InteractionKind k);

/// Which anchors a kind needs: Zv a vertex; Ze, Ze2, Ce2 an edge e; Cef2Star
/// edges e and f; Z2 none.
struct InteractionSpec {
  InteractionKind kind{};
  std::optional<VertexId> v;
  std::optional<EdgeId> e, f;
};

/// Builds the local-interaction family. Z-kinds read `z`; C-kinds ignore it.
/// Requires a normalized conflict system. Throws InputError on anchor
/// mismatch and BudgetError when the output would exceed `budget` sets.
Family build_interaction(const InteractionSpec& spec, const TrackedSystem& z, const ConflictSystem& c,
                         const Hypergraph& h, std::size_t budget = 1'000'000);

/// Codegree decay: Delta_{j'}(x) <= delta^{j'} d0 for j' = 0..j-1, where
/// Delta_0 is the number of members. Throws InputError unless x is j-uniform.
Report is_spread(const Family& x, std::size_t j, double d0, double delta);

/// Members of x with exactly s alive edges and all others matched.
std::size_t partial_count(const Family& x, const ProcessState& state, std::size_t s);

struct SpreadFamilyVerdict {
  std::string name;       // "(i)".."(vi)"
  bool pass = true;
  double worst_ratio = 0;  // max of measured / threshold
  std::size_t checks = 0;
  std::size_t small_threshold_checks = 0;  // thresholds below 1
  std::vector<std::uint64_t> witness;      // system index, anchors, s
};

struct SpreadEventReport {
  std::vector<SpreadFamilyVerdict> families;
  bool holds() const;
  /// True when some check had a threshold below 1, where a single member
  /// already counts as a violation.
  bool vacuity_flag() const;
};

/// Evaluates the six spreadness bounds on the current process state for the
/// given collection of systems. `ell` bounds the ranges of s. Throws
/// BudgetError when the evaluation would touch more than `budget` sets.
SpreadEventReport spread_event_check(const ProcessState& state, const std::vector<TrackedSystem>& collection,
                                     std::size_t ell, double d, double eps, std::size_t budget = 50'000'000);

}  // namespace cfm
