#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cfm/bounds.hpp"
#include "cfm/conflicts.hpp"
#include "cfm/tracking.hpp"

namespace cfm {

struct PairAugmentResult {
  ConflictSystem system;
  /// Bad pairs added as 2-conflicts, ascending.
  std::vector<std::pair<EdgeId, EdgeId>> added;
  /// Bad pairs left out because some supplied test contains both edges.
  std::vector<std::pair<EdgeId, EdgeId>> skipped;
  /// Larger conflicts dropped because they now contain an added pair.
  std::vector<RemovalRecord> log;
};

/// Adds {e,f} for every disjoint pair that is not already a 2-conflict and
/// shares at least d^(j - eps/2) links in some uniformity j in [2, ell-1].
PairAugmentResult pair_augment(const Hypergraph& h, const ConflictSystem& c, const BoundsParams& p,
                               const std::vector<TestSystem>& trackables);

/// All bad pairs, without the test-system filter.
std::vector<std::pair<EdgeId, EdgeId>> bad_pairs(const Hypergraph& h, const ConflictSystem& c,
                                                 const BoundsParams& p);

struct RegularizeResult {
  ConflictSystem system;
  std::vector<std::string> warnings;
  /// Number of sampled conflicts per size j (index j).
  std::vector<std::size_t> added_by_size;
  std::size_t removed = 0;
};

/// Degree-deficit sampling of extra conflicts, one uniformity at a time.
/// Candidate j-sets are matchings containing no current conflict; each is
/// kept with probability clamp((j-1)! prod d_def(e) / d_def(H)^(j-1), 0, 1).
/// Throws BudgetError when C(|H|, j) exceeds `candidate_budget`.
RegularizeResult regularize(const Hypergraph& h, const ConflictSystem& c, const BoundsParams& p, std::uint64_t seed,
                            std::uint64_t candidate_budget = 5'000'000);

}  // namespace cfm
