#pragma once

#include <string>
#include <vector>

#include "cfm/conflicts.hpp"
#include "cfm/hypergraph.hpp"

namespace cfm {

/// Degree scale d, maximum conflict size ell, budget gamma and exponent eps.
struct BoundsParams {
  double d = 1.0;
  std::size_t ell = 2;
  double gamma = 1.0;
  double eps = 0.5;

  /// Throws InputError unless ell >= 2, eps in (0,1), gamma >= 1, d > 0.
  void validate() const;
};

/// One evaluated condition. Upper-bound checks pass when measured <= threshold,
/// lower-bound checks when measured >= threshold; ties pass.
struct ConditionVerdict {
  std::string name;
  bool pass = true;
  double measured = 0.0;
  double threshold = 0.0;
  bool lower_bound = false;
  /// Ids that realize the extremum (edges, vertices or conflicts depending on
  /// the condition); empty when there is no witness.
  std::vector<std::uint64_t> witness;
};

struct Report {
  std::vector<ConditionVerdict> conditions;

  bool all_pass() const;
  /// All verdicts whose name starts with `prefix`.
  std::vector<const ConditionVerdict*> find(const std::string& prefix) const;
  /// True iff every verdict whose name starts with `prefix` passes.
  bool passes(const std::string& prefix) const;
};

/// Evaluates the boundedness conditions C1..C5, plus C6..C9 when `extended`.
/// Requires a normalized system when extended.
Report boundedness_report(const Hypergraph& h, const ConflictSystem& c, const BoundsParams& p,
                          bool extended);

/// Shared-link counts |C_e^(j) ∩ C_f^(j)| for pairs of host edges, where
/// C_e^(j) is the set of j-sets S with S ∪ {e} a conflict of size j+1. Only
/// pairs with a positive count appear. Keys are (min, max) edge ids.
std::unordered_map<std::uint64_t, std::size_t> shared_link_counts(const ConflictSystem& c, std::size_t j);

inline std::uint64_t pair_key(EdgeId a, EdgeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}
inline EdgeId pair_first(std::uint64_t key) { return static_cast<EdgeId>(key >> 32); }
inline EdgeId pair_second(std::uint64_t key) { return static_cast<EdgeId>(key & 0xffffffffu); }

}  // namespace cfm
