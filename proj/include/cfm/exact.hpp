#pragma once

#include <map>
#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "cfm/conflicts.hpp"
#include "cfm/hypergraph.hpp"

namespace cfm {

using Probability = boost::multiprecision::cpp_rational;

/// Final matching (as a sorted edge set) to its exact probability.
using ExactDistribution = std::map<EdgeSet, Probability>;

/// Exact law of the final matching of the process, by enumerating the
/// decision tree over matched-edge sets. Stops a branch at `target` edges if
/// given. Throws BudgetError when the host has more than `max_edges` edges.
ExactDistribution exact_distribution(const Hypergraph& h, const ConflictSystem& c,
                                     std::optional<std::size_t> target = std::nullopt, std::size_t max_edges = 12);

/// Total-variation distance between an exact law and empirical counts.
double total_variation(const ExactDistribution& exact, const std::map<EdgeSet, std::size_t>& counts);

}  // namespace cfm
