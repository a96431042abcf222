#include "cfm/exact.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

namespace cfm {

ExactDistribution exact_distribution(const Hypergraph& h, const ConflictSystem& c, std::optional<std::size_t> target,
                                     std::size_t max_edges) {
  check_host(h, c);
  if (!c.normalized()) throw InputError("exact_distribution requires a normalized conflict system");
  const std::size_t m = h.num_edges();
  if (m > max_edges || m > 63)
    throw BudgetError("exact_distribution: host has " + std::to_string(m) + " edges, cap is " +
                          std::to_string(max_edges),
                      static_cast<double>(m));
  using Mask = std::uint64_t;
  std::vector<Mask> overlap(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (a == b || !h.disjoint(static_cast<EdgeId>(a), static_cast<EdgeId>(b))) overlap[a] |= Mask{1} << b;
  // For each edge, the masks of the other members of conflicts through it.
  std::vector<std::vector<Mask>> rest(m);
  for (std::size_t i = 0; i < c.size(); ++i) {
    Mask all = 0;
    for (EdgeId e : c.conflict(static_cast<ConflictId>(i))) all |= Mask{1} << e;
    for (EdgeId e : c.conflict(static_cast<ConflictId>(i))) rest[e].push_back(all & ~(Mask{1} << e));
  }
  auto available = [&](Mask matched) {
    Mask out = 0;
    for (std::size_t e = 0; e < m; ++e) {
      if (matched & overlap[e]) continue;
      bool blocked = false;
      for (Mask r : rest[e])
        if ((r & ~matched) == 0) {
          blocked = true;
          break;
        }
      if (!blocked) out |= Mask{1} << e;
    }
    return out;
  };

  ExactDistribution result;
  std::unordered_map<Mask, Probability> level{{0, Probability(1)}};
  while (!level.empty()) {
    std::unordered_map<Mask, Probability> next;
    for (auto& [mask, p] : level) {
      Mask alive = available(mask);
      std::size_t size = static_cast<std::size_t>(std::popcount(mask));
      if (alive == 0 || (target && size >= *target)) {
        EdgeSet key;
        for (std::size_t e = 0; e < m; ++e)
          if (mask >> e & 1) key.push_back(static_cast<EdgeId>(e));
        result[key] += p;
        continue;
      }
      Probability share = p / std::popcount(alive);
      for (Mask rem = alive; rem; rem &= rem - 1) next[mask | (rem & -rem)] += share;
    }
    level = std::move(next);
  }
  return result;
}

double total_variation(const ExactDistribution& exact, const std::map<EdgeSet, std::size_t>& counts) {
  double n = 0.0;
  for (auto& [k, v] : counts) n += static_cast<double>(v);
  double tv = 0.0;
  for (auto& [k, p] : exact) {
    auto it = counts.find(k);
    double f = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
    tv += std::abs(p.convert_to<double>() - f);
  }
  for (auto& [k, v] : counts)
    if (!exact.count(k)) tv += static_cast<double>(v) / n;
  return tv / 2.0;
}

}  // namespace cfm
