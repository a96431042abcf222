#include "cfm/conflicts.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace cfm {

ConflictSystem::ConflictSystem(std::size_t num_host_edges, const std::vector<EdgeSet>& conflicts)
    : host_edges_(num_host_edges), normalized_(conflicts.empty()) {
  offsets_.reserve(conflicts.size() + 1);
  for (std::size_t i = 0; i < conflicts.size(); ++i) {
    EdgeSet c = conflicts[i];
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw InputError("conflict " + std::to_string(i) + " repeats an edge id");
    if (c.size() < 2) throw InputError("conflict " + std::to_string(i) + " has fewer than 2 edges");
    if (c.back() >= num_host_edges)
      throw InputError("conflict " + std::to_string(i) + " references edge id " + std::to_string(c.back()) +
                       " but the host has " + std::to_string(num_host_edges) + " edges");
    members_.insert(members_.end(), c.begin(), c.end());
    offsets_.push_back(members_.size());
  }
  build_indices();
}

ConflictSystem::ConflictSystem(std::size_t num_host_edges, std::vector<std::uint64_t> offsets,
                               std::vector<EdgeId> members, bool normalized)
    : host_edges_(num_host_edges),
      offsets_(std::move(offsets)),
      members_(std::move(members)),
      normalized_(normalized) {
  if (offsets_.empty() || offsets_.front() != 0 || offsets_.back() != members_.size())
    throw InputError("malformed flat conflict storage");
  for (EdgeId e : members_)
    if (e >= host_edges_) throw InputError("conflict references edge id out of range");
  build_indices();
}

void ConflictSystem::build_indices() {
  inc_off_.assign(host_edges_ + 1, 0);
  for (EdgeId e : members_) ++inc_off_[e + 1];
  std::partial_sum(inc_off_.begin(), inc_off_.end(), inc_off_.begin());
  inc_.assign(members_.size(), 0);
  std::vector<std::uint64_t> pos(inc_off_.begin(), inc_off_.end() - 1);
  by_size_.clear();
  const std::size_t m = size();
  for (std::size_t c = 0; c < m; ++c) {
    const std::size_t sz = offsets_[c + 1] - offsets_[c];
    if (by_size_.size() <= sz) by_size_.resize(sz + 1);
    by_size_[sz].push_back(static_cast<ConflictId>(c));
    for (EdgeId e : conflict(static_cast<ConflictId>(c))) inc_[pos[e]++] = static_cast<ConflictId>(c);
  }
}

bool ConflictSystem::incidence_consistent() const {
  ConflictSystem copy = *this;
  copy.build_indices();
  return copy.inc_off_ == inc_off_ && copy.inc_ == inc_ && copy.by_size_ == by_size_;
}

EdgeSet ConflictSystem::n2_neighborhood(EdgeId e) const {
  EdgeSet out;
  if (e >= host_edges_) throw InputError("edge id out of range");
  for (ConflictId c : containing(e)) {
    auto s = conflict(c);
    if (s.size() == 2) out.push_back(s[0] == e ? s[1] : s[0]);
  }
  return make_edge_set(std::move(out));
}

bool ConflictSystem::is_cfree(std::span<const EdgeId> edges) const {
  EdgeSet sorted(edges.begin(), edges.end());
  sorted = make_edge_set(std::move(sorted));
  for (EdgeId e : sorted) {
    if (e >= host_edges_) continue;
    for (ConflictId c : containing(e)) {
      auto s = conflict(c);
      if (s[0] != e) continue;  // examine each conflict once, from its smallest member
      if (std::includes(sorted.begin(), sorted.end(), s.begin(), s.end())) return false;
    }
  }
  return true;
}

std::size_t ConflictSystem::degree_in_size(EdgeId e, std::size_t j) const {
  std::size_t count = 0;
  for (ConflictId c : containing(e)) count += conflict(c).size() == j;
  return count;
}

std::size_t ConflictSystem::max_codegree(std::size_t j, std::size_t jp) const {
  auto ids = of_size(j);
  if (jp == 0) return ids.size();
  if (ids.empty()) return 0;
  if (jp == j) return 1;
  if (jp == 1) {
    std::size_t best = 0;
    for (std::size_t e = 0; e < host_edges_; ++e) best = std::max(best, degree_in_size(static_cast<EdgeId>(e), j));
    return best;
  }
  std::unordered_map<EdgeSet, std::size_t, IdVectorHash> counts;
  std::size_t best = 0;
  for (ConflictId c : ids)
    for_each_subset(conflict_vector(c), jp, [&](const EdgeSet& sub) { best = std::max(best, ++counts[sub]); });
  return best;
}

std::size_t ConflictSystem::min_degree(std::size_t j) const {
  if (host_edges_ == 0) return 0;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t e = 0; e < host_edges_; ++e) best = std::min(best, degree_in_size(static_cast<EdgeId>(e), j));
  return best;
}

std::vector<EdgeSet> ConflictSystem::to_vectors() const {
  std::vector<EdgeSet> out;
  out.reserve(size());
  for (std::size_t c = 0; c < size(); ++c) out.push_back(conflict_vector(static_cast<ConflictId>(c)));
  return out;
}

ConflictLookup::ConflictLookup(const ConflictSystem& c) {
  map_.reserve(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) map_.emplace(c.conflict_vector(static_cast<ConflictId>(i)), static_cast<ConflictId>(i));
}

long long ConflictLookup::find(const EdgeSet& s) const {
  auto it = map_.find(s);
  return it == map_.end() ? -1 : static_cast<long long>(it->second);
}

void check_host(const Hypergraph& h, const ConflictSystem& c) {
  if (c.num_host_edges() != h.num_edges())
    throw InputError("conflict system is defined over " + std::to_string(c.num_host_edges()) +
                     " edges but the host has " + std::to_string(h.num_edges()));
}

NormalizeResult normalize(const Hypergraph& h, const ConflictSystem& c) {
  check_host(h, c);
  NormalizeResult out;
  const std::size_t m = c.size();
  std::vector<char> keep(m, 0);
  std::unordered_set<EdgeSet, IdVectorHash> seen;
  std::vector<ConflictId> order;
  for (std::size_t i = 0; i < m; ++i) {
    auto s = c.conflict(static_cast<ConflictId>(i));
    if (!h.is_matching(s)) {
      out.log.push_back({c.conflict_vector(static_cast<ConflictId>(i)), "non-matching"});
      continue;
    }
    if (!seen.insert(c.conflict_vector(static_cast<ConflictId>(i))).second) {
      out.log.push_back({c.conflict_vector(static_cast<ConflictId>(i)), "duplicate"});
      continue;
    }
    order.push_back(static_cast<ConflictId>(i));
  }
  // Smaller conflicts first, so every retained conflict is minimal when tested.
  std::stable_sort(order.begin(), order.end(),
                   [&](ConflictId a, ConflictId b) { return c.conflict(a).size() < c.conflict(b).size(); });
  std::vector<std::vector<ConflictId>> retained_at(c.num_host_edges());
  for (ConflictId id : order) {
    auto s = c.conflict(id);
    bool superset = false;
    for (EdgeId e : s) {
      for (ConflictId d : retained_at[e]) {
        auto t = c.conflict(d);
        if (t.size() < s.size() && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
          superset = true;
          break;
        }
      }
      if (superset) break;
    }
    if (superset) {
      out.log.push_back({c.conflict_vector(id), "superset"});
      continue;
    }
    keep[id] = 1;
    for (EdgeId e : s) retained_at[e].push_back(id);
  }
  std::vector<std::uint64_t> offsets{0};
  std::vector<EdgeId> members;
  for (std::size_t i = 0; i < m; ++i) {
    if (!keep[i]) continue;
    auto s = c.conflict(static_cast<ConflictId>(i));
    members.insert(members.end(), s.begin(), s.end());
    offsets.push_back(members.size());
  }
  out.system = ConflictSystem(c.num_host_edges(), std::move(offsets), std::move(members), true);
  return out;
}

}  // namespace cfm
