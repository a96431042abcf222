#include "cfm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cfm {

void BoundsParams::validate() const {
  if (ell < 2) throw InputError("ell must be at least 2");
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0,1)");
  if (!(gamma >= 1.0)) throw InputError("gamma must be at least 1");
  if (!(d > 0.0)) throw InputError("d must be positive");
}

bool Report::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

std::vector<const ConditionVerdict*> Report::find(const std::string& prefix) const {
  std::vector<const ConditionVerdict*> out;
  for (const auto& c : conditions)
    if (c.name.compare(0, prefix.size(), prefix) == 0) out.push_back(&c);
  return out;
}

bool Report::passes(const std::string& prefix) const {
  for (const auto* c : find(prefix))
    if (!c->pass) return false;
  return true;
}

namespace {

ConditionVerdict upper(std::string name, double measured, double threshold, std::vector<std::uint64_t> witness = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, false, std::move(witness)};
}

ConditionVerdict lower(std::string name, double measured, double threshold, std::vector<std::uint64_t> witness = {}) {
  return {std::move(name), measured >= threshold, measured, threshold, true, std::move(witness)};
}

std::string tag(const std::string& base, std::size_t j) { return base + "(j=" + std::to_string(j) + ")"; }
std::string tag(const std::string& base, std::size_t j, std::size_t jp) {
  return base + "(j=" + std::to_string(j) + ",j'=" + std::to_string(jp) + ")";
}

// Largest number of size-j conflicts through a jp-set, with the set itself.
std::pair<std::size_t, EdgeSet> codegree_with_witness(const ConflictSystem& c, std::size_t j, std::size_t jp) {
  std::map<EdgeSet, std::size_t> counts;
  std::pair<std::size_t, EdgeSet> best{0, {}};
  for (ConflictId id : c.of_size(j))
    for_each_subset(c.conflict_vector(id), jp, [&](const EdgeSet& sub) {
      std::size_t v = ++counts[sub];
      if (v > best.first) best = {v, sub};
    });
  return best;
}

std::pair<std::size_t, EdgeId> max_degree_in_size(const ConflictSystem& c, std::size_t j) {
  std::pair<std::size_t, EdgeId> best{0, kNoEdge};
  for (std::size_t e = 0; e < c.num_host_edges(); ++e) {
    std::size_t v = c.degree_in_size(static_cast<EdgeId>(e), j);
    if (v > best.first) best = {v, static_cast<EdgeId>(e)};
  }
  return best;
}

std::vector<std::uint64_t> widen(const EdgeSet& s) { return {s.begin(), s.end()}; }

}  // namespace

std::unordered_map<std::uint64_t, std::size_t> shared_link_counts(const ConflictSystem& c, std::size_t j) {
  // Group conflicts of size j+1 by the j-set left after removing one member.
  std::map<EdgeSet, std::vector<EdgeId>> groups;
  for (ConflictId id : c.of_size(j + 1)) {
    auto s = c.conflict_vector(id);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EdgeSet rest;
      rest.reserve(j);
      for (std::size_t t = 0; t < s.size(); ++t)
        if (t != i) rest.push_back(s[t]);
      groups[rest].push_back(s[i]);
    }
  }
  std::unordered_map<std::uint64_t, std::size_t> out;
  for (auto& [rest, owners] : groups) {
    std::sort(owners.begin(), owners.end());
    for (std::size_t a = 0; a < owners.size(); ++a)
      for (std::size_t b = a + 1; b < owners.size(); ++b) ++out[pair_key(owners[a], owners[b])];
  }
  return out;
}

Report boundedness_report(const Hypergraph& h, const ConflictSystem& c, const BoundsParams& p, bool extended) {
  p.validate();
  check_host(h, c);
  if (extended && !c.normalized()) throw InputError("extended conditions require a normalized conflict system");
  Report r;
  const double d = p.d, eps = p.eps;
  const std::size_t ell = p.ell;

  // C1: sizes within [2, ell].
  {
    std::size_t worst = 0;
    std::uint64_t wid = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::size_t sz = c.conflict(static_cast<ConflictId>(i)).size();
      if (sz > worst) worst = sz, wid = i;
    }
    r.conditions.push_back(upper("C1", static_cast<double>(worst), static_cast<double>(ell),
                                 worst > ell ? std::vector<std::uint64_t>{wid} : std::vector<std::uint64_t>{}));
  }

  // C2: weighted maximum degrees and the number of nonempty uniformities.
  {
    double sum = 0.0;
    std::size_t nonempty = 0;
    for (std::size_t j = 1; j <= ell; ++j) {
      auto [deg, e] = max_degree_in_size(c, j);
      sum += static_cast<double>(deg) / std::pow(d, static_cast<double>(j) - 1.0);
      if (j >= 2 && !c.of_size(j).empty()) ++nonempty;
    }
    r.conditions.push_back(upper("C2", sum, p.gamma));
    r.conditions.push_back(upper("C2-uniformities", static_cast<double>(nonempty), p.gamma));
  }

  // C3: codegrees inside each uniformity.
  for (std::size_t j = 3; j <= ell; ++j) {
    for (std::size_t jp = 2; jp < j; ++jp) {
      auto [deg, wit] = codegree_with_witness(c, j, jp);
      double thr = std::pow(d, static_cast<double>(j) - static_cast<double>(jp) - eps);
      r.conditions.push_back(upper(tag("C3", j, jp), static_cast<double>(deg), thr, widen(wit)));
    }
  }

  // C4: 2-conflict partners of e through a fixed vertex v.
  {
    std::size_t best = 0;
    std::vector<std::uint64_t> wit;
    std::map<VertexId, std::size_t> per_vertex;
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      per_vertex.clear();
      for (EdgeId f : c.n2_neighborhood(static_cast<EdgeId>(e)))
        for (VertexId v : h.edge(f)) {
          std::size_t val = ++per_vertex[v];
          if (val > best) best = val, wit = {e, v};
        }
    }
    r.conditions.push_back(upper("C4", static_cast<double>(best), std::pow(d, 1.0 - eps), wit));
  }

  // C5: common 2-conflict partners of disjoint edges.
  {
    std::unordered_map<std::uint64_t, std::size_t> common;
    for (std::size_t g = 0; g < h.num_edges(); ++g) {
      auto nb = c.n2_neighborhood(static_cast<EdgeId>(g));
      for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b)
          if (h.disjoint(nb[a], nb[b])) ++common[pair_key(nb[a], nb[b])];
    }
    std::size_t best = 0;
    std::uint64_t key = 0;
    for (auto [k, v] : common)
      if (v > best || (v == best && v > 0 && k < key)) best = v, key = k;
    r.conditions.push_back(upper("C5", static_cast<double>(best), std::pow(d, 1.0 - eps),
                                 best ? std::vector<std::uint64_t>{pair_first(key), pair_second(key)}
                                      : std::vector<std::uint64_t>{}));
  }

  if (!extended) return r;

  // C6: each nonempty uniformity is nearly regular and not too sparse.
  for (std::size_t j = 2; j <= ell; ++j) {
    if (c.of_size(j).empty()) continue;
    auto [maxdeg, argmax] = max_degree_in_size(c, j);
    double scaled = (1.0 - std::pow(d, -eps)) * static_cast<double>(maxdeg);
    r.conditions.push_back(lower(tag("C6-lower", j), scaled, std::pow(d, static_cast<double>(j) - 1.0 - eps / 100.0),
                                 {argmax}));
    std::size_t mindeg = std::numeric_limits<std::size_t>::max();
    EdgeId argmin = 0;
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      std::size_t v = c.degree_in_size(static_cast<EdgeId>(e), j);
      if (v < mindeg) mindeg = v, argmin = static_cast<EdgeId>(e);
    }
    r.conditions.push_back(upper(tag("C6-upper", j), scaled, static_cast<double>(mindeg), {argmin}));
  }

  // C7: shared links of disjoint edges that do not form a 2-conflict.
  {
    std::unordered_map<std::uint64_t, char> two;
    for (ConflictId id : c.of_size(2)) {
      auto s = c.conflict(id);
      two[pair_key(s[0], s[1])] = 1;
    }
    for (std::size_t j = 1; j + 1 <= ell; ++j) {
      auto counts = shared_link_counts(c, j);
      std::size_t best = 0;
      std::uint64_t key = 0;
      for (auto [k, v] : counts) {
        EdgeId a = pair_first(k), b = pair_second(k);
        if (!h.disjoint(a, b) || two.count(k)) continue;
        if (v > best || (v == best && k < key)) best = v, key = k;
      }
      r.conditions.push_back(upper(tag("C7", j), static_cast<double>(best), std::pow(d, static_cast<double>(j) - eps),
                                   best ? std::vector<std::uint64_t>{pair_first(key), pair_second(key)}
                                        : std::vector<std::uint64_t>{}));
    }
  }

  // C8: every conflict is a matching.
  {
    std::size_t bad = 0;
    std::vector<std::uint64_t> wit;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!h.is_matching(c.conflict(static_cast<ConflictId>(i)))) {
        if (!bad) wit = {i};
        ++bad;
      }
    r.conditions.push_back(upper("C8", static_cast<double>(bad), 0.0, wit));
  }

  // C9: no conflict contains another.
  {
    std::size_t bad = 0;
    std::vector<std::uint64_t> wit;
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto s = c.conflict(static_cast<ConflictId>(i));
      bool found = false;
      for (EdgeId e : s) {
        for (ConflictId other : c.containing(e)) {
          if (other == i) continue;
          auto t = c.conflict(other);
          if (t.size() <= s.size() && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
            if (!bad) wit = {i, other};
            found = true;
            break;
          }
        }
        if (found) break;
      }
      bad += found;
    }
    r.conditions.push_back(upper("C9", static_cast<double>(bad), 0.0, wit));
  }
  return r;
}

}  // namespace cfm
