#include "cfm/augment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "cfm/rng.hpp"

namespace cfm {

std::vector<std::pair<EdgeId, EdgeId>> bad_pairs(const Hypergraph& h, const ConflictSystem& c, const BoundsParams& p) {
  p.validate();
  check_host(h, c);
  std::unordered_set<std::uint64_t> two;
  for (ConflictId id : c.of_size(2)) {
    auto s = c.conflict(id);
    two.insert(pair_key(s[0], s[1]));
  }
  std::set<std::uint64_t> bad;
  for (std::size_t j = 2; j + 1 <= p.ell; ++j) {
    const double thr = std::pow(p.d, static_cast<double>(j) - p.eps / 2.0);
    for (auto [key, count] : shared_link_counts(c, j)) {
      if (static_cast<double>(count) < thr) continue;
      if (two.count(key) || !h.disjoint(pair_first(key), pair_second(key))) continue;
      bad.insert(key);
    }
  }
  std::vector<std::pair<EdgeId, EdgeId>> out;
  for (auto key : bad) out.emplace_back(pair_first(key), pair_second(key));
  return out;
}

PairAugmentResult pair_augment(const Hypergraph& h, const ConflictSystem& c, const BoundsParams& p,
                               const std::vector<TestSystem>& trackables) {
  if (!c.normalized()) throw InputError("pair_augment requires a normalized conflict system");
  PairAugmentResult out;
  std::unordered_set<std::uint64_t> cooccur;
  for (const auto& z : trackables)
    for (const auto& t : z.tests)
      for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = a + 1; b < t.size(); ++b) cooccur.insert(pair_key(t[a], t[b]));

  auto conflicts = c.to_vectors();
  for (auto [e, f] : bad_pairs(h, c, p)) {
    if (cooccur.count(pair_key(e, f))) {
      out.skipped.emplace_back(e, f);
      continue;
    }
    out.added.emplace_back(e, f);
    conflicts.push_back({e, f});
  }
  if (out.added.empty()) {
    out.system = c;
    return out;
  }
  auto norm = normalize(h, ConflictSystem(c.num_host_edges(), conflicts));
  out.system = std::move(norm.system);
  out.log = std::move(norm.log);
  return out;
}

namespace {

// Enumerates j-sets of pairwise disjoint edges in lexicographic order.
template <typename F>
void for_each_matching_set(const Hypergraph& h, std::size_t j, F&& f) {
  const std::size_t m = h.num_edges();
  std::vector<EdgeId> cur;
  std::vector<int> used(h.num_vertices(), 0);
  auto rec = [&](auto&& self, EdgeId start) -> void {
    if (cur.size() == j) {
      f(static_cast<const EdgeSet&>(cur));
      return;
    }
    for (EdgeId e = start; e < m; ++e) {
      auto ev = h.edge(e);
      bool ok = std::none_of(ev.begin(), ev.end(), [&](VertexId v) { return used[v] > 0; });
      if (!ok) continue;
      for (VertexId v : ev) ++used[v];
      cur.push_back(e);
      self(self, e + 1);
      cur.pop_back();
      for (VertexId v : ev) --used[v];
    }
  };
  rec(rec, 0);
}

}  // namespace

RegularizeResult regularize(const Hypergraph& h, const ConflictSystem& c, const BoundsParams& p, std::uint64_t seed,
                            std::uint64_t candidate_budget) {
  p.validate();
  check_host(h, c);
  if (!c.normalized()) throw InputError("regularize requires a normalized conflict system");
  RegularizeResult out;
  out.added_by_size.assign(p.ell + 1, 0);
  Rng rng = make_rng(seed);
  const std::size_t m = h.num_edges();

  std::vector<EdgeSet> current = c.to_vectors();
  std::vector<char> alive(current.size(), 1);

  for (std::size_t j = 2; j <= p.ell; ++j) {
    // Current per-edge j-degrees and incidence of live conflicts of size <= j.
    std::vector<double> deg(m, 0.0);
    std::vector<std::vector<std::size_t>> small_at(m);
    bool any = false;
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (!alive[i]) continue;
      if (current[i].size() == j) {
        any = true;
        for (EdgeId e : current[i]) deg[e] += 1.0;
      }
      if (current[i].size() <= j)
        for (EdgeId e : current[i]) small_at[e].push_back(i);
    }
    if (!any) continue;

    const double cap = binom(static_cast<long long>(m), static_cast<long long>(j));
    if (cap > static_cast<double>(candidate_budget))
      throw BudgetError("regularize: candidate space for j=" + std::to_string(j) + " exceeds budget", cap);

    double max_deg_original = static_cast<double>(c.max_codegree(j, 1));
    double target = (1.0 + std::pow(p.d, -p.eps / static_cast<double>(p.ell))) *
                    std::max(std::pow(p.d, static_cast<double>(j) - 1.0 - p.eps / 600.0), max_deg_original);
    std::vector<double> deficit(m);
    double total = 0.0;
    std::size_t clamped = 0;
    for (std::size_t e = 0; e < m; ++e) {
      deficit[e] = target - deg[e];
      if (deficit[e] < 0.0) {
        deficit[e] = 0.0;
        ++clamped;
      }
      total += deficit[e];
    }
    if (clamped)
      out.warnings.push_back("j=" + std::to_string(j) + ": " + std::to_string(clamped) +
                             " edges exceed the target degree; deficits clamped to 0");

    double factorial = std::tgamma(static_cast<double>(j));
    std::vector<EdgeSet> sampled;
    std::size_t clipped = 0;
    for_each_matching_set(h, j, [&](const EdgeSet& s) {
      for (EdgeId e : s)
        for (std::size_t ci : small_at[e])
          if (alive[ci] && sorted_subset(current[ci], s)) return;
      double w = 0.0;
      if (total > 0.0) {
        w = factorial;
        for (EdgeId e : s) w *= deficit[e];
        w /= std::pow(total, static_cast<double>(j) - 1.0);
      }
      if (w > 1.0) ++clipped;
      double prob = std::clamp(w, 0.0, 1.0);
      if (prob > 0.0 && (prob >= 1.0 || uniform01(rng) < prob)) sampled.push_back(s);
    });
    if (clipped)
      out.warnings.push_back("j=" + std::to_string(j) + ": " + std::to_string(clipped) +
                             " candidate weights above 1 clamped");

    // Drop larger conflicts that now contain a sampled set.
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (!alive[i] || current[i].size() <= j) continue;
      for (const auto& s : sampled)
        if (sorted_subset(s, current[i])) {
          alive[i] = 0;
          ++out.removed;
          break;
        }
    }
    out.added_by_size[j] = sampled.size();
    for (auto& s : sampled) {
      current.push_back(std::move(s));
      alive.push_back(1);
    }
  }

  std::vector<std::uint64_t> offsets{0};
  std::vector<EdgeId> members;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (!alive[i]) continue;
    members.insert(members.end(), current[i].begin(), current[i].end());
    offsets.push_back(members.size());
  }
  out.system = ConflictSystem(c.num_host_edges(), std::move(offsets), std::move(members), true);
  return out;
}

}  // namespace cfm
