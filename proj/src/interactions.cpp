#include "cfm/interactions.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace cfm {

Family canonical_family(std::vector<EdgeSet> sets) {
  for (auto& s : sets) std::sort(s.begin(), s.end());
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

TrackedSystem link_system(const ConflictSystem& c, EdgeId e, std::size_t j) {
  TrackedSystem z{{j, {}}, e};
  for (ConflictId id : c.containing(e)) {
    auto s = c.conflict(id);
    if (s.size() != j + 1) continue;
    EdgeSet rest;
    for (EdgeId g : s)
      if (g != e) rest.push_back(g);
    z.system.tests.push_back(std::move(rest));
  }
  z.system.tests = canonical_family(std::move(z.system.tests));
  return z;
}

Family conflict_link(const ConflictSystem& c, EdgeId e) {
  Family out;
  for (ConflictId id : c.containing(e)) {
    EdgeSet rest;
    for (EdgeId g : c.conflict(id))
      if (g != e) rest.push_back(g);
    out.push_back(std::move(rest));
  }
  return canonical_family(std::move(out));
}

bool immediate_evictor(const Hypergraph& h, const ConflictSystem& c, EdgeId g, const TrackedSystem& z) {
  if (!z.link_of) return false;
  const EdgeId f = *z.link_of;
  if (!h.disjoint(g, f)) return true;
  for (ConflictId id : c.containing(g)) {
    auto s = c.conflict(id);
    if (s.size() == 2 && (s[0] == f || s[1] == f)) return true;
  }
  return false;
}

std::string to_string(InteractionKind k) {
  switch (k) {
    case InteractionKind::Zv: return "Z_v";
    case InteractionKind::Ze: return "Z_e";
    case InteractionKind::Ze2: return "Z_e2";
    case InteractionKind::Z2: return "Z_2";
    case InteractionKind::Ce2: return "C_e2";
    case InteractionKind::Cef2Star: return "C_ef2star";
  }
  return "?";
}

namespace {

EdgeSet set_union(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t intersection_size(const EdgeSet& a, const EdgeSet& b) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) ++n, ++i, ++j;
    else if (a[i] < b[j]) ++i;
    else ++j;
  }
  return n;
}

void validate_anchors(const InteractionSpec& s, const Hypergraph& h) {
  bool need_v = s.kind == InteractionKind::Zv;
  bool need_e = s.kind == InteractionKind::Ze || s.kind == InteractionKind::Ze2 || s.kind == InteractionKind::Ce2 ||
                s.kind == InteractionKind::Cef2Star;
  bool need_f = s.kind == InteractionKind::Cef2Star;
  if (need_v != s.v.has_value() || need_e != s.e.has_value() || need_f != s.f.has_value())
    throw InputError("anchors do not match interaction kind " + to_string(s.kind));
  if (s.v && *s.v >= h.num_vertices()) throw InputError("anchor vertex out of range");
  if (s.e && *s.e >= h.num_edges()) throw InputError("anchor edge out of range");
  if (s.f && *s.f >= h.num_edges()) throw InputError("anchor edge out of range");
}

struct Sink {
  std::size_t budget;
  std::vector<EdgeSet> out;
  void add(EdgeSet s) {
    if (out.size() >= budget) throw BudgetError("interaction family exceeds budget", static_cast<double>(out.size() + 1));
    out.push_back(std::move(s));
  }
};

}  // namespace

Family build_interaction(const InteractionSpec& spec, const TrackedSystem& z, const ConflictSystem& c,
                         const Hypergraph& h, std::size_t budget) {
  validate_anchors(spec, h);
  check_host(h, c);
  if (!c.normalized()) throw InputError("local interactions require a normalized conflict system");
  Sink sink{budget, {}};
  const auto& tests = z.system.tests;
  switch (spec.kind) {
    case InteractionKind::Zv: {
      for (const auto& t : tests)
        for (EdgeId g : t) {
          auto ev = h.edge(g);
          if (std::binary_search(ev.begin(), ev.end(), *spec.v)) {
            sink.add(t);
            break;
          }
        }
      break;
    }
    case InteractionKind::Ze: {
      for (const auto& t : tests)
        if (std::binary_search(t.begin(), t.end(), *spec.e)) {
          EdgeSet rest;
          for (EdgeId g : t)
            if (g != *spec.e) rest.push_back(g);
          sink.add(std::move(rest));
        }
      break;
    }
    case InteractionKind::Ze2: {
      Family links = conflict_link(c, *spec.e);
      for (const auto& t : tests)
        for (const auto& l : links)
          if (intersection_size(t, l) > 0) sink.add(set_union(t, l));
      break;
    }
    case InteractionKind::Z2: {
      std::unordered_map<EdgeId, bool> evicts;
      auto is_evictor = [&](EdgeId g) {
        auto it = evicts.find(g);
        if (it != evicts.end()) return it->second;
        return evicts[g] = immediate_evictor(h, c, g, z);
      };
      for (const auto& t : tests) {
        // Conflicts meeting t in at least two edges.
        std::unordered_map<ConflictId, std::size_t> hits;
        for (EdgeId g : t)
          for (ConflictId id : c.containing(g)) ++hits[id];
        std::vector<ConflictId> ids;
        for (auto [id, cnt] : hits)
          if (cnt >= 2) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        for (ConflictId id : ids) {
          EdgeSet cs = c.conflict_vector(id);
          bool ok = true;
          for (EdgeId g : cs)
            if (!std::binary_search(t.begin(), t.end(), g) && is_evictor(g)) {
              ok = false;
              break;
            }
          if (ok) sink.add(set_union(t, cs));
        }
      }
      break;
    }
    case InteractionKind::Ce2: {
      Family links = conflict_link(c, *spec.e);
      for (std::size_t a = 0; a < links.size(); ++a)
        for (std::size_t b = a + 1; b < links.size(); ++b)
          if (intersection_size(links[a], links[b]) > 0) sink.add(set_union(links[a], links[b]));
      break;
    }
    case InteractionKind::Cef2Star: {
      EdgeSet partners = c.n2_neighborhood(*spec.e);
      for (const auto& l : conflict_link(c, *spec.f))
        if (l.size() >= 2 && intersection_size(l, partners) > 0) sink.add(l);
      break;
    }
  }
  return canonical_family(std::move(sink.out));
}

Report is_spread(const Family& x, std::size_t j, double d0, double delta) {
  for (const auto& s : x)
    if (s.size() != j) throw InputError("is_spread expects a " + std::to_string(j) + "-uniform family");
  Report r;
  for (std::size_t jp = 0; jp < j; ++jp) {
    double thr = std::pow(delta, static_cast<double>(jp)) * d0;
    std::size_t best = 0;
    EdgeSet wit;
    if (jp == 0) {
      best = x.size();
    } else {
      std::unordered_map<EdgeSet, std::size_t, IdVectorHash> counts;
      for (const auto& s : x)
        for_each_subset(s, jp, [&](const EdgeSet& sub) {
          std::size_t v = ++counts[sub];
          if (v > best || (v == best && sub < wit)) best = v, wit = sub;
        });
    }
    ConditionVerdict v{"spread(j'=" + std::to_string(jp) + ")", static_cast<double>(best) <= thr,
                       static_cast<double>(best), thr, false, {wit.begin(), wit.end()}};
    r.conditions.push_back(std::move(v));
  }
  return r;
}

std::size_t partial_count(const Family& x, const ProcessState& state, std::size_t s) {
  std::size_t count = 0;
  for (const auto& m : x) {
    std::size_t alive = 0, matched = 0;
    for (EdgeId e : m) {
      alive += state.is_alive(e);
      matched += state.is_matched(e);
    }
    count += alive == s && matched + s == m.size();
  }
  return count;
}

bool SpreadEventReport::holds() const {
  return std::all_of(families.begin(), families.end(), [](const auto& f) { return f.pass; });
}

bool SpreadEventReport::vacuity_flag() const {
  return std::any_of(families.begin(), families.end(), [](const auto& f) { return f.small_threshold_checks > 0; });
}

SpreadEventReport spread_event_check(const ProcessState& state, const std::vector<TrackedSystem>& collection,
                                     std::size_t ell, double d, double eps, std::size_t budget) {
  const Hypergraph& h = state.host();
  const ConflictSystem& c = state.conflicts();
  SpreadEventReport rep;
  for (const char* name : {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)"}) {
    rep.families.emplace_back();
    rep.families.back().name = name;
  }
  std::size_t work = 0;

  auto record = [&](SpreadFamilyVerdict& f, const Family& x, std::size_t s, double threshold,
                    std::vector<std::uint64_t> witness) {
    work += x.size();
    if (work > budget) throw BudgetError("spread event evaluation exceeds budget", static_cast<double>(work));
    std::size_t cnt = partial_count(x, state, s);
    ++f.checks;
    if (threshold < 1.0) ++f.small_threshold_checks;
    double ratio = threshold > 0 ? static_cast<double>(cnt) / threshold : (cnt ? INFINITY : 0.0);
    if (static_cast<double>(cnt) > threshold) f.pass = false;
    if (ratio > f.worst_ratio) {
      f.worst_ratio = ratio;
      witness.push_back(s);
      f.witness = std::move(witness);
    }
  };

  for (std::size_t zi = 0; zi < collection.size(); ++zi) {
    const TrackedSystem& z = collection[zi];
    const double j = static_cast<double>(z.system.j);
    const double size = static_cast<double>(z.system.tests.size());
    auto thr = [&](std::size_t s) { return std::pow(d, static_cast<double>(s) - j - eps / 3.0) * size; };
    for (std::size_t v = 0; v < h.num_vertices(); ++v) {
      Family x = build_interaction({InteractionKind::Zv, static_cast<VertexId>(v), {}, {}}, z, c, h, budget);
      for (std::size_t s = 1; s <= ell; ++s) record(rep.families[0], x, s, thr(s), {zi, v});
    }
    const std::size_t s_min = z.link_of ? 1 : 0;
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      const EdgeId eid = static_cast<EdgeId>(e);
      Family x = build_interaction({InteractionKind::Ze, {}, eid, {}}, z, c, h, budget);
      for (std::size_t s = s_min; s <= ell; ++s) record(rep.families[1], x, s, thr(s), {zi, e});
      if (!immediate_evictor(h, c, eid, z)) {
        Family y = build_interaction({InteractionKind::Ze2, {}, eid, {}}, z, c, h, budget);
        for (std::size_t s = 1; s <= ell; ++s) record(rep.families[2], y, s, thr(s), {zi, e});
      }
    }
    Family x2 = build_interaction({InteractionKind::Z2, {}, {}, {}}, z, c, h, budget);
    for (std::size_t s = 2; s <= ell; ++s) record(rep.families[3], x2, s, thr(s), {zi});
  }

  const TrackedSystem none{};
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    Family x = build_interaction({InteractionKind::Ce2, {}, static_cast<EdgeId>(e), {}}, none, c, h, budget);
    for (std::size_t s = 1; s + 1 <= ell; ++s)
      record(rep.families[4], x, s, std::pow(d, static_cast<double>(s) - eps / 3.0), {e});
  }
  for (std::size_t e = 0; e < h.num_edges(); ++e)
    for (std::size_t f = 0; f < h.num_edges(); ++f) {
      if (e == f || !h.disjoint(static_cast<EdgeId>(e), static_cast<EdgeId>(f))) continue;
      Family x = build_interaction({InteractionKind::Cef2Star, {}, static_cast<EdgeId>(e), static_cast<EdgeId>(f)},
                                   none, c, h, budget);
      record(rep.families[5], x, 1, std::pow(d, 1.0 - eps / 3.0), {e, f});
    }
  return rep;
}

}  // namespace cfm
