#include <gtest/gtest.h>

#include <set>

#include "cfm/interactions.hpp"
#include "cfm/steiner.hpp"
#include "support.hpp"

namespace cfm {
namespace {

using testing::k4;

EdgeSet unite(const EdgeSet& a, const EdgeSet& b) {
  std::set<EdgeId> u(a.begin(), a.end());
  u.insert(b.begin(), b.end());
  return {u.begin(), u.end()};
}

std::size_t common(const EdgeSet& a, const EdgeSet& b) {
  std::size_t n = 0;
  for (EdgeId x : a) n += std::binary_search(b.begin(), b.end(), x);
  return n;
}

bool naive_evictor(const Hypergraph& h, const std::vector<EdgeSet>& cs, EdgeId g, const TrackedSystem& z) {
  if (!z.link_of) return false;
  const EdgeId f = *z.link_of;
  auto ge = h.edge(g), fe = h.edge(f);
  for (VertexId u : ge)
    if (std::find(fe.begin(), fe.end(), u) != fe.end()) return true;
  EdgeSet pair{std::min(g, f), std::max(g, f)};
  return std::find(cs.begin(), cs.end(), pair) != cs.end();
}

// Each kind written directly from its definition.
Family naive_interaction(const InteractionSpec& spec, const TrackedSystem& z, const ConflictSystem& c,
                         const Hypergraph& h) {
  auto cs = c.to_vectors();
  std::set<EdgeSet> out;
  auto link_of = [&](EdgeId e) {
    std::vector<EdgeSet> l;
    for (auto& cc : cs)
      if (std::binary_search(cc.begin(), cc.end(), e)) {
        EdgeSet r;
        for (EdgeId x : cc)
          if (x != e) r.push_back(x);
        l.push_back(r);
      }
    return l;
  };
  switch (spec.kind) {
    case InteractionKind::Zv:
      for (auto& t : z.system.tests)
        for (EdgeId g : t) {
          auto ge = h.edge(g);
          if (std::find(ge.begin(), ge.end(), *spec.v) != ge.end()) out.insert(t);
        }
      break;
    case InteractionKind::Ze:
      for (auto& t : z.system.tests)
        if (std::binary_search(t.begin(), t.end(), *spec.e)) {
          EdgeSet r;
          for (EdgeId x : t)
            if (x != *spec.e) r.push_back(x);
          out.insert(r);
        }
      break;
    case InteractionKind::Ze2:
      for (auto& t : z.system.tests)
        for (auto& l : link_of(*spec.e))
          if (common(t, l) > 0) out.insert(unite(t, l));
      break;
    case InteractionKind::Z2:
      for (auto& t : z.system.tests)
        for (auto& cc : cs) {
          if (common(t, cc) < 2) continue;
          bool ok = true;
          for (EdgeId g : cc)
            if (!std::binary_search(t.begin(), t.end(), g) && naive_evictor(h, cs, g, z)) ok = false;
          if (ok) out.insert(unite(t, cc));
        }
      break;
    case InteractionKind::Ce2: {
      auto l = link_of(*spec.e);
      for (auto& a : l)
        for (auto& b : l)
          if (a != b && common(a, b) > 0) out.insert(unite(a, b));
      break;
    }
    case InteractionKind::Cef2Star: {
      std::set<EdgeId> partners;
      for (auto& cc : cs)
        if (cc.size() == 2 && std::binary_search(cc.begin(), cc.end(), *spec.e))
          partners.insert(cc[0] == *spec.e ? cc[1] : cc[0]);
      for (auto& l : link_of(*spec.f)) {
        if (l.size() < 2) continue;
        bool hit = false;
        for (EdgeId x : l) hit |= partners.count(x) > 0;
        if (hit) out.insert(l);
      }
      break;
    }
  }
  return {out.begin(), out.end()};
}

struct Instance {
  Hypergraph h;
  ConflictSystem c;
};

Instance random_instance(Rng& rng) {
  auto h = testing::random_host(rng, 9, 2, 14);
  auto c = normalize(h, ConflictSystem(h.num_edges(), testing::random_conflicts(rng, h.num_edges(), 25, 3))).system;
  return {h, c};
}

TrackedSystem external_tests(Rng& rng, const Hypergraph& h, std::size_t j, std::size_t count) {
  std::set<EdgeSet> out;
  for (std::size_t tries = 0; out.size() < count && tries < 200 * count; ++tries) {
    EdgeSet t;
    while (t.size() < j) {
      auto e = static_cast<EdgeId>(uniform_below(rng, h.num_edges()));
      if (std::find(t.begin(), t.end(), e) == t.end()) t.push_back(e);
    }
    std::sort(t.begin(), t.end());
    if (h.is_matching(t)) out.insert(t);
  }
  return {make_test_system(h, j, {out.begin(), out.end()}), std::nullopt};
}

TEST(Interactions, EmptyCases) {
  auto g = k4();
  auto c = testing::k4_conflict();
  TrackedSystem z{make_test_system(g, 1, {{3}}), std::nullopt};  // edge 12
  EXPECT_TRUE(build_interaction({InteractionKind::Zv, 0, {}, {}}, z, c, g).empty());
  EXPECT_EQ(build_interaction({InteractionKind::Zv, 1, {}, {}}, z, c, g).size(), 1u);
  TrackedSystem pairs{make_test_system(g, 2, {{1, 4}}), std::nullopt};
  EXPECT_TRUE(build_interaction({InteractionKind::Z2, {}, {}, {}}, pairs, c, g).empty());
}

TEST(Interactions, AnchorMismatch) {
  auto g = k4();
  auto c = testing::k4_conflict();
  TrackedSystem z{};
  EXPECT_THROW(build_interaction({InteractionKind::Zv, {}, 0, {}}, z, c, g), InputError);
  EXPECT_THROW(build_interaction({InteractionKind::Cef2Star, {}, 0, {}}, z, c, g), InputError);
  EXPECT_THROW(build_interaction({InteractionKind::Z2, 0, {}, {}}, z, c, g), InputError);
  EXPECT_THROW(build_interaction({InteractionKind::Ze, {}, 9, {}}, z, c, g), InputError);
}

TEST(Interactions, RequiresNormalized) {
  auto g = k4();
  EXPECT_THROW(build_interaction({InteractionKind::Z2, {}, {}, {}}, TrackedSystem{}, ConflictSystem(6, {{0, 5}}), g),
               InputError);
}

TEST(Interactions, BudgetRefusal) {
  auto inst = build(7, 3, 2, 4);
  auto z = link_system(inst.c, 0, 3);
  EXPECT_THROW(build_interaction({InteractionKind::Ce2, {}, 0, {}}, TrackedSystem{}, inst.c, inst.h, 3), BudgetError);
  EXPECT_FALSE(z.system.tests.empty());
}

TEST(InteractionsProperty, AgreesWithDefinitions) {
  Rng rng = make_rng(101);
  for (int round = 0; round < 40; ++round) {
    auto [h, c] = random_instance(rng);
    std::vector<TrackedSystem> systems{external_tests(rng, h, 2, 8), external_tests(rng, h, 1, 5)};
    for (EdgeId f = 0; f < h.num_edges(); f += 3) systems.push_back(link_system(c, f, 2));
    for (const auto& z : systems) {
      for (VertexId v = 0; v < h.num_vertices(); ++v) {
        InteractionSpec s{InteractionKind::Zv, v, {}, {}};
        EXPECT_EQ(build_interaction(s, z, c, h), naive_interaction(s, z, c, h));
      }
      for (EdgeId e = 0; e < h.num_edges(); ++e)
        for (auto kind : {InteractionKind::Ze, InteractionKind::Ze2, InteractionKind::Ce2}) {
          InteractionSpec s{kind, {}, e, {}};
          EXPECT_EQ(build_interaction(s, z, c, h), naive_interaction(s, z, c, h)) << to_string(kind);
        }
      InteractionSpec s2{InteractionKind::Z2, {}, {}, {}};
      EXPECT_EQ(build_interaction(s2, z, c, h), naive_interaction(s2, z, c, h));
    }
    for (EdgeId e = 0; e < h.num_edges(); ++e)
      for (EdgeId f = 0; f < h.num_edges(); ++f) {
        if (e == f) continue;
        InteractionSpec s{InteractionKind::Cef2Star, {}, e, f};
        EXPECT_EQ(build_interaction(s, TrackedSystem{}, c, h), naive_interaction(s, TrackedSystem{}, c, h));
      }
  }
}

TEST(InteractionsProperty, LinkIdentity) {
  Rng rng = make_rng(102);
  for (int round = 0; round < 20; ++round) {
    auto [h, c] = random_instance(rng);
    auto z = external_tests(rng, h, 3, 12);
    for (EdgeId e = 0; e < h.num_edges(); ++e) {
      std::size_t deg = 0;
      for (auto& t : z.system.tests) deg += std::binary_search(t.begin(), t.end(), e);
      EXPECT_EQ(build_interaction({InteractionKind::Ze, {}, e, {}}, z, c, h).size(), deg);
    }
  }
}

TEST(InteractionsProperty, InvariantUnderTestReordering) {
  Rng rng = make_rng(103);
  for (int round = 0; round < 20; ++round) {
    auto [h, c] = random_instance(rng);
    auto z = external_tests(rng, h, 2, 10);
    auto shuffled = z;
    std::shuffle(shuffled.system.tests.begin(), shuffled.system.tests.end(), rng);
    for (auto kind : {InteractionKind::Ze2, InteractionKind::Z2}) {
      InteractionSpec s{kind, {}, kind == InteractionKind::Z2 ? std::nullopt : std::optional<EdgeId>(0), {}};
      EXPECT_EQ(build_interaction(s, z, c, h), build_interaction(s, shuffled, c, h));
    }
  }
}

TEST(InteractionsProperty, Z2HasNoEvictorsOutsideTests) {
  auto inst = build(8, 3, 2, 4);
  auto cs = inst.c.to_vectors();
  for (EdgeId f = 0; f < inst.h.num_edges(); f += 5) {
    for (std::size_t j = 2; j <= 3; ++j) {
      auto z = link_system(inst.c, f, j);
      for (const auto& x : build_interaction({InteractionKind::Z2, {}, {}, {}}, z, inst.c, inst.h))
        for (EdgeId g : x) EXPECT_FALSE(naive_evictor(inst.h, cs, g, z));
    }
  }
}

TEST(Evictor, ExternalSystemsHaveNone) {
  auto g = k4();
  auto c = testing::k4_conflict();
  TrackedSystem ext{make_test_system(g, 1, {{3}}), std::nullopt};
  for (EdgeId e = 0; e < 6; ++e) EXPECT_FALSE(immediate_evictor(g, c, e, ext));
  auto link = link_system(c, 0, 1);  // {{5}}, anchored at 01
  EXPECT_TRUE(immediate_evictor(g, c, 5, link));   // 2-conflict partner
  EXPECT_TRUE(immediate_evictor(g, c, 1, link));   // meets 01
  EXPECT_FALSE(immediate_evictor(g, c, 0, TrackedSystem{link.system, std::nullopt}));
}

TEST(Spread, Examples) {
  EXPECT_TRUE(is_spread({}, 3, 0.0, 0.5).all_pass());
  EXPECT_TRUE(is_spread({{1, 2, 3}}, 3, 1.0, 1.0).all_pass());
  EXPECT_FALSE(is_spread({{1, 2}, {1, 3}}, 2, 1.0, 1.0).all_pass());
  EXPECT_THROW(is_spread({{1, 2}}, 3, 1.0, 1.0), InputError);
}

TEST(SpreadProperty, AgreesWithNaiveCodegrees) {
  Rng rng = make_rng(104);
  for (int round = 0; round < 50; ++round) {
    const std::size_t j = 2 + uniform_below(rng, 2);
    std::set<EdgeSet> fam;
    for (int i = 0; i < 15; ++i) {
      std::set<EdgeId> s;
      while (s.size() < j) s.insert(static_cast<EdgeId>(uniform_below(rng, 8)));
      fam.insert({s.begin(), s.end()});
    }
    Family x(fam.begin(), fam.end());
    const double d0 = 1 + 10 * uniform01(rng), delta = uniform01(rng);
    auto r = is_spread(x, j, d0, delta);
    std::vector<EdgeId> all{0, 1, 2, 3, 4, 5, 6, 7};
    for (std::size_t jp = 0; jp < j; ++jp) {
      std::size_t best = 0;
      for_each_subset(all, jp, [&](const EdgeSet& sub) {
        std::size_t n = 0;
        for (auto& m : x) n += std::includes(m.begin(), m.end(), sub.begin(), sub.end());
        best = std::max(best, n);
      });
      const auto& v = r.conditions[jp];
      EXPECT_EQ(v.measured, static_cast<double>(best));
      EXPECT_EQ(v.pass, static_cast<double>(best) <= std::pow(delta, static_cast<double>(jp)) * d0);
    }
  }
}

TEST(SpreadEvent, EmptyConflictsPassConflictFamilies) {
  auto inst = build(7, 3, 2, 4);
  auto c = normalize(inst.h, ConflictSystem(inst.h.num_edges(), {})).system;
  ProcessState st(inst.h, c, 1);
  st.step();
  auto rep = spread_event_check(st, {}, 4, 5, 0.5);
  ASSERT_EQ(rep.families.size(), 6u);
  EXPECT_TRUE(rep.families[4].pass);
  EXPECT_TRUE(rep.families[5].pass);
  EXPECT_TRUE(rep.holds());
}

TEST(SpreadEvent, StepZeroOnlyCountsFullyAliveMembers) {
  auto inst = build(7, 3, 2, 4);
  ProcessState st(inst.h, inst.c, 1);
  std::vector<TrackedSystem> coll{link_system(inst.c, 0, 3)};
  auto rep = spread_event_check(st, coll, 4, 5, 0.5);
  for (const auto& f : rep.families) EXPECT_GT(f.checks, 0u) << f.name;
  // With nothing matched, a member with s alive edges and the rest matched needs s = |member|.
  for (EdgeId e = 0; e < inst.h.num_edges(); ++e) {
    auto x = build_interaction({InteractionKind::Ce2, {}, e, {}}, TrackedSystem{}, inst.c, inst.h);
    for (std::size_t s = 0; s + 1 < 6; ++s) {
      std::size_t expect = 0;
      for (auto& m : x) expect += m.size() == s;
      EXPECT_EQ(partial_count(x, st, s), expect);
    }
  }
}

TEST(SpreadEventProperty, PartialCountsMatchRecount) {
  auto inst = build(8, 3, 2, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ProcessState st(inst.h, inst.c, seed);
    for (int i = 0; i < 3; ++i) st.step();
    auto x = build_interaction({InteractionKind::Ce2, {}, static_cast<EdgeId>(seed), {}}, TrackedSystem{}, inst.c,
                               inst.h);
    for (std::size_t s = 0; s <= 6; ++s) {
      std::size_t expect = 0;
      for (auto& m : x) {
        std::size_t a = 0, mm = 0;
        for (EdgeId e : m) a += st.is_alive(e), mm += st.is_matched(e);
        expect += a == s && a + mm == m.size();
      }
      EXPECT_EQ(partial_count(x, st, s), expect);
    }
  }
}

}  // namespace
}  // namespace cfm
