// Acceptance driver: runs every acceptance criterion and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cfm/augment.hpp"
#include "cfm/bounds.hpp"
#include "cfm/exact.hpp"
#include "cfm/interactions.hpp"
#include "cfm/process.hpp"
#include "cfm/steiner.hpp"
#include "cfm/tracking.hpp"
#include "cfm/trajectory.hpp"
#include "naive.hpp"
#include "support.hpp"

namespace {

using namespace cfm;
namespace tst = cfm::testing;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const SteinerInstance& steiner(std::size_t m, std::size_t ell) {
  static std::map<std::pair<std::size_t, std::size_t>, SteinerInstance> cache;
  auto it = cache.find({m, ell});
  if (it == cache.end()) it = cache.emplace(std::pair{m, ell}, build(m, 3, 2, ell)).first;
  return it->second;
}

EdgeSet sorted(std::vector<EdgeId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

double covered_fraction(const Hypergraph& h, const std::vector<EdgeId>& m) {
  return static_cast<double>(m.size() * h.k()) / static_cast<double>(h.num_vertices());
}

ConflictSystem random_normalized(Rng& rng, const Hypergraph& h, std::size_t count, std::size_t max_size) {
  return normalize(h, ConflictSystem(h.num_edges(), tst::random_conflicts(rng, h.num_edges(), count, max_size)))
      .system;
}

Outcome exact_law() {
  std::vector<std::pair<Hypergraph, ConflictSystem>> suite;
  suite.emplace_back(tst::k4(), tst::k4_conflict());
  Hypergraph path(2, 6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  suite.emplace_back(path, normalize(path, ConflictSystem(5, {{0, 4}})).system);
  Rng rng = make_rng(1001);
  while (suite.size() < 6) {
    auto h = tst::random_host(rng, 8, 2, 10);
    suite.emplace_back(h, random_normalized(rng, h, 6, 3));
  }

  Probability size_one = 0;
  for (auto& [m, p] : exact_distribution(suite[0].first, suite[0].second))
    if (m.size() == 1) size_one += p;
  const bool k4_ok = size_one == Probability(1, 3);

  double worst = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& [h, c] = suite[i];
    std::map<EdgeSet, std::size_t> counts;
    for (std::size_t r = 0; r < 100000; ++r) ++counts[sorted(ProcessState(h, c, derive_seed(77 + i, r)).run().matching)];
    worst = std::max(worst, total_variation(exact_distribution(h, c), counts));
  }
  return {k4_ok && worst <= 0.02,
          fmt("K4 P(size 1)=1/3 %s; max TV %.4f over %zu instances x 1e5 runs", k4_ok ? "exact" : "WRONG", worst,
              suite.size())};
}

Outcome availability() {
  Rng rng = make_rng(1002);
  std::size_t steps = 0, violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto h = tst::random_host(rng, 6 + uniform_below(rng, 8), 2 + uniform_below(rng, 2), 8 + uniform_below(rng, 20));
    auto c = random_normalized(rng, h, 5 + uniform_below(rng, 30), 4);
    ProcessState st(h, c, seed);
    while (!st.step().exhausted) {
      ++steps;
      violations += st.alive_edges() != recompute_available(h, c, sorted(st.matching()));
      violations += !st.counters_consistent();
    }
  }
  return {violations == 0, fmt("%zu violations over %zu steps of 100 runs", violations, steps)};
}

Outcome girth() {
  std::size_t good = 0, total = 0, disagree = 0;
  for (std::size_t m : {7u, 13u, 15u, 19u}) {
    const auto& inst = steiner(m, 4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto run = ProcessState(inst.h, inst.c, derive_seed(m, seed)).run();
      const auto ms = sorted(run.matching);
      const bool ok = inst.h.is_matching(ms) && inst.c.is_cfree(ms);
      const bool sparse = verify_sparse(to_system(inst, run.matching), 3, 2, 4).sparse;
      disagree += ok != sparse;
      good += ok && sparse;
      ++total;
    }
  }
  return {good == total && disagree == 0,
          fmt("%zu/%zu runs Pasch-free; %zu C-free/sparse disagreements", good, total, disagree)};
}

Outcome trend() {
  std::vector<double> means;
  std::string detail = "mean covered fraction:";
  for (std::size_t m : {15u, 19u, 25u, 31u}) {
    const auto& inst = steiner(m, 4);
    double sum = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      sum += covered_fraction(inst.h, ProcessState(inst.h, inst.c, derive_seed(1000 + m, seed)).run().matching);
    means.push_back(sum / 20);
    detail += fmt(" m=%zu %.4f", m, means.back());
  }
  const bool monotone = std::is_sorted(means.begin(), means.end());
  return {monotone && means.back() >= 0.75, detail + (monotone ? "; non-decreasing" : "; NOT monotone")};
}

Outcome identities() {
  Rng rng = make_rng(1005);
  double worst = 0, worst_h = 0;
  std::size_t points = 0;
  for (int set = 0; set < 10; ++set) {
    TrajectoryParams p;
    p.n = std::round(2000 + 8000 * uniform01(rng));
    p.k = 2 + static_cast<double>(uniform_below(rng, 2));
    p.d = std::round(50 + 350 * uniform01(rng));
    p.ell = 2 + uniform_below(rng, 2);
    p.gamma = 1 + 2 * uniform01(rng);
    p.mu = (0.2 + 0.7 * uniform01(rng)) / static_cast<double>(p.ell);
    p.eps = 0.2 + 0.5 * uniform01(rng);
    p.deltas.assign(p.ell + 1, 0.0);
    for (std::size_t j = 2; j <= p.ell; ++j)
      p.deltas[j] = std::round(uniform01(rng) * p.gamma * std::pow(p.d, static_cast<double>(j) - 1) /
                               static_cast<double>(p.ell));
    const double h = difference_step(p);
    for (int i = 0; i < 100; ++i, ++points) {
      const double x = 2 * h + uniform01(rng) * (p.horizon() - 4 * h);
      for (const auto& r : derivative_residuals(p, x)) worst = std::max(worst, r.value);
      const auto t = eval(p, x);
      worst_h = std::max(worst_h, std::abs(t.h_hat - p.n / p.k * t.p_v * t.d_hat) / t.h_hat);
    }
  }
  return {worst <= 1e-6 && worst_h <= 1e-12,
          fmt("max derivative residual %.2e; max h-hat identity error %.2e at %zu points", worst, worst_h, points)};
}

Outcome plain_greedy() {
  auto base = build(25, 3, 2, 2);
  const ConflictSystem empty = normalize(base.h, ConflictSystem(base.h.num_edges(), {})).system;
  const std::size_t seeds = 50;
  std::vector<double> mean;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    auto sizes = ProcessState(base.h, empty, derive_seed(1006, seed)).run().alive_sizes(base.h.num_edges());
    if (mean.size() < sizes.size()) mean.resize(sizes.size(), 0.0);
    for (std::size_t i = 0; i < sizes.size(); ++i) mean[i] += static_cast<double>(sizes[i]) / seeds;
  }
  TrajectoryParams p;
  p.n = static_cast<double>(base.h.num_vertices());
  p.k = 3;
  p.d = static_cast<double>(base.h.max_degree());
  p.ell = 2;
  p.mu = 0.3;
  double worst = 0;
  std::size_t checked = 0;
  for (std::size_t i = 0; static_cast<double>(i) <= p.horizon(); ++i) {
    const auto t = eval(p, static_cast<double>(i));
    if (t.p_v < 0.3) break;
    const double measured = i < mean.size() ? mean[i] : 0.0;
    worst = std::max(worst, std::abs(measured - t.h_hat) / t.h_hat);
    ++checked;
  }
  return {base.c.empty() && worst <= 0.10,
          fmt("max relative deviation %.4f over %zu steps (n=%g, d=%g, 50 seeds)", worst, checked, p.n, p.d)};
}

Outcome containment() {
  const auto& inst = steiner(25, 4);
  const auto systems = degree_test_systems(inst);
  const double n = static_cast<double>(inst.h.num_vertices());
  const auto target = static_cast<std::size_t>(std::floor((1 - 0.05) * n / 3));
  std::vector<double> mean(systems.size(), 0.0);
  double size_sum = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto run = ProcessState(inst.h, inst.c, derive_seed(1007, seed)).run(target);
    size_sum += static_cast<double>(run.matching.size());
    for (std::size_t y = 0; y < systems.size(); ++y) mean[y] += *final_containment(systems[y], run.matching, inst.h).ratio / 50;
  }
  const auto [lo, hi] = std::minmax_element(mean.begin(), mean.end());
  return {*lo >= 0.75 && *hi <= 1.25,
          fmt("per-system mean ratio in [%.4f, %.4f] over %zu systems; target %zu, mean size %.1f", *lo, *hi,
              systems.size(), target, size_sum / 50)};
}

Outcome checkers() {
  Rng rng = make_rng(1008);
  std::size_t mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    auto h = tst::random_host(rng, 6 + uniform_below(rng, 5), 2, 4 + uniform_below(rng, 10));
    auto c = random_normalized(rng, h, 3 + uniform_below(rng, 20), 4);
    BoundsParams p{1.5 + 4 * uniform01(rng), 4, 1 + 8 * uniform01(rng), 0.1 + 0.8 * uniform01(rng)};
    mismatches += tst::verdict_map(boundedness_report(h, c, p, true)) !=
                  tst::naive_bounds_verdicts(h, c.to_vectors(), p, true);
  }
  for (int i = 0; i < 200; ++i) {
    auto h = tst::random_host(rng, 8, 2, 8 + uniform_below(rng, 6));
    auto c = random_normalized(rng, h, 10, 3);
    const std::size_t j = 1 + uniform_below(rng, 3);
    auto z = tst::random_tests(rng, h, j, 1 + uniform_below(rng, 10));
    const double d = 1.1 + 2 * uniform01(rng), eps = 0.2 + 0.6 * uniform01(rng);
    std::map<EdgeSet, double> w;
    for (auto& t : z.tests) w[t] = 1.0;
    mismatches += tst::verdict_map(trackable_check(z, d, eps, c).report) !=
                  tst::naive_track_verdicts(w, j, d, eps, c, h.num_edges(), "Z");
  }
  for (int i = 0; i < 200; ++i) {
    auto h = tst::random_host(rng, 8, 2, 10);
    auto c = random_normalized(rng, h, 10, 3);
    const std::size_t j = 1 + uniform_below(rng, 3);
    auto z = tst::random_tests(rng, h, j, 8);
    std::map<EdgeSet, double> w;
    for (auto& t : z.tests) w[t] = uniform01(rng);
    const auto f = make_test_function(h, j, w);
    const double d = 1.1 + 2 * uniform01(rng), eps = 0.2 + 0.6 * uniform01(rng);
    mismatches += tst::verdict_map(fn_trackable_check(h, f, d, eps, c).report) !=
                  tst::naive_track_verdicts(f.weights, j, d, eps, c, h.num_edges(), "W");
  }
  const std::vector<EdgeId> universe{0, 1, 2, 3, 4, 5, 6, 7};
  for (int i = 0; i < 200; ++i) {
    const std::size_t j = 2 + uniform_below(rng, 2);
    std::set<EdgeSet> fam;
    const std::size_t members = uniform_below(rng, 20);
    for (std::size_t k = 0; k < members; ++k) {
      std::set<EdgeId> s;
      while (s.size() < j) s.insert(static_cast<EdgeId>(uniform_below(rng, universe.size())));
      fam.insert({s.begin(), s.end()});
    }
    Family x(fam.begin(), fam.end());
    const double d0 = 1 + 10 * uniform01(rng), delta = uniform01(rng);
    const auto r = is_spread(x, j, d0, delta);
    const auto naive = tst::naive_spread_codegrees(x, j, universe);
    bool same = r.conditions.size() == naive.size();
    for (std::size_t jp = 0; same && jp < naive.size(); ++jp)
      same = r.conditions[jp].pass == (static_cast<double>(naive[jp]) <= std::pow(delta, static_cast<double>(jp)) * d0);
    mismatches += !same;
  }
  return {mismatches == 0, fmt("%zu verdict mismatches over 4 x 200 inputs", mismatches)};
}

Outcome regularization() {
  Rng rng = make_rng(1009);
  std::size_t failures = 0, added = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto h = tst::random_host(rng, 7 + uniform_below(rng, 3), 2, 6 + uniform_below(rng, 5));
    auto c = random_normalized(rng, h, 2 + uniform_below(rng, 8), 3);
    auto r = regularize(h, c, BoundsParams{2.0 + 3 * uniform01(rng), 3, 8.0, 0.5}, seed);
    const auto out = r.system.to_vectors();
    for (const auto& x : out) failures += !tst::naive_is_matching(h, x);  // A6
    for (std::size_t a = 0; a < out.size(); ++a)                         // A7
      for (std::size_t b = 0; b < out.size(); ++b)
        failures += a != b && std::includes(out[b].begin(), out[b].end(), out[a].begin(), out[a].end());
    for (const auto& x : c.to_vectors()) failures += r.system.is_cfree(x);  // A8
    const auto before = tst::cfree_matchings(h, c.to_vectors());
    for (const auto& m : tst::cfree_matchings(h, out)) failures += !before.count(m);
    added += out.size() - std::min(out.size(), c.size());
  }
  std::size_t host_failures = 0;
  std::vector<std::vector<VertexId>> all;
  for (VertexId a = 0; a < 5; ++a)
    for (VertexId b = a + 1; b < 5; ++b)
      for (VertexId c = b + 1; c < 5; ++c) all.push_back({a, b, c});
  all.erase(all.begin());
  const Hypergraph h(3, 5, all);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto out = regularize_host(h, 6, 0.2, seed);
    std::vector<std::vector<VertexId>> inside;
    for (EdgeId e = 0; e < out.h.num_edges(); ++e) {
      auto ev = out.h.edge_vector(e);
      if (std::all_of(ev.begin(), ev.end(), [](VertexId v) { return v < 5; })) inside.push_back(ev);
    }
    host_failures += !(Hypergraph(3, 5, inside) == h);
  }
  return {failures == 0 && host_failures == 0,
          fmt("%zu structure failures (%zu conflicts added) over 100 seeds; %zu induced-subgraph failures", failures,
              added, host_failures)};
}

Outcome counting() {
  const double v = counting_lower_bound(1000, 3, 3, {0, 0, 500, 1e5}, 100, 0.1);
  const double expect = -265.36190602931447978;
  const double rel = std::abs(v - expect) / std::abs(expect);
  return {rel <= 1e-9, fmt("value %.15g; relative error %.2e", v, rel)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact process distribution", exact_law},
      {"availability invariant", availability},
      {"conflict-freeness and girth", girth},
      {"covered-fraction trend", trend},
      {"trajectory identities", identities},
      {"no-conflict tracking control", plain_greedy},
      {"test-system containment", containment},
      {"checker-oracle agreement", checkers},
      {"regularization structure", regularization},
      {"counting formula", counting},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
