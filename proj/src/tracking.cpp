#include "cfm/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "cfm/process.hpp"
#include "cfm/rng.hpp"

namespace cfm {

TestSystem make_test_system(const Hypergraph& h, std::size_t j, std::vector<EdgeSet> tests) {
  if (j < 1) throw InputError("test uniformity must be at least 1");
  std::set<EdgeSet> seen;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    auto& t = tests[i];
    std::sort(t.begin(), t.end());
    if (t.size() != j || std::adjacent_find(t.begin(), t.end()) != t.end())
      throw InputError("test " + std::to_string(i) + " is not a set of " + std::to_string(j) + " edges");
    if (t.back() >= h.num_edges()) throw InputError("test " + std::to_string(i) + " references an unknown edge");
    if (!h.is_matching(t)) throw InputError("test " + std::to_string(i) + " is not a matching");
    if (!seen.insert(t).second) throw InputError("test " + std::to_string(i) + " is a duplicate");
  }
  return {j, std::move(tests)};
}

double TestFunction::total() const {
  double s = 0;
  for (auto& [k, v] : weights) s += v;
  return s;
}

double TestFunction::at(const EdgeSet& s) const {
  auto it = weights.find(s);
  return it == weights.end() ? 0.0 : it->second;
}

TestFunction make_test_function(const Hypergraph& h, std::size_t j, std::map<EdgeSet, double> weights) {
  TestFunction w{j, {}};
  for (auto& [set, value] : weights) {
    if (!(value >= 0.0 && value <= 1.0)) throw InputError("test function weight outside [0,1]");
    if (value == 0.0) continue;
    if (set.size() != j || !std::is_sorted(set.begin(), set.end()) ||
        std::adjacent_find(set.begin(), set.end()) != set.end())
      throw InputError("test function support must be sorted sets of " + std::to_string(j) + " edges");
    if (set.back() >= h.num_edges()) throw InputError("test function references an unknown edge");
    if (!h.is_matching(set)) throw InputError("test function is nonzero on a non-matching");
    w.weights.emplace(set, value);
  }
  return w;
}

namespace {

bool desk(double d, double eps) { return std::pow(d, -eps / 900.0) > 0.5; }

ConditionVerdict upper(std::string name, double measured, double threshold, std::vector<std::uint64_t> witness = {}) {
  return {std::move(name), measured <= threshold, measured, threshold, false, std::move(witness)};
}
ConditionVerdict lower(std::string name, double measured, double threshold, std::vector<std::uint64_t> witness = {}) {
  return {std::move(name), measured >= threshold, measured, threshold, true, std::move(witness)};
}
std::string tag(const std::string& base, std::size_t jp) { return base + "(j'=" + std::to_string(jp) + ")"; }

// Weighted family: each support set with its weight (1 for test systems).
using Weighted = std::vector<std::pair<const EdgeSet*, double>>;

// Maximum over jp-sets of total weight of members containing it.
std::pair<double, EdgeSet> weighted_codegree(const Weighted& fam, std::size_t jp) {
  std::unordered_map<EdgeSet, double, IdVectorHash> acc;
  std::pair<double, EdgeSet> best{0.0, {}};
  for (auto& [set, w] : fam)
    for_each_subset(*set, jp, [&](const EdgeSet& sub) {
      double v = acc[sub] += w;
      if (v > best.first || (v == best.first && sub < best.second)) best = {v, sub};
    });
  return best;
}

// Shared-link condition over the pairs that co-occur in a positive-weight member.
void shared_link_conditions(const Weighted& fam, double d, double eps, const ConflictSystem& c, const std::string& name,
                            Report& r) {
  std::unordered_set<std::uint64_t> pairs;
  for (auto& [set, w] : fam) {
    if (w <= 0) continue;
    for (std::size_t a = 0; a < set->size(); ++a)
      for (std::size_t b = a + 1; b < set->size(); ++b) pairs.insert(pair_key((*set)[a], (*set)[b]));
  }
  const std::size_t ell = c.max_size();
  for (std::size_t jp = 1; jp + 1 <= std::max<std::size_t>(ell, 2); ++jp) {
    auto counts = shared_link_counts(c, jp);
    std::size_t best = 0;
    std::uint64_t key = 0;
    for (auto p : pairs) {
      auto it = counts.find(p);
      if (it == counts.end()) continue;
      if (it->second > best || (it->second == best && p < key)) best = it->second, key = p;
    }
    r.conditions.push_back(upper(tag(name, jp), static_cast<double>(best), std::pow(d, static_cast<double>(jp) - eps),
                                 best ? std::vector<std::uint64_t>{pair_first(key), pair_second(key)}
                                      : std::vector<std::uint64_t>{}));
  }
}

}  // namespace

TrackReport trackable_check(const TestSystem& z, double d, double eps, const ConflictSystem& c) {
  TrackReport out;
  out.desk_scale = desk(d, eps);
  Report& r = out.report;
  const double size = static_cast<double>(z.tests.size());
  r.conditions.push_back(lower("Z1", size, std::pow(d, static_cast<double>(z.j) + eps)));
  Weighted fam;
  for (const auto& t : z.tests) fam.emplace_back(&t, 1.0);
  for (std::size_t jp = 1; jp < z.j; ++jp) {
    auto [deg, wit] = weighted_codegree(fam, jp);
    r.conditions.push_back(upper(tag("Z2", jp), deg, size / std::pow(d, static_cast<double>(jp) + eps),
                                 {wit.begin(), wit.end()}));
  }
  shared_link_conditions(fam, d, eps, c, "Z3", r);
  std::size_t bad = 0;
  std::vector<std::uint64_t> wit;
  for (std::size_t i = 0; i < z.tests.size(); ++i)
    if (!c.is_cfree(z.tests[i])) {
      if (!bad) wit = {i};
      ++bad;
    }
  r.conditions.push_back(upper("Z4", static_cast<double>(bad), 0.0, wit));
  return out;
}

TrackReport fn_trackable_check(const Hypergraph& h, const TestFunction& w, double d, double eps,
                               const ConflictSystem& c) {
  check_host(h, c);
  TrackReport out;
  out.desk_scale = desk(d, eps);
  Report& r = out.report;
  const double total = w.total();
  r.conditions.push_back(lower("W1", total, std::pow(d, static_cast<double>(w.j) + eps)));
  Weighted fam;
  for (auto& [set, val] : w.weights) fam.emplace_back(&set, val);
  for (std::size_t jp = 1; jp < w.j; ++jp) {
    auto [mass, wit] = weighted_codegree(fam, jp);
    r.conditions.push_back(upper(tag("W2", jp), mass, total / std::pow(d, static_cast<double>(jp) + eps),
                                 {wit.begin(), wit.end()}));
  }
  shared_link_conditions(fam, d, eps, c, "W3", r);
  std::size_t bad = 0;
  std::vector<std::uint64_t> wit;
  for (auto& [set, val] : w.weights)
    if (val > 0 && !c.is_cfree(set)) {
      if (!bad) wit = {set.begin(), set.end()};
      ++bad;
    }
  r.conditions.push_back(upper("W4", static_cast<double>(bad), 0.0, wit));
  return out;
}

std::size_t measure_partial(const TestSystem& z, const ProcessState& state, std::size_t s) {
  if (s > z.j) return 0;
  std::size_t count = 0;
  for (const auto& t : z.tests) {
    std::size_t alive = 0, matched = 0;
    for (EdgeId e : t) {
      alive += state.is_alive(e);
      matched += state.is_matched(e);
    }
    count += alive == s && matched == t.size() - s;
  }
  return count;
}

Containment final_containment(const TestSystem& z, std::span<const EdgeId> matching, const Hypergraph& h) {
  if (!h.is_matching(matching)) throw InputError("final_containment needs a matching");
  Containment out;
  out.j = z.j;
  out.size = z.tests.size();
  std::vector<char> in(h.num_edges(), 0);
  for (EdgeId e : matching) in[e] = 1;
  for (const auto& t : z.tests)
    out.count += std::all_of(t.begin(), t.end(), [&](EdgeId e) { return in[e] != 0; });
  if (h.num_edges() > 0)
    out.expected = std::pow(static_cast<double>(matching.size()) / static_cast<double>(h.num_edges()),
                            static_cast<double>(z.j)) *
                   static_cast<double>(z.tests.size());
  if (out.expected > 0) out.ratio = static_cast<double>(out.count) / out.expected;
  return out;
}

double SampledSystems::estimate(const EdgeSet& e) const {
  if (systems.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& z : systems)
    for (const auto& t : z.tests) hits += sorted_subset(t, e);
  return static_cast<double>(hits) / static_cast<double>(systems.size());
}

SampledSystems systems_from_function(const TestFunction& w, std::size_t z_count, std::uint64_t seed) {
  SampledSystems out;
  Rng rng = make_rng(seed);
  out.systems.reserve(z_count);
  for (std::size_t i = 0; i < z_count; ++i) {
    TestSystem z{w.j, {}};
    for (auto& [set, val] : w.weights)
      if (val >= 1.0 || uniform01(rng) < val) z.tests.push_back(set);
    out.systems.push_back(std::move(z));
  }
  return out;
}

}  // namespace cfm
