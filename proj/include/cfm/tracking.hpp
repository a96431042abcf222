#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cfm/bounds.hpp"
#include "cfm/conflicts.hpp"
#include "cfm/hypergraph.hpp"

namespace cfm {

class ProcessState;

/// j-uniform family of matchings ("tests") in the host.
struct TestSystem {
  std::size_t j = 1;
  std::vector<EdgeSet> tests;
};

/// Sorts each test and checks size j, matching property and distinctness.
TestSystem make_test_system(const Hypergraph& h, std::size_t j, std::vector<EdgeSet> tests);

/// Sparse weight function on j-sets of edges with values in [0,1].
struct TestFunction {
  std::size_t j = 1;
  std::map<EdgeSet, double> weights;

  double total() const;
  double at(const EdgeSet& s) const;
};

/// Checks weights in [0,1], support sets of size j, zero weight on non-matchings
/// (zero entries are dropped).
TestFunction make_test_function(const Hypergraph& h, std::size_t j, std::map<EdgeSet, double> weights);

/// Trackability verdicts. `desk_scale` is set when d^(-eps/900) > 1/2, i.e.
/// the containment guarantee itself is vacuous at this d.
struct TrackReport {
  Report report;
  bool desk_scale = false;
};

/// Z1..Z4 with measured extremals and witnesses.
TrackReport trackable_check(const TestSystem& z, double d, double eps, const ConflictSystem& c);

/// W1..W4 analogues for a weight function.
TrackReport fn_trackable_check(const Hypergraph& h, const TestFunction& w, double d, double eps,
                               const ConflictSystem& c);

/// Number of tests with exactly s alive members and all other members matched.
std::size_t measure_partial(const TestSystem& z, const ProcessState& state, std::size_t s);

struct Containment {
  std::size_t j = 0;
  std::size_t size = 0;
  std::size_t count = 0;
  double expected = 0.0;
  /// count / expected; empty when expected is 0.
  std::optional<double> ratio;
};

/// Tests fully inside the matching against (|M|/|H|)^j |Z|.
Containment final_containment(const TestSystem& z, std::span<const EdgeId> matching, const Hypergraph& h);

/// Independent samples of test systems from a weight function.
struct SampledSystems {
  std::vector<TestSystem> systems;

  /// Estimate of w(E): the number of (system, test) pairs with the test
  /// inside E, divided by the number of systems.
  double estimate(const EdgeSet& e) const;
};

SampledSystems systems_from_function(const TestFunction& w, std::size_t z_count, std::uint64_t seed);

}  // namespace cfm
