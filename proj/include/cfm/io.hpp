#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfm/bounds.hpp"
#include "cfm/conflicts.hpp"
#include "cfm/hypergraph.hpp"
#include "cfm/process.hpp"
#include "cfm/steiner.hpp"
#include "cfm/tracking.hpp"
#include "cfm/trajectory.hpp"

namespace cfm::io {

using Json = nlohmann::ordered_json;

// JSON schemas. Loaders throw InputError naming the offending field.
//   hypergraph:  {"k": int, "n": int, "edges": [[vertex ids]]}
//   conflicts:   [[edge ids]]
//   test system: {"j": int, "tests": [[edge ids]]}
//   design:      {"m": int, "s": int, "t": int, "blocks": [[points]]}

Json to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const Json& j);

Json to_json(const ConflictSystem& c);
/// Raw system as stored; callers normalize before running the process.
ConflictSystem conflicts_from_json(const Json& j, std::size_t num_host_edges);

Json to_json(const TestSystem& z);
TestSystem test_system_from_json(const Json& j, const Hypergraph& h);

struct Design {
  std::size_t m = 0, s = 0, t = 0;
  PartialSystem system;
};
Json to_json(const Design& d);
Design design_from_json(const Json& j);

Json to_json(const Report& r);
Json to_json(const Containment& c);

/// {"seed", "steps", "matching_size", "stop_reason", "covered_fraction", "matching"}.
Json run_summary(const RunResult& r, const Hypergraph& h);
/// Reads back the matching and seed of a run summary.
RunResult run_from_json(const Json& j);

std::string trace_csv(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> trace_from_csv(const std::string& text);

/// `points` evenly spaced values from 0 to x_max inclusive.
std::vector<double> grid(double x_max, std::size_t points);

/// One row of trajectory values per x. When `alive` is given (one verdict
/// per row), the band-verdict columns are appended.
std::string trajectory_csv(const TrajectoryParams& p, const std::vector<double>& xs,
                           const std::vector<BandVerdict>* alive = nullptr);

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary file and rename. Throws std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// Two-space indentation plus trailing newline.
std::string dump(const Json& j);

/// Worker count for replica runs: CFM_WORKERS if set and positive, else the
/// hardware concurrency (at least 1).
std::size_t worker_count();

struct ReplicaOptions {
  std::size_t runs = 1;
  std::uint64_t master_seed = 0;
  std::optional<std::size_t> target;
  std::optional<std::size_t> max_steps;
  bool record_trace = false;
  bool record_stats = false;
  std::size_t workers = 1;
};

/// Runs replicas with seeds derive_seed(master, i), in parallel up to
/// `workers`. Results are ordered by replica index.
std::vector<RunResult> run_replicas(const Hypergraph& h, const ConflictSystem& c, const ReplicaOptions& opt);

/// Mean and sample standard deviation of final size and covered fraction.
Json aggregate(const std::vector<RunResult>& runs, const Hypergraph& h);

}  // namespace cfm::io
