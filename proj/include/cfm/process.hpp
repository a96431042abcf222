#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfm/conflicts.hpp"
#include "cfm/hypergraph.hpp"
#include "cfm/rng.hpp"

namespace cfm {

/// Per-step statistics of the availability process.
struct TraceRecord {
  std::size_t step = 0;              // 1-based step index
  std::size_t available_before = 0;  // alive edges before the choice
  EdgeId chosen = kNoEdge;
  std::size_t removed_conflict = 0;   // distinct edges removed through conflicts
  std::size_t removed_intersect = 0;  // edges removed for meeting a covered vertex
  std::size_t conflict_multiplicity = 0;  // conflicts that fired, counted with repetition

  // Filled only when statistics recording is enabled.
  std::optional<std::size_t> min_uncovered_degree, max_uncovered_degree;
  std::optional<std::size_t> min_semiconflicts, max_semiconflicts;
};

struct StepOutcome {
  bool exhausted = false;
  EdgeId chosen = kNoEdge;
  EdgeSet removed_conflict;
  EdgeSet removed_intersect;
};

struct RunResult {
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  std::vector<EdgeId> matching;  // in selection order
  std::string stop_reason;       // "target", "exhausted" or "max_steps"
  std::vector<TraceRecord> trace;

  /// |H(i)| for i = 0..steps.
  std::vector<std::size_t> alive_sizes(std::size_t total_edges) const;
};

/// Live state of the random conflict-free greedy matching process.
///
/// Holds references to the host and conflict system, which must outlive the
/// state. Alive edges sit in a dense swap-remove array for O(1) uniform
/// choice; each conflict keeps matched/available counters and a cursor to an
/// unmatched member that is advanced lazily when the conflict is one edge
/// short of complete.
class ProcessState {
 public:
  /// Throws InputError unless c is normalized and defined over h.
  ProcessState(const Hypergraph& h, const ConflictSystem& c, std::uint64_t seed);

  /// Chooses a uniformly random alive edge and applies the removals.
  StepOutcome step();

  /// Steps until the matching reaches `target`, no edge is alive, or
  /// `max_steps` steps were taken (default: number of vertices).
  RunResult run(std::optional<std::size_t> target = std::nullopt,
                std::optional<std::size_t> max_steps = std::nullopt);

  void set_record_stats(bool on) noexcept { record_stats_ = on; }
  void set_record_trace(bool on) noexcept { record_trace_ = on; }

  const Hypergraph& host() const noexcept { return *h_; }
  const ConflictSystem& conflicts() const noexcept { return *c_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t step_index() const noexcept { return steps_; }
  const std::vector<EdgeId>& matching() const noexcept { return matching_; }
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

  std::size_t alive_count() const noexcept { return pool_size_; }
  bool is_alive(EdgeId e) const { return status_[e] == kAlive; }
  bool is_matched(EdgeId e) const { return status_[e] == kMatched; }
  bool is_covered(VertexId v) const { return covered_[v] != 0; }
  /// Alive edges as a sorted set.
  EdgeSet alive_edges() const;

  /// Alive edges through an uncovered vertex; QueryError if v is covered.
  std::size_t uncovered_degree(VertexId v) const;
  /// Conflicts C containing alive e where C \ {e} has exactly one alive member
  /// and the rest matched; QueryError if e is not alive.
  std::size_t semiconflict_count(EdgeId e) const;

  std::size_t matched_count(ConflictId c) const { return matched_cnt_[c]; }
  std::size_t available_count(ConflictId c) const { return avail_cnt_[c]; }

  /// Recomputes every per-conflict counter and per-vertex degree from
  /// scratch and compares with the maintained values.
  bool counters_consistent() const;

 private:
  static constexpr std::uint8_t kAlive = 0, kMatched = 1, kDead = 2;

  void remove_from_pool(EdgeId e);
  void kill(EdgeId e);
  EdgeId unmatched_member(ConflictId c);
  void fill_stats(TraceRecord& r) const;

  const Hypergraph* h_;
  const ConflictSystem* c_;
  std::uint64_t seed_;
  Rng rng_;
  std::size_t steps_ = 0;
  std::vector<EdgeId> matching_;
  std::vector<std::uint8_t> status_;
  std::vector<std::uint8_t> covered_;
  std::vector<std::uint32_t> alive_degree_;
  std::vector<EdgeId> pool_;
  std::vector<std::uint32_t> pool_pos_;
  std::size_t pool_size_ = 0;
  std::vector<std::uint16_t> matched_cnt_, avail_cnt_;
  std::vector<std::uint16_t> cursor_;
  std::vector<TraceRecord> trace_;
  std::vector<std::uint8_t> mark_;
  bool record_stats_ = false;
  bool record_trace_ = true;
};

/// Edges outside M that meet no vertex of M and complete no conflict with M.
/// Throws InputError if M is not a C-free matching.
EdgeSet recompute_available(const Hypergraph& h, const ConflictSystem& c, std::span<const EdgeId> matching);

}  // namespace cfm
