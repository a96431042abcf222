#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfm/core.hpp"
#include "cfm/hypergraph.hpp"

namespace cfm {

using ConflictId = std::uint32_t;

/// Non-uniform hypergraph on host edge ids; each conflict is a forbidden set
/// of at least two edges. Stored flat, with per-edge and per-size indices.
class ConflictSystem {
 public:
  ConflictSystem() { build_indices(); }

  /// Each conflict is sorted; throws InputError on size < 2, repeated ids or
  /// ids >= num_host_edges. Input order is preserved.
  ConflictSystem(std::size_t num_host_edges, const std::vector<EdgeSet>& conflicts);

  /// Bulk constructor from flat storage (offsets has size() + 1 entries).
  /// `normalized` asserts that the caller built a normalized system.
  ConflictSystem(std::size_t num_host_edges, std::vector<std::uint64_t> offsets,
                 std::vector<EdgeId> members, bool normalized);

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  bool empty() const noexcept { return size() == 0; }
  std::size_t num_host_edges() const noexcept { return host_edges_; }

  std::span<const EdgeId> conflict(ConflictId c) const {
    return {members_.data() + offsets_[c], static_cast<std::size_t>(offsets_[c + 1] - offsets_[c])};
  }
  EdgeSet conflict_vector(ConflictId c) const {
    auto s = conflict(c);
    return {s.begin(), s.end()};
  }
  /// Conflicts containing host edge e, ascending.
  std::span<const ConflictId> containing(EdgeId e) const {
    return {inc_.data() + inc_off_[e], static_cast<std::size_t>(inc_off_[e + 1] - inc_off_[e])};
  }
  /// Conflict ids of size j (the j-uniform part), ascending.
  std::span<const ConflictId> of_size(std::size_t j) const {
    if (j >= by_size_.size()) return {};
    return by_size_[j];
  }
  /// Largest conflict size, 0 if empty.
  std::size_t max_size() const noexcept { return by_size_.empty() ? 0 : by_size_.size() - 1; }

  /// True when produced by normalize() or a builder that guarantees it.
  bool normalized() const noexcept { return normalized_; }

  /// Size-2 conflict partners of e, ascending.
  EdgeSet n2_neighborhood(EdgeId e) const;

  /// True iff no conflict is a subset of the edge set E.
  bool is_cfree(std::span<const EdgeId> edges) const;

  /// Number of size-j conflicts containing e.
  std::size_t degree_in_size(EdgeId e, std::size_t j) const;

  /// Maximum over sets S of size `jp` of the number of size-j conflicts
  /// containing S. jp == 0 yields the number of size-j conflicts.
  std::size_t max_codegree(std::size_t j, std::size_t jp) const;
  /// Minimum over host edges of the number of size-j conflicts containing it.
  std::size_t min_degree(std::size_t j) const;

  std::vector<EdgeSet> to_vectors() const;

  bool incidence_consistent() const;

  friend bool operator==(const ConflictSystem& a, const ConflictSystem& b) {
    return a.host_edges_ == b.host_edges_ && a.offsets_ == b.offsets_ && a.members_ == b.members_;
  }

 private:
  void build_indices();

  std::size_t host_edges_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<EdgeId> members_;
  std::vector<std::uint64_t> inc_off_;
  std::vector<ConflictId> inc_;
  std::vector<std::vector<ConflictId>> by_size_;
  bool normalized_ = false;
};

/// Hash index from sorted edge sets to conflict ids, built on demand.
class ConflictLookup {
 public:
  explicit ConflictLookup(const ConflictSystem& c);
  bool contains(const EdgeSet& s) const { return map_.count(s) != 0; }
  /// Conflict id or -1.
  long long find(const EdgeSet& s) const;

 private:
  std::unordered_map<EdgeSet, ConflictId, IdVectorHash> map_;
};

struct RemovalRecord {
  EdgeSet conflict;
  std::string reason;  // "non-matching", "duplicate" or "superset"
};

struct NormalizeResult {
  ConflictSystem system;
  std::vector<RemovalRecord> log;
};

/// Keeps the conflicts that are matchings in h, drops duplicates and strict
/// supersets of retained conflicts. Retained conflicts keep their input order.
NormalizeResult normalize(const Hypergraph& h, const ConflictSystem& c);

/// Fails with InputError if c references edges outside h.
void check_host(const Hypergraph& h, const ConflictSystem& c);

}  // namespace cfm
