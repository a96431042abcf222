#include "cfm/process.hpp"

#include <algorithm>
#include <limits>

namespace cfm {

std::vector<std::size_t> RunResult::alive_sizes(std::size_t total_edges) const {
  std::vector<std::size_t> out;
  out.reserve(trace.size() + 1);
  std::size_t cur = total_edges;
  out.push_back(cur);
  for (const auto& r : trace) {
    cur = r.available_before - 1 - r.removed_conflict - r.removed_intersect;
    out.push_back(cur);
  }
  return out;
}

ProcessState::ProcessState(const Hypergraph& h, const ConflictSystem& c, std::uint64_t seed)
    : h_(&h), c_(&c), seed_(seed), rng_(make_rng(seed)) {
  check_host(h, c);
  if (!c.normalized()) throw InputError("the process requires a normalized conflict system");
  if (c.max_size() > std::numeric_limits<std::uint16_t>::max()) throw InputError("conflict too large");
  const std::size_t m = h.num_edges();
  status_.assign(m, kAlive);
  covered_.assign(h.num_vertices(), 0);
  alive_degree_.resize(h.num_vertices());
  for (std::size_t v = 0; v < h.num_vertices(); ++v)
    alive_degree_[v] = static_cast<std::uint32_t>(h.incident(static_cast<VertexId>(v)).size());
  pool_.resize(m);
  pool_pos_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    pool_[e] = static_cast<EdgeId>(e);
    pool_pos_[e] = static_cast<std::uint32_t>(e);
  }
  pool_size_ = m;
  matched_cnt_.assign(c.size(), 0);
  avail_cnt_.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    avail_cnt_[i] = static_cast<std::uint16_t>(c.conflict(static_cast<ConflictId>(i)).size());
  cursor_.assign(c.size(), 0);
  mark_.assign(m, 0);
}

void ProcessState::remove_from_pool(EdgeId e) {
  std::uint32_t pos = pool_pos_[e];
  EdgeId last = pool_[--pool_size_];
  pool_[pos] = last;
  pool_pos_[last] = pos;
  pool_[pool_size_] = e;
  pool_pos_[e] = static_cast<std::uint32_t>(pool_size_);
}

void ProcessState::kill(EdgeId e) {
  status_[e] = kDead;
  remove_from_pool(e);
  for (ConflictId cid : c_->containing(e)) --avail_cnt_[cid];
  for (VertexId v : h_->edge(e)) --alive_degree_[v];
}

EdgeId ProcessState::unmatched_member(ConflictId cid) {
  auto members = c_->conflict(cid);
  std::uint16_t& pos = cursor_[cid];
  while (status_[members[pos]] == kMatched) pos = static_cast<std::uint16_t>((pos + 1) % members.size());
  return members[pos];
}

StepOutcome ProcessState::step() {
  StepOutcome out;
  if (pool_size_ == 0) {
    out.exhausted = true;
    return out;
  }
  TraceRecord rec;
  rec.step = steps_ + 1;
  rec.available_before = pool_size_;
  const EdgeId e = pool_[uniform_below(rng_, pool_size_)];
  rec.chosen = e;
  out.chosen = e;

  status_[e] = kMatched;
  remove_from_pool(e);
  matching_.push_back(e);
  for (VertexId v : h_->edge(e)) --alive_degree_[v];

  // Conflicts through e that are now one member short of complete.
  for (ConflictId cid : c_->containing(e)) {
    ++matched_cnt_[cid];
    --avail_cnt_[cid];
    if (matched_cnt_[cid] + 1u != c_->conflict(cid).size()) continue;
    EdgeId f = unmatched_member(cid);
    if (status_[f] != kAlive) continue;
    ++rec.conflict_multiplicity;
    if (!mark_[f]) {
      mark_[f] = 1;
      out.removed_conflict.push_back(f);
    }
  }
  for (EdgeId f : out.removed_conflict) {
    mark_[f] = 0;
    kill(f);
  }
  for (VertexId v : h_->edge(e)) {
    covered_[v] = 1;
    for (EdgeId g : h_->incident(v))
      if (status_[g] == kAlive) {
        kill(g);
        out.removed_intersect.push_back(g);
      }
  }
  std::sort(out.removed_conflict.begin(), out.removed_conflict.end());
  std::sort(out.removed_intersect.begin(), out.removed_intersect.end());
  rec.removed_conflict = out.removed_conflict.size();
  rec.removed_intersect = out.removed_intersect.size();
  ++steps_;
  if (record_stats_) fill_stats(rec);
  if (record_trace_) trace_.push_back(rec);
  return out;
}

void ProcessState::fill_stats(TraceRecord& r) const {
  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (std::size_t v = 0; v < covered_.size(); ++v) {
    if (covered_[v]) continue;
    lo = std::min<std::size_t>(lo, alive_degree_[v]);
    hi = std::max<std::size_t>(hi, alive_degree_[v]);
  }
  if (hi > 0 || lo != std::numeric_limits<std::size_t>::max()) {
    r.min_uncovered_degree = lo;
    r.max_uncovered_degree = hi;
  }
  if (pool_size_ > 0) {
    std::size_t slo = std::numeric_limits<std::size_t>::max(), shi = 0;
    for (std::size_t i = 0; i < pool_size_; ++i) {
      std::size_t s = semiconflict_count(pool_[i]);
      slo = std::min(slo, s);
      shi = std::max(shi, s);
    }
    r.min_semiconflicts = slo;
    r.max_semiconflicts = shi;
  }
}

RunResult ProcessState::run(std::optional<std::size_t> target, std::optional<std::size_t> max_steps) {
  const std::size_t limit = max_steps.value_or(h_->num_vertices());
  RunResult out;
  out.seed = seed_;
  std::size_t taken = 0;
  while (true) {
    if (target && matching_.size() >= *target) {
      out.stop_reason = "target";
      break;
    }
    if (pool_size_ == 0) {
      out.stop_reason = "exhausted";
      break;
    }
    if (taken >= limit) {
      out.stop_reason = "max_steps";
      break;
    }
    step();
    ++taken;
  }
  if (!h_->is_matching(matching_) || !c_->is_cfree(matching_))
    throw std::logic_error("process produced an invalid matching");
  out.steps = steps_;
  out.matching = matching_;
  out.trace = trace_;
  return out;
}

EdgeSet ProcessState::alive_edges() const {
  EdgeSet out(pool_.begin(), pool_.begin() + static_cast<std::ptrdiff_t>(pool_size_));
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ProcessState::uncovered_degree(VertexId v) const {
  if (v >= covered_.size()) throw InputError("vertex id out of range");
  if (covered_[v]) throw QueryError("vertex " + std::to_string(v) + " is covered");
  return alive_degree_[v];
}

std::size_t ProcessState::semiconflict_count(EdgeId e) const {
  if (e >= status_.size()) throw InputError("edge id out of range");
  if (status_[e] != kAlive) throw QueryError("edge " + std::to_string(e) + " is not alive");
  std::size_t count = 0;
  // C \ {e} has one alive member and all others matched.
  for (ConflictId cid : c_->containing(e))
    count += avail_cnt_[cid] == 2 && matched_cnt_[cid] + 2u == c_->conflict(cid).size();
  return count;
}

bool ProcessState::counters_consistent() const {
  for (std::size_t i = 0; i < c_->size(); ++i) {
    std::size_t mc = 0, ac = 0;
    for (EdgeId e : c_->conflict(static_cast<ConflictId>(i))) {
      mc += status_[e] == kMatched;
      ac += status_[e] == kAlive;
    }
    if (mc != matched_cnt_[i] || ac != avail_cnt_[i]) return false;
    if (mc + ac > c_->conflict(static_cast<ConflictId>(i)).size()) return false;
  }
  for (std::size_t v = 0; v < covered_.size(); ++v) {
    std::size_t deg = 0;
    for (EdgeId e : h_->incident(static_cast<VertexId>(v))) deg += status_[e] == kAlive;
    if (deg != alive_degree_[v]) return false;
  }
  std::size_t alive = std::count(status_.begin(), status_.end(), kAlive);
  return alive == pool_size_;
}

EdgeSet recompute_available(const Hypergraph& h, const ConflictSystem& c, std::span<const EdgeId> matching) {
  check_host(h, c);
  EdgeSet m = make_edge_set({matching.begin(), matching.end()});
  if (m.size() != matching.size()) throw InputError("matching lists an edge twice");
  if (!h.is_matching(m)) throw InputError("edge set is not a matching");
  if (!c.is_cfree(m)) throw InputError("matching is not conflict-free");
  std::vector<char> in_m(h.num_edges(), 0), covered(h.num_vertices(), 0);
  for (EdgeId e : m) {
    in_m[e] = 1;
    for (VertexId v : h.edge(e)) covered[v] = 1;
  }
  EdgeSet out;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    if (in_m[e]) continue;
    auto ev = h.edge(static_cast<EdgeId>(e));
    if (std::any_of(ev.begin(), ev.end(), [&](VertexId v) { return covered[v] != 0; })) continue;
    bool blocked = false;
    for (ConflictId cid : c.containing(static_cast<EdgeId>(e))) {
      auto s = c.conflict(cid);
      if (std::all_of(s.begin(), s.end(), [&](EdgeId g) { return g == e || in_m[g]; })) {
        blocked = true;
        break;
      }
    }
    if (!blocked) out.push_back(static_cast<EdgeId>(e));
  }
  return out;
}

}  // namespace cfm
