#include "cfm/steiner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

#include "cfm/rng.hpp"

namespace cfm {

long long pi(long long s, long long t, long long j) {
  if (j < 1) throw DomainError("pi needs j >= 1");
  return (s - t) * j + t + 1;
}

long long kappa(long long s, long long t, long long p) {
  if (p < t + 1) throw DomainError("kappa needs p >= t + 1");
  if (s <= t) throw DomainError("kappa needs s > t");
  return (p - t - 1) / (s - t);
}

std::uint64_t colex_rank(std::span<const Point> subset) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) r += binom_u64(subset[i], i + 1);
  return r;
}

Block colex_unrank(std::uint64_t rank, std::size_t size) {
  Block out(size);
  for (std::size_t i = size; i > 0; --i) {
    Point a = static_cast<Point>(i - 1);
    while (binom_u64(a + 1, i) <= rank) ++a;
    out[i - 1] = a;
    rank -= binom_u64(a, i);
  }
  return out;
}

namespace {

// Colex ranks of subsets of [m] with at most `width` elements, via a Pascal table.
class ColexRanker {
 public:
  ColexRanker(std::size_t m, std::size_t width) : width_(width + 1), table_((m + 1) * (width + 1), 0) {
    for (std::size_t a = 0; a <= m; ++a)
      for (std::size_t i = 1; i <= width; ++i) table_[a * width_ + i] = binom_u64(a, i);
  }
  std::uint64_t operator()(std::span<const Point> subset) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < subset.size(); ++i) r += table_[subset[i] * width_ + i + 1];
    return r;
  }

 private:
  std::size_t width_;
  std::vector<std::uint64_t> table_;
};

void check_design_params(std::size_t s, std::size_t t, std::size_t ell) {
  if (t < 2 || s <= t) throw InputError("need s > t >= 2");
  if (ell < 2) throw InputError("need ell >= 2");
}

// Depth-first enumeration of minimal forbidden matchings of 2..ell blocks.
//
// Blocks are host edges; a set of j blocks is forbidden when its span has
// fewer than pi(j) points. Minimal forbidden sets are connected through
// shared points, so sets are grown by connected extension with the usual
// canonical rule: the root is the smallest id, and a block first adjacent
// to the set at level f must exceed every block added after level f.
template <typename VertexOf, typename EdgeOf>
class ForbiddenSearch {
 public:
  ForbiddenSearch(const Hypergraph& h, const std::vector<Block>& blocks, std::size_t num_points, std::size_t s,
                  std::size_t t, std::size_t ell, std::uint64_t budget, VertexOf vertex_of, EdgeOf edge_of)
      : h_(h), blocks_(blocks), s_(s), t_(t), ell_(ell), budget_(budget), vertex_of_(vertex_of),
        edge_of_(edge_of), max_span_(static_cast<std::size_t>(pi(s, t, ell) - 1)), count_(num_points, 0),
        first_level_(num_points, kUnset), stamp_(num_points, 0), covered_(h.num_vertices(), 0),
        point_blocks_(num_points), cands_(ell + 1) {
    for (EdgeId e = 0; e < blocks.size(); ++e)
      for (Point p : blocks[e]) point_blocks_[p].push_back(e);
    offsets_.push_back(0);
  }

  void run() {
    for (EdgeId root = 0; root < blocks_.size(); ++root) {
      root_ = root;
      add(root, 0);
      extend(1);
      remove(root);
    }
  }

  std::vector<std::uint64_t> offsets_;
  std::vector<EdgeId> members_;

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  void add(EdgeId e, std::size_t level) {
    chosen_.push_back(e);
    for (Point p : blocks_[e])
      if (count_[p]++ == 0) {
        first_level_[p] = level;
        span_.push_back(p);
      }
    for (VertexId v : h_.edge(e)) covered_[v] = 1;
  }

  void remove(EdgeId e) {
    chosen_.pop_back();
    for (Point p : blocks_[e])
      if (--count_[p] == 0) first_level_[p] = kUnset;
    span_.erase(std::remove_if(span_.begin(), span_.end(), [&](Point p) { return count_[p] == 0; }), span_.end());
    for (VertexId v : h_.edge(e)) covered_[v] = 0;
  }

  std::size_t span_of_mask(unsigned mask, EdgeId extra) {
    ++tick_;
    std::size_t n = 0;
    auto touch = [&](EdgeId e) {
      for (Point p : blocks_[e])
        if (stamp_[p] != tick_) stamp_[p] = tick_, ++n;
    };
    touch(extra);
    for (std::size_t i = 0; i < chosen_.size(); ++i)
      if (mask >> i & 1u) touch(chosen_[i]);
    return n;
  }

  // Like for_each_subset, reusing member buffers (this is the hot path).
  template <typename F>
  void subsets(std::size_t k, F&& f) {
    const std::size_t n = sorted_.size();
    if (k > n) return;
    idx_.resize(k);
    sub_.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx_[i] = i;
    while (true) {
      for (std::size_t i = 0; i < k; ++i) sub_[i] = sorted_[idx_[i]];
      f(std::span<const Point>(sub_));
      std::size_t i = k;
      while (i > 0 && idx_[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) return;
      ++idx_[i - 1];
      for (std::size_t j = i; j < k; ++j) idx_[j] = idx_[j - 1] + 1;
    }
  }

  void gather(std::size_t rp, std::vector<EdgeId>& out) {
    out.clear();
    sorted_.assign(span_.begin(), span_.end());
    std::sort(sorted_.begin(), sorted_.end());
    if (rp >= s_) {
      subsets(s_, [&](std::span<const Point> sub) {
        EdgeId e = edge_of_(sub);
        if (e != kNoEdge) out.push_back(e);
      });
      return;
    }
    if (rp >= t_) {
      subsets(t_, [&](std::span<const Point> sub) {
        VertexId v = vertex_of_(sub);
        if (v == kNoVertex || covered_[v]) return;
        auto inc = h_.incident(v);
        out.insert(out.end(), inc.begin(), inc.end());
      });
    } else {
      for (Point p : sorted_) out.insert(out.end(), point_blocks_[p].begin(), point_blocks_[p].end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

  void extend(std::size_t r) {
    if (r >= ell_) return;
    const std::size_t slack = max_span_ - span_.size();
    const std::size_t rp = s_ > slack ? std::max<std::size_t>(1, s_ - slack) : 1;
    auto& cands = cands_[r];
    gather(rp, cands);
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
      const EdgeId c = cands[ci];
      if (c <= root_) continue;
      std::size_t inter = 0, f = kUnset;
      for (Point p : blocks_[c])
        if (count_[p]) ++inter, f = std::min(f, first_level_[p]);
      if (inter < rp) continue;
      bool ok = true;
      for (std::size_t lv = f + 1; lv < r && ok; ++lv) ok = c > chosen_[lv];
      if (!ok) continue;
      for (VertexId v : h_.edge(c))
        if (covered_[v]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      const unsigned full = (1u << r) - 1;
      for (unsigned mask = 1; mask < full && ok; ++mask) {
        const std::size_t size = static_cast<std::size_t>(std::popcount(mask)) + 1;
        ok = span_of_mask(mask, c) >= static_cast<std::size_t>(pi(s_, t_, size));
      }
      if (!ok) continue;
      add(c, r);
      if (span_.size() < static_cast<std::size_t>(pi(s_, t_, r + 1))) {
        emit();
      } else {
        extend(r + 1);
      }
      remove(c);
    }
  }

  void emit() {
    EdgeSet set(chosen_.begin(), chosen_.end());
    std::sort(set.begin(), set.end());
    members_.insert(members_.end(), set.begin(), set.end());
    offsets_.push_back(members_.size());
    if (offsets_.size() - 1 > budget_) {
      const double done = static_cast<double>(root_ + 1) / static_cast<double>(blocks_.size());
      throw BudgetError("conflict enumeration exceeds budget", static_cast<double>(offsets_.size() - 1) / done);
    }
  }

  const Hypergraph& h_;
  const std::vector<Block>& blocks_;
  std::size_t s_, t_, ell_;
  std::uint64_t budget_;
  VertexOf vertex_of_;
  EdgeOf edge_of_;
  std::size_t max_span_;
  std::vector<std::uint32_t> count_;
  std::vector<std::size_t> first_level_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t tick_ = 0;
  std::vector<char> covered_;
  std::vector<std::vector<EdgeId>> point_blocks_;
  std::vector<std::vector<EdgeId>> cands_;
  std::vector<EdgeId> chosen_;
  std::vector<Point> span_;
  Block sorted_, sub_;
  std::vector<std::size_t> idx_;
  EdgeId root_ = 0;
};

template <typename VertexOf, typename EdgeOf>
ConflictSystem search_conflicts(const Hypergraph& h, const std::vector<Block>& blocks, std::size_t num_points,
                                std::size_t s, std::size_t t, std::size_t ell, std::uint64_t budget,
                                VertexOf vertex_of, EdgeOf edge_of) {
  ForbiddenSearch<VertexOf, EdgeOf> search(h, blocks, num_points, s, t, ell, budget, vertex_of, edge_of);
  search.run();
  return ConflictSystem(h.num_edges(), std::move(search.offsets_), std::move(search.members_), true);
}

// Shared tail of build and packing_build. `tsets` lists the host vertices in
// colex order; `sets` are the admissible s-sets, each with all t-subsets present.
SteinerInstance assemble(std::size_t m, std::size_t s, std::size_t t, std::size_t ell, std::vector<Block> tsets,
                         const std::vector<Block>& sets, std::uint64_t budget) {
  SteinerInstance inst;
  inst.m = m, inst.s = s, inst.t = t, inst.ell = ell;
  const std::uint64_t tspace = binom_u64(m, t), sspace = binom_u64(m, s);
  if (tspace > budget || sspace > budget)
    throw BudgetError("design index exceeds budget", static_cast<double>(std::max(tspace, sspace)));
  inst.vertex_rank_index.assign(tspace, kNoVertex);
  for (VertexId v = 0; v < tsets.size(); ++v) inst.vertex_rank_index[colex_rank(tsets[v])] = v;
  inst.vertex_sets = std::move(tsets);

  std::vector<std::vector<VertexId>> edges;
  edges.reserve(sets.size());
  for (const auto& blk : sets) {
    std::vector<VertexId> verts;
    for_each_subset(blk, t, [&](const Block& sub) { verts.push_back(inst.vertex_rank_index[colex_rank(sub)]); });
    std::sort(verts.begin(), verts.end());
    edges.push_back(std::move(verts));
  }
  inst.h = Hypergraph(binom_u64(s, t), inst.vertex_sets.size(), std::move(edges));

  inst.edge_blocks.resize(inst.h.num_edges());
  inst.edge_rank_index.assign(sspace, kNoEdge);
  for (EdgeId e = 0; e < inst.h.num_edges(); ++e) {
    Block blk;
    for (VertexId v : inst.h.edge(e)) blk.insert(blk.end(), inst.vertex_sets[v].begin(), inst.vertex_sets[v].end());
    std::sort(blk.begin(), blk.end());
    blk.erase(std::unique(blk.begin(), blk.end()), blk.end());
    inst.edge_rank_index[colex_rank(blk)] = e;
    inst.edge_blocks[e] = std::move(blk);
  }

  const ColexRanker rank(m, s);
  inst.c = search_conflicts(
      inst.h, inst.edge_blocks, m, s, t, ell, budget,
      [&](std::span<const Point> p) { return inst.vertex_rank_index[rank(p)]; },
      [&](std::span<const Point> p) { return inst.edge_rank_index[rank(p)]; });
  return inst;
}

void check_block(const Block& b, std::size_t m, std::size_t s, std::size_t index) {
  const std::string where = "block " + std::to_string(index);
  if (b.size() != s) throw InputError(where + " does not have " + std::to_string(s) + " points");
  if (std::adjacent_find(b.begin(), b.end()) != b.end()) throw InputError(where + " repeats a point");
  if (b.back() >= m) throw InputError(where + " has a point outside [m]");
}

}  // namespace

VertexId SteinerInstance::vertex_of(std::span<const Point> tset) const {
  if (tset.size() != t) return kNoVertex;
  const auto r = colex_rank(tset);
  return r < vertex_rank_index.size() ? vertex_rank_index[r] : kNoVertex;
}

EdgeId SteinerInstance::edge_of(std::span<const Point> sset) const {
  if (sset.size() != s) return kNoEdge;
  const auto r = colex_rank(sset);
  return r < edge_rank_index.size() ? edge_rank_index[r] : kNoEdge;
}

PartialSystem make_partial_system(std::size_t m, std::size_t s, std::size_t t, std::vector<Block> blocks) {
  std::set<Block> covered;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& b = blocks[i];
    std::sort(b.begin(), b.end());
    check_block(b, m, s, i);
    bool clash = false;
    for_each_subset(b, t, [&](const Block& sub) { clash |= !covered.insert(sub).second; });
    if (clash) throw InputError("block " + std::to_string(i) + " repeats a covered t-set");
  }
  return {std::move(blocks)};
}

SteinerInstance build(std::size_t m, std::size_t s, std::size_t t, std::size_t ell, std::uint64_t budget) {
  check_design_params(s, t, ell);
  if (m < s) throw InputError("need m >= s");
  const std::uint64_t nt = binom_u64(m, t), ns = binom_u64(m, s);
  if (nt > budget || ns > budget) throw BudgetError("host exceeds budget", static_cast<double>(std::max(nt, ns)));
  std::vector<Block> tsets(nt);
  for (std::uint64_t r = 0; r < nt; ++r) tsets[r] = colex_unrank(r, t);
  std::vector<Block> sets(ns);
  for (std::uint64_t r = 0; r < ns; ++r) sets[r] = colex_unrank(r, s);
  return assemble(m, s, t, ell, std::move(tsets), sets, budget);
}

SteinerInstance packing_build(const Hypergraph& g, const std::vector<Block>& cliques, std::size_t s, std::size_t t,
                              std::size_t ell, std::uint64_t budget) {
  check_design_params(s, t, ell);
  if (g.k() != t) throw InputError("packing host must be t-uniform");
  const std::size_t m = g.num_vertices();
  std::vector<Block> tsets;
  tsets.reserve(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    auto verts = g.edge(e);
    tsets.emplace_back(verts.begin(), verts.end());
  }
  std::sort(tsets.begin(), tsets.end(),
            [](const Block& a, const Block& b) { return colex_rank(a) < colex_rank(b); });
  std::vector<Block> sets = cliques;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::sort(sets[i].begin(), sets[i].end());
    check_block(sets[i], m, s, i);
    for_each_subset(sets[i], t, [&](const Block& sub) {
      if (g.find_edge(sub) == kNoEdge) throw InputError("clique " + std::to_string(i) + " misses a host edge");
    });
  }
  return assemble(m, s, t, ell, std::move(tsets), sets, budget);
}

std::size_t default_ell(double m, std::size_t s) {
  if (!(m > 1) || s == 0) return 2;
  const double ll = std::log(std::log(m));
  if (!(ll >= std::numbers::e)) return 2;
  const double v = std::floor(ll / (3.0 * static_cast<double>(s) * std::log(ll)));
  return v > 2 ? static_cast<std::size_t>(v) : 2;
}

SparseVerdict verify_sparse(const PartialSystem& sys, std::size_t s, std::size_t t, std::size_t ell) {
  SparseVerdict out;
  if (sys.blocks.size() < 2 || ell < 2) return out;
  Point max_point = 0;
  for (const auto& b : sys.blocks)
    for (Point p : b) max_point = std::max(max_point, p);
  std::vector<std::uint32_t> count(static_cast<std::size_t>(max_point) + 1, 0);
  const std::size_t limit = static_cast<std::size_t>(pi(static_cast<long long>(s), static_cast<long long>(t),
                                                        static_cast<long long>(ell)) - 1);
  std::vector<std::size_t> chosen;
  std::size_t span = 0;
  bool found = false;

  auto dfs = [&](auto&& self, std::size_t next) -> void {
    for (std::size_t i = next; i < sys.blocks.size() && !found; ++i) {
      for (Point p : sys.blocks[i]) span += count[p]++ == 0;
      chosen.push_back(i);
      const std::size_t j = chosen.size();
      if (j >= 2 && span < static_cast<std::size_t>(pi(static_cast<long long>(s), static_cast<long long>(t),
                                                         static_cast<long long>(j)))) {
        found = true;
        out.sparse = false;
        out.witness = chosen;
        out.witness_span = span;
      } else if (j < ell && span <= limit) {
        self(self, i + 1);
      }
      chosen.pop_back();
      for (Point p : sys.blocks[i]) span -= --count[p] == 0;
    }
  };
  dfs(dfs, 0);
  return out;
}

PartialSystem to_system(const SteinerInstance& inst, std::span<const EdgeId> matching) {
  if (!inst.h.is_matching(matching)) throw InputError("to_system needs a matching");
  PartialSystem out;
  out.blocks.reserve(matching.size());
  for (EdgeId e : matching) out.blocks.push_back(inst.edge_blocks.at(e));
  return out;
}

EdgeSet to_matching(const SteinerInstance& inst, const PartialSystem& sys) {
  std::vector<EdgeId> ids;
  std::vector<char> covered(inst.h.num_vertices(), 0);
  for (std::size_t i = 0; i < sys.blocks.size(); ++i) {
    Block b = sys.blocks[i];
    std::sort(b.begin(), b.end());
    check_block(b, inst.m, inst.s, i);
    const EdgeId e = inst.edge_of(b);
    if (e == kNoEdge) throw InputError("block " + std::to_string(i) + " is not an edge of the host");
    for (VertexId v : inst.h.edge(e)) {
      if (covered[v]) throw InputError("block " + std::to_string(i) + " repeats a covered t-set");
      covered[v] = 1;
    }
    ids.push_back(e);
  }
  return make_edge_set(std::move(ids));
}

std::vector<TestSystem> degree_test_systems(const SteinerInstance& inst) {
  std::vector<TestSystem> out(binom_u64(inst.m, inst.t - 1));
  for (auto& z : out) z.j = 1;
  for (EdgeId e = 0; e < inst.h.num_edges(); ++e)
    for_each_subset(inst.edge_blocks[e], inst.t - 1,
                    [&](const Block& y) { out[colex_rank(y)].tests.push_back({e}); });
  return out;
}

EdgeId LatinInstance::edge_of(std::uint32_t row, std::uint32_t col, std::uint32_t sym) const {
  if (row >= m || col >= m || sym >= m) return kNoEdge;
  return cell_index[(static_cast<std::size_t>(row) * m + col) * m + sym];
}

LatinInstance latin_build(std::size_t m, std::size_t ell, std::uint64_t budget) {
  if (m < 1) throw InputError("need m >= 1");
  if (ell < 2) throw InputError("need ell >= 2");
  const std::uint64_t cells = static_cast<std::uint64_t>(m) * m * m;
  if (cells > budget) throw BudgetError("latin host exceeds budget", static_cast<double>(cells));
  const std::size_t mm = m * m;
  LatinInstance inst;
  inst.m = m, inst.ell = ell;
  std::vector<std::vector<VertexId>> edges;
  edges.reserve(cells);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t x = 0; x < m; ++x)
        edges.push_back({static_cast<VertexId>(r * m + c), static_cast<VertexId>(mm + r * m + x),
                         static_cast<VertexId>(2 * mm + c * m + x)});
  inst.h = Hypergraph(3, 3 * mm, std::move(edges));
  inst.cells.resize(inst.h.num_edges());
  inst.cell_index.assign(cells, kNoEdge);
  std::vector<Block> lines(inst.h.num_edges());
  for (EdgeId e = 0; e < inst.h.num_edges(); ++e) {
    auto v = inst.h.edge(e);
    const auto r = static_cast<std::uint32_t>(v[0] / m), c = static_cast<std::uint32_t>(v[0] % m),
               x = static_cast<std::uint32_t>((v[1] - mm) % m);
    inst.cells[e] = {r, c, x};
    inst.cell_index[(static_cast<std::size_t>(r) * m + c) * m + x] = e;
    lines[e] = {r, static_cast<Point>(m + c), static_cast<Point>(2 * m + x)};
  }
  // Lines: rows 0..m-1, columns m..2m-1, symbols 2m..3m-1. A pair of lines
  // from different classes is a host vertex.
  auto vertex_of = [m, mm](std::span<const Point> p) -> VertexId {
    const std::size_t a = p[0], b = p[1];
    if (a < m && b >= m && b < 2 * m) return static_cast<VertexId>(a * m + (b - m));
    if (a < m && b >= 2 * m) return static_cast<VertexId>(mm + a * m + (b - 2 * m));
    if (a >= m && a < 2 * m && b >= 2 * m) return static_cast<VertexId>(2 * mm + (a - m) * m + (b - 2 * m));
    return kNoVertex;
  };
  auto edge_of = [&inst, m](std::span<const Point> p) -> EdgeId {
    if (p[0] >= m || p[1] < m || p[1] >= 2 * m || p[2] < 2 * m) return kNoEdge;
    return inst.edge_of(p[0], static_cast<std::uint32_t>(p[1] - m), static_cast<std::uint32_t>(p[2] - 2 * m));
  };
  inst.c = search_conflicts(inst.h, lines, 3 * m, 3, 2, ell, budget, vertex_of, edge_of);
  return inst;
}

std::optional<std::size_t> latin_girth(std::size_t m, const std::vector<std::array<std::uint32_t, 3>>& cells) {
  if (3 * m > 24) throw InputError("latin_girth is exhaustive and limited to m <= 8");
  std::vector<std::uint32_t> masks;
  for (const auto& [r, c, x] : cells) {
    if (r >= m || c >= m || x >= m) throw InputError("cell outside the square");
    masks.push_back((1u << r) | (1u << (m + c)) | (1u << (2 * m + x)));
  }
  std::optional<std::size_t> best;
  const std::uint32_t all = 1u << (3 * m);
  for (std::uint32_t lines = 0; lines < all; ++lines) {
    const auto g = static_cast<std::size_t>(std::popcount(lines));
    if (g < 4 || (best && g >= *best)) continue;
    std::size_t inside = 0;
    for (auto cm : masks) inside += (cm & lines) == cm;
    if (inside + 2 >= g) best = g;
  }
  return best;
}

bool has_intercalate(std::size_t m, const std::vector<std::array<std::uint32_t, 3>>& cells) {
  std::vector<int> grid(m * m, -1);
  std::vector<char> row_sym(m * m, 0), col_sym(m * m, 0);
  for (const auto& [r, c, x] : cells) {
    if (r >= m || c >= m || x >= m) throw InputError("cell outside the square");
    if (grid[r * m + c] >= 0 || row_sym[r * m + x] || col_sym[c * m + x])
      throw InputError("cells do not form a partial Latin square");
    grid[r * m + c] = static_cast<int>(x);
    row_sym[r * m + x] = col_sym[c * m + x] = 1;
  }
  for (std::size_t r1 = 0; r1 < m; ++r1)
    for (std::size_t r2 = r1 + 1; r2 < m; ++r2)
      for (std::size_t c1 = 0; c1 < m; ++c1)
        for (std::size_t c2 = c1 + 1; c2 < m; ++c2) {
          const int a = grid[r1 * m + c1], b = grid[r1 * m + c2];
          if (a >= 0 && b >= 0 && grid[r2 * m + c1] == b && grid[r2 * m + c2] == a) return true;
        }
  return false;
}

HostRegularization regularize_host(const Hypergraph& h, double d, double eps, std::uint64_t seed,
                                   std::uint64_t budget) {
  const std::size_t n = h.num_vertices(), k = h.k();
  if (n == 0 || k < 2) throw InputError("regularize_host needs a nonempty host with k >= 2");
  if (!(eps >= 0 && eps < 1) || !(d > 0)) throw InputError("regularize_host needs d > 0 and eps in [0,1)");
  const double lo = static_cast<double>(h.min_degree()), hi = static_cast<double>(h.max_degree());
  if (lo < (1 - eps) * d || hi > d) throw InputError("host degrees outside [(1-eps)d, d]");
  const std::size_t w = 2 * n;
  const double links = binom(static_cast<long long>(w), static_cast<long long>(k - 1));
  const double inner = binom(static_cast<long long>(w), static_cast<long long>(k));
  if (static_cast<double>(n) * links + inner > static_cast<double>(budget))
    throw BudgetError("host regularization candidates exceed budget", static_cast<double>(n) * links + inner);

  Rng rng = make_rng(seed);
  std::vector<std::vector<VertexId>> edges;
  edges.reserve(h.num_edges());
  for (EdgeId e = 0; e < h.num_edges(); ++e) edges.push_back(h.edge_vector(e));

  std::vector<VertexId> dummies(w);
  for (std::size_t i = 0; i < w; ++i) dummies[i] = static_cast<VertexId>(n + i);
  std::vector<double> cross_deg(w, 0.0);
  HostRegularization out;
  out.target_degree = d;
  for (VertexId v = 0; v < n; ++v) {
    const double deficit = d - static_cast<double>(h.degree(std::span<const VertexId>(&v, 1)));
    if (deficit <= 0) continue;
    const double p = std::min(1.0, deficit / links);
    for_each_subset(dummies, k - 1, [&](const std::vector<VertexId>& rest) {
      if (p < 1 && uniform01(rng) >= p) return;
      std::vector<VertexId> e{v};
      e.insert(e.end(), rest.begin(), rest.end());
      for (VertexId u : rest) cross_deg[u - n] += 1;
      edges.push_back(std::move(e));
      ++out.crossing_edges;
    });
  }

  std::vector<double> deficit(w);
  double total = 0;
  for (std::size_t i = 0; i < w; ++i) total += deficit[i] = std::max(0.0, d - cross_deg[i]);
  std::vector<double> expected = cross_deg;
  if (total > 0) {
    const double scale = std::tgamma(static_cast<double>(k)) / std::pow(total, static_cast<double>(k - 1));
    for_each_subset(dummies, k, [&](const std::vector<VertexId>& e) {
      double weight = scale;
      for (VertexId u : e) weight *= deficit[u - n];
      weight = std::min(1.0, weight);
      for (VertexId u : e) expected[u - n] += weight;
      if (weight <= 0 || (weight < 1 && uniform01(rng) >= weight)) return;
      edges.push_back(e);
      ++out.inner_edges;
    });
  }
  double sum = 0;
  for (double x : expected) sum += x;
  out.expected_new_degree = sum / static_cast<double>(w);
  out.h = Hypergraph(k, 3 * n, std::move(edges));
  return out;
}

}  // namespace cfm
