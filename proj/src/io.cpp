#include "cfm/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cfm/rng.hpp"

namespace cfm::io {

namespace {

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::uint64_t as_uint(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) {
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    throw InputError(where + ": expected a nonnegative integer");
  }
  return j.get<std::uint64_t>();
}

template <typename T>
std::vector<T> id_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<T> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = as_uint(j[i], where + "[" + std::to_string(i) + "]");
    if (v > std::numeric_limits<T>::max()) throw InputError(where + ": id out of range");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

template <typename T>
std::vector<std::vector<T>> nested_ids(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of arrays");
  std::vector<std::vector<T>> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(id_list<T>(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string opt(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

double covered_fraction(const RunResult& r, const Hypergraph& h) {
  if (h.num_vertices() == 0) return 0.0;
  return static_cast<double>(r.matching.size() * h.k()) / static_cast<double>(h.num_vertices());
}

}  // namespace

Json to_json(const Hypergraph& h) {
  Json edges = Json::array();
  for (EdgeId e = 0; e < h.num_edges(); ++e) edges.push_back(h.edge_vector(e));
  return Json{{"k", h.k()}, {"n", h.num_vertices()}, {"edges", std::move(edges)}};
}

Hypergraph hypergraph_from_json(const Json& j) {
  const auto k = as_uint(member(j, "k", "hypergraph"), "hypergraph.k");
  const auto n = as_uint(member(j, "n", "hypergraph"), "hypergraph.n");
  return Hypergraph(k, n, nested_ids<VertexId>(member(j, "edges", "hypergraph"), "hypergraph.edges"));
}

Json to_json(const ConflictSystem& c) {
  Json out = Json::array();
  for (ConflictId i = 0; i < c.size(); ++i) out.push_back(c.conflict_vector(i));
  return out;
}

ConflictSystem conflicts_from_json(const Json& j, std::size_t num_host_edges) {
  return ConflictSystem(num_host_edges, nested_ids<EdgeId>(j, "conflicts"));
}

Json to_json(const TestSystem& z) { return Json{{"j", z.j}, {"tests", z.tests}}; }

TestSystem test_system_from_json(const Json& j, const Hypergraph& h) {
  const auto size = as_uint(member(j, "j", "test system"), "test system.j");
  return make_test_system(h, size, nested_ids<EdgeId>(member(j, "tests", "test system"), "test system.tests"));
}

Json to_json(const Design& d) {
  return Json{{"m", d.m}, {"s", d.s}, {"t", d.t}, {"blocks", d.system.blocks}};
}

Design design_from_json(const Json& j) {
  Design d;
  d.m = as_uint(member(j, "m", "design"), "design.m");
  d.s = as_uint(member(j, "s", "design"), "design.s");
  d.t = as_uint(member(j, "t", "design"), "design.t");
  if (d.t < 1 || d.s <= d.t) throw InputError("design: need s > t >= 1");
  d.system = make_partial_system(d.m, d.s, d.t, nested_ids<Point>(member(j, "blocks", "design"), "design.blocks"));
  return d;
}

Json to_json(const Report& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions)
    conds.push_back({{"name", c.name},
                     {"pass", c.pass},
                     {"measured", c.measured},
                     {"threshold", c.threshold},
                     {"kind", c.lower_bound ? "lower" : "upper"},
                     {"witness", c.witness}});
  return Json{{"pass", r.all_pass()}, {"conditions", std::move(conds)}};
}

Json to_json(const Containment& c) {
  Json out{{"j", c.j}, {"size", c.size}, {"count", c.count}, {"expected", c.expected}};
  out["ratio"] = c.ratio ? Json(*c.ratio) : Json(nullptr);
  return out;
}

Json run_summary(const RunResult& r, const Hypergraph& h) {
  return Json{{"seed", r.seed},
              {"steps", r.steps},
              {"matching_size", r.matching.size()},
              {"stop_reason", r.stop_reason},
              {"covered_fraction", covered_fraction(r, h)},
              {"matching", r.matching}};
}

RunResult run_from_json(const Json& j) {
  RunResult r;
  r.seed = as_uint(member(j, "seed", "run"), "run.seed");
  r.matching = id_list<EdgeId>(member(j, "matching", "run"), "run.matching");
  r.steps = j.contains("steps") ? as_uint(j["steps"], "run.steps") : r.matching.size();
  if (j.contains("stop_reason") && j["stop_reason"].is_string()) r.stop_reason = j["stop_reason"].get<std::string>();
  return r;
}

static constexpr const char* kTraceHeader =
    "step,available_before,chosen_edge,removed_conflict,removed_intersect,conflict_multiplicity,"
    "min_uncovered_degree,max_uncovered_degree,min_semiconflicts,max_semiconflicts";

std::string trace_csv(const std::vector<TraceRecord>& trace) {
  std::string out = std::string(kTraceHeader) + "\n";
  for (const auto& r : trace) {
    out += std::to_string(r.step) + ',' + std::to_string(r.available_before) + ',' + std::to_string(r.chosen) + ',' +
           std::to_string(r.removed_conflict) + ',' + std::to_string(r.removed_intersect) + ',' +
           std::to_string(r.conflict_multiplicity) + ',' + opt(r.min_uncovered_degree) + ',' +
           opt(r.max_uncovered_degree) + ',' + opt(r.min_semiconflicts) + ',' + opt(r.max_semiconflicts) + '\n';
  }
  return out;
}

std::vector<TraceRecord> trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw InputError("trace: unexpected header");
  std::vector<TraceRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 10) throw InputError("trace line " + std::to_string(lineno) + ": expected 10 fields");
    auto field = [&](std::size_t i) -> std::uint64_t {
      try {
        std::size_t pos = 0;
        auto v = std::stoull(cells[i], &pos);
        if (pos != cells[i].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::exception&) {
        throw InputError("trace line " + std::to_string(lineno) + ": bad field " + std::to_string(i + 1));
      }
    };
    auto maybe = [&](std::size_t i) -> std::optional<std::size_t> {
      if (cells[i].empty()) return std::nullopt;
      return field(i);
    };
    TraceRecord r;
    r.step = field(0);
    r.available_before = field(1);
    r.chosen = static_cast<EdgeId>(field(2));
    r.removed_conflict = field(3);
    r.removed_intersect = field(4);
    r.conflict_multiplicity = field(5);
    r.min_uncovered_degree = maybe(6);
    r.max_uncovered_degree = maybe(7);
    r.min_semiconflicts = maybe(8);
    r.max_semiconflicts = maybe(9);
    out.push_back(r);
  }
  return out;
}

std::vector<double> grid(double x_max, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {0.0};
  std::vector<double> xs(points);
  for (std::size_t i = 0; i < points; ++i)
    xs[i] = i + 1 == points ? x_max : x_max * static_cast<double>(i) / static_cast<double>(points - 1);
  return xs;
}

std::string trajectory_csv(const TrajectoryParams& p, const std::vector<double>& xs,
                           const std::vector<BandVerdict>* alive) {
  p.validate();
  if (alive && alive->size() != xs.size()) throw InputError("trajectory: one band verdict per grid point needed");
  std::string out = "x,p_V,p_M,Gamma,d_hat,h_hat,c_hat";
  std::vector<JS> zkeys;
  for (std::size_t j = 1; j <= p.ell; ++j)
    for (std::size_t s = 0; s <= j; ++s) {
      zkeys.emplace_back(j, s);
      out += ",z_" + std::to_string(j) + "_" + std::to_string(s);
    }
  out += ",log_xi,xi,delta_err,eta,gamma_err";
  if (alive) out += ",measured,in_domain,theory_vacuous,in_theory_band,in_empirical_band,relative_error";
  out += '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto t = eval(p, xs[i]);
    out += num(t.x) + ',' + num(t.p_v) + ',' + num(t.p_m) + ',' + num(t.gamma_hat) + ',' + num(t.d_hat) + ',' +
           num(t.h_hat) + ',' + num(t.c_hat);
    for (const auto& key : zkeys) {
      auto it = t.z_hat.find(key);
      out += ',' + (it == t.z_hat.end() ? std::string() : num(it->second));
    }
    if (t.has_errors)
      out += ',' + num(t.log_xi) + ',' + num(t.xi) + ',' + num(t.delta_err) + ',' + num(t.eta) + ',' +
             num(t.gamma_err);
    else
      out += ",,,,,";
    if (alive) {
      const auto& v = (*alive)[i];
      out += ',' + num(v.measured) + ',' + std::to_string(v.in_domain) + ',' + std::to_string(v.theory_vacuous) + ',' +
             std::to_string(v.in_theory_band) + ',' + std::to_string(v.in_empirical_band) + ',' +
             num(v.relative_error);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": parse error at byte " + std::to_string(e.byte));
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::size_t worker_count() {
  if (const char* env = std::getenv("CFM_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunResult> run_replicas(const Hypergraph& h, const ConflictSystem& c, const ReplicaOptions& opt) {
  std::vector<RunResult> out(opt.runs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < opt.runs;) {
      try {
        ProcessState state(h, c, derive_seed(opt.master_seed, i));
        state.set_record_trace(opt.record_trace);
        state.set_record_stats(opt.record_stats);
        out[i] = state.run(opt.target, opt.max_steps);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(opt.workers, 1, std::max<std::size_t>(opt.runs, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Json aggregate(const std::vector<RunResult>& runs, const Hypergraph& h) {
  auto stats = [&](auto value) {
    double mean = 0, sq = 0;
    for (const auto& r : runs) mean += value(r);
    mean /= static_cast<double>(std::max<std::size_t>(runs.size(), 1));
    for (const auto& r : runs) sq += (value(r) - mean) * (value(r) - mean);
    const double sd = runs.size() > 1 ? std::sqrt(sq / static_cast<double>(runs.size() - 1)) : 0.0;
    return Json{{"mean", mean}, {"stddev", sd}};
  };
  Json sizes = Json::array();
  for (const auto& r : runs) sizes.push_back(r.matching.size());
  return Json{{"runs", runs.size()},
              {"size", stats([](const RunResult& r) { return static_cast<double>(r.matching.size()); })},
              {"covered_fraction", stats([&](const RunResult& r) { return covered_fraction(r, h); })},
              {"sizes", std::move(sizes)}};
}

}  // namespace cfm::io
