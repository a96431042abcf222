// Experiment driver: instance generation, replica runs, verification,
// trajectory tables and the counting bound.
//
// Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget refusal.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cfm/conflicts.hpp"
#include "cfm/io.hpp"
#include "cfm/process.hpp"
#include "cfm/steiner.hpp"
#include "cfm/trajectory.hpp"

namespace fs = std::filesystem;
using cfm::io::Json;

namespace {

enum Exit { kOk = 0, kFail = 1, kInput = 2, kBudget = 3 };

struct GenerateArgs {
  std::string kind = "steiner";
  std::size_t m = 7, s = 3, t = 2, ell = 4;
  std::uint64_t budget = 50'000'000;
  std::string out;
};

struct RunArgs {
  std::string instance;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::optional<double> mu;
  std::optional<std::size_t> target;
  std::optional<std::size_t> max_steps;
  std::string format = "csv";
  std::string out;
  bool emit_trace = false;
  bool emit_trajectory = false;
  double gamma = 1.0, eps = 0.5, tolerance = 0.1;
};

struct VerifyArgs {
  std::string design, instance, run;
  std::size_t ell = 4;
};

struct TrajectoryArgs {
  double n = 3000, k = 3, d = 100, gamma = 1.0, mu = 0.1, eps = 0.5;
  std::size_t ell = 2, points = 101;
  std::vector<double> deltas;  // values for j = 2, 3, ...
  std::string trace, format = "csv", out;
  double tolerance = 0.1;
};

struct CountArgs {
  double d = 1000, k = 3, length = 100, eps = 0.1;
  std::size_t ell = 3;
  std::vector<double> deltas;  // values for j = 2, 3, ...
  std::string format = "json";
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    cfm::io::write_text_file(out, text);
}

Json size_histogram(const cfm::ConflictSystem& c) {
  Json by = Json::object();
  for (std::size_t j = 2; j <= c.max_size(); ++j)
    if (!c.of_size(j).empty()) by[std::to_string(j)] = c.of_size(j).size();
  return by;
}

int cmd_generate(const GenerateArgs& a) {
  if (a.out.empty()) throw cfm::InputError("--out is required");
  const fs::path dir(a.out);
  Json meta{{"generator", a.kind}, {"m", a.m}};
  Json summary;
  auto write = [&](const cfm::Hypergraph& h, const cfm::ConflictSystem& c) {
    cfm::io::write_text_file(dir / "hypergraph.json", cfm::io::dump(cfm::io::to_json(h)));
    cfm::io::write_text_file(dir / "conflicts.json", cfm::io::dump(cfm::io::to_json(c)));
    summary = Json{{"n", h.num_vertices()},
                   {"edges", h.num_edges()},
                   {"k", h.k()},
                   {"d", h.max_degree()},
                   {"conflicts", c.size()},
                   {"conflicts_by_size", size_histogram(c)}};
  };
  if (a.kind == "steiner") {
    auto inst = cfm::build(a.m, a.s, a.t, a.ell, a.budget);
    meta.update(Json{{"s", a.s}, {"t", a.t}, {"ell", a.ell}});
    write(inst.h, inst.c);
  } else if (a.kind == "latin") {
    auto inst = cfm::latin_build(a.m, a.ell, a.budget);
    meta["ell"] = a.ell;
    write(inst.h, inst.c);
  } else {
    throw cfm::InputError("unknown generator " + a.kind);
  }
  cfm::io::write_text_file(dir / "instance.json", cfm::io::dump(meta));
  std::cout << cfm::io::dump(summary);
  return kOk;
}

struct LoadedInstance {
  Json meta;
  cfm::Hypergraph h;
  cfm::ConflictSystem c;
  std::size_t dropped = 0;
};

LoadedInstance load_instance(const fs::path& dir) {
  LoadedInstance li;
  if (fs::exists(dir / "instance.json")) li.meta = cfm::io::read_json_file(dir / "instance.json");
  li.h = cfm::io::hypergraph_from_json(cfm::io::read_json_file(dir / "hypergraph.json"));
  auto raw = cfm::io::conflicts_from_json(cfm::io::read_json_file(dir / "conflicts.json"), li.h.num_edges());
  auto norm = cfm::normalize(li.h, raw);
  li.dropped = norm.log.size();
  li.c = std::move(norm.system);
  return li;
}

std::vector<double> measured_deltas(const cfm::ConflictSystem& c) {
  std::vector<double> deltas(c.max_size() + 1, 0.0);
  for (std::size_t j = 2; j <= c.max_size(); ++j) deltas[j] = static_cast<double>(c.max_codegree(j, 1));
  return deltas;
}

int cmd_run(const RunArgs& a) {
  if (a.out.empty()) throw cfm::InputError("--out is required");
  if (a.runs < 1) throw cfm::InputError("--runs must be at least 1");
  if (a.mu && a.target) throw cfm::InputError("give --mu or --target, not both");
  if (a.format != "csv" && a.format != "json") throw cfm::InputError("--format must be json or csv");
  const auto li = load_instance(a.instance);
  const auto& h = li.h;
  const double n = static_cast<double>(h.num_vertices()), k = static_cast<double>(h.k());

  cfm::io::ReplicaOptions opt;
  opt.runs = a.runs;
  opt.master_seed = a.seed;
  opt.max_steps = a.max_steps;
  opt.record_trace = a.emit_trace || a.emit_trajectory;
  opt.workers = cfm::io::worker_count();
  if (a.target) opt.target = *a.target;
  if (a.mu) {
    if (!(*a.mu > 0 && *a.mu < 1)) throw cfm::InputError("--mu must lie in (0,1)");
    opt.target = static_cast<std::size_t>(std::floor((1.0 - *a.mu) * n / k));
  }
  const auto runs = cfm::io::run_replicas(h, li.c, opt);

  const fs::path dir(a.out);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string id = std::to_string(i);
    cfm::io::write_text_file(dir / ("run_" + id + ".json"), cfm::io::dump(cfm::io::run_summary(runs[i], h)));
    if (a.emit_trace) {
      if (a.format == "csv") {
        cfm::io::write_text_file(dir / ("trace_" + id + ".csv"), cfm::io::trace_csv(runs[i].trace));
      } else {
        Json rows = Json::array();
        for (const auto& r : runs[i].trace)
          rows.push_back({{"step", r.step},
                          {"available_before", r.available_before},
                          {"chosen", r.chosen},
                          {"removed_conflict", r.removed_conflict},
                          {"removed_intersect", r.removed_intersect},
                          {"conflict_multiplicity", r.conflict_multiplicity}});
        cfm::io::write_text_file(dir / ("trace_" + id + ".json"), cfm::io::dump(rows));
      }
    }
    if (a.emit_trajectory) {
      cfm::TrajectoryParams p;
      p.n = n, p.k = k, p.d = static_cast<double>(h.max_degree());
      p.ell = std::max<std::size_t>(2, li.c.max_size());
      p.gamma = a.gamma, p.eps = a.eps;
      p.mu = a.mu ? std::min(*a.mu, 1.0 / static_cast<double>(p.ell)) : 1.0 / static_cast<double>(p.ell);
      p.deltas = measured_deltas(li.c);
      const auto bands = cfm::tracking_bands(p, runs[i].trace, h.num_edges(), a.tolerance);
      std::vector<double> xs;
      for (const auto& v : bands.alive) xs.push_back(static_cast<double>(v.step));
      cfm::io::write_text_file(dir / ("trajectory_" + id + ".csv"), cfm::io::trajectory_csv(p, xs, &bands.alive));
    }
  }
  Json agg = cfm::io::aggregate(runs, h);
  agg["master_seed"] = a.seed;
  agg["dropped_conflicts"] = li.dropped;
  const std::string text = cfm::io::dump(agg);
  cfm::io::write_text_file(dir / "aggregate.json", text);
  std::cout << text;
  return kOk;
}

Json sparse_detail(const cfm::SparseVerdict& v, const cfm::PartialSystem& sys) {
  Json out{{"sparse", v.sparse}};
  if (!v.sparse) {
    Json blocks = Json::array();
    for (auto i : v.witness) blocks.push_back(sys.blocks[i]);
    out["witness"] = v.witness;
    out["witness_blocks"] = std::move(blocks);
    out["witness_span"] = v.witness_span;
  }
  return out;
}

int cmd_verify(const VerifyArgs& a) {
  Json detail = Json::object();
  bool pass = true;
  if (!a.design.empty()) {
    const auto d = cfm::io::design_from_json(cfm::io::read_json_file(a.design));
    const auto v = cfm::verify_sparse(d.system, d.s, d.t, a.ell);
    detail["design"] = sparse_detail(v, d.system);
    pass &= v.sparse;
  }
  if (!a.run.empty()) {
    if (a.instance.empty()) throw cfm::InputError("--run needs --instance");
    const auto li = load_instance(a.instance);
    const auto r = cfm::io::run_from_json(cfm::io::read_json_file(a.run));
    for (auto e : r.matching)
      if (e >= li.h.num_edges()) throw cfm::InputError("run references an unknown edge");
    const bool matching = li.h.is_matching(r.matching);
    const bool cfree = li.c.is_cfree(r.matching);
    Json run{{"matching", matching}, {"conflict_free", cfree}, {"size", r.matching.size()}};
    pass &= matching && cfree;
    if (li.meta.is_object() && li.meta.value("generator", "") == "steiner") {
      const std::size_t t = li.meta.at("t").get<std::size_t>();
      const std::size_t s = li.meta.at("s").get<std::size_t>();
      const std::size_t ell = li.meta.value("ell", a.ell);
      cfm::PartialSystem sys;
      for (auto e : r.matching) {
        cfm::Block blk;
        for (auto v : li.h.edge(e)) {
          auto tset = cfm::colex_unrank(v, t);
          blk.insert(blk.end(), tset.begin(), tset.end());
        }
        std::sort(blk.begin(), blk.end());
        blk.erase(std::unique(blk.begin(), blk.end()), blk.end());
        sys.blocks.push_back(std::move(blk));
      }
      const auto v = cfm::verify_sparse(sys, s, t, ell);
      run["design"] = sparse_detail(v, sys);
      pass &= v.sparse;
    }
    detail["run"] = std::move(run);
  }
  if (a.design.empty() && a.run.empty()) throw cfm::InputError("nothing to verify: give --design or --run");
  detail["pass"] = pass;
  std::cout << cfm::io::dump(detail);
  return pass ? kOk : kFail;
}

std::vector<double> index_deltas(const std::vector<double>& from_two) {
  std::vector<double> out(from_two.size() + 2, 0.0);
  for (std::size_t i = 0; i < from_two.size(); ++i) out[i + 2] = from_two[i];
  return out;
}

int cmd_trajectory(const TrajectoryArgs& a) {
  cfm::TrajectoryParams p;
  p.n = a.n, p.k = a.k, p.d = a.d, p.ell = a.ell, p.gamma = a.gamma, p.mu = a.mu, p.eps = a.eps;
  p.deltas = index_deltas(a.deltas);
  p.validate();
  std::string text;
  if (!a.trace.empty()) {
    const auto trace = cfm::io::trace_from_csv(cfm::io::read_text_file(a.trace));
    const std::size_t total = trace.empty() ? 0 : trace.front().available_before;
    const auto bands = cfm::tracking_bands(p, trace, total, a.tolerance);
    std::vector<double> xs;
    for (const auto& v : bands.alive) xs.push_back(static_cast<double>(v.step));
    text = cfm::io::trajectory_csv(p, xs, &bands.alive);
  } else {
    text = cfm::io::trajectory_csv(p, cfm::io::grid(p.n / p.k, a.points));
  }
  if (a.format == "json") {
    // Re-read the CSV into objects so both formats share one column set.
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    for (std::istringstream hs(line); std::getline(hs, line, ',');) header.push_back(line);
    Json rows = Json::array();
    while (std::getline(in, line)) {
      Json row = Json::object();
      std::vector<std::string> cells;
      for (std::istringstream ls(line); std::getline(ls, line, ',');) cells.push_back(line);
      cells.resize(header.size());
      for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
      rows.push_back(std::move(row));
    }
    text = cfm::io::dump(rows);
  } else if (a.format != "csv") {
    throw cfm::InputError("--format must be json or csv");
  }
  emit(text, a.out);
  return kOk;
}

int cmd_count(const CountArgs& a) {
  const double ln = cfm::counting_lower_bound(a.d, a.k, a.ell, index_deltas(a.deltas), a.length, a.eps);
  if (a.format == "json") {
    std::cout << cfm::io::dump(Json{{"ln", ln}, {"log10", ln / std::log(10.0)}});
  } else {
    char buf[96];
    std::snprintf(buf, sizeof buf, "ln,log10\n%.17g,%.17g\n", ln, ln / std::log(10.0));
    std::cout << buf;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random conflict-free hypergraph matching experiments"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Build a Steiner or Latin instance");
  g->add_option("kind", gen.kind, "steiner or latin")->check(CLI::IsMember({"steiner", "latin"}));
  g->add_option("--m", gen.m, "number of points (or square order)");
  g->add_option("--s", gen.s, "block size");
  g->add_option("--t", gen.t, "packing strength");
  g->add_option("--ell", gen.ell, "largest conflict size");
  g->add_option("--budget", gen.budget, "refuse instances larger than this");
  g->add_option("--out", gen.out, "output directory")->required();

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run seeded replicas of the process");
  r->add_option("--instance", run.instance, "instance directory")->required();
  r->add_option("--runs", run.runs, "number of replicas");
  r->add_option("--seed", run.seed, "master seed");
  r->add_option("--mu", run.mu, "stop at floor((1-mu) n / k) edges");
  r->add_option("--target", run.target, "stop at this many edges");
  r->add_option("--max-steps", run.max_steps, "step limit");
  r->add_option("--format", run.format, "trace format")->check(CLI::IsMember({"json", "csv"}));
  r->add_option("--out", run.out, "output directory")->required();
  r->add_flag("--emit-trace", run.emit_trace, "write per-run traces");
  r->add_flag("--emit-trajectory", run.emit_trajectory, "write per-run trajectory comparisons");
  r->add_option("--gamma", run.gamma, "conflict budget for trajectory comparisons");
  r->add_option("--eps", run.eps, "exponent for trajectory comparisons");
  r->add_option("--tolerance", run.tolerance, "empirical band half-width (relative)");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Check a design or a run");
  v->add_option("--design", ver.design, "design JSON file");
  v->add_option("--instance", ver.instance, "instance directory for --run");
  v->add_option("--run", ver.run, "run summary JSON file");
  v->add_option("--ell", ver.ell, "sparseness order for designs");

  TrajectoryArgs tr;
  auto* t = app.add_subcommand("trajectory", "Tabulate trajectories and error functions");
  t->add_option("--n", tr.n);
  t->add_option("--k", tr.k);
  t->add_option("--d", tr.d);
  t->add_option("--ell", tr.ell);
  t->add_option("--gamma", tr.gamma);
  t->add_option("--mu", tr.mu);
  t->add_option("--eps", tr.eps);
  t->add_option("--deltas", tr.deltas, "conflict degrees for sizes 2, 3, ...");
  t->add_option("--points", tr.points, "grid size");
  t->add_option("--trace", tr.trace, "trace CSV to compare against");
  t->add_option("--tolerance", tr.tolerance, "empirical band half-width (relative)");
  t->add_option("--format", tr.format)->check(CLI::IsMember({"json", "csv"}));
  t->add_option("--out", tr.out, "output file (default stdout)");

  CountArgs cnt;
  auto* c = app.add_subcommand("count", "Log lower bound on conflict-free matchings");
  c->add_option("--d", cnt.d);
  c->add_option("--k", cnt.k);
  c->add_option("--ell", cnt.ell);
  c->add_option("--deltas", cnt.deltas, "conflict degrees for sizes 2, 3, ...");
  c->add_option("--m", cnt.length, "matching size");
  c->add_option("--eps", cnt.eps);
  c->add_option("--format", cnt.format)->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*r) return cmd_run(run);
    if (*v) return cmd_verify(ver);
    if (*t) return cmd_trajectory(tr);
    if (*c) return cmd_count(cnt);
  } catch (const cfm::BudgetError& e) {
    std::cerr << "budget refused: " << e.what() << "\n";
    return kBudget;
  } catch (const cfm::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const cfm::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
