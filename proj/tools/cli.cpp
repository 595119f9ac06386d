#include "fracdim/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fracdim/errors.hpp"
#include "fracdim/experiments.hpp"
#include "fracdim/graph_io.hpp"
#include "fracdim/lattice.hpp"
#include "fracdim/network.hpp"
#include "fracdim/penergy.hpp"
#include "fracdim/spectral.hpp"
#include "json.hpp"

namespace fracdim {

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using Json = nlohmann::ordered_json;

// Thrown for bad flag values detected after parsing.
struct UsageError : Error {
  using Error::Error;
};

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

Json provenance(const std::string& command, const Json& config) {
  return {{"tool", "fracdim"},
          {"version", kToolVersion},
          {"command", command},
          {"config", config},
          {"config_hash", hex(fnv1a(command + ":" + config.dump()))}};
}

std::string comment_header(const Json& prov) {
  return "# fracdim " + prov["version"].get<std::string>() + " " + prov["command"].get<std::string>() +
         " config_hash=" + prov["config_hash"].get<std::string>() + " config=" + prov["config"].dump() + "\n";
}

// Writes to the named file, or to `out` when the path is empty.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

struct GraphArgs {
  std::string path;
  std::string family;
  std::string schedule;
  int level = -1;

  void add(CLI::App* cmd) {
    cmd->add_option("--graph", path, "graph file written by 'generate'");
    cmd->add_option("--family", family, "hybrid | vicsek | sc_corner | sc_center | blowup");
    cmd->add_option("--schedule", schedule, "const0 | const1 | fstar | bits:<0/1...> | shift:<a>:<spec>");
    cmd->add_option("--level", level, "level n >= 0");
  }

  Json config() const {
    if (!path.empty()) return {{"graph", path}};
    return {{"family", family}, {"schedule", schedule.empty() ? Json(nullptr) : Json(schedule)}, {"level", level}};
  }

  std::optional<Schedule> parsed_schedule() const {
    if (schedule.empty()) return std::nullopt;
    try {
      return Schedule::parse(schedule);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
  }

  FractalGraph load() const {
    if (!path.empty()) return read_graph_file(path);
    if (family.empty() || level < 0) throw UsageError("give --graph or --family with --level");
    Family fam;
    try {
      fam = parse_family(family);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    const auto sched = parsed_schedule();
    if (fam == Family::hybrid && !sched) throw UsageError("--family hybrid needs --schedule");
    if (fam == Family::blowup && !sched) throw UsageError("--family blowup needs --schedule");
    if (level > 40) throw BudgetExceeded("level " + std::to_string(level) + " is beyond any budget");
    const double estimate = estimated_vertex_count(fam, sched, level);
    if (estimate > 4e6)
      throw BudgetExceeded("level " + std::to_string(level) + " would have about " + std::to_string(estimate) +
                           " vertices");
    if (fam == Family::blowup) return generate_blowup(*sched, level);
    return generate_level(fam, sched, level);
  }
};

std::vector<Vertex> select(const FractalGraph& g, const std::vector<std::string>& specs) {
  std::vector<Vertex> out;
  for (const auto& s : specs) {
    if (s == "left" || s == "right") {
      const auto faces = boundary_sets(g);
      const auto& side = s == "left" ? faces.left : faces.right;
      out.insert(out.end(), side.begin(), side.end());
    } else if (s.size() == 2 && s[0] == 'p' && s[1] >= '0' && s[1] <= '8') {
      const auto v = g.index_of(g.named_point(s[1] - '0'));
      if (!v) throw UsageError("point " + s + " is not a vertex of this graph");
      out.push_back(*v);
    } else if (s.rfind("idx:", 0) == 0) {
      std::size_t idx = 0;
      try {
        idx = std::stoull(s.substr(4));
      } catch (const std::exception&) {
        throw UsageError("bad vertex index '" + s + "'");
      }
      if (idx >= g.vertex_count()) throw UsageError("vertex index out of range: " + s);
      out.push_back(idx);
    } else if (const auto comma = s.find(','); comma != std::string::npos) {
      LatticePoint p;
      try {
        p = {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
      } catch (const std::exception&) {
        throw UsageError("bad coordinate '" + s + "'");
      }
      const auto v = g.index_of(p);
      if (!v) throw UsageError("no vertex at " + s);
      out.push_back(*v);
    } else {
      throw UsageError("unknown vertex selector '" + s + "'");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

unsigned thread_count() {
  if (const char* env = std::getenv("FRACDIM_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractal graph resistance, p-energy and heat-kernel laboratory", "fracdim"};
  app.set_version_flag("--version", std::string("fracdim ") + kToolVersion);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a level graph or blow-up truncation");
  GraphArgs gen_graph;
  std::string gen_out;
  gen->add_option("--family", gen_graph.family)->required();
  gen->add_option("--schedule", gen_graph.schedule);
  gen->add_option("--level", gen_graph.level)->required();
  gen->add_option("--out", gen_out, "output path (stdout when omitted)");

  // resistance
  auto* res = app.add_subcommand("resistance", "effective resistance between two vertex sets");
  GraphArgs res_graph;
  res_graph.add(res);
  std::vector<std::string> res_source, res_sink;
  std::string res_flow, res_potential, res_out;
  double res_tol = 1e-10;
  res->add_option("--source", res_source, "p0..p8, left, right, idx:N or a,b (repeatable)")->required();
  res->add_option("--sink", res_sink, "same selectors as --source")->required();
  res->add_option("--tol", res_tol, "relative residual tolerance");
  res->add_option("--flow-out", res_flow, "CSV of the unit flow (i,j,flow)");
  res->add_option("--potential-out", res_potential, "CSV of the potential (vertex_index,a,b,value)");
  res->add_option("--out", res_out, "JSON output path");

  // penergy
  auto* pen = app.add_subcommand("penergy", "discrete p-energies");
  pen->require_subcommand(1);
  auto* pen_single = pen->add_subcommand("single", "face-to-face p-energy of one graph");
  GraphArgs pen_graph;
  pen_graph.add(pen_single);
  double pen_p = 2.0;
  std::vector<std::string> pen_left{"left"}, pen_right{"right"};
  std::string pen_out, pen_minimizer;
  pen_single->add_option("--p", pen_p)->required();
  pen_single->add_option("--left", pen_left);
  pen_single->add_option("--right", pen_right);
  pen_single->add_option("--minimizer-out", pen_minimizer, "CSV of the minimizer");
  pen_single->add_option("--out", pen_out);
  auto* pen_series = pen->add_subcommand("sc-series", "carpet energies E_{p,k}, k = 0..kmax, as CSV");
  double series_p = 2.0;
  int series_kmax = 4;
  std::string series_out;
  pen_series->add_option("--p", series_p)->required();
  pen_series->add_option("--kmax", series_kmax);
  pen_series->add_option("--out", series_out);
  auto* pen_arc = pen->add_subcommand("arc", "bisection for gamma_p = 1");
  std::string arc_provider = "sc", arc_schedule = "fstar", arc_out;
  int arc_kmax = 4;
  double arc_lo = 1.25, arc_hi = 3.0, arc_tol = 0.01;
  pen_arc->add_option("--provider", arc_provider, "sc | hybrid");
  pen_arc->add_option("--schedule", arc_schedule, "schedule for the hybrid provider");
  pen_arc->add_option("--kmax", arc_kmax);
  pen_arc->add_option("--plo", arc_lo);
  pen_arc->add_option("--phi", arc_hi);
  pen_arc->add_option("--tol", arc_tol);
  pen_arc->add_option("--out", arc_out);

  // heatkernel
  auto* hk = app.add_subcommand("heatkernel", "on-diagonal heat kernel h_2n(x,x) as CSV");
  GraphArgs hk_graph;
  hk_graph.add(hk);
  std::int64_t hk_nmax = 100;
  std::string hk_vertex, hk_out;
  hk->add_option("--nmax", hk_nmax);
  hk->add_option("--vertex", hk_vertex, "base vertex selector (default: central vertex)");
  hk->add_option("--out", hk_out);

  // dims
  auto* dims = app.add_subcommand("dims", "dimension fits on blow-up truncations or reference lattices");
  std::string dims_kind;
  dims->add_option("kind", dims_kind, "ds | beta | alpha | consistency")
      ->required()
      ->check(CLI::IsMember({"ds", "beta", "alpha", "consistency"}));
  std::string dims_family = "vicsek", dims_schedule, dims_out;
  int dims_level = 6;
  std::int64_t dims_nmax = 500, dims_radius = 0, dims_lo = 0, dims_hi = 0;
  dims->add_option("--family", dims_family, "vicsek | hybrid | line | lattice2d");
  dims->add_option("--schedule", dims_schedule, "schedule for --family hybrid");
  dims->add_option("--level", dims_level, "blow-up truncation level");
  dims->add_option("--nmax", dims_nmax, "heat-kernel steps");
  dims->add_option("--radius", dims_radius, "reference lattice radius (default nmax + 2)");
  dims->add_option("--window-lo", dims_lo, "fit window start (default nmax / 50)");
  dims->add_option("--window-hi", dims_hi, "fit window end (default nmax)");
  dims->add_option("--out", dims_out);

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a reproduction experiment and report");
  std::string exp_id, exp_out, exp_md;
  ExperimentConfig exp_cfg;
  std::vector<std::string> all_ids = experiment_ids();
  all_ids.push_back("all");
  exp->add_option("id", exp_id, "experiment id or 'all'")->required()->check(CLI::IsMember(all_ids));
  exp->add_option("--nmax", exp_cfg.n_max);
  exp->add_option("--schedules", exp_cfg.schedules);
  exp->add_option("--level", exp_cfg.level);
  exp->add_option("--samples", exp_cfg.samples);
  exp->add_option("--seed", exp_cfg.seed);
  exp->add_option("--kmax", exp_cfg.k_max);
  exp->add_option("--plo", exp_cfg.p_lo);
  exp->add_option("--phi", exp_cfg.p_hi);
  exp->add_option("--ptol", exp_cfg.p_tolerance);
  exp->add_option("--ds-level", exp_cfg.ds_level);
  exp->add_option("--ds-steps", exp_cfg.ds_steps);
  exp->add_option("--out", exp_out, "JSON report path");
  exp->add_option("--markdown", exp_md, "Markdown report path");

  std::vector<const char*> argv{"fracdim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const auto g = gen_graph.load();
      const Json cfg = gen_graph.config();
      emit(gen_out, out, comment_header(provenance("generate", cfg)) + graph_to_string(g));
      return kExitOk;
    }

    if (res->parsed()) {
      const auto g = res_graph.load();
      const auto a = select(g, res_source);
      const auto b = select(g, res_sink);
      WeightedNetwork net(g.graph());
      SolverOptions opts;
      opts.relative_tolerance = res_tol;
      const auto sol = solve_dirichlet(net, a, b, opts);
      const auto flow = extract_unit_flow(sol, net);
      const auto diag = check_flow(net, flow, a, b);
      Json cfg = res_graph.config();
      cfg["source"] = res_source;
      cfg["sink"] = res_sink;
      cfg["tol"] = res_tol;
      Json j = provenance("resistance", cfg);
      j["vertices"] = g.vertex_count();
      j["edges"] = g.graph().edge_count();
      j["resistance"] = sol.resistance();
      j["energy"] = sol.energy;
      j["iterations"] = sol.iterations;
      j["residual"] = sol.residual_norm;
      j["flow_energy"] = diag.energy;
      j["duality_product"] = diag.energy * sol.energy;
      j["max_interior_divergence"] = diag.max_interior_divergence;
      if (!res_flow.empty()) {
        std::ostringstream s;
        write_flow_csv(s, g.graph(), flow);
        emit(res_flow, out, comment_header(j) + s.str());
      }
      if (!res_potential.empty()) {
        std::ostringstream s;
        write_potential_csv(s, g, sol.values);
        emit(res_potential, out, comment_header(j) + s.str());
      }
      emit(res_out, out, j.dump(2) + "\n");
      return kExitOk;
    }

    if (pen_single->parsed()) {
      const auto g = pen_graph.load();
      const auto l = select(g, pen_left);
      const auto r = select(g, pen_right);
      const auto result = p_energy(g.graph(), l, r, pen_p);
      Json cfg = pen_graph.config();
      cfg["p"] = pen_p;
      cfg["left"] = pen_left;
      cfg["right"] = pen_right;
      Json j = provenance("penergy single", cfg);
      j["value"] = result.value;
      j["iterations"] = result.iterations;
      j["converged"] = result.converged;
      j["pre_clip_value"] = result.pre_clip_value;
      if (!pen_minimizer.empty()) {
        std::ostringstream s;
        write_potential_csv(s, g, result.minimizer);
        emit(pen_minimizer, out, comment_header(j) + s.str());
      }
      emit(pen_out, out, j.dump(2) + "\n");
      return result.converged ? kExitOk : kExitAssertion;
    }

    if (pen_series->parsed()) {
      if (series_kmax < 0 || series_kmax > 5) throw UsageError("--kmax must be in 0..5");
      const auto series = sc_energy_series(series_p, series_kmax);
      const Json cfg{{"p", series_p}, {"kmax", series_kmax}};
      std::ostringstream s;
      s << comment_header(provenance("penergy sc-series", cfg));
      s << "p,k,energy,ratio,iterations,converged\n";
      s.precision(17);
      bool all = true;
      for (std::size_t k = 0; k < series.results.size(); ++k) {
        const auto& r = series.results[k];
        s << series_p << ',' << k << ',' << r.value << ',';
        if (k > 0) s << series.series.ratios[k - 1];
        s << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
        all = all && r.converged;
      }
      emit(series_out, out, s.str());
      return all ? kExitOk : kExitAssertion;
    }

    if (pen_arc->parsed()) {
      GammaProvider provider;
      Json cfg{{"provider", arc_provider}, {"kmax", arc_kmax}, {"plo", arc_lo}, {"phi", arc_hi}, {"tol", arc_tol}};
      if (arc_provider == "sc") {
        provider = sc_gamma_provider(arc_kmax);
      } else if (arc_provider == "hybrid") {
        provider = hybrid_gamma_provider(arc_kmax, GraphArgs{"", "", arc_schedule, 0}.parsed_schedule().value());
        cfg["schedule"] = arc_schedule;
      } else {
        throw UsageError("--provider must be sc or hybrid");
      }
      const auto est = estimate_arc_dimension(provider, arc_lo, arc_hi, arc_tol);
      Json j = provenance("penergy arc", cfg);
      j["p_star"] = est.p_star;
      j["bracket"] = {est.p_lo, est.p_hi};
      for (const auto& [p, g] : est.gamma_table)
        j["gamma_table"].push_back({{"p", p}, {"gamma_last", g.last}, {"gamma_penultimate", g.penultimate}});
      j["diagnostics"] = {{"gamma_decreasing", est.gamma_decreasing},
                          {"p_star_penultimate", est.p_star_penultimate ? Json(*est.p_star_penultimate) : Json()},
                          {"bias", est.bias}};
      emit(arc_out, out, j.dump(2) + "\n");
      return est.gamma_decreasing ? kExitOk : kExitAssertion;
    }

    if (hk->parsed()) {
      const auto g = hk_graph.load();
      WeightedNetwork net(g.graph());
      HeatKernelOptions opts;
      if (g.is_blowup()) opts.truncation_boundary = truncation_boundary_vertices(g);
      Vertex x = g.central_vertex();
      if (!hk_vertex.empty()) {
        const auto sel = select(g, {hk_vertex});
        if (sel.size() != 1) throw UsageError("--vertex must select exactly one vertex");
        x = sel.front();
      }
      const auto series = heat_kernel_diagonal(net, x, hk_nmax, opts);
      Json cfg = hk_graph.config();
      cfg["nmax"] = hk_nmax;
      cfg["vertex"] = hk_vertex.empty() ? Json("central") : Json(hk_vertex);
      std::ostringstream s;
      s << comment_header(provenance("heatkernel", cfg));
      write_heat_kernel_csv(s, series);
      emit(hk_out, out, s.str());
      return kExitOk;
    }

    if (dims->parsed()) {
      Json cfg{{"kind", dims_kind}, {"family", dims_family}, {"level", dims_level}, {"nmax", dims_nmax}};
      Json j;
      auto fit_json = [](const ExponentFit& f) {
        return Json{{"slope", f.slope},
                    {"intercept", f.intercept},
                    {"window", {f.window_min, f.window_max}},
                    {"stderr", f.stderr_slope},
                    {"points", f.points}};
      };
      if (dims_family == "line" || dims_family == "lattice2d") {
        if (dims_kind != "ds") throw UsageError("reference lattices support 'dims ds' only");
        const std::int64_t radius = dims_radius > 0 ? dims_radius : dims_nmax + 2;
        cfg["radius"] = radius;
        const auto lattice = dims_family == "line" ? line_lattice(radius) : diagonal_lattice_ball(radius);
        WeightedNetwork net(lattice.graph);
        HeatKernelOptions opts;
        opts.truncation_boundary = lattice.boundary;
        const auto series = heat_kernel_diagonal(net, lattice.center, dims_nmax, opts);
        const auto lo = dims_lo > 0 ? dims_lo : std::max<std::int64_t>(1, dims_nmax / 50);
        const auto hi = dims_hi > 0 ? dims_hi : dims_nmax;
        cfg["window"] = {lo, hi};
        j = provenance("dims", cfg);
        j["fit"] = fit_json(estimate_ds(series, lo, hi));
      } else {
        Schedule sched = Schedule::const0();
        if (dims_family == "hybrid") {
          const auto s = GraphArgs{"", "", dims_schedule, 0}.parsed_schedule();
          if (!s) throw UsageError("--family hybrid needs --schedule");
          sched = *s;
          cfg["schedule"] = dims_schedule;
        } else if (dims_family != "vicsek") {
          throw UsageError("--family must be vicsek, hybrid, line or lattice2d");
        }
        if (estimated_vertex_count(Family::blowup, sched, dims_level) > 4e6)
          throw BudgetExceeded("truncation level too large");
        const bool need_alpha = dims_kind == "alpha" || dims_kind == "consistency";
        const auto summary = blowup_spectral_summary(sched, dims_level, dims_nmax, need_alpha);
        j = provenance("dims", cfg);
        j["vertices"] = summary.vertices;
        j["exactness_horizon"] = summary.heat.exactness_horizon;
        if (dims_kind == "ds") {
          j["fit"] = fit_json(summary.ds);
        } else if (dims_kind == "beta") {
          j["fit"] = fit_json(summary.beta);
        } else if (dims_kind == "alpha") {
          j["fit"] = fit_json(summary.alpha.fit);
          j["constant"] = summary.alpha.constant;
        } else {
          j["ds"] = fit_json(summary.ds);
          j["alpha"] = fit_json(summary.alpha.fit);
          j["beta"] = fit_json(summary.beta);
          j["predicted_ds"] = summary.consistency.predicted;
          j["gap"] = summary.consistency.gap;
          j["both_below_two"] = summary.consistency.both_below_two;
        }
      }
      emit(dims_out, out, j.dump(2) + "\n");
      return kExitOk;
    }

    if (exp->parsed()) {
      std::vector<ExperimentReport> reports;
      if (exp_id == "all")
        reports = run_all_experiments(exp_cfg, thread_count());
      else
        reports.push_back(run_experiment(exp_id, exp_cfg));
      Json j = provenance("experiment " + exp_id, to_json(exp_cfg));
      bool ok = true;
      std::string md;
      for (const auto& r : reports) {
        j["reports"].push_back(to_json(r));
        md += to_markdown(r) + "\n";
        ok = ok && r.passed();
      }
      j["passed"] = ok;
      emit(exp_out, out, j.dump(2) + "\n");
      if (!exp_md.empty()) emit(exp_md, out, md);
      for (const auto& r : reports)
        err << r.id << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.failures() << " failed)\n";
      return ok ? kExitOk : kExitAssertion;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DisconnectedError& e) {
    err << "disconnected: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
  return kExitUsage;
}

}  // namespace fracdim
