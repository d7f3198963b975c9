// Copyright 2026 The specrad Authors.
// SPDX-License-Identifier: Apache-2.0

#include "specrad/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "specrad/eigen_engine.hpp"
#include "specrad/error.hpp"
#include "specrad/graph.hpp"
#include "specrad/impact.hpp"
#include "specrad/json_io.hpp"
#include "specrad/perturbation.hpp"
#include "specrad/sis.hpp"
#include "specrad/toeplitz.hpp"

namespace specrad::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Common {
  unsigned threads = 0;
  std::string precision = "6";
  int index_base = 1;
  std::string format = "auto";
  bool vectors = false;
  bool timings = false;
  double tol = 1e-10;
};

class Timer {
 public:
  explicit Timer(bool enabled) : enabled_(enabled) {}
  template <class F>
  auto time(const std::string& name, F&& f) {
    const auto start = Clock::now();
    auto result = f();
    if (enabled_)
      entries_[name] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return result;
  }
  void attach(json& report) const {
    if (!enabled_) return;
    json t;
    for (const auto& [k, ms] : entries_) t[k] = ms;
    report["timings_ms"] = t;
  }

 private:
  bool enabled_;
  std::map<std::string, double> entries_;
};

NumberFormat number_format(const Common& c) {
  if (c.precision == "full") return NumberFormat::full();
  NumberFormat f;
  try {
    std::size_t used = 0;
    f.decimals = std::stoi(c.precision, &used);
    if (used != c.precision.size() || f.decimals < 0 || f.decimals > 17) throw 0;
  } catch (...) {
    throw CLI::ValidationError("--precision", "expected an integer in [0, 17] or 'full'");
  }
  f.small_significant = std::max(f.decimals, 1);
  return f;
}

unsigned thread_count(const Common& c, const CLI::App& app) {
  if (app.get_option("--threads")->count() > 0) return c.threads;
  if (const char* env = std::getenv("SPECRAD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return static_cast<unsigned>(v);
  }
  return 0;
}

SolverOptions solver_options(const Common& c, unsigned threads) {
  SolverOptions o;
  o.tol = c.tol;
  o.threads = threads;
  o.validate();
  return o;
}

struct LoadedGraph {
  std::string path;
  EdgeFormat format;
  LoadResult loaded;
};

LoadedGraph load_graph(const std::string& path, const Common& c) {
  EdgeFormat fmt = format_from_path(path);
  if (c.format == "tsv") fmt = EdgeFormat::tsv;
  if (c.format == "mtx") fmt = EdgeFormat::matrix_market;
  return {path, fmt, load_edge_file(path, fmt, c.index_base)};
}

json describe_input(const LoadedGraph& g, const SccReport& scc) {
  return {{"path", g.path},
          {"format", g.format == EdgeFormat::tsv ? "tsv" : "mtx"},
          {"n", g.loaded.matrix.n()},
          {"m", g.loaded.matrix.m()},
          {"self_loops_dropped", g.loaded.self_loops_dropped},
          {"components", scc.component_count},
          {"irreducible", scc.is_irreducible}};
}

json threshold_json(double t, const NumberFormat& f) { return format_number(t, f); }

MaskChain read_mask_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("file not found: " + path);
  std::vector<std::pair<long, std::pair<double, double>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string id, win, wout, extra;
    if (!std::getline(ss, id, ',') || !std::getline(ss, win, ',') || !std::getline(ss, wout, ','))
      throw ParseError("expected person_id,w_in,w_out", line_no);
    if (std::getline(ss, extra, ',')) throw ParseError("too many fields", line_no);
    if (rows.empty() && id == "person_id") continue;
    try {
      std::size_t a = 0, b = 0, c = 0;
      const long pid = std::stol(id, &a);
      const double wi = std::stod(win, &b);
      const double wo = std::stod(wout, &c);
      if (a != id.size() || b != win.size() || c != wout.size()) throw 0;
      rows.push_back({pid, {wi, wo}});
    } catch (...) {
      throw ParseError("malformed number", line_no);
    }
  }
  std::sort(rows.begin(), rows.end());
  MaskChain chain;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first)
      throw ValidationError("duplicate person_id " + std::to_string(rows[i].first));
    chain.w_in.push_back(rows[i].second.first);
    chain.w_out.push_back(rows[i].second.second);
  }
  chain.validate();
  return chain;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral robustness analysis of weighted networks", "specrad"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--threads", c.threads, "Worker threads (0 = all cores; env SPECRAD_THREADS)");
  app.add_option("--precision", c.precision, "Decimal places or 'full'")->capture_default_str();
  app.add_option("--index-base", c.index_base, "Node numbering in files and reports")
      ->check(CLI::IsMember({0, 1}))
      ->capture_default_str();
  app.add_option("--format", c.format, "Input format")
      ->check(CLI::IsMember({"auto", "tsv", "mtx"}))
      ->capture_default_str();
  app.add_flag("--vectors", c.vectors, "Include Perron vectors in reports");
  app.add_flag("--timings", c.timings, "Include wall-clock timings (not reproducible)");
  app.add_option("--tol", c.tol, "Eigen-solver residual tolerance")->capture_default_str();

  std::string file;

  auto* analyze = app.add_subcommand("analyze", "Perron pair, condition number and SCC summary");
  analyze->add_option("FILE", file, "Edge list or MatrixMarket file")->required();

  std::size_t top_k = 10;
  double rank_eps = 1.0;
  bool exact = false, symmetric = false, allow_reducible = false, csv = false;
  auto* rank = app.add_subcommand("rank", "Edges ranked by spectral impact");
  rank->add_option("FILE", file)->required();
  rank->add_option("--top-k", top_k)->check(CLI::PositiveNumber)->capture_default_str();
  rank->add_option("--epsilon", rank_eps, "Weight fraction removed (1 = delete the edge)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  rank->add_flag("--exact", exact, "Recompute rho for every ranked edge");
  rank->add_flag("--symmetric", symmetric, "Treat (h,k) and (k,h) as one undirected edge");
  rank->add_flag("--allow-reducing-cuts", allow_reducible,
                 "Do not demote removals that disconnect the graph");
  rank->add_flag("--csv", csv, "Emit CSV instead of JSON");

  std::string kind_name = "wilkinson";
  double perturb_eps = 0.0;
  auto* perturb = app.add_subcommand("perturb", "Worst-case structured perturbation report");
  perturb->add_option("FILE", file)->required();
  perturb->add_option("--kind", kind_name, "wilkinson | sparsity | toeplitz | ones | ones-sparsity")
      ->capture_default_str();
  perturb->add_option("--epsilon", perturb_eps)->required()->check(CLI::PositiveNumber);

  Index tn = 0;
  double t_sub = 0.0, t_super = 0.0;
  bool circulant = false, symmetrize_flag = false;
  auto* toep = app.add_subcommand("toeplitz", "Closed-form tridiagonal Toeplitz report");
  toep->add_option("--n", tn)->required()->check(CLI::Range(Index{2}, Index{1} << 40));
  toep->add_option("--sub", t_sub, "Subdiagonal value")->required()->check(CLI::PositiveNumber);
  toep->add_option("--super", t_super, "Superdiagonal value")
      ->required()
      ->check(CLI::PositiveNumber);
  toep->add_flag("--circulant", circulant, "Also report the circulant completion");
  toep->add_flag("--symmetrize", symmetrize_flag, "Also report (T + T^T) / 2");

  std::string profile;
  double mask_eps = 0.1;
  auto* mask = app.add_subcommand("mask", "Mask-wearing chain: analyze and rank contacts");
  mask->add_option("PROFILE", profile, "CSV with person_id,w_in,w_out")->required();
  mask->add_option("--top-k", top_k)->check(CLI::PositiveNumber)->capture_default_str();
  mask->add_option("--epsilon", mask_eps)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  mask->add_flag("--exact", exact);

  double beta = 0.0, delta = 0.0, t_end = 0.0, dt = 0.0, s0 = 0.1;
  std::string sweep, trajectory_csv;
  auto* sis = app.add_subcommand("sis", "SIS epidemic simulation and threshold sweep");
  sis->add_option("FILE", file)->required();
  sis->add_option("--beta", beta)->check(CLI::PositiveNumber);
  sis->add_option("--delta", delta)->required()->check(CLI::PositiveNumber);
  sis->add_option("--t-end", t_end, "Horizon (default 100 / delta)");
  sis->add_option("--dt", dt, "RK4 step (default 0.01 / max(beta ||A||_inf, delta))");
  sis->add_option("--s0", s0, "Initial infection level of every node")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sis->add_option("--sweep", sweep, "B1:B2:STEP beta range");
  sis->add_option("--trajectory-csv", trajectory_csv, "Write t,s_1..s_n to this file");

  std::string heat_kind = "wilkinson", heat_out;
  auto* heat = app.add_subcommand("heatmap", "log10 |E_ij| grid as CSV");
  heat->add_option("FILE", file)->required();
  heat->add_option("--kind", heat_kind)->capture_default_str();
  heat->add_option("--out", heat_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, err, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const NumberFormat nf = number_format(c);
    const unsigned threads = thread_count(c, app);
    const SolverOptions opts = solver_options(c, threads);
    Timer timer(c.timings);
    json report{{"tool", "specrad"}, {"version", kVersion}};

    if (analyze->parsed() || rank->parsed() || perturb->parsed() || heat->parsed() ||
        sis->parsed()) {
      const auto g = timer.time("load", [&] { return load_graph(file, c); });
      const auto& a = g.loaded.matrix;
      const auto scc = strongly_connected_components(a);
      report["input"] = describe_input(g, scc);

      if (heat->parsed()) {
        const auto kind = parse_perturbation_kind(heat_kind);
        const auto pair = perron_pair(a, opts);
        const auto e = build_perturbation(a, pair, kind);
        std::ofstream f(heat_out);
        if (!f) throw Error("cannot write " + heat_out);
        write_log10_heatmap(f, e, a.n());
        report["heatmap"] = {{"kind", to_string(kind)}, {"out", heat_out}, {"n", a.n()}};
        timer.attach(report);
        write_json(out, report);
        return 0;
      }

      if (sis->parsed()) {
        const auto pair = timer.time("perron", [&] { return perron_pair(a, opts); });
        SisParams p;
        p.delta = delta;
        p.t_end = t_end > 0.0 ? t_end : 100.0 / delta;
        p.dt = dt;
        p.s0.assign(static_cast<std::size_t>(a.n()), s0);
        report["rho"] = format_number(pair.rho, nf);
        report["epidemic_threshold"] = threshold_json(epidemic_threshold(pair), nf);
        if (!sweep.empty()) {
          double lo = 0, hi = 0, step = 0;
          char c1 = 0, c2 = 0;
          std::stringstream ss(sweep);
          if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !ss.eof())
            throw CLI::ValidationError("--sweep", "expected B1:B2:STEP");
          const auto betas = sweep_range(lo, hi, step);
          p.beta = betas.front();
          const auto points =
              timer.time("sweep", [&] { return sis_sweep(a, p, betas, threads); });
          json arr = json::array();
          for (const auto& pt : points) arr.push_back(to_json(pt, nf));
          report["sweep"] = {{"delta", format_number(delta, nf)},
                             {"t_end", format_number(p.t_end, nf)},
                             {"points", arr}};
        } else {
          if (!(beta > 0.0)) throw CLI::ValidationError("--beta", "required without --sweep");
          p.beta = beta;
          const auto traj = timer.time("simulate", [&] { return simulate_sis(a, p); });
          if (!trajectory_csv.empty()) {
            std::ofstream f(trajectory_csv);
            if (!f) throw Error("cannot write " + trajectory_csv);
            write_trajectory_csv(f, traj, nf.decimals < 0 ? -1 : std::max(nf.decimals, 10));
          }
          report["beta"] = format_number(beta, nf);
          report["delta"] = format_number(delta, nf);
          report["simulation"] = to_json(traj, nf, false);
        }
        timer.attach(report);
        write_json(out, report);
        return 0;
      }

      const auto pair = timer.time("perron", [&] { return perron_pair(a, opts); });
      report["perron"] = to_json(pair, nf, c.vectors);

      if (analyze->parsed()) {
        report["epidemic_threshold"] = threshold_json(epidemic_threshold(pair), nf);
      } else if (rank->parsed()) {
        RecommendOptions rec;
        rec.top_k = top_k;
        rec.mode = rank_eps >= 1.0 ? InterventionMode::remove : InterventionMode::downweight;
        rec.epsilon = rank_eps;
        rec.symmetric = symmetric;
        rec.require_irreducible = !allow_reducible;
        rec.exact_rescore = exact;
        const auto plan =
            timer.time("rank", [&] { return recommend_interventions(a, pair, rec, opts); });
        if (csv) {
          write_plan_csv(out, plan, c.index_base, nf.decimals);
          return 0;
        }
        report["plan"] = to_json(plan, nf, c.index_base);
      } else if (perturb->parsed()) {
        PerturbationSpec spec{parse_perturbation_kind(kind_name), perturb_eps};
        const auto res =
            timer.time("perturb", [&] { return perturbed_perron(a, pair, spec, opts); });
        report["perturbation"] = to_json(res.report, nf);
      }
      timer.attach(report);
      write_json(out, report);
      return 0;
    }

    if (toep->parsed()) {
      const TridiagToeplitz t{tn, t_sub, t_super};
      const auto pair = toeplitz_perron(t);
      report["model"] = {{"n", tn},
                         {"sub", format_number(t_sub, nf)},
                         {"super", format_number(t_super, nf)}};
      report["perron"] = to_json(pair, nf, c.vectors);
      report["epidemic_threshold"] = threshold_json(epidemic_threshold(pair), nf);
      if (circulant) {
        const auto cp = timer.time("circulant", [&] { return perron_pair(make_circulant(t), opts); });
        report["circulant"] = {{"rho", format_number(cp.rho, nf)},
                               {"kappa", format_number(cp.kappa, nf)}};
      }
      if (symmetrize_flag)
        report["symmetrized"] = {{"rho", format_number(symmetrized_toeplitz_perron(t), nf)}};
      timer.attach(report);
      write_json(out, report);
      return 0;
    }

    if (mask->parsed()) {
      const auto chain = read_mask_profile(profile);
      const auto a = build_mask_chain(chain);
      const auto pair = timer.time("perron", [&] { return perron_pair(a, opts); });
      RecommendOptions rec;
      rec.top_k = top_k;
      rec.mode = mask_eps >= 1.0 ? InterventionMode::remove : InterventionMode::downweight;
      rec.epsilon = mask_eps;
      rec.exact_rescore = exact;
      const auto plan = recommend_interventions(a, pair, rec, opts);
      report["input"] = {{"path", profile}, {"people", a.n()}, {"m", a.m()}};
      report["perron"] = to_json(pair, nf, c.vectors);
      report["epidemic_threshold"] = threshold_json(epidemic_threshold(pair), nf);
      report["plan"] = to_json(plan, nf, c.index_base);
      timer.attach(report);
      write_json(out, report);
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    err << e.get_name() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    write_json(out, json{{"error", e.what()}});
    return 1;
  }
  return 2;
}

}  // namespace specrad::cli
