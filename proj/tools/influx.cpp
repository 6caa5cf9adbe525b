#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "influx/compare.hpp"
#include "influx/fpe.hpp"
#include "influx/gen.hpp"
#include "influx/graph.hpp"
#include "influx/io.hpp"
#include "influx/manifest.hpp"
#include "influx/oracle.hpp"
#include "influx/rng.hpp"
#include "influx/sim.hpp"
#include "influx/svg.hpp"

namespace fs = std::filesystem;
using namespace influx;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void parse_cli(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    throw;
  }
}

NodeSet parse_sources(const std::string& spec) {
  std::vector<NodeId> ids;
  if (spec.empty()) return NodeSet{};
  for (const auto& field : split_csv_line(spec))
    ids.push_back(static_cast<NodeId>(std::stoul(field)));
  return NodeSet(std::move(ids));
}

std::vector<std::vector<double>> parse_matrix(const std::string& spec) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(spec);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<double> r;
    for (const auto& field : split_csv_line(row)) r.push_back(std::stod(field));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string resolve(const std::string& out_dir, const std::string& path) {
  if (out_dir.empty() || fs::path(path).is_absolute()) return path;
  fs::create_directories(out_dir);
  return (fs::path(out_dir) / path).string();
}

void write_cascades(const std::vector<Cascade>& cascades,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& c : cascades) {
    out << "# source=";
    bool first = true;
    for (NodeId s : c.sources) {
      if (!first) out << ";";
      out << s;
      first = false;
    }
    out << "\n# horizon=" << format_double(c.horizon) << "\n";
    for (const auto& ev : c.events)
      out << format_double(ev.time) << "," << ev.node << ","
          << (ev.kind == EventKind::activate ? "activate" : "recover") << "\n";
  }
}

int run(const std::vector<std::string>& argv);

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct CommonOpts {
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_option("--workers", c.workers, "worker threads (0 = default)");
  cmd->add_option("--out-dir", c.out_dir, "directory for outputs");
}

void finish_manifest(RunManifest& m, const std::string& primary_output) {
  if (fs::exists(primary_output))
    m.output_digests[primary_output] = file_digest(primary_output);
  m.save(primary_output + ".manifest.json");
}

int cmd_generate(const std::vector<std::string>& args) {
  CLI::App app{"generate a random propagation network"};
  CommonOpts common;
  std::string family = "er", out = "net.csv", kron_seed_spec;
  GeneratorSpec spec;
  double rate_lo = 0, rate_hi = 1;
  std::size_t nodes = 0;
  app.add_option("--family", family, "er|sw|sf|kron")->required();
  app.add_option("--nodes", nodes, "node count K")->required();
  app.add_option("--avg-degree", spec.avg_degree, "ER expected out-degree");
  app.add_option("--ring-degree", spec.ring_degree, "small-world ring degree");
  app.add_option("--rewire-prob", spec.rewire_prob, "small-world shortcut probability");
  app.add_option("--attach", spec.attach_count, "scale-free edges per node");
  app.add_option("--kron-seed", kron_seed_spec,
                 "kronecker seed, e.g. '0.9,0.5;0.5,0.3'");
  app.add_option("--kron-power", spec.kron_power, "kronecker power");
  app.add_option("--rate-lo", rate_lo, "uniform rate lower bound");
  app.add_option("--rate-hi", rate_hi, "uniform rate upper bound");
  app.add_option("--out", out, "edge-list output");
  add_common(&app, common);
  parse_cli(app, args);

  spec.family = family_from_name(family);
  spec.node_count = static_cast<NodeId>(nodes);
  spec.seed = common.seed;
  if (!kron_seed_spec.empty()) spec.kron_seed = parse_matrix(kron_seed_spec);

  Timer timer;
  PropagationNetwork net =
      sample_rates(generate(spec), common.seed, rate_lo, rate_hi);
  std::string out_path = resolve(common.out_dir, out);
  save_edge_list(net, out_path);

  nlohmann::json meta;
  meta["family"] = family_name(spec.family);
  meta["nodes"] = spec.node_count;
  meta["avg_degree"] = spec.avg_degree;
  meta["ring_degree"] = spec.ring_degree;
  meta["rewire_prob"] = spec.rewire_prob;
  meta["attach_count"] = spec.attach_count;
  meta["kron_power"] = spec.kron_power;
  meta["kron_seed"] = spec.kron_seed;
  meta["rate_lo"] = rate_lo;
  meta["rate_hi"] = rate_hi;
  meta["seed"] = common.seed;
  meta["rng_algorithm"] = kRngAlgorithm;
  meta["edges"] = net.edge_count();
  std::ofstream meta_out(out_path + ".meta.json");
  meta_out << meta.dump(2) << "\n";

  RunManifest manifest;
  manifest.subcommand = "generate";
  manifest.args = args;
  manifest.seed = common.seed;
  manifest.rng_algorithm = kRngAlgorithm;
  manifest.timings_seconds["generate"] = timer.seconds();
  finish_manifest(manifest, out_path);
  std::cout << "wrote " << out_path << " (" << net.node_count() << " nodes, "
            << net.edge_count() << " edges)\n";
  return 0;
}

int cmd_simulate(const std::vector<std::string>& args) {
  CLI::App app{"Monte-Carlo cascade simulation"};
  CommonOpts common;
  std::string net_path, attr_path, sources_spec, out = "influence.csv";
  std::string out_density, out_rates, out_cascades;
  double horizon = 10;
  std::size_t cascades = 5000, t_points = 200;
  app.add_option("--net", net_path, "edge-list file")->required();
  app.add_option("--node-attrs", attr_path, "node attribute file");
  app.add_option("--sources", sources_spec, "comma-separated source ids");
  app.add_option("--horizon", horizon, "simulation horizon T");
  app.add_option("--cascades", cascades, "number of cascades");
  app.add_option("--t-points", t_points, "time grid points");
  app.add_option("--out", out, "influence curve CSV");
  app.add_option("--emit-density", out_density, "empirical density CSV");
  app.add_option("--emit-rates", out_rates, "empirical q_k(t) CSV");
  app.add_option("--emit-cascades", out_cascades, "raw cascade events");
  add_common(&app, common);
  parse_cli(app, args);

  RunManifest manifest;
  manifest.subcommand = "simulate";
  manifest.args = args;
  manifest.seed = common.seed;
  manifest.rng_algorithm = kRngAlgorithm;
  manifest.input_digests[net_path] = file_digest(net_path);

  PropagationNetwork net = attr_path.empty()
                               ? load_edge_list(net_path)
                               : load_edge_list(net_path, attr_path);
  NodeSet sources = parse_sources(sources_spec);
  auto grid = uniform_grid(horizon, t_points);

  Timer timer;
  auto ensemble =
      run_ensemble(net, sources, horizon, cascades, common.seed, common.workers);
  manifest.timings_seconds["simulate"] = timer.seconds();

  Timer agg;
  auto density = empirical_density(ensemble, net.node_count(), grid);
  Curve sigma;
  sigma.t = density.t;
  for (const auto& row : density.rho) sigma.value.push_back(influence(row));
  manifest.timings_seconds["aggregate"] = agg.seconds();

  std::string out_path = resolve(common.out_dir, out);
  save_curve(sigma, out_path);
  if (!out_density.empty())
    save_density(density, resolve(common.out_dir, out_density));
  if (!out_rates.empty())
    save_rate_table(
        empirical_rates(density, 10.0 / static_cast<double>(cascades)),
        resolve(common.out_dir, out_rates));
  if (!out_cascades.empty())
    write_cascades(ensemble, resolve(common.out_dir, out_cascades));
  finish_manifest(manifest, out_path);
  std::cout << "wrote " << out_path << " (" << cascades << " cascades)\n";
  return 0;
}

int cmd_predict(const std::vector<std::string>& args) {
  CLI::App app{"Fokker-Planck influence prediction"};
  CommonOpts common;
  std::string net_path, attr_path, sources_spec, out = "curve.csv";
  std::string out_density, out_rates, method = "dist", solver = "expm";
  double t_max = 10;
  std::size_t t_points = 200, tree_width = 64;
  app.add_option("--net", net_path, "edge-list file")->required();
  app.add_option("--node-attrs", attr_path, "node attribute file");
  app.add_option("--sources", sources_spec, "comma-separated source ids");
  app.add_option("--method", method, "dist|tree");
  app.add_option("--tree-width", tree_width, "candidates per tree layer");
  app.add_option("--solver", solver, "rk4|expm");
  app.add_option("--t-max", t_max, "horizon");
  app.add_option("--t-points", t_points, "time grid points");
  app.add_option("--out", out, "influence curve CSV");
  app.add_option("--emit-density", out_density, "density CSV");
  app.add_option("--emit-rates", out_rates, "estimated rates CSV");
  add_common(&app, common);
  parse_cli(app, args);

  RunManifest manifest;
  manifest.subcommand = "predict";
  manifest.args = args;
  manifest.rng_algorithm = kRngAlgorithm;
  manifest.input_digests[net_path] = file_digest(net_path);

  PropagationNetwork net = attr_path.empty()
                               ? load_edge_list(net_path)
                               : load_edge_list(net_path, attr_path);
  PredictOptions opts;
  if (method == "dist") opts.method = Method::dist;
  else if (method == "tree") opts.method = Method::tree;
  else throw CLI::ValidationError("--method must be dist or tree");
  if (solver == "rk4") opts.solver = Solver::rk4;
  else if (solver == "expm") opts.solver = Solver::expm;
  else throw CLI::ValidationError("--solver must be rk4 or expm");
  opts.tree_width = tree_width;
  if (common.workers > 1) opts.solve.exec = kernels::Exec::parallel;

  Timer timer;
  Prediction p = predict(net, parse_sources(sources_spec),
                         uniform_grid(t_max, t_points), opts);
  manifest.timings_seconds["predict"] = timer.seconds();

  std::string out_path = resolve(common.out_dir, out);
  save_curve(p.curve, out_path);
  if (!out_density.empty())
    save_density(p.density, resolve(common.out_dir, out_density));
  if (!out_rates.empty()) {
    RateTable table;
    table.t = {0.0};
    table.q = {p.profile.q};
    save_rate_table(table, resolve(common.out_dir, out_rates));
  }
  finish_manifest(manifest, out_path);
  std::cout << "wrote " << out_path << " (method " << p.method_name
            << ", solver " << p.solver_name << ")\n";
  return 0;
}

int cmd_oracle(const std::vector<std::string>& args) {
  CLI::App app{"exact small-network Markov oracle"};
  CommonOpts common;
  std::string net_path, attr_path, sources_spec, out = "oracle.csv";
  std::string out_density, out_rates;
  double t_max = 5;
  std::size_t t_points = 100, limit = 16;
  app.add_option("--net", net_path, "edge-list file")->required();
  app.add_option("--node-attrs", attr_path, "node attribute file");
  app.add_option("--sources", sources_spec, "comma-separated source ids");
  app.add_option("--t-max", t_max, "horizon");
  app.add_option("--t-points", t_points, "time grid points");
  app.add_option("--state-limit", limit, "max K for the 2^K chain");
  app.add_option("--out", out, "exact influence curve CSV");
  app.add_option("--emit-density", out_density, "exact lumped density CSV");
  app.add_option("--emit-rates", out_rates, "exact q_k(t) CSV");
  add_common(&app, common);
  parse_cli(app, args);

  RunManifest manifest;
  manifest.subcommand = "oracle";
  manifest.args = args;
  manifest.input_digests[net_path] = file_digest(net_path);

  PropagationNetwork net = attr_path.empty()
                               ? load_edge_list(net_path)
                               : load_edge_list(net_path, attr_path);
  OracleOptions opts;
  opts.state_limit = static_cast<NodeId>(limit);
  Timer timer;
  ExactSolution sol = exact_solve(net, parse_sources(sources_spec),
                                  uniform_grid(t_max, t_points), opts);
  manifest.timings_seconds["oracle"] = timer.seconds();

  std::string out_path = resolve(common.out_dir, out);
  save_curve(influence_curve(sol.density), out_path);
  if (!out_density.empty())
    save_density(sol.density, resolve(common.out_dir, out_density));
  if (!out_rates.empty())
    save_rate_table(sol.q_rates, resolve(common.out_dir, out_rates));
  finish_manifest(manifest, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_verify_bounds(const std::vector<std::string>& args) {
  CLI::App app{"numerical check of the rate-error bounds"};
  CommonOpts common;
  std::string net_path, sources_spec, method = "dist", out = "bounds.json";
  double eps = 0.01, t_max = 5;
  std::size_t t_points = 100, tree_width = 64, limit = 16;
  app.add_option("--net", net_path, "edge-list file")->required();
  app.add_option("--sources", sources_spec, "comma-separated source ids");
  app.add_option("--eps", eps, "epsilon in (0,1)");
  app.add_option("--method", method, "dist|tree");
  app.add_option("--tree-width", tree_width, "candidates per tree layer");
  app.add_option("--t-max", t_max, "horizon");
  app.add_option("--t-points", t_points, "time grid points");
  app.add_option("--state-limit", limit, "max K for the 2^K chain");
  app.add_option("--out", out, "report JSON");
  add_common(&app, common);
  parse_cli(app, args);

  RunManifest manifest;
  manifest.subcommand = "verify-bounds";
  manifest.args = args;
  manifest.input_digests[net_path] = file_digest(net_path);

  PropagationNetwork net = load_edge_list(net_path);
  NodeSet sources = parse_sources(sources_spec);
  RateProfile estimated =
      method == "tree" ? rates_tree(net, sources, tree_width).profile
                       : rates_dist(net, sources);
  OracleOptions opts;
  opts.state_limit = static_cast<NodeId>(limit);
  Timer timer;
  BoundReport report = verify_bounds(net, sources, estimated, eps,
                                     uniform_grid(t_max, t_points), opts);
  manifest.timings_seconds["verify"] = timer.seconds();

  nlohmann::json j;
  j["epsilon"] = report.epsilon;
  j["alpha_max"] = report.alpha_max;
  j["alpha_min"] = report.alpha_min;
  j["max_out_degree"] = report.max_out_degree;
  j["q_bar"] = report.q_bar;
  j["t"] = report.t;
  auto dump_rows = [](const std::vector<std::vector<double>>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json r = nlohmann::json::array();
      for (double v : row)
        r.push_back(std::isnan(v) ? nlohmann::json() : nlohmann::json(v));
      out.push_back(std::move(r));
    }
    return out;
  };
  j["delta"] = dump_rows(report.delta);
  j["threshold"] = dump_rows(report.threshold);
  j["hypothesis_ok"] = std::vector<int>(report.hypothesis_ok.begin(),
                                        report.hypothesis_ok.end());
  j["influence_error"] = report.influence_error;
  j["envelope"] = report.envelope;
  j["pass"] = std::vector<int>(report.pass.begin(), report.pass.end());
  j["all_pass"] = report.all_pass();

  std::string out_path = resolve(common.out_dir, out);
  std::ofstream jo(out_path);
  if (!jo) throw std::runtime_error("cannot write " + out_path);
  jo << j.dump(2) << "\n";
  jo.close();
  finish_manifest(manifest, out_path);
  std::cout << "wrote " << out_path
            << (report.all_pass() ? " (all bounds hold)\n"
                                  : " (see report)\n");
  return 0;
}

int cmd_compare(const std::vector<std::string>& args) {
  CLI::App app{"relative-error metrics between two curves"};
  CommonOpts common;
  std::string path_a, path_b, out = "compare.json", out_series;
  app.add_option("--a", path_a, "curve CSV")->required();
  app.add_option("--b", path_b, "reference curve CSV")->required();
  app.add_option("--out", out, "metrics JSON");
  app.add_option("--series", out_series, "per-t error series CSV");
  add_common(&app, common);
  parse_cli(app, args);

  RunManifest manifest;
  manifest.subcommand = "compare";
  manifest.args = args;
  manifest.input_digests[path_a] = file_digest(path_a);
  manifest.input_digests[path_b] = file_digest(path_b);

  CompareResult r = compare_curves(load_curve(path_a), load_curve(path_b));
  nlohmann::json j;
  j["max_relative_error"] = r.max_relative_error;
  j["mean_relative_error"] = r.mean_relative_error;
  j["points"] = r.t.size();
  std::string out_path = resolve(common.out_dir, out);
  std::ofstream jo(out_path);
  jo << j.dump(2) << "\n";
  jo.close();
  if (!out_series.empty()) {
    Curve series{r.t, r.relative_error};
    save_curve(series, resolve(common.out_dir, out_series), "relative_error");
  }
  finish_manifest(manifest, out_path);
  std::cout << "max " << format_double(r.max_relative_error) << " mean "
            << format_double(r.mean_relative_error) << "\n";
  return 0;
}

int cmd_bench(const std::vector<std::string>& args) {
  CLI::App app{"K-scaling benchmark of rate estimation and the RK4 solve"};
  CommonOpts common;
  std::string sizes_spec, family = "er", out = "bench.csv";
  double avg_degree = 8, t_max = 10;
  std::size_t steps = 200, max_graph_nodes = 1 << 20;
  app.add_option("--sizes", sizes_spec, "comma-separated K values")
      ->required();
  app.add_option("--family", family, "network family for graph phases");
  app.add_option("--avg-degree", avg_degree, "ER degree for graph phases");
  app.add_option("--t-max", t_max, "horizon");
  app.add_option("--steps", steps, "RK4 steps");
  app.add_option("--max-graph-nodes", max_graph_nodes,
                 "largest K for which a real graph is generated");
  app.add_option("--out", out, "timing table CSV");
  add_common(&app, common);
  parse_cli(app, args);

  std::vector<std::size_t> sizes;
  if (!sizes_spec.empty())
    for (const auto& f : split_csv_line(sizes_spec))
      sizes.push_back(std::stoull(f));

  std::string out_path = resolve(common.out_dir, out);
  std::ofstream table(out_path);
  table << "K,rates_seconds,solve_seconds\n";
  std::vector<double> log_k, log_solve;
  for (std::size_t k : sizes) {
    double rates_s = -1;
    RateProfile profile;
    try {
      if (k <= max_graph_nodes) {
        GeneratorSpec spec;
        spec.family = family_from_name(family);
        spec.node_count = static_cast<NodeId>(k);
        spec.avg_degree = avg_degree;
        spec.seed = common.seed;
        PropagationNetwork net =
            sample_rates(generate(spec), common.seed, 0, 1);
        Timer tr;
        profile = rates_dist(net, NodeSet{0});
        rates_s = tr.seconds();
      } else {
        // Synthetic constant profile: solve-phase scaling only.
        Rng rng(common.seed, 7);
        std::vector<double> q(k + 1, 0.0);
        for (std::size_t j = 1; j < k; ++j) q[j] = rng.uniform_open(0, 1) * 8;
        profile = RateProfile::constant(std::move(q));
      }
      auto rho0 = initial_distribution(profile.states(), 1);
      SolveOptions sopts;
      sopts.step = t_max / static_cast<double>(steps);
      if (common.workers > 1) sopts.exec = kernels::Exec::parallel;
      Timer ts;
      solve_rk4(profile, rho0, {t_max}, sopts);
      double solve_s = ts.seconds();
      table << k << "," << format_double(rates_s) << ","
            << format_double(solve_s) << "\n";
      table.flush();
      std::cout << "K=" << k << " rates=" << rates_s << "s solve=" << solve_s
                << "s\n";
      log_k.push_back(std::log(static_cast<double>(k)));
      log_solve.push_back(std::log(std::max(solve_s, 1e-9)));
    } catch (const std::bad_alloc&) {
      std::cerr << "allocation failure at K=" << k << "; partial table kept\n";
      break;
    }
  }
  if (log_k.size() >= 2) {
    double n = static_cast<double>(log_k.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_k.size(); ++i) {
      sx += log_k[i];
      sy += log_solve[i];
      sxx += log_k[i] * log_k[i];
      sxy += log_k[i] * log_solve[i];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::cout << "log-log solve slope: " << slope << "\n";
  }

  RunManifest manifest;
  manifest.subcommand = "bench";
  manifest.args = args;
  manifest.seed = common.seed;
  finish_manifest(manifest, out_path);
  return 0;
}

int cmd_plot(const std::vector<std::string>& args) {
  CLI::App app{"render curve CSVs as a static SVG chart"};
  CommonOpts common;
  std::vector<std::string> inputs;
  std::string out = "plot.svg";
  app.add_option("inputs", inputs, "curve CSV files")->required();
  app.add_option("--out", out, "SVG output");
  add_common(&app, common);
  parse_cli(app, args);

  RunManifest manifest;
  manifest.subcommand = "plot";
  manifest.args = args;

  std::vector<std::pair<std::string, Curve>> series;
  for (const auto& path : inputs) {
    manifest.input_digests[path] = file_digest(path);
    series.emplace_back(fs::path(path).stem().string(), load_curve(path));
  }
  std::string out_path = resolve(common.out_dir, out);
  std::ofstream svg(out_path);
  if (!svg) throw std::runtime_error("cannot write " + out_path);
  svg << render_svg(series);
  svg.close();
  finish_manifest(manifest, out_path);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_rerun(const std::vector<std::string>& args) {
  CLI::App app{"re-execute a recorded run"};
  std::string manifest_path;
  app.add_option("manifest", manifest_path, "manifest JSON")->required();
  parse_cli(app, args);
  RunManifest m = RunManifest::load(manifest_path);
  std::vector<std::string> argv;
  argv.push_back(m.subcommand);
  argv.insert(argv.end(), m.args.begin(), m.args.end());
  return run(argv);
}

int run(const std::vector<std::string>& argv) {
  if (argv.empty() || argv[0] == "-h" || argv[0] == "--help") {
    (argv.empty() ? std::cerr : std::cout)
        << "usage: influx <generate|simulate|predict|oracle|"
           "verify-bounds|compare|bench|plot|rerun> [options]\n"
           "run `influx <subcommand> --help` for per-command options\n";
    return argv.empty() ? 2 : 0;
  }
  const std::string& cmd = argv[0];
  std::vector<std::string> rest(argv.begin() + 1, argv.end());
  if (cmd == "generate") return cmd_generate(rest);
  if (cmd == "simulate") return cmd_simulate(rest);
  if (cmd == "predict") return cmd_predict(rest);
  if (cmd == "oracle") return cmd_oracle(rest);
  if (cmd == "verify-bounds") return cmd_verify_bounds(rest);
  if (cmd == "compare") return cmd_compare(rest);
  if (cmd == "bench") return cmd_bench(rest);
  if (cmd == "plot") return cmd_plot(rest);
  if (cmd == "rerun") return cmd_rerun(rest);
  std::cerr << "unknown subcommand: " << cmd << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    // oracle refusals are resource errors, not spec errors
    return std::string(e.what()).find("state limit") != std::string::npos ? 4
                                                                          : 2;
  } catch (const StabilityError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource refusal: allocation failure\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
