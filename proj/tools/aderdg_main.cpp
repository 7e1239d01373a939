// Command-line front end: solve, convergence, bench-tdu, tables.
// Exit codes: 0 success, 1 configuration or usage error, 2 runtime failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aderdg/basis.hpp"
#include "aderdg/driver.hpp"
#include "aderdg/output.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigFailure = 1;
constexpr int kRuntimeFailure = 2;

aderdg::RunConfig load(const std::string& path) {
  std::vector<std::string> warnings;
  auto cfg = aderdg::load_config(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return cfg;
}

std::vector<int> parse_grids(const std::string& text) {
  std::vector<int> grids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int g = 0;
    try {
      g = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || g < 1) throw aderdg::ConfigError({"--grids: '" + item + "' is not a positive integer"});
    grids.push_back(g);
  }
  if (grids.empty()) throw aderdg::ConfigError({"--grids: empty list"});
  return grids;
}

void print_matrix(const char* name, const aderdg::Matrix& m) {
  std::printf("%s (%d x %d)\n", name, m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) std::printf(c ? " %24.17g" : "%24.17g", m(r, c));
    std::printf("\n");
  }
}

void print_vector(const char* name, const std::vector<double>& v) {
  std::printf("%s\n", name);
  for (std::size_t i = 0; i < v.size(); ++i) std::printf(i ? " %24.17g" : "%24.17g", v[i]);
  std::printf("\n");
}

int cmd_tables(int order) {
  if (order < 0 || order > aderdg::kMaxOrder)
    throw aderdg::ConfigError({"--order: must be in [0, " + std::to_string(aderdg::kMaxOrder) + "]"});
  const auto& t = aderdg::basis_tables(order);
  std::printf("order %d, %d subcells\n", t.order, t.num_subcells);
  print_vector("nodes", t.nodes);
  print_vector("weights", t.weights);
  print_vector("left_values", t.left_values);
  print_vector("right_values", t.right_values);
  print_matrix("derivative", t.derivative);
  print_matrix("subcell_projection", t.subcell_projection);
  print_matrix("subcell_recovery", t.subcell_recovery);
  print_matrix("picard_operator", t.picard_operator);
  return kOk;
}

int cmd_solve(const std::string& path) {
  const auto cfg = load(path);
  aderdg::Simulation sim(cfg);
  const auto s = sim.run(true);
  std::printf("steps %ld, t = %.10g, wall %.3f s, limited steps %ld, max limited fraction %.4g, restarts %ld\n", s.steps,
              s.time, s.wall_s, s.limited_steps, s.max_limited_fraction, s.restarts);
  const auto names = sim.solver().system().quantity_names();
  for (std::size_t v = 0; v < names.size(); ++v)
    std::printf("  %-10s total %.17g  drift %.3e\n", names[v].c_str(), s.final_totals[v],
                s.final_totals[v] - s.initial_totals[v]);
  if (sim.has_exact()) {
    const auto e = sim.errors();
    std::printf("error in %s: L1 %.6e  L2 %.6e  Linf %.6e\n", names[cfg.error_quantity].c_str(), e.l1, e.l2, e.linf);
  }
  if (!s.finite) {
    std::cerr << "error: solution contains non-finite values\n";
    return kRuntimeFailure;
  }
  return kOk;
}

int cmd_convergence(const std::string& path, const std::string& grids_text, const std::string& csv_path) {
  const auto cfg = load(path);
  const auto grids = parse_grids(grids_text);
  if (auto errs = aderdg::validate(cfg); !errs.empty()) throw aderdg::ConfigError(errs);
  {
    // Fail early with a config error when the problem has no exact solution.
    aderdg::RunConfig probe = cfg;
    probe.cells = {1, 1, 1};
    aderdg::Simulation sim(probe);
    if (!sim.has_exact())
      throw aderdg::ConfigError({"ic: '" + cfg.ic.name + "' has no exact solution for a convergence study"});
  }
  const auto rep = aderdg::convergence_study(cfg, grids);
  const auto csv = aderdg::convergence_csv(rep);
  if (csv_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream f(csv_path, std::ios::binary);
    if (!(f << csv)) throw std::runtime_error("cannot write '" + csv_path + "'");
  }
  std::fputs(aderdg::convergence_table(rep).c_str(), csv_path.empty() ? stderr : stdout);
  for (const auto& r : rep.rows)
    if (!r.failure.empty()) return kRuntimeFailure;
  return kOk;
}

int cmd_bench(const std::string& path) {
  const auto cfg = load(path);
  std::fputs(aderdg::tdu_csv(aderdg::bench_tdu(cfg)).c_str(), stdout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADER-DG solver for hyperbolic systems on Cartesian grids"};
  app.require_subcommand(1);

  std::string config;
  std::string grids;
  std::string csv_out;
  int order = 0;

  auto* solve = app.add_subcommand("solve", "Run one simulation");
  solve->add_option("--config", config, "Run configuration file")->required();
  auto* conv = app.add_subcommand("convergence", "Error norms and orders over a list of grids");
  conv->add_option("--config", config, "Run configuration file")->required();
  conv->add_option("--grids", grids, "Comma-separated cells per direction, e.g. 10,20,40")->required();
  conv->add_option("--csv", csv_out, "Write the CSV report here instead of stdout");
  auto* bench = app.add_subcommand("bench-tdu", "Time one run and print the time per DOF update");
  bench->add_option("--config", config, "Run configuration file")->required();
  auto* tables = app.add_subcommand("tables", "Print the one-dimensional basis tables");
  tables->add_option("--order", order, "Polynomial degree N")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return e.get_exit_code() == 0 ? kOk : kConfigFailure;
  }

  try {
    if (solve->parsed()) return cmd_solve(config);
    if (conv->parsed()) return cmd_convergence(config, grids, csv_out);
    if (bench->parsed()) return cmd_bench(config);
    if (tables->parsed()) return cmd_tables(order);
  } catch (const aderdg::ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << "config error: " << msg << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
  return kConfigFailure;
}
