// SPDX-License-Identifier: Apache-2.0
//
// an_sim: verification suites, Monte Carlo sweeps and bound tables.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "anwt/asymptotics.hpp"
#include "anwt/error.hpp"
#include "anwt/montecarlo.hpp"
#include "anwt/ofdm_model.hpp"
#include "anwt/report.hpp"
#include "anwt/verify.hpp"

namespace {

using namespace anwt;

struct Invocation {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string eve = "worst";
  std::string param = "none";
  std::vector<double> grid;
};

void add_common(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("--config", inv.config_path, "key=value configuration file");
  cmd->add_option("--out", inv.out_path, "output CSV path (stdout when omitted)");
  cmd->add_option("--set", inv.overrides, "override key=value, applied after --config")->take_all();
  cmd->add_option("--trials", inv.trials, "channel realizations per point")->capture_default_str();
  cmd->add_option("--seed", inv.seed, "master seed")->capture_default_str();
  cmd->add_option("--eve", inv.eve, "eavesdropper strategy: joint, persub, worst")->capture_default_str();
}

// Preset values first, then the file, then --set; validation happens later.
SystemConfig resolve(const Invocation& inv, SystemConfig base) {
  if (!inv.config_path.empty()) base = load_config(inv.config_path, base);
  for (const auto& o : inv.overrides) apply_override(base, o);
  return base;
}

SystemConfig figure_base() {
  SystemConfig c;
  c.n_subcarriers = 64;
  c.cp_len = 16;
  c.delay_spread = 16;
  c.n_bob = 2;
  c.n_streams = 2;
  c.gamma_bob = db_to_linear(20.0);
  c.gamma_eve = db_to_linear(20.0);
  c.var_ab = 1.0;
  c.var_ae = 1.0;
  return c;
}

std::vector<double> range(double first, double last, double step) {
  std::vector<double> v;
  const int count = static_cast<int>(std::floor((last - first) / step + 0.5));
  // Rounded so grid points print and compare as their decimal values.
  for (int i = 0; i <= count; ++i) v.push_back(std::round((first + i * step) * 1e12) / 1e12);
  return v;
}

struct Series {
  SystemConfig config;
  SweepParam param;
  std::vector<double> grid;
};

SweepResult run_series(const std::vector<Series>& series, const Invocation& inv) {
  SweepResult all;
  all.eve_strategy = parse_eve_strategy(inv.eve);
  for (const auto& s : series) {
    TrialPlan plan;
    plan.base_config = s.config;
    plan.n_trials = inv.trials;
    plan.master_seed = inv.seed;
    plan.sweep_param = s.param;
    plan.grid = s.grid;
    plan.eve_strategy = all.eve_strategy;
    SweepResult r = run_sweep(plan);
    all.sweep_param = r.sweep_param;
    for (auto& row : r.rows) all.rows.push_back(std::move(row));
  }
  return all;
}

std::vector<Series> fig2_series(const Invocation& inv) {
  std::vector<Series> out;
  SystemConfig base = figure_base();
  base.theta = 0.5;
  base.alpha = 0.5;
  base = resolve(inv, base);
  for (int na : {2, 4, 8}) {
    SystemConfig c = base;
    c.n_alice = na;
    if (c.spatial_dim() == 0) c.alpha = 0.0;
    out.push_back({c, SweepParam::n_e, range(1, 8, 1)});
  }
  return out;
}

std::vector<Series> fig3_series(const Invocation& inv) {
  std::vector<Series> out;
  SystemConfig base = figure_base();
  base.alpha = 0.5;
  base = resolve(inv, base);
  for (auto [na, ne] : {std::pair{3, 4}, std::pair{10, 2}, std::pair{20, 2}}) {
    SystemConfig c = base;
    c.n_alice = na;
    c.n_eve = ne;
    out.push_back({c, SweepParam::theta, range(0.05, 1.0, 0.05)});
  }
  return out;
}

std::vector<Series> fig4_series(const Invocation& inv) {
  std::vector<Series> out;
  SystemConfig base = figure_base();
  base.theta = 0.5;
  base.n_eve = 2;
  base = resolve(inv, base);
  for (int na : {10, 20}) {
    SystemConfig c = base;
    c.n_alice = na;
    out.push_back({c, SweepParam::alpha, range(0.0, 1.0, 0.1)});
  }
  return out;
}

template <class Writer>
void emit(const Invocation& inv, Writer write) {
  if (inv.out_path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(inv.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw ValidationError("cannot open output file '" + inv.out_path + "'");
  write(file);
  if (!file) throw Error("write failed for '" + inv.out_path + "'");
}

int run_verify() {
  int failed = 0;
  for (const auto& r : run_verify_suite()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " value=" << format_number(r.value)
              << " tol=" << format_number(r.tolerance);
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << '\n';
    if (!r.passed) ++failed;
  }
  if (failed > 0) {
    std::cout << failed << " invariant(s) failed\n";
    return 1;
  }
  std::cout << "all invariants hold\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Artificial-noise secrecy simulator for MIMO-OFDM links"};
  app.require_subcommand(1);
  Invocation inv;

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep of one parameter");
  auto* bounds = app.add_subcommand("bounds", "print the analytic bounds for a configuration");
  auto* fig2 = app.add_subcommand("fig2", "secrecy rate versus eavesdropper antennas");
  auto* fig3 = app.add_subcommand("fig3", "secrecy rate versus the data power fraction");
  auto* fig4 = app.add_subcommand("fig4", "secrecy rate versus the spatial noise fraction");
  for (auto* cmd : {sweep, bounds, fig2, fig3, fig4}) add_common(cmd, inv);
  sweep->add_option("--param", inv.param, "n_e, n_a, theta, alpha, gamma_db or none")->capture_default_str();
  sweep->add_option("--grid", inv.grid, "comma-separated grid values")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify();
    if (bounds->parsed()) {
      const SystemConfig c = validate_config(resolve(inv, SystemConfig{}));
      emit(inv, [&](std::ostream& os) { write_bounds_csv(os, c, bound_report(c)); });
      return 0;
    }
    std::vector<Series> series;
    if (sweep->parsed()) {
      series.push_back({validate_config(resolve(inv, SystemConfig{})), parse_sweep_param(inv.param), inv.grid});
    } else if (fig2->parsed()) {
      series = fig2_series(inv);
    } else if (fig3->parsed()) {
      series = fig3_series(inv);
    } else if (fig4->parsed()) {
      series = fig4_series(inv);
    }
    const SweepResult result = run_series(series, inv);
    emit(inv, [&](std::ostream& os) { write_sweep_csv(os, result); });
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
