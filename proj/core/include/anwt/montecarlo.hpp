// SPDX-License-Identifier: Apache-2.0
//
// Seeded averaging of rate reports over independent channel realizations,
// and parameter sweeps built on it.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "anwt/asymptotics.hpp"
#include "anwt/ofdm_model.hpp"
#include "anwt/rates.hpp"

namespace anwt {

enum class SweepParam { none, n_e, n_a, theta, alpha, gamma_db };

SweepParam parse_sweep_param(std::string_view name);
std::string_view to_string(SweepParam p);

struct TrialPlan {
  SystemConfig base_config;
  int n_trials = 200;
  std::uint64_t master_seed = 1;
  SweepParam sweep_param = SweepParam::none;
  std::vector<double> grid;
  EveStrategy eve_strategy = EveStrategy::worst;
  unsigned max_threads = 0;  // 0: AN_SIM_THREADS or the hardware concurrency
};

/// Aggregates for one configuration. Means and standard errors are in
/// bits/block; per_shz() converts.
struct PointResult {
  double param_value = 0.0;
  SystemConfig config;
  RateReport mean;
  RateReport stderr_;
  BoundReport bounds;
  int n_trials = 0;
  std::uint64_t master_seed = 0;
};

struct SweepResult {
  SweepParam sweep_param = SweepParam::none;
  EveStrategy eve_strategy = EveStrategy::worst;
  std::vector<PointResult> rows;
};

/// Counter-mixed seed of trial t; a pure function of (master, t).
std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial);

/// Worker count: `requested` if nonzero, else AN_SIM_THREADS if set and
/// positive, else the hardware concurrency; never more than `work_items`.
unsigned worker_count(std::size_t work_items, unsigned requested = 0);

/// One realization: channel, precoders and the report at every config.
/// The configs must share everything the design depends on, except that
/// n_eve may vary (the channel is drawn at the largest).
std::vector<RateReport> trial_reports(const std::vector<SystemConfig>& configs, std::uint64_t seed,
                                      EveStrategy strategy);

PointResult run_point(const SystemConfig& c, int n_trials, std::uint64_t master_seed,
                      EveStrategy strategy = EveStrategy::worst, unsigned max_threads = 0);

/// Throws ValidationError for an empty grid, a grid on SweepParam::none,
/// n_trials < 1 or any grid point that yields an invalid config.
SweepResult run_sweep(const TrialPlan& plan);

/// The config a plan evaluates at one grid value.
SystemConfig sweep_config(const SystemConfig& base, SweepParam param, double value);

/// Order-preserving compensated sum.
double neumaier_sum(const std::vector<double>& values);

}  // namespace anwt
