// SPDX-License-Identifier: Apache-2.0
#include "anwt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "anwt/an_design.hpp"
#include "anwt/error.hpp"

namespace anwt {
namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool is_integer_param(SweepParam p) { return p == SweepParam::n_e || p == SweepParam::n_a; }

// Rethrows the active exception with the trial index prefixed, keeping its type.
[[noreturn]] void rethrow_for_trial(std::exception_ptr e, int trial) {
  const std::string prefix = "trial " + std::to_string(trial) + ": ";
  try {
    std::rethrow_exception(e);
  } catch (const DegeneracyError& x) {
    throw DegeneracyError(prefix + x.what());
  } catch (const SingularityError& x) {
    throw SingularityError(prefix + x.what());
  } catch (const RankAnomalyError& x) {
    throw RankAnomalyError(prefix + x.what());
  } catch (const NumericalError& x) {
    throw NumericalError(prefix + x.what());
  } catch (const ValidationError& x) {
    throw ValidationError(prefix + x.what());
  } catch (const UnsupportedError& x) {
    throw UnsupportedError(prefix + x.what());
  } catch (const ContractError& x) {
    throw ContractError(prefix + x.what());
  } catch (const std::exception& x) {
    throw Error(prefix + x.what());
  }
}

// Per-trial reports for every grid point, trial-major.
std::vector<std::vector<RateReport>> run_trials(int n_trials, std::uint64_t master_seed,
                                                const std::vector<std::vector<SystemConfig>>& groups,
                                                std::size_t n_points, EveStrategy strategy,
                                                unsigned max_threads) {
  std::vector<std::vector<RateReport>> out(static_cast<std::size_t>(n_trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_trials));
  std::atomic<int> next{0};

  auto work = [&] {
    for (int t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1)) {
      const auto idx = static_cast<std::size_t>(t);
      try {
        const std::uint64_t seed = trial_seed(master_seed, static_cast<std::uint64_t>(t));
        std::vector<RateReport> reports;
        reports.reserve(n_points);
        for (const auto& group : groups) {
          auto part = trial_reports(group, seed, strategy);
          reports.insert(reports.end(), part.begin(), part.end());
        }
        out[idx] = std::move(reports);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };

  const unsigned workers = worker_count(static_cast<std::size_t>(n_trials), max_threads);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (int t = 0; t < n_trials; ++t) {
    if (errors[static_cast<std::size_t>(t)]) rethrow_for_trial(errors[static_cast<std::size_t>(t)], t);
  }
  return out;
}

PointResult aggregate(const std::vector<std::vector<RateReport>>& per_trial, std::size_t point, double value,
                      const SystemConfig& c, std::uint64_t master_seed) {
  const std::size_t n = per_trial.size();
  std::array<double, RateReport::kFields> mean{};
  std::array<double, RateReport::kFields> err{};
  std::vector<double> column(n);
  for (std::size_t f = 0; f < RateReport::kFields; ++f) {
    for (std::size_t t = 0; t < n; ++t) column[t] = per_trial[t][point].values()[f];
    const double m = neumaier_sum(column) / static_cast<double>(n);
    mean[f] = m;
    if (n > 1) {
      for (std::size_t t = 0; t < n; ++t) column[t] = (column[t] - m) * (column[t] - m);
      const double var = neumaier_sum(column) / static_cast<double>(n - 1);
      err[f] = std::sqrt(var / static_cast<double>(n));
    }
    if (!std::isfinite(m)) {
      throw NumericalError("non-finite mean of " + std::string(RateReport::kNames[f]));
    }
  }
  PointResult r;
  r.param_value = value;
  r.config = c;
  r.mean = RateReport::from_values(mean);
  r.stderr_ = RateReport::from_values(err);
  r.bounds = bound_report(c);
  r.n_trials = static_cast<int>(n);
  r.master_seed = master_seed;
  return r;
}

}  // namespace

SweepParam parse_sweep_param(std::string_view name) {
  if (name == "none") return SweepParam::none;
  if (name == "n_e") return SweepParam::n_e;
  if (name == "n_a") return SweepParam::n_a;
  if (name == "theta") return SweepParam::theta;
  if (name == "alpha") return SweepParam::alpha;
  if (name == "gamma_db") return SweepParam::gamma_db;
  throw ValidationError("unknown sweep parameter '" + std::string(name) + "' (n_e, n_a, theta, alpha, gamma_db)");
}

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::none: return "none";
    case SweepParam::n_e: return "n_e";
    case SweepParam::n_a: return "n_a";
    case SweepParam::theta: return "theta";
    case SweepParam::alpha: return "alpha";
    case SweepParam::gamma_db: return "gamma_db";
  }
  return "none";
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return splitmix(splitmix(master_seed) ^ splitmix(trial + 0x632be59bd9b4e019ULL));
}

unsigned worker_count(std::size_t work_items, unsigned requested) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (requested > 0) {
    n = requested;
  } else if (const char* env = std::getenv("AN_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(work_items, 1)));
}

double neumaier_sum(const std::vector<double>& values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

SystemConfig sweep_config(const SystemConfig& base, SweepParam param, double value) {
  SystemConfig c = base;
  if (is_integer_param(param) && (value != std::round(value) || value < 1.0)) {
    throw ValidationError("grid value " + std::to_string(value) + " for " + std::string(to_string(param)) +
                          " is not a positive integer");
  }
  switch (param) {
    case SweepParam::none: break;
    case SweepParam::n_e: c.n_eve = static_cast<int>(value); break;
    case SweepParam::n_a: c.n_alice = static_cast<int>(value); break;
    case SweepParam::theta: c.theta = value; break;
    case SweepParam::alpha: c.alpha = value; break;
    case SweepParam::gamma_db:
      c.gamma_bob = db_to_linear(value);
      c.gamma_eve = db_to_linear(value);
      break;
  }
  return validate_config(c);
}

std::vector<RateReport> trial_reports(const std::vector<SystemConfig>& configs, std::uint64_t seed,
                                      EveStrategy strategy) {
  if (configs.empty()) return {};
  SystemConfig design = configs.front();
  for (const auto& c : configs) design.n_eve = std::max(design.n_eve, c.n_eve);

  const ChannelRealization r = draw_channel(design, seed);
  const TimeDomainOps ops = build_time_ops(r, design);
  DesignOptions options;
  options.route = TemporalRoute::complement;
  const PrecoderSet p = design_precoders(r, ops, design, options);
  const LinkGeometry g = link_geometry(r, p, design);

  std::vector<RateReport> out;
  out.reserve(configs.size());
  for (const auto& c : configs) {
    if (c.n_eve == design.n_eve) {
      out.push_back(secrecy_report(g, c, strategy));
    } else {
      out.push_back(secrecy_report(restrict_eve(g, c.n_eve), c, strategy));
    }
  }
  return out;
}

PointResult run_point(const SystemConfig& c, int n_trials, std::uint64_t master_seed, EveStrategy strategy,
                      unsigned max_threads) {
  TrialPlan plan;
  plan.base_config = c;
  plan.n_trials = n_trials;
  plan.master_seed = master_seed;
  plan.eve_strategy = strategy;
  plan.max_threads = max_threads;
  return run_sweep(plan).rows.front();
}

SweepResult run_sweep(const TrialPlan& plan) {
  if (plan.n_trials < 1) throw ValidationError("n_trials must be at least 1");
  std::vector<double> grid = plan.grid;
  if (plan.sweep_param == SweepParam::none) {
    if (!grid.empty()) throw ValidationError("grid given without a sweep parameter");
    grid.push_back(std::nan(""));
  } else if (grid.empty()) {
    throw ValidationError("empty grid for sweep parameter " + std::string(to_string(plan.sweep_param)));
  }

  std::vector<SystemConfig> configs;
  configs.reserve(grid.size());
  for (double v : grid) {
    configs.push_back(plan.sweep_param == SweepParam::none ? validate_config(plan.base_config)
                                                           : sweep_config(plan.base_config, plan.sweep_param, v));
  }

  // Points sharing a design are evaluated from one realization per trial;
  // only an antenna count at Alice changes the design itself.
  std::vector<std::vector<SystemConfig>> groups;
  if (plan.sweep_param == SweepParam::n_a) {
    for (const auto& c : configs) groups.push_back({c});
  } else {
    groups.push_back(configs);
  }

  const auto per_trial = run_trials(plan.n_trials, plan.master_seed, groups, configs.size(), plan.eve_strategy,
                                    plan.max_threads);

  SweepResult result;
  result.sweep_param = plan.sweep_param;
  result.eve_strategy = plan.eve_strategy;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const double value = plan.sweep_param == SweepParam::none ? 0.0 : grid[i];
    result.rows.push_back(aggregate(per_trial, i, value, configs[i], plan.master_seed));
  }
  return result;
}

}  // namespace anwt
