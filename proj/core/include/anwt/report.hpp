// SPDX-License-Identifier: Apache-2.0
//
// Comma-separated tables of sweep results and bounds.
#pragma once

#include <ostream>
#include <string>

#include "anwt/asymptotics.hpp"
#include "anwt/montecarlo.hpp"

namespace anwt {

/// Shortest round-trip decimal form ("nan", "inf" for non-finite values).
std::string format_number(double v);

/// Header plus one row per sweep point: the sweep value, every rate mean and
/// standard error in bits/block and bits/s/Hz, every bound, n_trials,
/// master_seed, the eve strategy and the resolved configuration.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Header plus one row: every bound, the regime flags and the configuration.
void write_bounds_csv(std::ostream& out, const SystemConfig& c, const BoundReport& b);

}  // namespace anwt
