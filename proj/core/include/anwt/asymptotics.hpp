// SPDX-License-Identifier: Apache-2.0
//
// Large-array approximations, bounds and power allocations for the average
// secrecy rate. Bound values are in bits/s/Hz unless stated otherwise.
#pragma once

#include <array>
#include <string_view>

#include "anwt/ofdm_model.hpp"
#include "anwt/rates.hpp"

namespace anwt {

struct BoundOptions {
  /// Replace K_alpha by 1 in the high-SNR bound (exact K_alpha otherwise).
  bool k_alpha_approx = false;
};

/// Scalar noise level factor lambda_alpha = alpha / (N (N_A - N_s)) +
/// (1 - alpha) / (N (N_A - N_s) + N_cp N_A); a zero-power term is dropped.
double lambda_alpha(const SystemConfig& c);

/// p(alpha) = (1 - theta) Gamma_E N_A (nu + 1) var_ae lambda_alpha + 1.
double p_alpha(const SystemConfig& c);

/// K_alpha = alpha + (1 - alpha) N / (N + N_cp).
double k_alpha(const SystemConfig& c);

/// Lower bound on the average secrecy rate at c.theta, c.alpha. Throws
/// UnsupportedError when N_A = N_s.
double lb_avg_secrecy(const SystemConfig& c);

/// Upper bound on the eavesdropper's average per-subcarrier rate, scaled to
/// bits/s/Hz by N / (N + N_cp). Throws UnsupportedError when N_A = N_s.
double ub_eve_avg(const SystemConfig& c);

/// N_E / (N_E + N_s).
double theta_star(const SystemConfig& c);

/// theta^{N_s/N_E} (1 - theta) K / (theta + (1 - theta) K).
double power_allocation_objective(double theta, int n_streams, int n_eve, double k);

/// Stationary point of theta^{N_s/N_E} (1 - theta): N_s / (N_s + N_E). It
/// coincides with theta_star only when N_E = N_s.
double objective_argmax(int n_streams, int n_eve);

/// High-SNR secrecy lower bound at theta = theta_star.
double hi_snr_lb(const SystemConfig& c, const BoundOptions& options = {});

/// High-SNR loss bound at theta_star:
/// N_s N/(N+N_cp) log2((N_E+N_s)/N_E) + N_E N/(N+N_cp) log2((N_E+N_s)/N_s).
double loss_ub_hi_snr(const SystemConfig& c);

/// Simplified loss bound for N_E >> N_s: N_E N/(N+N_cp) log2(N_E/N_s).
double loss_ub_hi_snr_large_ne(const SystemConfig& c);

/// 2 N_E N / (N + N_cp): the high-SNR loss bound when N_E = N_s.
double loss_ub_ne_eq_ns(const SystemConfig& c);

struct LowSnrBounds {
  double loss_ub = 0.0;      // N_E N/(N+N_cp) log2(Gamma_E (nu+1) var_ae / N + 1)
  double lb_secrecy = 0.0;   // secrecy lower bound at theta = 1
};
LowSnrBounds lo_snr_bounds(const SystemConfig& c);

struct RegimeFlags {
  bool large_array = false;  // 1 - N_s/N_A >= 2 N_cp/N
  bool high_snr = false;     // Gamma_B var_ab >= Gamma_E var_ae and Gamma_E var_ae >= 10
  bool low_snr = false;      // Gamma_B var_ab >= Gamma_E var_ae and Gamma_E var_ae <= 0.1
};
RegimeFlags regime_flags(const SystemConfig& c);

/// Every bound for one configuration. Quantities that are undefined for
/// the configuration (N_A = N_s) are NaN.
struct BoundReport {
  double lb_avg_secrecy = 0.0;
  double ub_eve_avg = 0.0;
  double hi_snr_lb = 0.0;
  double theta_star = 0.0;
  double loss_ub_hi_snr = 0.0;
  double loss_ub_hi_snr_large_ne = 0.0;
  double loss_ub_ne_eq_ns = 0.0;
  double loss_ub_lo_snr = 0.0;
  double lb_lo_snr = 0.0;
  double k_alpha = 0.0;
  double lambda_alpha = 0.0;
  double p_alpha = 0.0;
  RegimeFlags regime;

  static constexpr std::size_t kFields = 12;
  static constexpr std::array<std::string_view, kFields> kNames = {
      "lb_avg_secrecy", "ub_eve_avg", "hi_snr_lb", "theta_star", "loss_ub_hi_snr", "loss_ub_hi_snr_large_ne",
      "loss_ub_ne_eq_ns", "loss_ub_lo_snr", "lb_lo_snr", "k_alpha", "lambda_alpha", "p_alpha"};
  std::array<double, kFields> values() const;
};

BoundReport bound_report(const SystemConfig& c, const BoundOptions& options = {});

/// Secrecy rate with the eavesdropper's noise replaced by its large-array
/// form (1 - theta) Gamma_E / (N (N_A - N_s)) G G^*, in bits/block. The
/// joint value treats all subcarriers as one matrix, the per-subcarrier
/// value sums the subcarrier terms.
struct AsymptoticSecrecy {
  double r_eve_joint = 0.0;
  double r_eve_persub = 0.0;
  double r_sec_joint = 0.0;
  double r_sec_persub = 0.0;
};
AsymptoticSecrecy asymptotic_secrecy_matrices(const LinkGeometry& g, const SystemConfig& c);

}  // namespace anwt
