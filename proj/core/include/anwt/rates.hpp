// SPDX-License-Identifier: Apache-2.0
//
// Instantaneous rates at the receiver and the eavesdropper, and the derived
// secrecy metrics.
#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "anwt/an_design.hpp"
#include "anwt/matops.hpp"
#include "anwt/ofdm_model.hpp"

namespace anwt {

enum class EveStrategy { joint, persub, worst };

EveStrategy parse_eve_strategy(std::string_view name);
std::string_view to_string(EveStrategy s);

/// Rates in bits per OFDM block.
struct RateReport {
  double r_bob = 0.0;
  double r_eve_joint = 0.0;
  double r_eve_persub = 0.0;
  double r_eve = 0.0;          // rate of the strategy used for secrecy
  double r_sec_raw = 0.0;      // r_bob - r_eve
  double r_sec_clipped = 0.0;  // max(r_sec_raw, 0)
  double r_no_eve = 0.0;       // receiver rate at the same theta
  double r_no_eve_full = 0.0;  // receiver rate at theta = 1
  double s_loss = 0.0;         // r_no_eve - r_sec_clipped
  double s_loss_full = 0.0;    // r_no_eve_full - r_sec_clipped

  static constexpr std::size_t kFields = 10;
  static constexpr std::array<std::string_view, kFields> kNames = {
      "r_bob", "r_eve_joint", "r_eve_persub", "r_eve", "r_sec_raw",
      "r_sec_clipped", "r_no_eve", "r_no_eve_full", "s_loss", "s_loss_full"};
  std::array<double, kFields> values() const;
  static RateReport from_values(const std::array<double, kFields>& v);

  /// Every field divided by (N + N_cp): bits/s/Hz.
  RateReport per_shz(const SystemConfig& c) const;
};

/// Everything the rates need from one realization and design, independent
/// of theta, alpha and the SNRs.
struct LinkGeometry {
  int n_subcarriers = 0;
  int n_eve = 0;
  std::vector<RealVector> bob_gains;         // singular values of C_k^* H_k A_k
  std::vector<ComplexMatrix> eve_data;       // G_k A_k
  std::vector<ComplexMatrix> eve_spatial;    // G_k B_k
  ComplexMatrix eve_temporal_gram;           // E E^*
};

LinkGeometry link_geometry(const ChannelRealization& r, const PrecoderSet& p, const SystemConfig& c);

/// The same geometry seen by the first n_eve eavesdropper antennas.
LinkGeometry restrict_eve(const LinkGeometry& g, int n_eve);

/// sum_k log2 det(P_x C_k^* H_k A_k (C_k^* H_k A_k)^* + I), evaluated from
/// the matrices themselves.
double bob_rate(const ChannelRealization& r, const PrecoderSet& p, const PowerSplits& s, const SystemConfig& c);

/// Same rate from the kept singular values: sum_{k,m} log2(1 + P_x s_{k,m}^2).
double bob_rate(const LinkGeometry& g, const PowerSplits& s);

/// Sigma_AN = P_s G B B^* G^* + P_t E E^*, N_E N x N_E N.
ComplexMatrix eve_covariance_joint(const LinkGeometry& g, const PowerSplits& s);

/// Diagonal block k of Sigma_AN.
ComplexMatrix eve_covariance_block(const LinkGeometry& g, const PowerSplits& s, int k);

/// log2 det(P_x G A (G A)^* (Sigma_AN + I)^{-1} + I) over all subcarriers.
double eve_rate_joint(const LinkGeometry& g, const PowerSplits& s);

/// sum_k log2 det(P_x G_k A_k (G_k A_k)^* (Sigma_AN,k + I)^{-1} + I).
double eve_rate_persub(const LinkGeometry& g, const PowerSplits& s);

RateReport secrecy_report(const LinkGeometry& g, const SystemConfig& c, EveStrategy strategy = EveStrategy::worst);

}  // namespace anwt
