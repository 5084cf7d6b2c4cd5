// SPDX-License-Identifier: Apache-2.0
//
// MIMO-OFDM link structure: configuration, multipath channel draws, cyclic
// prefix handling and the time/frequency domain channel operators.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anwt/matops.hpp"

namespace anwt {

/// Scalar link parameters. SNRs are linear power ratios (noise variance is
/// normalized to one, so the transmit power equals the SNR).
struct SystemConfig {
  int n_subcarriers = 64;  // N
  int cp_len = 16;         // N_cp
  int delay_spread = 16;   // nu: taps beyond the first
  int n_alice = 4;
  int n_bob = 2;
  int n_eve = 2;
  int n_streams = 2;
  double gamma_bob = 100.0;
  double gamma_eve = 100.0;
  double var_ab = 1.0;  // per-tap variance, Alice-Bob
  double var_ae = 1.0;  // per-tap variance, Alice-Eve
  double theta = 0.5;   // data share of the power budget
  double alpha = 0.5;   // spatial share of the noise budget
  bool exact_cp_power = false;

  int taps() const { return delay_spread + 1; }
  int block_len() const { return n_subcarriers + cp_len; }
  int spatial_dim() const { return n_alice - n_streams; }
  int temporal_dim() const { return n_subcarriers * (n_alice - n_streams) + cp_len * n_alice; }
};

/// Returns c unchanged or throws ValidationError naming the violated rule.
SystemConfig validate_config(const SystemConfig& c);

/// Parses `key = value` lines ('#' starts a comment). Keys: n, n_cp, nu,
/// n_a, n_b, n_e, n_s, gamma_bob_db, gamma_eve_db, var_ab, var_ae, theta,
/// alpha, exact_cp_power. Keys not present keep the values of `base`.
/// Unknown keys and malformed values throw ValidationError. The result is
/// not validated.
SystemConfig parse_config(std::string_view text, SystemConfig base = {});
SystemConfig load_config(const std::string& path, SystemConfig base = {});

/// Applies one `key=value` assignment.
void apply_override(SystemConfig& c, std::string_view assignment);
void set_config_value(SystemConfig& c, std::string_view key, std::string_view value);

/// Resolved configuration as (key, value) pairs in file-key order, values
/// printed in shortest round-trip form (SNRs in dB).
std::vector<std::pair<std::string, std::string>> config_entries(const SystemConfig& c);

double db_to_linear(double db);
double linear_to_db(double linear);

struct ChannelRealization {
  std::vector<ComplexMatrix> taps_ab;  // nu+1 matrices, N_B x N_A
  std::vector<ComplexMatrix> taps_ae;  // nu+1 matrices, N_E x N_A
  std::vector<ComplexMatrix> freq_ab;  // N matrices H_k
  std::vector<ComplexMatrix> freq_ae;  // N matrices G_k
};

/// Rayleigh taps with real and imaginary parts N(0, var/2). Bob's taps are
/// drawn first, then Eve's; in both the receive antenna is the outermost
/// loop, so Eve's first n rows do not depend on n_eve.
ChannelRealization draw_channel(const SystemConfig& c, std::uint64_t seed);

/// H_k = sum_l h_l w^{l k}, w = exp(-2 pi i / n), k = 0..n-1.
std::vector<ComplexMatrix> frequency_response(const std::vector<ComplexMatrix>& taps, int n);

struct TimeDomainOps {
  ComplexMatrix conv_ab;      // N_B N x N_A (N + N_cp), CP removal included
  ComplexMatrix conv_ae;      // N_E N x N_A (N + N_cp)
  Eigen::MatrixXd cp_insert;  // (N + N_cp) x N
  Eigen::MatrixXd cp_remove;  // N x (N + N_cp)
  std::vector<int> perm_a;    // perm[k n_ant + a] = a N + k
  std::vector<int> perm_b;
  std::vector<int> perm_e;
};

/// Convolution operator from Alice's CP-extended antenna-major samples to
/// the receiver's CP-stripped samples. Rows and columns are antenna-major:
/// row b N + i, column a (N + N_cp) + j. Tap l sits at j = i + N_cp - l.
ComplexMatrix convolution_matrix(const std::vector<ComplexMatrix>& taps, int n, int cp_len);

TimeDomainOps build_time_ops(const ChannelRealization& r, const SystemConfig& c);

Eigen::MatrixXd cp_insert_matrix(int n, int cp_len);
Eigen::MatrixXd cp_remove_matrix(int n, int cp_len);

/// Unitary DFT, F[k][m] = w^{k m} / sqrt(n).
ComplexMatrix dft_matrix(int n);

/// Index map and 0/1 matrix P with (P v)[a n + k] = v[k n_ant + a].
std::vector<int> permutation_map(int n_ant, int n);
Eigen::MatrixXd permutation_matrix(int n_ant, int n);

/// P^T F m for an antenna-major row layout with n_ant blocks of n rows:
/// per-antenna DFT of the rows followed by a reorder to subcarrier-major.
ComplexMatrix frequency_chain(const ComplexMatrix& m, int n_ant, int n);

enum class Link { ab, ae };

/// Extracts the per-subcarrier matrices from P^T F conv T_cp F^* P and
/// checks that the off-block mass is at most 1e-10 of the total; throws
/// ContractError otherwise.
std::vector<ComplexMatrix> diagonalize(const TimeDomainOps& ops, const SystemConfig& c, Link which);

/// blkdiag(m_0, ..., m_{n-1}).
ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks);

}  // namespace anwt
