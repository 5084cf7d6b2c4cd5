// SPDX-License-Identifier: Apache-2.0
//
// Precoders and receive filters for data plus spatial and temporal
// artificial noise, and the power split between them.
#pragma once

#include <cstdint>
#include <vector>

#include "anwt/matops.hpp"
#include "anwt/ofdm_model.hpp"

namespace anwt {

/// Per-symbol variances for one receiver's normalization (total power P).
struct PowerSplit {
  double per_data_symbol = 0.0;
  double per_spatial_symbol = 0.0;
  double per_temporal_symbol = 0.0;
};

/// Split evaluated with P = gamma_bob (bob) and P = gamma_eve (eve).
struct PowerSplits {
  PowerSplit bob;
  PowerSplit eve;
};

PowerSplit power_split(const SystemConfig& c, double total_power);
PowerSplits power_split(const SystemConfig& c);

struct DataDesign {
  std::vector<ComplexMatrix> data;    // A_k, N_A x N_s
  std::vector<ComplexMatrix> filter;  // C_k, N_B x N_s
  std::vector<RealVector> gains;      // kept singular values of H_k
};

/// A_k and C_k from the dominant N_s singular pairs of H_k. Throws
/// DegeneracyError naming k when the N_s-th singular value falls below
/// 1e-10 of the largest.
DataDesign design_data_and_filter(const ChannelRealization& r, const SystemConfig& c);

/// B_k: the right singular vectors of H_k not used for data. Zero columns
/// when N_A = N_s.
std::vector<ComplexMatrix> design_spatial_an(const ChannelRealization& r, const SystemConfig& c);

/// X = C_B^* P^T F R_cp H~, size N_s N x N_A (N + N_cp).
ComplexMatrix bob_chain_matrix(const TimeDomainOps& ops, const std::vector<ComplexMatrix>& filter,
                               const SystemConfig& c);

/// Q as an orthonormal basis of null(X). Throws RankAnomalyError if the
/// null space does not have N (N_A - N_s) + N_cp N_A columns.
ComplexMatrix design_temporal_an_generic(const TimeDomainOps& ops, const std::vector<ComplexMatrix>& filter,
                                         const SystemConfig& c);

/// Which N-sample window of each of the first N_s antennas is solved for.
enum class ToeplitzWindow {
  // The window facing the main diagonal, so every block is upper triangular
  // Toeplitz with leading tap h_nu. Its inverse grows like the reciprocal
  // root moduli raised to the power N, so this is only accurate for small N.
  leading,
  // Windows shifted so the determinant of the block symbol has winding
  // number zero; the square system is then banded Toeplitz with an inverse
  // bounded independently of N, solved by pivoted LU.
  balanced,
};

/// Q by fixing the free rows at random and solving the banded Toeplitz
/// system for the rest, then orthonormalizing. Needs N_B = N_s (else
/// UnsupportedError). The circulant mode applies to the leading window only.
ComplexMatrix design_temporal_an_toeplitz(const TimeDomainOps& ops, const SystemConfig& c, std::uint64_t seed,
                                          ToeplitzMode mode = ToeplitzMode::exact,
                                          ToeplitzWindow window = ToeplitzWindow::balanced);

/// Window start (row offset inside each antenna's N + N_cp block) for the
/// first N_s antennas.
std::vector<int> toeplitz_window_offsets(const TimeDomainOps& ops, const SystemConfig& c, ToeplitzWindow window);

enum class TemporalRoute {
  generic,     // explicit null-space basis
  toeplitz,    // random free rows plus banded solve
  complement,  // Q is never formed; E E^* from the row-space complement
};

struct DesignOptions {
  TemporalRoute route = TemporalRoute::generic;
  ToeplitzMode toeplitz_mode = ToeplitzMode::exact;
  ToeplitzWindow toeplitz_window = ToeplitzWindow::balanced;
  std::uint64_t seed = 0;
};

struct PrecoderSet {
  std::vector<ComplexMatrix> data;     // A_k
  std::vector<ComplexMatrix> filter;   // C_k
  std::vector<ComplexMatrix> spatial;  // B_k
  std::vector<RealVector> gains;       // singular values behind A_k, C_k
  ComplexMatrix temporal;              // Q; empty for the complement route
  ComplexMatrix eve_temporal;          // E = P^T F R_cp G~ Q; empty for the complement route
  ComplexMatrix eve_temporal_gram;     // E E^*, N_E N x N_E N
};

/// E_k: rows k N_E .. k N_E + N_E - 1 of E.
ComplexMatrix eve_temporal_block(const PrecoderSet& p, const SystemConfig& c, int k);

PrecoderSet design_precoders(const ChannelRealization& r, const TimeDomainOps& ops, const SystemConfig& c,
                             const DesignOptions& options = {});

/// One transmitted block and what both receivers observe.
struct BlockSample {
  ComplexVector data;            // x, subcarrier-major, N_s N
  ComplexVector spatial_noise;   // d^s, N (N_A - N_s)
  ComplexVector temporal_noise;  // d^t
  ComplexVector transmitted;     // s_A, N_A (N + N_cp)
  ComplexVector bob_filtered;    // C_B^* P^T F (R_cp H~ s_A + n_B)
  ComplexVector bob_clean;       // same without noise
  ComplexVector eve_time;        // R_cp G~ s_A + n_E
  ComplexVector eve_time_clean;
};

/// Draws one block at the given variances (unit-variance receiver noise
/// unless `with_noise` is false). Needs a materialized Q.
BlockSample simulate_block(const ChannelRealization& r, const TimeDomainOps& ops, const PrecoderSet& p,
                           const PowerSplit& s, const SystemConfig& c, std::uint64_t seed, bool with_noise = true);

/// T_cp F^* P applied to a subcarrier-major vector (n_ant entries per subcarrier).
ComplexVector transmit_chain(const ComplexVector& subcarrier_major, int n_ant, int n, int cp_len);

}  // namespace anwt
