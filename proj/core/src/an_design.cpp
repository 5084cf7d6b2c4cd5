// SPDX-License-Identifier: Apache-2.0
#include "anwt/an_design.hpp"

#include <cmath>
#include <random>
#include <string>

#include "anwt/error.hpp"

namespace anwt {
namespace {

using Index = Eigen::Index;

struct SubcarrierSvd {
  DataDesign data;
  std::vector<ComplexMatrix> spatial;
};

SubcarrierSvd decompose(const ChannelRealization& r, const SystemConfig& c) {
  const int n = c.n_subcarriers;
  const int ns = c.n_streams;
  SubcarrierSvd out;
  out.data.data.reserve(static_cast<std::size_t>(n));
  out.data.filter.reserve(static_cast<std::size_t>(n));
  out.data.gains.reserve(static_cast<std::size_t>(n));
  out.spatial.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const ComplexMatrix& h = r.freq_ab[static_cast<std::size_t>(k)];
    const SvdResult s = svd(h, SvdVectors::full);
    const double top = s.singular_values.size() > 0 ? s.singular_values(0) : 0.0;
    if (!(top > 0.0) || !(s.singular_values(ns - 1) > 1e-10 * top)) {
      throw DegeneracyError("channel at subcarrier " + std::to_string(k) + " has rank below n_s = " +
                            std::to_string(ns));
    }
    out.data.data.push_back(s.right.leftCols(ns));
    out.data.filter.push_back(s.left.leftCols(ns));
    out.data.gains.push_back(s.singular_values.head(ns));
    out.spatial.push_back(s.right.rightCols(c.n_alice - ns));
  }
  return out;
}

void check_temporal_dim(Index found, const SystemConfig& c, const char* route) {
  if (found != c.temporal_dim()) {
    throw RankAnomalyError(std::string(route) + ": temporal noise dimension " + std::to_string(found) +
                           ", expected " + std::to_string(c.temporal_dim()));
  }
}

}  // namespace

PowerSplit power_split(const SystemConfig& c, double total_power) {
  const double theta_bar = 1.0 - c.theta;
  const double n = c.n_subcarriers;
  const double data_len = c.exact_cp_power ? static_cast<double>(c.block_len()) : n;
  PowerSplit s;
  s.per_data_symbol = c.theta * total_power / (c.n_streams * data_len);
  if (c.spatial_dim() > 0) s.per_spatial_symbol = c.alpha * theta_bar * total_power / (n * c.spatial_dim());
  if (c.temporal_dim() > 0) s.per_temporal_symbol = (1.0 - c.alpha) * theta_bar * total_power / c.temporal_dim();
  return s;
}

PowerSplits power_split(const SystemConfig& c) { return {power_split(c, c.gamma_bob), power_split(c, c.gamma_eve)}; }

DataDesign design_data_and_filter(const ChannelRealization& r, const SystemConfig& c) {
  return decompose(r, c).data;
}

std::vector<ComplexMatrix> design_spatial_an(const ChannelRealization& r, const SystemConfig& c) {
  return decompose(r, c).spatial;
}

ComplexMatrix bob_chain_matrix(const TimeDomainOps& ops, const std::vector<ComplexMatrix>& filter,
                               const SystemConfig& c) {
  const int n = c.n_subcarriers;
  const int nb = c.n_bob;
  const int ns = c.n_streams;
  const ComplexMatrix y = frequency_chain(ops.conv_ab, nb, n);
  ComplexMatrix x(static_cast<Index>(ns) * n, y.cols());
  for (int k = 0; k < n; ++k) {
    x.middleRows(static_cast<Index>(k) * ns, ns).noalias() =
        filter[static_cast<std::size_t>(k)].adjoint() * y.middleRows(static_cast<Index>(k) * nb, nb);
  }
  return x;
}

ComplexMatrix design_temporal_an_generic(const TimeDomainOps& ops, const std::vector<ComplexMatrix>& filter,
                                         const SystemConfig& c) {
  const ComplexMatrix x = bob_chain_matrix(ops, filter, c);
  ComplexMatrix q = null_space_basis(x);
  check_temporal_dim(q.cols(), c, "null-space route");
  return q;
}

std::vector<int> toeplitz_window_offsets(const TimeDomainOps& ops, const SystemConfig& c, ToeplitzWindow window) {
  const int ns = c.n_streams;
  const int nu = c.delay_spread;
  const int n = c.n_subcarriers;
  const int len = c.block_len();
  const int base = c.cp_len - nu;
  std::vector<int> offsets(static_cast<std::size_t>(ns), base);
  if (window == ToeplitzWindow::leading || nu == 0) return offsets;

  // Tap matrices between the first N_s transmit antennas and the receiver.
  std::vector<ComplexMatrix> h(static_cast<std::size_t>(nu + 1), ComplexMatrix(ns, ns));
  for (int l = 0; l <= nu; ++l) {
    for (int b = 0; b < ns; ++b) {
      for (int a = 0; a < ns; ++a) {
        h[static_cast<std::size_t>(l)](b, a) = ops.conv_ab(static_cast<Index>(b) * n, static_cast<Index>(a) * len + c.cp_len - l);
      }
    }
  }
  // Roots of det(sum_l h_l z^{nu - l}) from the block companion matrix; the
  // count inside the unit disc is the total shift that zeroes the winding.
  Eigen::PartialPivLU<ComplexMatrix> lead(h[0]);
  if (!(lead.rcond() > 1e-14)) return offsets;
  const Index size = static_cast<Index>(ns) * nu;
  ComplexMatrix companion = ComplexMatrix::Zero(size, size);
  for (int l = 1; l <= nu; ++l) {
    companion.block(0, static_cast<Index>(l - 1) * ns, ns, ns) = -lead.solve(h[static_cast<std::size_t>(l)]);
  }
  if (nu > 1) companion.bottomLeftCorner(size - ns, size - ns).setIdentity();
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(companion, false);
  if (eig.info() != Eigen::Success) throw NumericalError("toeplitz window: companion eigensolver failed");
  int inside = 0;
  for (Index i = 0; i < size; ++i) inside += std::abs(eig.eigenvalues()(i)) < 1.0 ? 1 : 0;
  for (int a = 0; a < ns; ++a) offsets[static_cast<std::size_t>(a)] = base + inside / ns + (a < inside % ns ? 1 : 0);
  return offsets;
}

ComplexMatrix design_temporal_an_toeplitz(const TimeDomainOps& ops, const SystemConfig& c, std::uint64_t seed,
                                          ToeplitzMode mode, ToeplitzWindow window) {
  if (c.n_bob != c.n_streams) {
    throw UnsupportedError("toeplitz route needs n_b = n_s (got n_b = " + std::to_string(c.n_bob) + ", n_s = " +
                           std::to_string(c.n_streams) + "); use the null-space route");
  }
  if (mode == ToeplitzMode::circulant && window != ToeplitzWindow::leading) {
    throw UnsupportedError("circulant toeplitz solve is defined for the leading window only");
  }
  const int n = c.n_subcarriers;
  const int ns = c.n_streams;
  const int na = c.n_alice;
  const int nu = c.delay_spread;
  const int len = c.block_len();
  const Index dim = c.temporal_dim();
  const Index rows = static_cast<Index>(na) * len;
  const std::vector<int> offsets = toeplitz_window_offsets(ops, c, window);

  std::vector<char> solved(static_cast<std::size_t>(rows), 0);
  for (int a = 0; a < ns; ++a) {
    for (int i = 0; i < n; ++i) solved[static_cast<std::size_t>(a * len + offsets[static_cast<std::size_t>(a)] + i)] = 1;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ComplexMatrix q = ComplexMatrix::Zero(rows, dim);
  for (Index row = 0; row < rows; ++row) {
    if (solved[static_cast<std::size_t>(row)]) continue;
    for (Index col = 0; col < dim; ++col) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      q(row, col) = Complex(re, im);
    }
  }
  if (dim == 0) return q;
  const ComplexMatrix rhs = -(ops.conv_ab * q);

  auto window_row = [&](int a, int i) { return static_cast<Index>(a) * len + offsets[static_cast<std::size_t>(a)] + i; };
  if (window == ToeplitzWindow::leading) {
    // Unknowns interleaved as z[i N_s + a] make the system block upper
    // triangular Toeplitz with blocks M_d[b][a] = h_{nu-d}[b][a].
    const int off = offsets[0];
    ComplexMatrix rhs_interleaved(static_cast<Index>(n) * ns, dim);
    for (int b = 0; b < ns; ++b) {
      for (int i = 0; i < n; ++i) rhs_interleaved.row(static_cast<Index>(i) * ns + b) = rhs.row(static_cast<Index>(b) * n + i);
    }
    std::vector<ComplexMatrix> taps(static_cast<std::size_t>(nu + 1), ComplexMatrix(ns, ns));
    for (int d = 0; d <= nu; ++d) {
      for (int b = 0; b < ns; ++b) {
        for (int a = 0; a < ns; ++a) {
          taps[static_cast<std::size_t>(d)](b, a) = ops.conv_ab(static_cast<Index>(b) * n, static_cast<Index>(a) * len + off + d);
        }
      }
    }
    const ComplexMatrix z = block_toeplitz_apply_inverse(taps, rhs_interleaved, mode);
    for (int a = 0; a < ns; ++a) {
      for (int i = 0; i < n; ++i) q.row(window_row(a, i)) = z.row(static_cast<Index>(i) * ns + a);
    }
    return gram_schmidt(q);
  }

  ComplexMatrix system(static_cast<Index>(ns) * n, static_cast<Index>(ns) * n);
  for (int a = 0; a < ns; ++a) {
    for (int j = 0; j < n; ++j) system.col(static_cast<Index>(a) * n + j) = ops.conv_ab.col(window_row(a, j));
  }
  Eigen::PartialPivLU<ComplexMatrix> lu(system);
  if (!(lu.rcond() > 1e-14)) throw SingularityError("toeplitz route: window system is singular");
  const ComplexMatrix z = lu.solve(rhs);
  for (int a = 0; a < ns; ++a) {
    for (int i = 0; i < n; ++i) q.row(window_row(a, i)) = z.row(static_cast<Index>(a) * n + i);
  }
  return gram_schmidt(q);
}

ComplexMatrix eve_temporal_block(const PrecoderSet& p, const SystemConfig& c, int k) {
  return p.eve_temporal.middleRows(static_cast<Index>(k) * c.n_eve, c.n_eve);
}

PrecoderSet design_precoders(const ChannelRealization& r, const TimeDomainOps& ops, const SystemConfig& c,
                             const DesignOptions& options) {
  SubcarrierSvd s = decompose(r, c);
  PrecoderSet p;
  p.data = std::move(s.data.data);
  p.filter = std::move(s.data.filter);
  p.gains = std::move(s.data.gains);
  p.spatial = std::move(s.spatial);

  const ComplexMatrix eve_chain = frequency_chain(ops.conv_ae, c.n_eve, c.n_subcarriers);
  switch (options.route) {
    case TemporalRoute::generic:
      p.temporal = design_temporal_an_generic(ops, p.filter, c);
      break;
    case TemporalRoute::toeplitz:
      p.temporal = design_temporal_an_toeplitz(ops, c, options.seed, options.toeplitz_mode, options.toeplitz_window);
      break;
    case TemporalRoute::complement: {
      // Q Q^* = I - R R^* with R an orthonormal basis of range(X^*).
      const ComplexMatrix rowspace = row_space_basis(bob_chain_matrix(ops, p.filter, c));
      check_temporal_dim(ops.conv_ab.cols() - rowspace.cols(), c, "complement route");
      const ComplexMatrix w = eve_chain * rowspace;
      ComplexMatrix gram(eve_chain.rows(), eve_chain.rows());
      gram.noalias() = eve_chain * eve_chain.adjoint();
      gram.noalias() -= w * w.adjoint();
      p.eve_temporal_gram = (gram + gram.adjoint()) * 0.5;
      return p;
    }
  }
  p.eve_temporal = eve_chain * p.temporal;
  p.eve_temporal_gram = p.eve_temporal * p.eve_temporal.adjoint();
  return p;
}

ComplexVector transmit_chain(const ComplexVector& subcarrier_major, int n_ant, int n, int cp_len) {
  const ComplexMatrix f_adj = dft_matrix(n).adjoint();
  const int len = n + cp_len;
  ComplexVector out(static_cast<Index>(n_ant) * len);
  ComplexVector per_antenna(n);
  for (int a = 0; a < n_ant; ++a) {
    for (int k = 0; k < n; ++k) per_antenna(k) = subcarrier_major(static_cast<Index>(k) * n_ant + a);
    const ComplexVector time = f_adj * per_antenna;
    out.segment(static_cast<Index>(a) * len, cp_len) = time.tail(cp_len);
    out.segment(static_cast<Index>(a) * len + cp_len, n) = time;
  }
  return out;
}

BlockSample simulate_block(const ChannelRealization&, const TimeDomainOps& ops, const PrecoderSet& p,
                           const PowerSplit& s, const SystemConfig& c, std::uint64_t seed, bool with_noise) {
  if (p.temporal.size() == 0 && c.temporal_dim() > 0) {
    throw ContractError("simulate_block: temporal precoder is not materialized");
  }
  const int n = c.n_subcarriers;
  const int na = c.n_alice;
  const int ns = c.n_streams;
  const int nsp = c.spatial_dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&](Index size, double var) {
    const double scale = std::sqrt(var / 2.0);
    ComplexVector v(size);
    for (Index i = 0; i < size; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v(i) = Complex(scale * re, scale * im);
    }
    return v;
  };

  BlockSample out;
  out.data = draw(static_cast<Index>(ns) * n, s.per_data_symbol);
  out.spatial_noise = draw(static_cast<Index>(nsp) * n, s.per_spatial_symbol);
  out.temporal_noise = draw(c.temporal_dim(), s.per_temporal_symbol);

  ComplexVector precoded(static_cast<Index>(na) * n);
  for (int k = 0; k < n; ++k) {
    auto seg = precoded.segment(static_cast<Index>(k) * na, na);
    seg = p.data[static_cast<std::size_t>(k)] * out.data.segment(static_cast<Index>(k) * ns, ns);
    if (nsp > 0) seg += p.spatial[static_cast<std::size_t>(k)] * out.spatial_noise.segment(static_cast<Index>(k) * nsp, nsp);
  }
  out.transmitted = transmit_chain(precoded, na, n, c.cp_len);
  if (c.temporal_dim() > 0) out.transmitted += p.temporal * out.temporal_noise;

  const ComplexVector bob_time_clean = ops.conv_ab * out.transmitted;
  ComplexVector bob_time = bob_time_clean;
  out.eve_time_clean = ops.conv_ae * out.transmitted;
  out.eve_time = out.eve_time_clean;
  if (with_noise) {
    bob_time += draw(bob_time.size(), 1.0);
    out.eve_time += draw(out.eve_time.size(), 1.0);
  }
  auto filter = [&](const ComplexVector& time) {
    const ComplexMatrix freq = frequency_chain(time, c.n_bob, n);
    ComplexVector y(static_cast<Index>(ns) * n);
    for (int k = 0; k < n; ++k) {
      y.segment(static_cast<Index>(k) * ns, ns) =
          p.filter[static_cast<std::size_t>(k)].adjoint() * freq.col(0).segment(static_cast<Index>(k) * c.n_bob, c.n_bob);
    }
    return y;
  };
  out.bob_clean = filter(bob_time_clean);
  out.bob_filtered = filter(bob_time);
  return out;
}

}  // namespace anwt
