// SPDX-License-Identifier: Apache-2.0
#include "anwt/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "anwt/error.hpp"

namespace anwt {
namespace {

using Index = Eigen::Index;

RateReport scaled(const RateReport& r, double factor) {
  auto v = r.values();
  for (double& x : v) x *= factor;
  return RateReport::from_values(v);
}

}  // namespace

EveStrategy parse_eve_strategy(std::string_view name) {
  if (name == "joint") return EveStrategy::joint;
  if (name == "persub") return EveStrategy::persub;
  if (name == "worst") return EveStrategy::worst;
  throw ValidationError("unknown eve strategy '" + std::string(name) + "' (joint, persub, worst)");
}

std::string_view to_string(EveStrategy s) {
  switch (s) {
    case EveStrategy::joint: return "joint";
    case EveStrategy::persub: return "persub";
    case EveStrategy::worst: return "worst";
  }
  return "worst";
}

std::array<double, RateReport::kFields> RateReport::values() const {
  return {r_bob, r_eve_joint, r_eve_persub, r_eve, r_sec_raw, r_sec_clipped, r_no_eve, r_no_eve_full, s_loss, s_loss_full};
}

RateReport RateReport::from_values(const std::array<double, kFields>& v) {
  RateReport r;
  r.r_bob = v[0];
  r.r_eve_joint = v[1];
  r.r_eve_persub = v[2];
  r.r_eve = v[3];
  r.r_sec_raw = v[4];
  r.r_sec_clipped = v[5];
  r.r_no_eve = v[6];
  r.r_no_eve_full = v[7];
  r.s_loss = v[8];
  r.s_loss_full = v[9];
  return r;
}

RateReport RateReport::per_shz(const SystemConfig& c) const { return scaled(*this, 1.0 / c.block_len()); }

LinkGeometry link_geometry(const ChannelRealization& r, const PrecoderSet& p, const SystemConfig& c) {
  LinkGeometry g;
  g.n_subcarriers = c.n_subcarriers;
  g.n_eve = c.n_eve;
  g.bob_gains = p.gains;
  g.eve_data.reserve(static_cast<std::size_t>(c.n_subcarriers));
  g.eve_spatial.reserve(static_cast<std::size_t>(c.n_subcarriers));
  for (int k = 0; k < c.n_subcarriers; ++k) {
    const auto& gk = r.freq_ae[static_cast<std::size_t>(k)];
    g.eve_data.push_back(gk * p.data[static_cast<std::size_t>(k)]);
    g.eve_spatial.push_back(gk * p.spatial[static_cast<std::size_t>(k)]);
  }
  g.eve_temporal_gram = p.eve_temporal_gram;
  return g;
}

LinkGeometry restrict_eve(const LinkGeometry& g, int n_eve) {
  if (n_eve < 1 || n_eve > g.n_eve) throw ContractError("restrict_eve: antenna count out of range");
  LinkGeometry out;
  out.n_subcarriers = g.n_subcarriers;
  out.n_eve = n_eve;
  out.bob_gains = g.bob_gains;
  for (std::size_t k = 0; k < g.eve_data.size(); ++k) {
    out.eve_data.push_back(g.eve_data[k].topRows(n_eve));
    out.eve_spatial.push_back(g.eve_spatial[k].topRows(n_eve));
  }
  const Index n = g.n_subcarriers;
  out.eve_temporal_gram.resize(n * n_eve, n * n_eve);
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      out.eve_temporal_gram.block(k * n_eve, l * n_eve, n_eve, n_eve) =
          g.eve_temporal_gram.block(k * g.n_eve, l * g.n_eve, n_eve, n_eve);
    }
  }
  return out;
}

double bob_rate(const ChannelRealization& r, const PrecoderSet& p, const PowerSplits& s, const SystemConfig& c) {
  double total = 0.0;
  const ComplexMatrix zero = ComplexMatrix::Zero(c.n_streams, c.n_streams);
  for (int k = 0; k < c.n_subcarriers; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const ComplexMatrix chain = p.filter[idx].adjoint() * r.freq_ab[idx] * p.data[idx];
    total += logdet_rate(s.bob.per_data_symbol * chain * chain.adjoint(), zero);
  }
  return total;
}

double bob_rate(const LinkGeometry& g, const PowerSplits& s) {
  double nats = 0.0;
  for (const auto& gains : g.bob_gains) {
    for (Index m = 0; m < gains.size(); ++m) nats += std::log1p(s.bob.per_data_symbol * gains(m) * gains(m));
  }
  return nats / std::numbers::ln2;
}

ComplexMatrix eve_covariance_block(const LinkGeometry& g, const PowerSplits& s, int k) {
  const Index ne = g.n_eve;
  ComplexMatrix sigma = s.eve.per_temporal_symbol * g.eve_temporal_gram.block(k * ne, k * ne, ne, ne);
  const auto& gb = g.eve_spatial[static_cast<std::size_t>(k)];
  if (gb.cols() > 0 && s.eve.per_spatial_symbol > 0.0) sigma.noalias() += s.eve.per_spatial_symbol * gb * gb.adjoint();
  return sigma;
}

ComplexMatrix eve_covariance_joint(const LinkGeometry& g, const PowerSplits& s) {
  const Index ne = g.n_eve;
  ComplexMatrix sigma = s.eve.per_temporal_symbol * g.eve_temporal_gram;
  if (s.eve.per_spatial_symbol > 0.0) {
    for (Index k = 0; k < g.n_subcarriers; ++k) {
      const auto& gb = g.eve_spatial[static_cast<std::size_t>(k)];
      if (gb.cols() > 0) sigma.block(k * ne, k * ne, ne, ne).noalias() += s.eve.per_spatial_symbol * gb * gb.adjoint();
    }
  }
  return sigma;
}

double eve_rate_joint(const LinkGeometry& g, const PowerSplits& s) {
  if (s.eve.per_data_symbol <= 0.0) return 0.0;
  const Index ne = g.n_eve;
  const Index ns = g.eve_data.empty() ? 0 : g.eve_data[0].cols();
  ComplexMatrix factor = ComplexMatrix::Zero(g.n_subcarriers * ne, g.n_subcarriers * ns);
  const double amp = std::sqrt(s.eve.per_data_symbol);
  for (Index k = 0; k < g.n_subcarriers; ++k) factor.block(k * ne, k * ns, ne, ns) = amp * g.eve_data[static_cast<std::size_t>(k)];
  return logdet_rate_factored(factor, eve_covariance_joint(g, s));
}

double eve_rate_persub(const LinkGeometry& g, const PowerSplits& s) {
  if (s.eve.per_data_symbol <= 0.0) return 0.0;
  double total = 0.0;
  const double amp = std::sqrt(s.eve.per_data_symbol);
  for (int k = 0; k < g.n_subcarriers; ++k) {
    const ComplexMatrix factor = amp * g.eve_data[static_cast<std::size_t>(k)];
    total += logdet_rate_factored(factor, eve_covariance_block(g, s, k));
  }
  return total;
}

RateReport secrecy_report(const LinkGeometry& g, const SystemConfig& c, EveStrategy strategy) {
  const PowerSplits s = power_split(c);
  SystemConfig full = c;
  full.theta = 1.0;
  RateReport r;
  r.r_bob = bob_rate(g, s);
  r.r_eve_joint = eve_rate_joint(g, s);
  r.r_eve_persub = eve_rate_persub(g, s);
  switch (strategy) {
    case EveStrategy::joint: r.r_eve = r.r_eve_joint; break;
    case EveStrategy::persub: r.r_eve = r.r_eve_persub; break;
    case EveStrategy::worst: r.r_eve = std::max(r.r_eve_joint, r.r_eve_persub); break;
  }
  r.r_sec_raw = r.r_bob - r.r_eve;
  r.r_sec_clipped = std::max(r.r_sec_raw, 0.0);
  r.r_no_eve = r.r_bob;
  r.r_no_eve_full = bob_rate(g, power_split(full));
  r.s_loss = r.r_no_eve - r.r_sec_clipped;
  r.s_loss_full = r.r_no_eve_full - r.r_sec_clipped;
  return r;
}

}  // namespace anwt
