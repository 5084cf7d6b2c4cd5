// SPDX-License-Identifier: Apache-2.0
#include "anwt/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "anwt/error.hpp"

namespace anwt {
namespace {

using Index = Eigen::Index;

double to_shz(const SystemConfig& c) {
  return static_cast<double>(c.n_subcarriers) / static_cast<double>(c.block_len());
}

double nu_tilde(const SystemConfig& c) { return static_cast<double>(c.taps()); }

void require_spatial_dim(const SystemConfig& c, const char* what) {
  if (c.spatial_dim() <= 0) {
    throw UnsupportedError(std::string(what) + " is undefined for n_a = n_s");
  }
}

// Second term of the average secrecy lower bound, before the N_E N/(N+N_cp)
// factor: log2(theta Gamma_E nu~ var / N / (theta_bar Gamma_E nu~ var (alpha/N + alpha_bar/(N+N_cp)) + 1) + 1).
double eve_term(const SystemConfig& c) {
  const double n = c.n_subcarriers;
  const double snr = c.gamma_eve * nu_tilde(c) * c.var_ae;
  const double noise = (1.0 - c.theta) * snr * (c.alpha / n + (1.0 - c.alpha) / c.block_len()) + 1.0;
  return std::log2(c.theta * snr / n / noise + 1.0);
}

double bob_term(const SystemConfig& c, double theta) {
  const double snr = theta * c.gamma_bob * c.n_alice * nu_tilde(c) * c.var_ab / (c.n_streams * c.n_subcarriers);
  return std::log2(snr + 1.0);
}

}  // namespace

double lambda_alpha(const SystemConfig& c) {
  double value = 0.0;
  if (c.alpha > 0.0) {
    require_spatial_dim(c, "lambda_alpha with alpha > 0");
    value += c.alpha / (static_cast<double>(c.n_subcarriers) * c.spatial_dim());
  }
  if (c.alpha < 1.0 && c.temporal_dim() > 0) value += (1.0 - c.alpha) / c.temporal_dim();
  return value;
}

double p_alpha(const SystemConfig& c) {
  return (1.0 - c.theta) * c.gamma_eve * c.n_alice * nu_tilde(c) * c.var_ae * lambda_alpha(c) + 1.0;
}

double k_alpha(const SystemConfig& c) { return c.alpha + (1.0 - c.alpha) * to_shz(c); }

double lb_avg_secrecy(const SystemConfig& c) {
  require_spatial_dim(c, "average secrecy lower bound");
  return to_shz(c) * (c.n_streams * bob_term(c, c.theta) - c.n_eve * eve_term(c));
}

double ub_eve_avg(const SystemConfig& c) {
  require_spatial_dim(c, "eavesdropper rate upper bound");
  return to_shz(c) * c.n_eve * eve_term(c);
}

double theta_star(const SystemConfig& c) {
  return static_cast<double>(c.n_eve) / static_cast<double>(c.n_eve + c.n_streams);
}

double power_allocation_objective(double theta, int n_streams, int n_eve, double k) {
  const double theta_bar = 1.0 - theta;
  return std::pow(theta, static_cast<double>(n_streams) / n_eve) * theta_bar * k / (theta + theta_bar * k);
}

double objective_argmax(int n_streams, int n_eve) {
  return static_cast<double>(n_streams) / static_cast<double>(n_streams + n_eve);
}

double hi_snr_lb(const SystemConfig& c, const BoundOptions& options) {
  const double k = options.k_alpha_approx ? 1.0 : k_alpha(c);
  const double ts = theta_star(c);
  const double bob = std::log2(c.gamma_bob * c.n_alice * nu_tilde(c) * c.var_ab / (c.n_streams * c.n_subcarriers));
  return to_shz(c) * (c.n_streams * bob + c.n_eve * std::log2(power_allocation_objective(ts, c.n_streams, c.n_eve, k)));
}

double loss_ub_hi_snr(const SystemConfig& c) {
  const double ns = c.n_streams;
  const double ne = c.n_eve;
  return to_shz(c) * (ns * std::log2((ne + ns) / ne) + ne * std::log2((ne + ns) / ns));
}

double loss_ub_hi_snr_large_ne(const SystemConfig& c) {
  return to_shz(c) * c.n_eve * std::log2(static_cast<double>(c.n_eve) / c.n_streams);
}

double loss_ub_ne_eq_ns(const SystemConfig& c) { return 2.0 * c.n_eve * to_shz(c); }

LowSnrBounds lo_snr_bounds(const SystemConfig& c) {
  const double eve = std::log2(c.gamma_eve * nu_tilde(c) * c.var_ae / c.n_subcarriers + 1.0);
  LowSnrBounds b;
  b.loss_ub = to_shz(c) * c.n_eve * eve;
  b.lb_secrecy = to_shz(c) * (c.n_streams * bob_term(c, 1.0) - c.n_eve * eve);
  return b;
}

RegimeFlags regime_flags(const SystemConfig& c) {
  RegimeFlags f;
  const double ratio = static_cast<double>(c.cp_len) / c.n_subcarriers;
  f.large_array = 1.0 - static_cast<double>(c.n_streams) / c.n_alice >= 2.0 * ratio;
  const double bob = c.gamma_bob * c.var_ab;
  const double eve = c.gamma_eve * c.var_ae;
  f.high_snr = bob >= eve && eve >= 10.0;
  f.low_snr = bob >= eve && eve <= 0.1;
  return f;
}

std::array<double, BoundReport::kFields> BoundReport::values() const {
  return {lb_avg_secrecy, ub_eve_avg, hi_snr_lb, theta_star, loss_ub_hi_snr, loss_ub_hi_snr_large_ne,
          loss_ub_ne_eq_ns, loss_ub_lo_snr, lb_lo_snr, k_alpha, lambda_alpha, p_alpha};
}

BoundReport bound_report(const SystemConfig& c, const BoundOptions& options) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const bool spatial = c.spatial_dim() > 0;
  BoundReport b;
  b.lb_avg_secrecy = spatial ? anwt::lb_avg_secrecy(c) : nan;
  b.ub_eve_avg = spatial ? anwt::ub_eve_avg(c) : nan;
  b.hi_snr_lb = anwt::hi_snr_lb(c, options);
  b.theta_star = anwt::theta_star(c);
  b.loss_ub_hi_snr = anwt::loss_ub_hi_snr(c);
  b.loss_ub_hi_snr_large_ne = anwt::loss_ub_hi_snr_large_ne(c);
  b.loss_ub_ne_eq_ns = anwt::loss_ub_ne_eq_ns(c);
  const LowSnrBounds lo = lo_snr_bounds(c);
  b.loss_ub_lo_snr = lo.loss_ub;
  b.lb_lo_snr = lo.lb_secrecy;
  b.k_alpha = anwt::k_alpha(c);
  b.lambda_alpha = spatial || c.alpha == 0.0 ? anwt::lambda_alpha(c) : nan;
  b.p_alpha = spatial || c.alpha == 0.0 ? anwt::p_alpha(c) : nan;
  b.regime = regime_flags(c);
  return b;
}

AsymptoticSecrecy asymptotic_secrecy_matrices(const LinkGeometry& g, const SystemConfig& c) {
  require_spatial_dim(c, "large-array secrecy");
  const PowerSplits s = power_split(c);
  const double noise_scale = (1.0 - c.theta) * c.gamma_eve / (static_cast<double>(c.n_subcarriers) * c.spatial_dim());
  const double amp = std::sqrt(s.eve.per_data_symbol);
  const Index ne = g.n_eve;
  const Index ns = g.eve_data.empty() ? 0 : g.eve_data[0].cols();
  const Index n = g.n_subcarriers;

  ComplexMatrix factor = ComplexMatrix::Zero(n * ne, n * ns);
  ComplexMatrix noise = ComplexMatrix::Zero(n * ne, n * ne);
  AsymptoticSecrecy out;
  for (Index k = 0; k < n; ++k) {
    const auto& ga = g.eve_data[static_cast<std::size_t>(k)];
    const auto& gb = g.eve_spatial[static_cast<std::size_t>(k)];
    // G_k G_k^* = G_k A_k (G_k A_k)^* + G_k B_k (G_k B_k)^*.
    ComplexMatrix gram = ga * ga.adjoint();
    if (gb.cols() > 0) gram.noalias() += gb * gb.adjoint();
    const ComplexMatrix block_noise = noise_scale * gram;
    factor.block(k * ne, k * ns, ne, ns) = amp * ga;
    noise.block(k * ne, k * ne, ne, ne) = block_noise;
    if (amp > 0.0) out.r_eve_persub += logdet_rate_factored(amp * ga, block_noise);
  }
  if (amp > 0.0) out.r_eve_joint = logdet_rate_factored(factor, noise);
  const double bob = bob_rate(g, s);
  out.r_sec_joint = bob - out.r_eve_joint;
  out.r_sec_persub = bob - out.r_eve_persub;
  return out;
}

}  // namespace anwt
