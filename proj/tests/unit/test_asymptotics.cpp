// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "anwt/an_design.hpp"
#include "anwt/asymptotics.hpp"
#include "anwt/error.hpp"
#include "helpers.hpp"

using namespace anwt;
using anwt::test::make_config;

namespace {

// N = 64, N_cp = nu = 16, N_B = N_s = 2.
SystemConfig reference(int na, int ne, double gamma_db = 20.0) {
  SystemConfig c = make_config(64, 16, 16, na, 2, 2, ne);
  c.gamma_bob = db_to_linear(gamma_db);
  c.gamma_eve = db_to_linear(gamma_db);
  return c;
}

LinkGeometry geometry(const SystemConfig& c, std::uint64_t seed) {
  const ChannelRealization r = draw_channel(c, seed);
  const TimeDomainOps ops = build_time_ops(r, c);
  DesignOptions o;
  o.route = TemporalRoute::complement;
  const PrecoderSet p = design_precoders(r, ops, c, o);
  return link_geometry(r, p, c);
}

}  // namespace

TEST_CASE("equal antenna loss bound") {
  const SystemConfig c = reference(10, 2);
  CHECK(loss_ub_ne_eq_ns(c) == doctest::Approx(3.2).epsilon(1e-14));
  CHECK(loss_ub_hi_snr(c) == doctest::Approx(3.2).epsilon(1e-14));
  CHECK(bound_report(c).loss_ub_ne_eq_ns == doctest::Approx(2.0 * 2.0 * 64.0 / 80.0));
}

TEST_CASE("large eavesdropper array loss bound") {
  const SystemConfig c = reference(10, 8);
  CHECK(loss_ub_hi_snr_large_ne(c) == doctest::Approx(0.8 * 8.0 * 2.0).epsilon(1e-14));
  const double full = 0.8 * (2.0 * std::log2(10.0 / 8.0) + 8.0 * std::log2(10.0 / 2.0));
  CHECK(loss_ub_hi_snr(c) == doctest::Approx(full).epsilon(1e-14));
  CHECK(loss_ub_hi_snr(c) >= loss_ub_hi_snr_large_ne(c));
}

TEST_CASE("data share allocation") {
  CHECK(theta_star(reference(10, 2)) == 0.5);
  CHECK(theta_star(reference(10, 4)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  SystemConfig many = make_config(8, 2, 2, 4, 1, 1, 1000);
  CHECK(theta_star(many) == doctest::Approx(1000.0 / 1001.0));
  CHECK(theta_star(many) > 0.99);
}

TEST_CASE("objective maximizer by grid search") {
  for (auto [ns, ne] : {std::pair{2, 2}, std::pair{1, 3}, std::pair{2, 4}, std::pair{3, 1}, std::pair{4, 2}}) {
    double best = -1.0, arg = 0.0;
    for (int i = 1; i < 100000; ++i) {
      const double t = i * 1e-5;
      const double f = std::pow(t, static_cast<double>(ns) / ne) * (1.0 - t);
      if (f > best) {
        best = f;
        arg = t;
      }
    }
    CHECK(std::abs(objective_argmax(ns, ne) - arg) <= 1e-3);
    CHECK(power_allocation_objective(arg, ns, ne, 1.0) == doctest::Approx(best).epsilon(1e-12));
    if (ns == ne) CHECK(std::abs(theta_star(make_config(8, 2, 2, ns + 1, ns, ns, ne)) - arg) <= 1e-3);
  }
}

TEST_CASE("noise level factors") {
  SystemConfig c = reference(4, 2);
  c.alpha = 0.5;
  c.theta = 0.5;
  const double lambda = 0.5 / 128.0 + 0.5 / 192.0;
  CHECK(lambda_alpha(c) == doctest::Approx(lambda).epsilon(1e-15));
  CHECK(p_alpha(c) == doctest::Approx(0.5 * 100.0 * 4.0 * 17.0 * lambda + 1.0).epsilon(1e-14));
  CHECK(k_alpha(c) == doctest::Approx(0.5 + 0.5 * 0.8).epsilon(1e-15));
  for (double a : {0.0, 0.3, 1.0}) {
    c.alpha = a;
    CHECK(k_alpha(c) >= 0.8 - 1e-15);
    CHECK(k_alpha(c) <= 1.0 + 1e-15);
    CHECK(p_alpha(c) >= 1.0);
  }
}

TEST_CASE("average secrecy lower bound at full data share") {
  SystemConfig c = reference(10, 2);
  c.theta = 1.0;
  const double bob = std::log2(100.0 * 10.0 * 17.0 / 128.0 + 1.0);
  const double eve = std::log2(100.0 * 17.0 / 64.0 + 1.0);
  CHECK(lb_avg_secrecy(c) == doctest::Approx(0.8 * (2.0 * bob - 2.0 * eve)).epsilon(1e-13));
  CHECK(ub_eve_avg(c) == doctest::Approx(0.8 * 2.0 * eve).epsilon(1e-13));
  // Same value from the low-snr form, which fixes theta = 1.
  CHECK(lo_snr_bounds(c).lb_secrecy == doctest::Approx(lb_avg_secrecy(c)).epsilon(1e-13));
}

TEST_CASE("average secrecy lower bound with noise") {
  SystemConfig c = reference(10, 2);
  c.theta = 0.5;
  c.alpha = 0.25;
  const double bob = std::log2(0.5 * 100.0 * 10.0 * 17.0 / 128.0 + 1.0);
  const double noise = 0.5 * 100.0 * 17.0 * (0.25 / 64.0 + 0.75 / 80.0) + 1.0;
  const double eve = std::log2(0.5 * 100.0 * 17.0 / 64.0 / noise + 1.0);
  CHECK(lb_avg_secrecy(c) == doctest::Approx(0.8 * (2.0 * bob - 2.0 * eve)).epsilon(1e-13));
}

TEST_CASE("deaf eavesdropper limit of the lower bound") {
  SystemConfig c = reference(10, 2);
  c.theta = 0.7;
  c.var_ae = 0.0;
  CHECK(lb_avg_secrecy(c) == doctest::Approx(0.8 * 2.0 * std::log2(0.7 * 100.0 * 10.0 * 17.0 / 128.0 + 1.0)));
  CHECK(ub_eve_avg(c) == 0.0);
}

TEST_CASE("eavesdropper bound boundaries") {
  SystemConfig c = reference(10, 2);
  c.theta = 0.0;
  CHECK(ub_eve_avg(c) == 0.0);
  c.theta = 0.5;
  c.alpha = 0.0;
  const double at0 = ub_eve_avg(c);
  c.alpha = 1.0;
  const double at1 = ub_eve_avg(c);
  CHECK(std::abs(at0 - at1) / at1 <= 16.0 / 64.0);
  CHECK(at0 >= at1);
}

TEST_CASE("high snr lower bound") {
  SystemConfig c = reference(64, 2, 30.0);
  c.alpha = 1.0;
  const double bob = std::log2(1000.0 * 64.0 * 17.0 / 128.0);
  // theta* = 1/2 and K = 1 give 0.5 * 0.5 / (0.5 + 0.5) = 1/4.
  CHECK(hi_snr_lb(c) == doctest::Approx(0.8 * (2.0 * bob - 4.0)).epsilon(1e-13));
  BoundOptions approx;
  approx.k_alpha_approx = true;
  c.alpha = 0.0;
  CHECK(hi_snr_lb(c, approx) == doctest::Approx(0.8 * (2.0 * bob - 4.0)).epsilon(1e-13));
  // K = 0.8: 0.25 * 0.8 / (0.5 + 0.4).
  CHECK(hi_snr_lb(c) == doctest::Approx(0.8 * (2.0 * bob + 2.0 * std::log2(0.2 / 0.9))).epsilon(1e-13));
}

TEST_CASE("low snr bounds") {
  SystemConfig c = reference(10, 2);
  c.gamma_eve = db_to_linear(-10.0);
  c.theta = 1.0;
  CHECK(lo_snr_bounds(c).loss_ub == doctest::Approx(2.0 * 64.0 / 80.0 * std::log2(0.1 * 17.0 / 64.0 + 1.0)).epsilon(1e-12));
  c.gamma_eve = 0.0;
  CHECK(lo_snr_bounds(c).loss_ub == 0.0);
}

TEST_CASE("bounds are invariant to trading eavesdropper snr against channel variance") {
  for (double theta : {0.3, 0.5, 1.0}) {
    SystemConfig a = reference(10, 3);
    a.theta = theta;
    a.alpha = 0.4;
    SystemConfig b = a;
    b.gamma_eve = a.gamma_eve * 7.0;
    b.var_ae = a.var_ae / 7.0;
    const auto va = bound_report(a).values();
    const auto vb = bound_report(b).values();
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(vb[i] == doctest::Approx(va[i]).epsilon(1e-12));
  }
}

TEST_CASE("bound report with equal antennas and streams") {
  const SystemConfig c = reference(2, 2);
  CHECK_THROWS_AS(lb_avg_secrecy(c), UnsupportedError);
  CHECK_THROWS_AS(ub_eve_avg(c), UnsupportedError);
  const BoundReport b = bound_report(c);
  CHECK(std::isnan(b.lb_avg_secrecy));
  CHECK(std::isnan(b.ub_eve_avg));
  CHECK(std::isfinite(b.hi_snr_lb));
  CHECK(b.theta_star == 0.5);
  CHECK_THROWS_AS(asymptotic_secrecy_matrices(geometry(make_config(8, 2, 2, 2, 2, 2, 2), 1),
                                              make_config(8, 2, 2, 2, 2, 2, 2)),
                  UnsupportedError);
}

TEST_CASE("regime flags") {
  SystemConfig c = reference(10, 2, 30.0);
  RegimeFlags f = regime_flags(c);
  CHECK(f.large_array);
  CHECK(f.high_snr);
  CHECK_FALSE(f.low_snr);
  c.gamma_eve = db_to_linear(-10.0);
  f = regime_flags(c);
  CHECK(f.low_snr);
  CHECK_FALSE(f.high_snr);
  CHECK_FALSE(regime_flags(reference(2, 2)).large_array);
}

TEST_CASE("large-array secrecy expression") {
  SystemConfig c = make_config(8, 2, 2, 4, 2, 2, 2);
  c.theta = 0.0;
  const AsymptoticSecrecy zero = asymptotic_secrecy_matrices(geometry(c, 2), c);
  CHECK(zero.r_eve_joint == 0.0);
  CHECK(zero.r_sec_joint == 0.0);

  c.theta = 0.5;
  const LinkGeometry g = geometry(c, 3);
  std::vector<double> joint;
  for (double a : {0.0, 0.5, 1.0}) {
    c.alpha = a;
    joint.push_back(asymptotic_secrecy_matrices(g, c).r_sec_joint);
  }
  CHECK(std::abs(joint[0] - joint[1]) <= 1e-12 * std::abs(joint[0]));
  CHECK(std::abs(joint[0] - joint[2]) <= 1e-12 * std::abs(joint[0]));
}

TEST_CASE("large-array secrecy approximates the exact secrecy rate") {
  SystemConfig c = reference(64, 2);
  c.theta = 0.5;
  c.alpha = 0.5;
  const LinkGeometry g = geometry(c, 4);
  const AsymptoticSecrecy approx = asymptotic_secrecy_matrices(g, c);
  const RateReport exact = secrecy_report(g, c, EveStrategy::joint);
  const double gap = std::abs(approx.r_sec_joint - exact.r_sec_raw) / exact.r_sec_raw;
  MESSAGE("relative gap " << gap);
  CHECK(gap <= 0.03);
  CHECK(std::abs(approx.r_sec_persub - secrecy_report(g, c, EveStrategy::persub).r_sec_raw) /
            exact.r_sec_raw <= 0.03);
}
