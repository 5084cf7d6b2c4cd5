// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "anwt/an_design.hpp"
#include "anwt/error.hpp"
#include "anwt/rates.hpp"
#include "helpers.hpp"

using namespace anwt;
using anwt::test::log2_abs_det;
using anwt::test::make_config;

namespace {

struct Sample {
  ChannelRealization r;
  PrecoderSet p;
  LinkGeometry g;
};

Sample make_sample(const SystemConfig& c, std::uint64_t seed) {
  Sample l{draw_channel(c, seed), {}, {}};
  const TimeDomainOps ops = build_time_ops(l.r, c);
  l.p = design_precoders(l.r, ops, c);
  l.g = link_geometry(l.r, l.p, c);
  return l;
}

// log2 det(noise + signal) - log2 det(noise), both by LU.
double direct_rate(const ComplexMatrix& signal, const ComplexMatrix& noise) {
  return log2_abs_det(noise + signal) - log2_abs_det(noise);
}

ComplexMatrix eve_signal(const LinkGeometry& g, double data_power) {
  const ComplexMatrix ga = block_diagonal(g.eve_data);
  return data_power * ga * ga.adjoint();
}

}  // namespace

TEST_CASE("zero data power gives zero rates") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 2);
  c.theta = 0.0;
  const Sample l = make_sample(c, 1);
  const PowerSplits s = power_split(c);
  CHECK(bob_rate(l.g, s) == 0.0);
  CHECK(bob_rate(l.r, l.p, s, c) == doctest::Approx(0.0));
  CHECK(std::abs(eve_rate_joint(l.g, s)) <= 1e-12);
  CHECK(std::abs(eve_rate_persub(l.g, s)) <= 1e-12);
}

TEST_CASE("scalar chain receiver rate") {
  SystemConfig c = make_config(8, 2, 2, 1, 1, 1, 1);
  c.theta = 0.7;
  const Sample l = make_sample(c, 2);
  double expected = 0.0;
  for (const auto& h : l.r.freq_ab) expected += std::log2(1.0 + c.theta * c.gamma_bob * std::norm(h(0, 0)) / 8.0);
  const PowerSplits s = power_split(c);
  CHECK(bob_rate(l.g, s) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(bob_rate(l.r, l.p, s, c) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("receiver rate equals the block diagonal determinant") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SystemConfig c = make_config(8, 2, 2, 4, 3, 2, 2);
    const Sample l = make_sample(c, seed);
    const PowerSplits s = power_split(c);
    std::vector<ComplexMatrix> chain;
    for (int k = 0; k < 8; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      chain.push_back(l.p.filter[kk].adjoint() * l.r.freq_ab[kk] * l.p.data[kk]);
    }
    const ComplexMatrix big = block_diagonal(chain);
    const ComplexMatrix id = ComplexMatrix::Identity(big.rows(), big.rows());
    const double oracle = log2_abs_det(id + s.bob.per_data_symbol * big * big.adjoint());
    CHECK(std::abs(bob_rate(l.r, l.p, s, c) - oracle) <= 1e-9);
    CHECK(std::abs(bob_rate(l.g, s) - oracle) <= 1e-9);
  }
}

TEST_CASE("eavesdropper covariance boundaries") {
  SystemConfig c = make_config(8, 2, 2, 4, 2, 2, 2);
  c.theta = 1.0;
  const Sample l = make_sample(c, 3);
  CHECK(eve_covariance_joint(l.g, power_split(c)).norm() == 0.0);

  c.theta = 0.4;
  c.alpha = 1.0;
  const PowerSplits s = power_split(c);
  const ComplexMatrix gb = block_diagonal(l.g.eve_spatial);
  const ComplexMatrix expected = s.eve.per_spatial_symbol * gb * gb.adjoint();
  const ComplexMatrix sigma = eve_covariance_joint(l.g, s);
  CHECK((sigma - expected).norm() <= 1e-12 * expected.norm());
  CHECK((sigma - sigma.adjoint()).norm() <= 1e-12 * sigma.norm());
  for (int k = 0; k < 8; ++k) {
    CHECK((eve_covariance_block(l.g, s, k) - sigma.block(2 * k, 2 * k, 2, 2)).norm() <= 1e-12 * sigma.norm());
  }
}

TEST_CASE("eavesdropper rates match direct determinants") {
  SystemConfig c = make_config(4, 1, 1, 3, 2, 2, 2);
  c.theta = 0.6;
  c.alpha = 0.3;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Sample l = make_sample(c, seed);
    const PowerSplits s = power_split(c);
    const ComplexMatrix sigma = eve_covariance_joint(l.g, s);
    const ComplexMatrix noise = sigma + ComplexMatrix::Identity(sigma.rows(), sigma.rows());
    const double joint = direct_rate(eve_signal(l.g, s.eve.per_data_symbol), noise);
    CHECK(std::abs(eve_rate_joint(l.g, s) - joint) <= 1e-9);

    double persub = 0.0;
    for (int k = 0; k < 4; ++k) {
      const auto& ga = l.g.eve_data[static_cast<std::size_t>(k)];
      const ComplexMatrix nk = noise.block(2 * k, 2 * k, 2, 2);
      const ComplexMatrix sk = s.eve.per_data_symbol * ga * ga.adjoint();
      // 2 x 2 determinants written out.
      auto det2 = [](const ComplexMatrix& m) { return std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)); };
      persub += std::log2(det2(nk + sk)) - std::log2(det2(nk));
    }
    CHECK(std::abs(eve_rate_persub(l.g, s) - persub) <= 1e-9);
  }
}

TEST_CASE("without noise power the joint eavesdropper rate splits per subcarrier") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 3);
  c.theta = 1.0;
  const Sample l = make_sample(c, 4);
  const PowerSplits s = power_split(c);
  double oracle = 0.0;
  for (const auto& ga : l.g.eve_data) {
    oracle += log2_abs_det(ComplexMatrix::Identity(3, 3) + s.eve.per_data_symbol * ga * ga.adjoint());
  }
  CHECK(std::abs(eve_rate_joint(l.g, s) - oracle) <= 1e-9);
  CHECK(std::abs(eve_rate_persub(l.g, s) - oracle) <= 1e-9);
}

TEST_CASE("single subcarrier joint and per-subcarrier rates coincide") {
  SystemConfig c = make_config(1, 0, 0, 3, 2, 2, 2);
  c.theta = 0.5;
  c.alpha = 0.5;
  const Sample l = make_sample(c, 5);
  const PowerSplits s = power_split(c);
  CHECK(std::abs(eve_rate_joint(l.g, s) - eve_rate_persub(l.g, s)) <= 1e-12);
}

TEST_CASE("spatial-only noise keeps the covariance block diagonal") {
  SystemConfig c = make_config(8, 2, 2, 4, 2, 2, 2);
  c.theta = 0.3;
  c.alpha = 1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Sample l = make_sample(c, seed);
    const PowerSplits s = power_split(c);
    CHECK(std::abs(eve_rate_joint(l.g, s) - eve_rate_persub(l.g, s)) <= 1e-9);
  }
}

TEST_CASE("joint processing is at least as good as per-subcarrier") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 2);
  c.theta = 0.5;
  c.alpha = 0.2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Sample l = make_sample(c, seed);
    const PowerSplits s = power_split(c);
    CHECK(eve_rate_joint(l.g, s) >= eve_rate_persub(l.g, s) - 1e-9);
  }
}

TEST_CASE("receiver rate is monotone in data share and snr") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 2);
  const Sample l = make_sample(c, 6);
  double last = -1.0;
  for (double theta = 0.0; theta <= 1.0001; theta += 0.1) {
    c.theta = std::min(theta, 1.0);
    const double v = bob_rate(l.g, power_split(c));
    CHECK(v >= last - 1e-12);
    last = v;
  }
  last = -1.0;
  for (double db = -10.0; db <= 30.0; db += 5.0) {
    c.gamma_bob = db_to_linear(db);
    const double v = bob_rate(l.g, power_split(c));
    CHECK(v >= last - 1e-12);
    last = v;
  }
}

TEST_CASE("eavesdropper rate without noise terms is monotone in data share") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 2);
  Sample l = make_sample(c, 7);
  for (auto& m : l.g.eve_spatial) m.setZero();
  l.g.eve_temporal_gram.setZero();
  double last = -1.0;
  for (double theta = 0.0; theta <= 1.0001; theta += 0.1) {
    c.theta = std::min(theta, 1.0);
    const double v = eve_rate_joint(l.g, power_split(c));
    CHECK(v >= last - 1e-12);
    last = v;
  }
}

TEST_CASE("eavesdropper rate depends on channel gain times snr only") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 2);
  c.theta = 0.6;
  c.alpha = 0.4;
  ChannelRealization r = draw_channel(c, 8);
  auto rate = [&](const ChannelRealization& rr, const SystemConfig& cc) {
    const TimeDomainOps ops = build_time_ops(rr, cc);
    const PrecoderSet p = design_precoders(rr, ops, cc);
    const LinkGeometry g = link_geometry(rr, p, cc);
    const PowerSplits s = power_split(cc);
    return std::pair{eve_rate_joint(g, s), eve_rate_persub(g, s)};
  };
  const auto base = rate(r, c);
  for (auto& t : r.taps_ae) t *= 2.0;
  r.freq_ae = frequency_response(r.taps_ae, 8);
  SystemConfig scaled = c;
  scaled.gamma_eve = c.gamma_eve / 4.0;
  const auto other = rate(r, scaled);
  CHECK(other.first == doctest::Approx(base.first).epsilon(1e-9));
  CHECK(other.second == doctest::Approx(base.second).epsilon(1e-9));
}

TEST_CASE("average eavesdropper noise power given the receiver channel") {
  SystemConfig c = make_config(8, 2, 2, 4, 2, 2, 2);
  c.theta = 0.5;
  c.alpha = 0.4;
  c.var_ae = 0.8;
  const ChannelRealization bob = draw_channel(c, 60);
  const PowerSplits s = power_split(c);
  const int draws = 3000;
  double sum = 0.0, sum_sq = 0.0;
  ComplexMatrix q;
  for (int t = 0; t < draws; ++t) {
    ChannelRealization r = draw_channel(c, 7000 + static_cast<std::uint64_t>(t));
    r.taps_ab = bob.taps_ab;
    r.freq_ab = bob.freq_ab;
    const TimeDomainOps ops = build_time_ops(r, c);
    const PrecoderSet p = design_precoders(r, ops, c);
    if (t == 0) q = p.temporal;
    const double tr = eve_covariance_joint(link_geometry(r, p, c), s).trace().real();
    sum += tr;
    sum_sq += tr * tr;
  }
  REQUIRE(q.size() > 0);
  // Column j of an antenna block meets one tap from each of count(j) rows.
  const int len = c.block_len();
  double weighted = 0.0;
  for (int a = 0; a < c.n_alice; ++a) {
    for (int j = 0; j < len; ++j) {
      int count = 0;
      for (int l = 0; l <= c.delay_spread; ++l) {
        const int i = j - c.cp_len + l;
        count += i >= 0 && i < c.n_subcarriers;
      }
      weighted += count * q.row(a * len + j).squaredNorm();
    }
  }
  const double ne = c.n_eve;
  const double expected = s.eve.per_spatial_symbol * c.n_subcarriers * ne * c.taps() * c.var_ae * c.spatial_dim() +
                          s.eve.per_temporal_symbol * ne * c.var_ae * weighted;
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / (draws - 1));
  CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("secrecy report bookkeeping") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 2);
  c.theta = 0.5;
  c.alpha = 0.5;
  const Sample l = make_sample(c, 9);
  const RateReport w = secrecy_report(l.g, c);
  CHECK(w.r_eve == std::max(w.r_eve_joint, w.r_eve_persub));
  CHECK(w.r_sec_raw == doctest::Approx(w.r_bob - w.r_eve));
  CHECK(w.r_sec_clipped == std::max(w.r_sec_raw, 0.0));
  CHECK(w.r_no_eve == w.r_bob);
  CHECK(w.s_loss >= 0.0);
  CHECK(w.s_loss_full >= w.s_loss);
  CHECK(secrecy_report(l.g, c, EveStrategy::joint).r_eve == w.r_eve_joint);
  CHECK(secrecy_report(l.g, c, EveStrategy::persub).r_eve == w.r_eve_persub);

  SystemConfig full = c;
  full.theta = 1.0;
  CHECK(w.r_no_eve_full == doctest::Approx(bob_rate(l.g, power_split(full))).epsilon(1e-14));

  const RateReport per = w.per_shz(c);
  for (std::size_t f = 0; f < RateReport::kFields; ++f) {
    CHECK(per.values()[f] == doctest::Approx(w.values()[f] / 10.0).epsilon(1e-15));
  }
  CHECK(RateReport::from_values(w.values()).values() == w.values());
}

TEST_CASE("deaf eavesdropper") {
  SystemConfig c = make_config(8, 2, 2, 3, 2, 2, 2);
  c.var_ae = 0.0;
  c.theta = 0.6;
  const Sample l = make_sample(c, 10);
  const RateReport r = secrecy_report(l.g, c);
  CHECK(r.r_eve == 0.0);
  CHECK(r.r_sec_clipped == r.r_bob);
  CHECK(r.s_loss == doctest::Approx(r.r_no_eve - r.r_bob));
}

TEST_CASE("secrecy clips at zero when the eavesdropper is stronger") {
  SystemConfig c = make_config(8, 2, 2, 2, 2, 2, 4);
  c.theta = 1.0;
  c.gamma_bob = db_to_linear(0.0);
  c.gamma_eve = db_to_linear(30.0);
  const Sample l = make_sample(c, 11);
  const RateReport r = secrecy_report(l.g, c);
  CHECK(r.r_sec_raw < 0.0);
  CHECK(r.r_sec_clipped == 0.0);
  CHECK(r.s_loss == r.r_no_eve);
}

TEST_CASE("restricting the eavesdropper equals a smaller array") {
  const SystemConfig big = make_config(8, 2, 2, 3, 2, 2, 4);
  SystemConfig small = big;
  small.n_eve = 2;
  const Sample lb = make_sample(big, 12);
  const Sample ls = make_sample(small, 12);
  const LinkGeometry cut = restrict_eve(lb.g, 2);
  const RateReport a = secrecy_report(cut, small);
  const RateReport b = secrecy_report(ls.g, small);
  for (std::size_t f = 0; f < RateReport::kFields; ++f) {
    CHECK(a.values()[f] == doctest::Approx(b.values()[f]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(restrict_eve(lb.g, 5), ContractError);
}

TEST_CASE("strategy names") {
  CHECK(parse_eve_strategy("joint") == EveStrategy::joint);
  CHECK(parse_eve_strategy("persub") == EveStrategy::persub);
  CHECK(to_string(parse_eve_strategy("worst")) == "worst");
  CHECK_THROWS_AS(parse_eve_strategy("best"), ValidationError);
}
