// SPDX-License-Identifier: Apache-2.0
#include "anwt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "anwt/an_design.hpp"
#include "anwt/asymptotics.hpp"
#include "anwt/error.hpp"
#include "anwt/matops.hpp"
#include "anwt/montecarlo.hpp"
#include "anwt/ofdm_model.hpp"
#include "anwt/rates.hpp"

namespace anwt {
namespace {

using Index = Eigen::Index;

ComplexMatrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

SystemConfig small_config(int n_a, int n_b, int n_s) {
  SystemConfig c;
  c.n_subcarriers = 8;
  c.cp_len = 2;
  c.delay_spread = 2;
  c.n_alice = n_a;
  c.n_bob = n_b;
  c.n_streams = n_s;
  c.n_eve = 2;
  if (n_a == n_s) c.alpha = 0.0;
  return validate_config(c);
}

std::string tag(const SystemConfig& c, std::uint64_t seed) {
  return "n_a=" + std::to_string(c.n_alice) + " n_b=" + std::to_string(c.n_bob) + " n_s=" +
         std::to_string(c.n_streams) + " seed=" + std::to_string(seed);
}

class Suite {
 public:
  // Runs `measure` and records the worst value it reports against `tol`.
  void check(const std::string& name, double tol, const std::function<double(std::string&)>& measure) {
    CheckResult r;
    r.name = name;
    r.tolerance = tol;
    try {
      r.value = measure(r.detail);
      r.passed = std::isfinite(r.value) && r.value <= tol;
    } catch (const std::exception& e) {
      r.value = std::nan("");
      r.passed = false;
      r.detail = e.what();
    }
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

void matops_checks(Suite& s) {
  s.check("matops.svd_reconstruction", 1e-12, [](std::string&) {
    std::mt19937_64 rng(11);
    const ComplexMatrix m = random_matrix(6, 4, rng);
    const SvdResult d = svd(m);
    const ComplexMatrix back = d.left * d.singular_values.cast<Complex>().asDiagonal() * d.right.adjoint();
    return relative_error(back, m);
  });
  s.check("matops.null_space_annihilates", 1e-12, [](std::string& detail) {
    std::mt19937_64 rng(12);
    const ComplexMatrix m = random_matrix(3, 7, rng);
    const ComplexMatrix n = null_space_basis(m);
    if (n.cols() != 4) throw RankAnomalyError("null space has " + std::to_string(n.cols()) + " columns, expected 4");
    detail = "orthonormality defect " + std::to_string(orthonormality_defect(n));
    return std::max((m * n).norm() / m.norm(), orthonormality_defect(n));
  });
  s.check("matops.gram_schmidt_orthonormal", 1e-12, [](std::string&) {
    std::mt19937_64 rng(13);
    return orthonormality_defect(gram_schmidt(random_matrix(40, 37, rng)));
  });
  s.check("matops.logdet_factored_matches_dense", 1e-10, [](std::string&) {
    std::mt19937_64 rng(14);
    const ComplexMatrix f = random_matrix(6, 3, rng);
    const ComplexMatrix w = random_matrix(6, 4, rng);
    const ComplexMatrix noise = w * w.adjoint();
    const double dense = logdet_rate(f * f.adjoint(), noise);
    return std::abs(dense - logdet_rate_factored(f, noise)) / std::max(1.0, dense);
  });
  s.check("matops.toeplitz_exact_matches_dense", 1e-10, [](std::string&) {
    std::mt19937_64 rng(15);
    ComplexVector taps = random_matrix(4, 1, rng);
    taps(0) += 3.0;
    const std::span<const Complex> t(taps.data(), static_cast<std::size_t>(taps.size()));
    const ComplexMatrix rhs = random_matrix(12, 2, rng);
    const ComplexMatrix dense = upper_toeplitz(t, 12).partialPivLu().solve(rhs);
    return relative_error(toeplitz_apply_inverse(t, rhs), dense);
  });
  s.check("matops.toeplitz_circulant_matches_dense_circulant", 1e-10, [](std::string&) {
    std::mt19937_64 rng(16);
    ComplexVector taps = random_matrix(3, 1, rng);
    taps(0) += 3.0;
    const std::span<const Complex> t(taps.data(), static_cast<std::size_t>(taps.size()));
    const Index n = 10;
    ComplexMatrix circ = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index d = 0; d < taps.size(); ++d) circ(i, (i + d) % n) = taps(d);
    }
    const ComplexMatrix rhs = random_matrix(n, 2, rng);
    return relative_error(toeplitz_apply_inverse(t, rhs, ToeplitzMode::circulant), circ.partialPivLu().solve(rhs));
  });
  s.check("matops.block_toeplitz_exact_matches_dense", 1e-10, [](std::string&) {
    std::mt19937_64 rng(17);
    const Index b = 2;
    const Index n = 6;
    std::vector<ComplexMatrix> taps;
    for (int d = 0; d < 3; ++d) taps.push_back(random_matrix(b, b, rng));
    taps[0] += 3.0 * ComplexMatrix::Identity(b, b);
    ComplexMatrix dense = ComplexMatrix::Zero(n * b, n * b);
    for (Index i = 0; i < n; ++i) {
      for (Index d = 0; d < 3 && i + d < n; ++d) dense.block(i * b, (i + d) * b, b, b) = taps[static_cast<std::size_t>(d)];
    }
    const ComplexMatrix rhs = random_matrix(n * b, 3, rng);
    return relative_error(block_toeplitz_apply_inverse(taps, rhs), dense.partialPivLu().solve(rhs));
  });
}

void ofdm_checks(Suite& s, const std::vector<std::uint64_t>& seeds) {
  s.check("ofdm.dft_unitary", 1e-12, [](std::string&) { return orthonormality_defect(dft_matrix(16)); });
  s.check("ofdm.cp_remove_undoes_insert", 0.0, [](std::string&) {
    return (cp_remove_matrix(8, 3) * cp_insert_matrix(8, 3) - Eigen::MatrixXd::Identity(8, 8)).norm();
  });
  s.check("ofdm.permutation_orthogonal", 0.0, [](std::string&) {
    const Eigen::MatrixXd p = permutation_matrix(3, 8);
    return (p.transpose() * p - Eigen::MatrixXd::Identity(24, 24)).norm();
  });
  s.check("ofdm.diagonalization_matches_frequency_response", 1e-10, [&](std::string& detail) {
    double worst = 0.0;
    for (std::uint64_t seed : seeds) {
      const SystemConfig c = small_config(3, 2, 2);
      const ChannelRealization r = draw_channel(c, seed);
      const TimeDomainOps ops = build_time_ops(r, c);
      for (Link link : {Link::ab, Link::ae}) {
        const auto blocks = diagonalize(ops, c, link);
        const auto& ref = link == Link::ab ? r.freq_ab : r.freq_ae;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
          const double e = relative_error(blocks[k], ref[k]);
          if (e > worst) {
            worst = e;
            detail = tag(c, seed) + " k=" + std::to_string(k);
          }
        }
      }
    }
    return worst;
  });
}

void design_checks(Suite& s, const std::vector<std::uint64_t>& seeds) {
  const std::vector<SystemConfig> configs{small_config(2, 2, 2), small_config(3, 2, 2), small_config(4, 2, 1),
                                          small_config(4, 1, 1)};
  double spatial = 0.0, generic = 0.0, toeplitz = 0.0, leading = 0.0, projector = 0.0, gram = 0.0, end_to_end = 0.0;
  double dim_mismatch = 0.0;
  std::string where[8];
  auto note = [](double& worst, double v, std::string& loc, const std::string& at) {
    if (!(v <= worst)) {
      worst = v;
      loc = at;
    }
  };
  std::string failure;
  try {
    for (const auto& c : configs) {
      for (std::uint64_t seed : seeds) {
        const std::string at = tag(c, seed);
        const ChannelRealization r = draw_channel(c, seed);
        const TimeDomainOps ops = build_time_ops(r, c);
        const PrecoderSet p = design_precoders(r, ops, c);
        for (int k = 0; k < c.n_subcarriers; ++k) {
          const auto idx = static_cast<std::size_t>(k);
          if (p.spatial[idx].cols() == 0) continue;
          note(spatial, (p.filter[idx].adjoint() * r.freq_ab[idx] * p.spatial[idx]).norm() / r.freq_ab[idx].norm(),
               where[0], at);
        }
        const ComplexMatrix x = bob_chain_matrix(ops, p.filter, c);
        note(generic, (x * p.temporal).norm() / x.norm(), where[1], at);
        note(dim_mismatch, std::abs(static_cast<double>(p.temporal.cols() - c.temporal_dim())), where[2], at);

        DesignOptions comp;
        comp.route = TemporalRoute::complement;
        const PrecoderSet pc = design_precoders(r, ops, c, comp);
        note(gram, relative_error(pc.eve_temporal_gram, p.eve_temporal_gram), where[3], at);

        if (c.n_bob == c.n_streams) {
          const ComplexMatrix qt = design_temporal_an_toeplitz(ops, c, seed);
          note(toeplitz, (x * qt).norm() / x.norm(), where[4], at);
          note(projector, projector_distance(qt, p.temporal), where[5], at);
          const ComplexMatrix ql = design_temporal_an_toeplitz(ops, c, seed, ToeplitzMode::exact, ToeplitzWindow::leading);
          note(leading, (x * ql).norm() / x.norm(), where[6], at);
        }

        // Without receiver noise Bob sees only the data, scaled by the kept gains.
        const PowerSplits split = power_split(c);
        const BlockSample b = simulate_block(r, ops, p, split.bob, c, seed + 100, false);
        ComplexVector expected(b.data.size());
        for (int k = 0; k < c.n_subcarriers; ++k) {
          for (int m = 0; m < c.n_streams; ++m) {
            const Index i = static_cast<Index>(k) * c.n_streams + m;
            expected(i) = p.gains[static_cast<std::size_t>(k)](m) * b.data(i);
          }
        }
        note(end_to_end, relative_error(b.bob_clean, expected), where[7], at);
      }
    }
  } catch (const std::exception& e) {
    failure = e.what();
  }
  auto record = [&](const std::string& name, double tol, double value, const std::string& loc) {
    s.check(name, tol, [&](std::string& detail) {
      if (!failure.empty()) throw Error(failure);
      detail = loc;
      return value;
    });
  };
  record("an_design.spatial_noise_invisible_to_bob", 1e-10, spatial, where[0]);
  record("an_design.temporal_noise_invisible_to_bob", 1e-10, generic, where[1]);
  record("an_design.temporal_dimension", 0.0, dim_mismatch, where[2]);
  record("an_design.complement_gram_matches_basis", 1e-10, gram, where[3]);
  record("an_design.toeplitz_noise_invisible_to_bob", 1e-10, toeplitz, where[4]);
  record("an_design.toeplitz_projector_matches_generic", 1e-8, projector, where[5]);
  record("an_design.leading_window_noise_invisible_to_bob", 1e-10, leading, where[6]);
  record("an_design.bob_sees_only_scaled_data", 1e-10, end_to_end, where[7]);

  s.check("an_design.power_budget", 1e-12, [](std::string&) {
    SystemConfig c = small_config(4, 2, 2);
    c.theta = 0.3;
    c.alpha = 0.4;
    const PowerSplit p = power_split(c, 10.0);
    const double n = c.n_subcarriers;
    const double total = (c.n_streams * n * p.per_data_symbol + n * c.spatial_dim() * p.per_spatial_symbol) *
                             c.block_len() / n +
                         c.temporal_dim() * p.per_temporal_symbol;
    const double expected = (c.theta + c.alpha * (1 - c.theta)) * 10.0 * c.block_len() / n + (1 - c.alpha) * (1 - c.theta) * 10.0;
    return std::abs(total - expected) / expected;
  });
}

void rate_checks(Suite& s, const std::vector<std::uint64_t>& seeds) {
  double routes = 0.0, order = 0.0, plain = 0.0, nested = 0.0;
  std::string failure;
  try {
    for (std::uint64_t seed : seeds) {
      SystemConfig c = small_config(4, 2, 2);
      c.n_eve = 3;
      const ChannelRealization r = draw_channel(c, seed);
      const TimeDomainOps ops = build_time_ops(r, c);
      const PrecoderSet p = design_precoders(r, ops, c);
      const LinkGeometry g = link_geometry(r, p, c);
      const PowerSplits split = power_split(c);
      const double via_gains = bob_rate(g, split);
      routes = std::max(routes, std::abs(bob_rate(r, p, split, c) - via_gains) / via_gains);
      order = std::max(order, eve_rate_persub(g, split) - eve_rate_joint(g, split));

      SystemConfig full = c;
      full.theta = 1.0;
      const PowerSplits fs = power_split(full);
      const ComplexMatrix zero = ComplexMatrix::Zero(c.n_eve, c.n_eve);
      double direct = 0.0;
      for (int k = 0; k < c.n_subcarriers; ++k) {
        const ComplexMatrix ga = r.freq_ae[static_cast<std::size_t>(k)] * p.data[static_cast<std::size_t>(k)];
        direct += logdet_rate(fs.eve.per_data_symbol * ga * ga.adjoint(), zero);
      }
      plain = std::max(plain, std::abs(eve_rate_joint(g, fs) - direct) / direct);

      SystemConfig one = c;
      one.n_eve = 1;
      const ChannelRealization r1 = draw_channel(one, seed);
      const TimeDomainOps ops1 = build_time_ops(r1, one);
      const LinkGeometry g1 = link_geometry(r1, design_precoders(r1, ops1, one), one);
      const RateReport a = secrecy_report(restrict_eve(g, 1), one);
      const RateReport b = secrecy_report(g1, one);
      nested = std::max({nested, std::abs(a.r_eve_joint - b.r_eve_joint), std::abs(a.r_bob - b.r_bob)});
    }
  } catch (const std::exception& e) {
    failure = e.what();
  }
  auto record = [&](const std::string& name, double tol, double value) {
    s.check(name, tol, [&](std::string&) {
      if (!failure.empty()) throw Error(failure);
      return value;
    });
  };
  record("rates.bob_rate_routes_agree", 1e-10, routes);
  record("rates.joint_eve_dominates_persub", 1e-9, order);
  record("rates.no_noise_eve_rate_matches_direct", 1e-10, plain);
  record("rates.restricted_eve_matches_smaller_array", 1e-9, nested);
}

void bound_checks(Suite& s) {
  auto grid_argmax = [](int ns, int ne) {
    double best = 0.0, best_f = -1.0;
    for (int i = 1; i < 1000; ++i) {
      const double th = i * 1e-3;
      const double f = power_allocation_objective(th, ns, ne, 1.0);
      if (f > best_f) {
        best_f = f;
        best = th;
      }
    }
    return best;
  };
  s.check("asymptotics.objective_argmax_matches_grid", 1e-3, [&](std::string& detail) {
    double worst = 0.0;
    for (auto [ns, ne] : {std::pair{2, 2}, std::pair{2, 4}, std::pair{1, 3}, std::pair{3, 2}}) {
      const double gap = std::abs(grid_argmax(ns, ne) - objective_argmax(ns, ne));
      if (gap > worst) {
        worst = gap;
        detail = "n_s=" + std::to_string(ns) + " n_e=" + std::to_string(ne);
      }
    }
    return worst;
  });
  s.check("asymptotics.theta_star_maximizes_objective_at_equal_counts", 1e-3, [&](std::string& detail) {
    double worst = 0.0;
    for (int n : {1, 2, 3}) {
      SystemConfig c;
      c.n_streams = n;
      c.n_eve = n;
      const double gap = std::abs(grid_argmax(n, n) - theta_star(c));
      if (gap > worst) {
        worst = gap;
        detail = "n_s=n_e=" + std::to_string(n);
      }
    }
    return worst;
  });
  s.check("asymptotics.equal_antenna_loss_bounds_agree", 1e-12, [](std::string&) {
    SystemConfig c;
    c.n_eve = c.n_streams = 2;
    return std::abs(loss_ub_hi_snr(c) - loss_ub_ne_eq_ns(c));
  });
  s.check("asymptotics.bounds_invariant_to_eve_scaling", 1e-12, [](std::string&) {
    SystemConfig c;
    c.n_alice = 10;
    SystemConfig d = c;
    d.gamma_eve *= 7.0;
    d.var_ae /= 7.0;
    const auto a = bound_report(c).values();
    const auto b = bound_report(d).values();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
    return worst;
  });
  s.check("asymptotics.bound_ranges", 0.0, [](std::string& detail) {
    double violations = 0.0;
    for (int na : {3, 4, 10}) {
      for (double alpha : {0.0, 0.5, 1.0}) {
        SystemConfig c;
        c.n_alice = na;
        c.alpha = alpha;
        const BoundReport b = bound_report(c);
        const double lo = static_cast<double>(c.n_subcarriers) / c.block_len();
        const bool ok = b.theta_star > 0 && b.theta_star <= 1 && b.k_alpha >= lo - 1e-15 && b.k_alpha <= 1 + 1e-15 &&
                        b.p_alpha >= 1.0;
        if (!ok) {
          violations += 1.0;
          detail = "n_a=" + std::to_string(na) + " alpha=" + std::to_string(alpha);
        }
      }
    }
    return violations;
  });
}

void montecarlo_checks(Suite& s) {
  const SystemConfig c = small_config(3, 2, 2);
  s.check("montecarlo.thread_count_invariance", 0.0, [&](std::string&) {
    const PointResult a = run_point(c, 6, 42, EveStrategy::worst, 1);
    const PointResult b = run_point(c, 6, 42, EveStrategy::worst, 3);
    double mismatches = 0.0;
    const auto am = a.mean.values(), bm = b.mean.values(), ae = a.stderr_.values(), be = b.stderr_.values();
    for (std::size_t i = 0; i < am.size(); ++i) mismatches += (am[i] != bm[i]) + (ae[i] != be[i]);
    return mismatches;
  });
  s.check("montecarlo.single_trial_has_zero_stderr", 0.0, [&](std::string&) {
    const PointResult a = run_point(c, 1, 7);
    double worst = 0.0;
    for (double v : a.stderr_.values()) worst = std::max(worst, std::abs(v));
    return worst;
  });
  s.check("montecarlo.empty_grid_rejected", 0.0, [&](std::string&) {
    TrialPlan plan;
    plan.base_config = c;
    plan.sweep_param = SweepParam::theta;
    try {
      run_sweep(plan);
    } catch (const ValidationError&) {
      return 0.0;
    }
    return 1.0;
  });
}

}  // namespace

std::vector<CheckResult> run_verify_suite(const VerifyOptions& options) {
  Suite s;
  matops_checks(s);
  ofdm_checks(s, options.seeds);
  design_checks(s, options.seeds);
  rate_checks(s, options.seeds);
  bound_checks(s);
  montecarlo_checks(s);
  return s.take();
}

}  // namespace anwt
