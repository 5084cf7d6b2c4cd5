// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "anwt/matops.hpp"
#include "anwt/ofdm_model.hpp"

namespace anwt::test {

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

inline ComplexMatrix random_psd(Eigen::Index n, Eigen::Index rank, std::uint64_t seed) {
  const ComplexMatrix w = random_matrix(n, rank, seed);
  return w * w.adjoint();
}

// log2 |det(m)| by LU, independent of the whitening route.
inline double log2_abs_det(const ComplexMatrix& m) {
  return std::log2(std::abs(m.partialPivLu().determinant()));
}

inline SystemConfig make_config(int n, int cp, int nu, int na, int nb, int ns, int ne) {
  SystemConfig c;
  c.n_subcarriers = n;
  c.cp_len = cp;
  c.delay_spread = nu;
  c.n_alice = na;
  c.n_bob = nb;
  c.n_streams = ns;
  c.n_eve = ne;
  if (na == ns) c.alpha = 0.0;
  return c;
}

}  // namespace anwt::test
