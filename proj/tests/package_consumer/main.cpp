// SPDX-License-Identifier: Apache-2.0
#include <cstdio>

#include "anwt/asymptotics.hpp"
#include "anwt/montecarlo.hpp"

int main() {
  anwt::SystemConfig c;
  c.n_subcarriers = 8;
  c.cp_len = 2;
  c.delay_spread = 2;
  c.n_alice = 3;
  const anwt::PointResult r = anwt::run_point(anwt::validate_config(c), 2, 1);
  std::printf("secrecy %g bound %g\n", r.mean.r_sec_raw, anwt::lb_avg_secrecy(c));
  return r.mean.r_bob > 0.0 ? 0 : 1;
}
