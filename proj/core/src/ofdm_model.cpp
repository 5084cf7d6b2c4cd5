// SPDX-License-Identifier: Apache-2.0
#include "anwt/ofdm_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "anwt/error.hpp"

namespace anwt {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("config key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw ValidationError("config key '" + std::string(key) + "': expected a finite number, got '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("config key '" + std::string(key) + "': expected true/false, got '" + std::string(v) + "'");
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Index (l * k mod n) keeps twiddle factors exact and identical wherever
// they are recomputed.
Complex twiddle(long long exponent, int n) {
  const long long m = ((exponent % n) + n) % n;
  return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
}

void draw_taps(std::vector<ComplexMatrix>& taps, int rx, int tx, int n_taps, double var, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = std::sqrt(var / 2.0);
  taps.assign(static_cast<std::size_t>(n_taps), ComplexMatrix::Zero(rx, tx));
  for (int i = 0; i < rx; ++i) {
    for (int l = 0; l < n_taps; ++l) {
      for (int j = 0; j < tx; ++j) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        taps[static_cast<std::size_t>(l)](i, j) = Complex(scale * re, scale * im);
      }
    }
  }
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

SystemConfig validate_config(const SystemConfig& c) {
  auto fail = [](const std::string& what) { throw ValidationError(what); };
  if (c.n_subcarriers < 1) fail("subcarrier count must be at least 1");
  if (c.delay_spread < 0) fail("delay spread must be nonnegative");
  if (c.cp_len < 0) fail("cp length must be nonnegative");
  if (c.cp_len < c.delay_spread) {
    fail("cp shorter than delay spread (n_cp = " + std::to_string(c.cp_len) + ", nu = " +
         std::to_string(c.delay_spread) + ")");
  }
  if (c.cp_len > c.n_subcarriers) fail("cp longer than the symbol (n_cp = " + std::to_string(c.cp_len) + ")");
  if (c.n_alice < 1) fail("transmit antenna count must be at least 1");
  if (c.n_bob < 1) fail("receiver antenna count must be at least 1");
  if (c.n_eve < 1) fail("eavesdropper antenna count must be at least 1");
  if (c.n_streams < 1) fail("stream count must be at least 1");
  if (c.n_streams > std::min(c.n_alice, c.n_bob)) {
    fail("stream count exceeds min(n_a, n_b) (n_s = " + std::to_string(c.n_streams) + ")");
  }
  if (!(std::isfinite(c.gamma_bob) && c.gamma_bob >= 0.0)) fail("receiver snr must be finite and nonnegative");
  if (!(std::isfinite(c.gamma_eve) && c.gamma_eve >= 0.0)) fail("eavesdropper snr must be finite and nonnegative");
  if (!(std::isfinite(c.var_ab) && c.var_ab >= 0.0)) fail("var_ab must be finite and nonnegative");
  if (!(std::isfinite(c.var_ae) && c.var_ae >= 0.0)) fail("var_ae must be finite and nonnegative");
  if (!(c.theta >= 0.0 && c.theta <= 1.0)) fail("theta outside [0, 1]");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) fail("alpha outside [0, 1]");
  if (c.n_alice == c.n_streams && c.alpha > 0.0) {
    fail("spatial noise has zero dimension (n_a = n_s) but alpha > 0");
  }
  return c;
}

void set_config_value(SystemConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "n") c.n_subcarriers = parse_int(key, value);
  else if (key == "n_cp") c.cp_len = parse_int(key, value);
  else if (key == "nu") c.delay_spread = parse_int(key, value);
  else if (key == "n_a") c.n_alice = parse_int(key, value);
  else if (key == "n_b") c.n_bob = parse_int(key, value);
  else if (key == "n_e") c.n_eve = parse_int(key, value);
  else if (key == "n_s") c.n_streams = parse_int(key, value);
  else if (key == "gamma_bob_db") c.gamma_bob = db_to_linear(parse_real(key, value));
  else if (key == "gamma_eve_db") c.gamma_eve = db_to_linear(parse_real(key, value));
  else if (key == "var_ab") c.var_ab = parse_real(key, value);
  else if (key == "var_ae") c.var_ae = parse_real(key, value);
  else if (key == "theta") c.theta = parse_real(key, value);
  else if (key == "alpha") c.alpha = parse_real(key, value);
  else if (key == "exact_cp_power") c.exact_cp_power = parse_bool(key, value);
  else throw ValidationError("unknown config key '" + std::string(key) + "'");
}

void apply_override(SystemConfig& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  set_config_value(c, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

SystemConfig parse_config(std::string_view text, SystemConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

SystemConfig load_config(const std::string& path, SystemConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), base);
}

std::vector<std::pair<std::string, std::string>> config_entries(const SystemConfig& c) {
  return {
      {"n", std::to_string(c.n_subcarriers)},
      {"n_cp", std::to_string(c.cp_len)},
      {"nu", std::to_string(c.delay_spread)},
      {"n_a", std::to_string(c.n_alice)},
      {"n_b", std::to_string(c.n_bob)},
      {"n_e", std::to_string(c.n_eve)},
      {"n_s", std::to_string(c.n_streams)},
      {"gamma_bob_db", shortest(linear_to_db(c.gamma_bob))},
      {"gamma_eve_db", shortest(linear_to_db(c.gamma_eve))},
      {"var_ab", shortest(c.var_ab)},
      {"var_ae", shortest(c.var_ae)},
      {"theta", shortest(c.theta)},
      {"alpha", shortest(c.alpha)},
      {"exact_cp_power", c.exact_cp_power ? "true" : "false"},
  };
}

ChannelRealization draw_channel(const SystemConfig& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ChannelRealization r;
  draw_taps(r.taps_ab, c.n_bob, c.n_alice, c.taps(), c.var_ab, rng);
  draw_taps(r.taps_ae, c.n_eve, c.n_alice, c.taps(), c.var_ae, rng);
  r.freq_ab = frequency_response(r.taps_ab, c.n_subcarriers);
  r.freq_ae = frequency_response(r.taps_ae, c.n_subcarriers);
  return r;
}

std::vector<ComplexMatrix> frequency_response(const std::vector<ComplexMatrix>& taps, int n) {
  if (taps.empty()) throw ContractError("frequency_response: no taps");
  std::vector<ComplexMatrix> out(static_cast<std::size_t>(n),
                                 ComplexMatrix::Zero(taps[0].rows(), taps[0].cols()));
  for (int k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < taps.size(); ++l) {
      out[static_cast<std::size_t>(k)] += taps[l] * twiddle(static_cast<long long>(l) * k, n);
    }
  }
  return out;
}

ComplexMatrix convolution_matrix(const std::vector<ComplexMatrix>& taps, int n, int cp_len) {
  if (taps.empty()) throw ContractError("convolution_matrix: no taps");
  const int nu = static_cast<int>(taps.size()) - 1;
  if (cp_len < nu) throw ContractError("convolution_matrix: cp shorter than delay spread");
  const Eigen::Index rx = taps[0].rows();
  const Eigen::Index tx = taps[0].cols();
  const int block = n + cp_len;
  ComplexMatrix conv = ComplexMatrix::Zero(rx * n, tx * block);
  for (Eigen::Index b = 0; b < rx; ++b) {
    for (Eigen::Index a = 0; a < tx; ++a) {
      for (int i = 0; i < n; ++i) {
        for (int l = 0; l <= nu; ++l) {
          conv(b * n + i, a * block + i + cp_len - l) = taps[static_cast<std::size_t>(l)](b, a);
        }
      }
    }
  }
  return conv;
}

Eigen::MatrixXd cp_insert_matrix(int n, int cp_len) {
  if (cp_len < 0 || cp_len > n) throw ContractError("cp_insert_matrix: cp length outside [0, n]");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n + cp_len, n);
  for (int i = 0; i < cp_len; ++i) t(i, n - cp_len + i) = 1.0;
  for (int i = 0; i < n; ++i) t(cp_len + i, i) = 1.0;
  return t;
}

Eigen::MatrixXd cp_remove_matrix(int n, int cp_len) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n + cp_len);
  for (int i = 0; i < n; ++i) r(i, cp_len + i) = 1.0;
  return r;
}

TimeDomainOps build_time_ops(const ChannelRealization& r, const SystemConfig& c) {
  const int n = c.n_subcarriers;
  TimeDomainOps ops;
  ops.conv_ab = convolution_matrix(r.taps_ab, n, c.cp_len);
  ops.conv_ae = convolution_matrix(r.taps_ae, n, c.cp_len);
  ops.cp_insert = cp_insert_matrix(n, c.cp_len);
  ops.cp_remove = cp_remove_matrix(n, c.cp_len);
  ops.perm_a = permutation_map(c.n_alice, n);
  ops.perm_b = permutation_map(c.n_bob, n);
  ops.perm_e = permutation_map(c.n_eve, n);
  return ops;
}

ComplexMatrix dft_matrix(int n) {
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) f(k, m) = scale * twiddle(static_cast<long long>(k) * m, n);
  }
  return f;
}

std::vector<int> permutation_map(int n_ant, int n) {
  std::vector<int> map(static_cast<std::size_t>(n_ant) * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < n_ant; ++a) map[static_cast<std::size_t>(k * n_ant + a)] = a * n + k;
  }
  return map;
}

Eigen::MatrixXd permutation_matrix(int n_ant, int n) {
  const auto map = permutation_map(n_ant, n);
  const auto size = static_cast<Eigen::Index>(map.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index s = 0; s < size; ++s) p(map[static_cast<std::size_t>(s)], s) = 1.0;
  return p;
}

ComplexMatrix frequency_chain(const ComplexMatrix& m, int n_ant, int n) {
  if (m.rows() != static_cast<Eigen::Index>(n_ant) * n) {
    throw ContractError("frequency_chain: row count is not n_ant * n");
  }
  const ComplexMatrix f = dft_matrix(n);
  ComplexMatrix out(m.rows(), m.cols());
  ComplexMatrix block(n, m.cols());
  for (int a = 0; a < n_ant; ++a) {
    block.noalias() = f * m.middleRows(static_cast<Eigen::Index>(a) * n, n);
    for (int k = 0; k < n; ++k) out.row(static_cast<Eigen::Index>(k) * n_ant + a) = block.row(k);
  }
  return out;
}

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

std::vector<ComplexMatrix> diagonalize(const TimeDomainOps& ops, const SystemConfig& c, Link which) {
  const int n = c.n_subcarriers;
  const int n_tx = c.n_alice;
  const int n_rx = which == Link::ab ? c.n_bob : c.n_eve;
  const ComplexMatrix& conv = which == Link::ab ? ops.conv_ab : ops.conv_ae;

  // Transmit side T_cp F^* P, applied per antenna column block.
  const ComplexMatrix f = dft_matrix(n);
  const ComplexMatrix ext = ops.cp_insert.cast<Complex>() * f.adjoint();
  const Eigen::MatrixXd p = permutation_matrix(n_tx, n);
  ComplexMatrix tx_chain = ComplexMatrix::Zero(static_cast<Eigen::Index>(n_tx) * c.block_len(),
                                               static_cast<Eigen::Index>(n_tx) * n);
  for (int a = 0; a < n_tx; ++a) {
    tx_chain.block(static_cast<Eigen::Index>(a) * c.block_len(), static_cast<Eigen::Index>(a) * n, c.block_len(), n) = ext;
  }
  tx_chain = tx_chain * p.cast<Complex>();
  const ComplexMatrix m = frequency_chain(conv, n_rx, n) * tx_chain;

  std::vector<ComplexMatrix> blocks(static_cast<std::size_t>(n));
  double off_sq = 0.0;
  for (Eigen::Index row = 0; row < m.rows(); ++row) {
    const Eigen::Index k = row / n_rx;
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      if (col / n_tx != k) off_sq += std::norm(m(row, col));
    }
  }
  for (int k = 0; k < n; ++k) {
    blocks[static_cast<std::size_t>(k)] =
        m.block(static_cast<Eigen::Index>(k) * n_rx, static_cast<Eigen::Index>(k) * n_tx, n_rx, n_tx);
  }
  const double total = m.squaredNorm();
  const double off = std::sqrt(off_sq);
  if (off > 1e-10 * std::sqrt(total)) {
    throw ContractError("diagonalize: off-block mass " + shortest(off) + " exceeds tolerance; tap ordering is inconsistent");
  }
  return blocks;
}

}  // namespace anwt
