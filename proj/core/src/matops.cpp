// SPDX-License-Identifier: Apache-2.0
#include "anwt/matops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "anwt/error.hpp"

namespace anwt {
namespace {

using Index = Eigen::Index;

std::string dims(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) {
    throw ContractError(std::string(what) + ": non-finite entries in " + dims(m) + " matrix");
  }
}

// Small problems go through one-sided Jacobi (most accurate); larger ones
// through divide and conquer.
constexpr Index kJacobiMaxEntries = 4096;

template <typename Solver>
SvdResult unpack(const Solver& solver, const ComplexMatrix& m) {
  if (solver.info() != Eigen::Success) {
    throw NumericalError("svd did not converge for " + dims(m) + " matrix");
  }
  SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  const Index paired = out.singular_values.size();
  for (Index c = 0; c < out.right.cols(); ++c) {
    auto v = out.right.col(c);
    for (Index r = 0; r < v.size(); ++r) {
      const double mag = std::abs(v(r));
      if (mag > 1e-12) {
        const Complex unphase = std::conj(v(r)) / mag;
        v *= unphase;
        if (c < paired && c < out.left.cols()) out.left.col(c) *= unphase;
        break;
      }
    }
  }
  return out;
}

RealVector singular_values_only(const ComplexMatrix& m) {
  if (m.size() <= kJacobiMaxEntries) {
    Eigen::JacobiSVD<ComplexMatrix> s(m);
    if (s.info() != Eigen::Success) throw NumericalError("svd did not converge for " + dims(m));
    return s.singularValues();
  }
  Eigen::BDCSVD<ComplexMatrix> s(m);
  if (s.info() != Eigen::Success) throw NumericalError("svd did not converge for " + dims(m));
  return s.singularValues();
}

std::size_t rank_from(const RealVector& s, double rel_tol) {
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [cut](double x) { return x > cut; }));
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) throw ContractError(std::string(what) + " must be square, got " + dims(m));
  const double scale = m.norm();
  const double asym = (m - m.adjoint()).norm();
  if (asym > 1e-10 * std::max(scale, std::numeric_limits<double>::min())) {
    throw ContractError(std::string(what) + " is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  }
}

void require_psd(const ComplexMatrix& hermitian, const char* what) {
  if (hermitian.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError(std::string(what) + ": eigensolver failed");
  const double trace = std::abs(hermitian.trace().real());
  const double floor = -1e-10 * trace;
  if (eig.eigenvalues().minCoeff() < floor) {
    throw NumericalError(std::string(what) + " is not positive semidefinite (min eigenvalue " +
                         std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

SvdResult svd(const ComplexMatrix& m, SvdVectors vectors) {
  require_finite(m, "svd");
  const bool full = vectors == SvdVectors::full;
  const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                             : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (m.size() <= kJacobiMaxEntries) {
    Eigen::JacobiSVD<ComplexMatrix> solver(m, opts);
    return unpack(solver, m);
  }
  Eigen::BDCSVD<ComplexMatrix> solver(m, opts);
  return unpack(solver, m);
}

std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol) {
  require_finite(m, "numerical_rank");
  return rank_from(singular_values_only(m), rel_tol);
}

// The null space of m is the orthogonal complement of range(m^*). A column
// pivoted Householder QR of m^* yields both subspaces from one unitary factor;
// the split point comes from the singular values so that the rank decision
// matches svd().
NullSpaceSplit null_space_split(const ComplexMatrix& m, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ContractError("null_space_split: rel_tol must lie in (0, 1)");
  require_finite(m, "null_space_split");
  const Index n = m.cols();
  const auto r = static_cast<Index>(rank_from(singular_values_only(m), rel_tol));
  if (r == 0) return {ComplexMatrix::Identity(n, n), ComplexMatrix(n, 0)};
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m.adjoint());
  const ComplexMatrix q = qr.householderQ();
  return {q.rightCols(n - r), q.leftCols(r)};
}

ComplexMatrix null_space_basis(const ComplexMatrix& m, double rel_tol) {
  return null_space_split(m, rel_tol).null;
}

ComplexMatrix row_space_basis(const ComplexMatrix& m, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ContractError("row_space_basis: rel_tol must lie in (0, 1)");
  require_finite(m, "row_space_basis");
  const Index n = m.cols();
  const auto r = static_cast<Index>(rank_from(singular_values_only(m), rel_tol));
  if (r == 0) return ComplexMatrix(n, 0);
  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(m.adjoint());
  ComplexMatrix basis = ComplexMatrix::Identity(n, r);
  basis.applyOnTheLeft(qr.householderQ());
  return basis;
}

ComplexMatrix gram_schmidt(const ComplexMatrix& m) {
  require_finite(m, "gram_schmidt");
  const Index rows = m.rows();
  const Index cols = m.cols();
  const double reference = m.norm();
  const double cut = 1e-12 * reference;
  if (cols > rows) {
    throw DegeneracyError("gram_schmidt: column " + std::to_string(rows) + " is dependent (" +
                          std::to_string(cols) + " columns in dimension " + std::to_string(rows) + ")");
  }
  ComplexMatrix z(rows, cols);
  // Columns are processed in panels: each panel is projected twice against
  // the finished basis with matrix products, then orthonormalized inside.
  constexpr Index kPanel = 32;
  for (Index j0 = 0; j0 < cols; j0 += kPanel) {
    const Index width = std::min(kPanel, cols - j0);
    ComplexMatrix panel = m.middleCols(j0, width);
    if (j0 > 0) {
      const auto done = z.leftCols(j0);
      for (int pass = 0; pass < 2; ++pass) panel.noalias() -= done * (done.adjoint() * panel);
    }
    for (Index c = 0; c < width; ++c) {
      ComplexVector v = panel.col(c);
      if (c > 0) {
        const auto local = z.middleCols(j0, c);
        for (int pass = 0; pass < 2; ++pass) v.noalias() -= local * (local.adjoint() * v);
      }
      const double norm = v.norm();
      if (!(norm >= cut) || norm == 0.0) {
        throw DegeneracyError("gram_schmidt: column " + std::to_string(j0 + c) + " is linearly dependent");
      }
      z.col(j0 + c) = v / norm;
    }
  }
  return z;
}

double logdet_rate(const ComplexMatrix& signal, const ComplexMatrix& noise) {
  require_finite(signal, "logdet_rate signal");
  require_finite(noise, "logdet_rate noise");
  require_hermitian(signal, "logdet_rate signal");
  require_hermitian(noise, "logdet_rate noise");
  if (signal.rows() != noise.rows()) {
    throw ContractError("logdet_rate: dimension mismatch " + dims(signal) + " vs " + dims(noise));
  }
  const Index n = signal.rows();
  const ComplexMatrix s = hermitian_part(signal);
  const ComplexMatrix z = hermitian_part(noise);
  require_psd(s, "logdet_rate signal");
  require_psd(z, "logdet_rate noise");

  Eigen::LLT<ComplexMatrix> chol(z + ComplexMatrix::Identity(n, n));
  if (chol.info() != Eigen::Success) throw NumericalError("logdet_rate: noise + I is not positive definite");
  // W = L^{-1} S L^{-*}
  const ComplexMatrix left = chol.matrixL().solve(s);
  ComplexMatrix w = chol.matrixL().solve(ComplexMatrix(left.adjoint()));
  w = hermitian_part(w);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(w, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("logdet_rate: eigensolver failed");
  double nats = 0.0;
  for (Index i = 0; i < n; ++i) nats += std::log1p(std::max(eig.eigenvalues()(i), 0.0));
  return nats / std::numbers::ln2;
}

double logdet_rate_factored(const ComplexMatrix& factor, const ComplexMatrix& noise) {
  require_finite(factor, "logdet_rate_factored factor");
  require_finite(noise, "logdet_rate_factored noise");
  require_hermitian(noise, "logdet_rate_factored noise");
  if (factor.rows() != noise.rows()) {
    throw ContractError("logdet_rate_factored: dimension mismatch " + dims(factor) + " vs " + dims(noise));
  }
  const Index n = noise.rows();
  const Index r = factor.cols();
  if (r == 0 || n == 0) return 0.0;
  Eigen::LLT<ComplexMatrix> chol(hermitian_part(noise) + ComplexMatrix::Identity(n, n));
  if (chol.info() != Eigen::Success) {
    throw NumericalError("logdet_rate_factored: noise covariance is not positive semidefinite");
  }
  const ComplexMatrix w = chol.matrixL().solve(factor);
  // det(I_n + W W^*) = det(I_r + W^* W); factor the smaller Gram matrix.
  ComplexMatrix gram = r <= n ? ComplexMatrix(w.adjoint() * w) : ComplexMatrix(w * w.adjoint());
  gram.diagonal().array() += 1.0;
  Eigen::LLT<ComplexMatrix> inner(hermitian_part(gram));
  if (inner.info() != Eigen::Success) throw NumericalError("logdet_rate_factored: whitened Gram not positive definite");
  double nats = 0.0;
  const auto& l = inner.matrixLLT();
  for (Index i = 0; i < l.rows(); ++i) nats += 2.0 * std::log(l(i, i).real());
  return nats / std::numbers::ln2;
}

ComplexMatrix upper_toeplitz(std::span<const Complex> taps, std::size_t n) {
  const auto size = static_cast<Index>(n);
  ComplexMatrix t = ComplexMatrix::Zero(size, size);
  for (Index i = 0; i < size; ++i) {
    for (Index d = 0; d < static_cast<Index>(taps.size()) && i + d < size; ++d) t(i, i + d) = taps[d];
  }
  return t;
}

ComplexMatrix block_toeplitz_apply_inverse(std::span<const ComplexMatrix> taps, const ComplexMatrix& rhs,
                                           ToeplitzMode mode) {
  if (taps.empty()) throw ContractError("block_toeplitz_apply_inverse: no taps");
  const Index b = taps[0].rows();
  for (const auto& t : taps) {
    if (t.rows() != b || t.cols() != b) throw ContractError("block_toeplitz_apply_inverse: taps must be square and equal size");
  }
  if (b == 0 || rhs.rows() % b != 0) throw ContractError("block_toeplitz_apply_inverse: rhs rows not a multiple of block size");
  require_finite(rhs, "block_toeplitz_apply_inverse rhs");
  const Index n = rhs.rows() / b;
  const Index width = rhs.cols();
  const Index band = std::min<Index>(static_cast<Index>(taps.size()), n);

  if (b == 1 && std::abs(taps[0](0, 0)) < 1e-14) {
    throw SingularityError("toeplitz solve: leading tap vanishes, determinant a^N = 0");
  }

  if (mode == ToeplitzMode::exact) {
    Eigen::PartialPivLU<ComplexMatrix> lead(taps[0]);
    if (b > 1 && !(lead.rcond() > 1e-14)) {
      throw SingularityError("block toeplitz solve: leading block is singular");
    }
    ComplexMatrix x(rhs.rows(), width);
    ComplexMatrix acc(b, width);
    for (Index i = n - 1; i >= 0; --i) {
      acc = rhs.middleRows(i * b, b);
      for (Index d = 1; d < band && i + d < n; ++d) acc.noalias() -= taps[d] * x.middleRows((i + d) * b, b);
      x.middleRows(i * b, b) = b == 1 ? ComplexMatrix(acc / taps[0](0, 0)) : ComplexMatrix(lead.solve(acc));
    }
    return x;
  }

  // Block circulant: x_hat_k = Lambda_k^{-1} r_hat_k with
  // Lambda_k = sum_d T_d w^{-dk}, w = exp(-2 pi i / N).
  Eigen::FFT<double> fft;
  std::vector<ComplexMatrix> spectrum(static_cast<std::size_t>(n), ComplexMatrix::Zero(b, b));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (Index k = 0; k < n; ++k) {
    for (Index d = 0; d < band; ++d) {
      const Index phase_index = (d * k) % n;
      spectrum[k] += taps[d] * std::polar(1.0, step * static_cast<double>(phase_index));
    }
  }
  // Row (i, r) -> sequence over i for each component r and each rhs column.
  std::vector<ComplexMatrix> rhs_hat(static_cast<std::size_t>(n), ComplexMatrix(b, width));
  std::vector<Complex> seq(static_cast<std::size_t>(n));
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Index r = 0; r < b; ++r) {
    for (Index c = 0; c < width; ++c) {
      for (Index i = 0; i < n; ++i) seq[i] = rhs(i * b + r, c);
      fft.fwd(out, seq);
      for (Index k = 0; k < n; ++k) rhs_hat[k](r, c) = out[k];
    }
  }
  for (Index k = 0; k < n; ++k) {
    Eigen::PartialPivLU<ComplexMatrix> lu(spectrum[k]);
    if (!(std::abs(lu.determinant()) > 1e-14)) {
      throw SingularityError("circulant solve: spectrum vanishes at bin " + std::to_string(k));
    }
    rhs_hat[k] = lu.solve(rhs_hat[k]);
  }
  ComplexMatrix x(rhs.rows(), width);
  for (Index r = 0; r < b; ++r) {
    for (Index c = 0; c < width; ++c) {
      for (Index k = 0; k < n; ++k) seq[k] = rhs_hat[k](r, c);
      fft.inv(out, seq);
      for (Index i = 0; i < n; ++i) x(i * b + r, c) = out[i];
    }
  }
  return x;
}

ComplexMatrix toeplitz_apply_inverse(std::span<const Complex> taps, const ComplexMatrix& rhs, ToeplitzMode mode) {
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(taps.size());
  for (const Complex& t : taps) blocks.push_back(ComplexMatrix::Constant(1, 1, t));
  return block_toeplitz_apply_inverse(blocks, rhs, mode);
}

double projector_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw ContractError("projector_distance: row mismatch");
  return (a * a.adjoint() - b * b.adjoint()).norm();
}

double relative_error(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(b.norm(), std::numeric_limits<double>::min());
}

double orthonormality_defect(const ComplexMatrix& m) {
  return (m.adjoint() * m - ComplexMatrix::Identity(m.cols(), m.cols())).norm();
}

}  // namespace anwt
