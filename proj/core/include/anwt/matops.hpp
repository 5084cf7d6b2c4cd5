// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear-algebra kernels shared by the channel model, the
// precoder designs and the rate evaluation.
#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace anwt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thin or full singular vector sets.
enum class SvdVectors { thin, full };

struct SvdResult {
  ComplexMatrix left;           // orthonormal columns
  RealVector singular_values;   // nonnegative, descending
  ComplexMatrix right;          // orthonormal columns
};

/// Singular value decomposition m = left * diag(s) * right^*.
///
/// For every returned right singular vector the first entry with magnitude
/// above 1e-12 is real and positive; the compensating phase is carried by
/// the paired left vector. With `SvdVectors::full` the right factor is
/// square (cols x cols) and the trailing vectors span the null space.
/// Throws NumericalError on non-convergence, ContractError on non-finite input.
SvdResult svd(const ComplexMatrix& m, SvdVectors vectors = SvdVectors::thin);

/// Orthonormal basis of {z : m z = 0}. The rank counts singular values above
/// rel_tol times the largest one. A zero matrix yields the identity; a full
/// column rank matrix yields a zero-column result.
ComplexMatrix null_space_basis(const ComplexMatrix& m, double rel_tol = 1e-10);

/// Null space basis together with an orthonormal basis of the row space
/// (range of m^*). Both come from one factorization, so
/// null * null^* + row * row^* = I up to rounding.
struct NullSpaceSplit {
  ComplexMatrix null;
  ComplexMatrix row;
};
NullSpaceSplit null_space_split(const ComplexMatrix& m, double rel_tol = 1e-10);

/// Orthonormal basis of the row space alone; avoids forming the
/// (possibly very large) null space basis.
ComplexMatrix row_space_basis(const ComplexMatrix& m, double rel_tol = 1e-10);

/// Number of singular values above rel_tol times the largest one.
std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol = 1e-10);

/// Orthonormalizes the columns of m (Gram-Schmidt, projected twice).
/// Throws DegeneracyError naming the first column whose residual norm falls
/// below 1e-12 * ||m||_F.
ComplexMatrix gram_schmidt(const ComplexMatrix& m);

/// log2 det(signal (noise + I)^{-1} + I).
///
/// `noise` is the interference covariance without the unit noise floor.
/// Both arguments must be Hermitian PSD of equal dimension; asymmetry above
/// 1e-10 (relative) raises ContractError, eigenvalues below -1e-10 * trace
/// raise NumericalError.
double logdet_rate(const ComplexMatrix& signal, const ComplexMatrix& noise);

/// Same rate for a signal covariance given in factored form
/// signal = factor * factor^*. Evaluated as log2 det(I + W^* W) with
/// W = L^{-1} factor and noise + I = L L^*.
double logdet_rate_factored(const ComplexMatrix& factor, const ComplexMatrix& noise);

enum class ToeplitzMode { exact, circulant };

/// Solves T X = rhs for the N x N upper-triangular banded Toeplitz matrix
/// T[i][i + d] = taps[d]. `circulant` replaces T by the circulant matrix
/// with the same first row and solves through the DFT; that is an
/// approximation of the exact solve, not an alternative algorithm for it.
/// Throws SingularityError when |taps[0]| < 1e-14.
ComplexMatrix toeplitz_apply_inverse(std::span<const Complex> first_row_taps,
                                     const ComplexMatrix& rhs,
                                     ToeplitzMode mode = ToeplitzMode::exact);

/// Block version with square b x b tap matrices. Rows of rhs are ordered
/// block-major: row i * b + r is component r of block row i.
ComplexMatrix block_toeplitz_apply_inverse(std::span<const ComplexMatrix> first_row_taps,
                                           const ComplexMatrix& rhs,
                                           ToeplitzMode mode = ToeplitzMode::exact);

/// Dense N x N matrix of `toeplitz_apply_inverse`'s operator (tests, oracles).
ComplexMatrix upper_toeplitz(std::span<const Complex> first_row_taps, std::size_t n);

/// ||a a^* - b b^*||_F for two orthonormal-column matrices.
double projector_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||a - b||_F / max(||b||_F, tiny).
double relative_error(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||m^* m - I||_F.
double orthonormality_defect(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

}  // namespace anwt
