#pragma once

// Dense complex matrix kernel shared by every other module.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace stateconv {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultRankTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend; column k of
/// `eigenvectors` belongs to eigenvalue k and has its largest-magnitude
/// component real and nonnegative.
struct HermitianEig {
  Eigen::VectorXd eigenvalues;
  CMatrix eigenvectors;
};

/// Eigendecomposition of a unitary matrix: orthonormal eigenvectors with
/// eigenvalues exp(i * phase), phase in (-pi, pi].
struct UnitaryEig {
  Eigen::VectorXd phases;
  CMatrix eigenvectors;
};

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const CMatrix& a, std::string_view what);

bool is_hermitian(const CMatrix& a, double tol);

CMatrix ones(Eigen::Index rows, Eigen::Index cols);
CMatrix ones(Eigen::Index n);
CMatrix identity(Eigen::Index n);

/// Largest singular value. Non-Hermitian inputs go through the Hermitian
/// dilation [[0, A], [A^dagger, 0]].
double spectral_norm(const CMatrix& a);

/// Requires ||a - a^dagger|| <= 1e-10 (1 + ||a||).
HermitianEig hermitian_eig(const CMatrix& a);

/// Eigendecomposition of a unitary (more generally, normal) matrix via the
/// complex Schur form. Throws InputError when the input is not unitary within
/// `tol`.
UnitaryEig unitary_eig(const CMatrix& u, double tol = 1e-8);

/// Entrywise (Hadamard) product.
CMatrix schur(const CMatrix& a, const CMatrix& b);

/// Kronecker product; row (x, alpha) maps to x * b.rows() + alpha.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Block-diagonal [[a, 0], [0, b]].
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

/// Vectors {w_x} with <w_x|w_y> = g(x, y). The dimension is the number of
/// eigenvalues above rank_tol * ||g||; eigenvalues in [-rank_tol ||g||, 0)
/// are clamped. Throws NotPsdError for anything more negative.
std::vector<CVector> psd_factorize(const CMatrix& g, double rank_tol = kDefaultRankTol);

/// Same contract as psd_factorize, returned as the rows-as-vectors matrix
/// (row x holds w_x, conjugated so that g = R R^dagger).
CMatrix psd_factor_rows(const CMatrix& g, double rank_tol = kDefaultRankTol);

/// Gram matrix {<v_x|v_y>}.
CMatrix gram(std::span<const CVector> vectors);

/// Orthonormal basis (as columns) of the orthogonal complement of
/// span(spanning) in C^dim. Rank is decided by singular values above
/// rank_tol times the largest one.
CMatrix complement_basis(std::span<const CVector> spanning, Eigen::Index dim,
                         double rank_tol = kDefaultRankTol);

/// Orthogonal projector V V^dagger onto the span of orthonormal columns V.
CMatrix projector(const CMatrix& orthonormal_columns);

}  // namespace stateconv
