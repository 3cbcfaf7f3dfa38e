#include "stateconv/matrix_core.hpp"

#include "stateconv/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace stateconv {

namespace {

void fix_phase(CMatrix& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      // first index wins ties so the choice is reproducible
      const double a = std::abs(vectors(i, k));
      if (a > best_abs + 1e-12) {
        best_abs = a;
        best = i;
      }
    }
    if (best_abs > 0.0) {
      const Complex phase = std::conj(vectors(best, k)) / best_abs;
      vectors.col(k) *= phase;
      vectors(best, k) = Complex(std::abs(vectors(best, k)), 0.0);
    }
  }
}

}  // namespace

void require_finite(const CMatrix& a, std::string_view what) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Complex z = a(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InputError(std::string(what) + ": non-finite entry at (" + std::to_string(i) +
                         ", " + std::to_string(j) + ")");
      }
    }
  }
}

bool is_hermitian(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMatrix ones(Eigen::Index rows, Eigen::Index cols) {
  return CMatrix::Constant(rows, cols, Complex(1.0, 0.0));
}

CMatrix ones(Eigen::Index n) { return ones(n, n); }

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

double spectral_norm(const CMatrix& a) {
  require_finite(a, "spectral_norm");
  if (a.size() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (a.rows() == a.cols() && is_hermitian(a, 1e-14 * scale)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  const Eigen::Index r = a.rows();
  const Eigen::Index c = a.cols();
  CMatrix dilation = CMatrix::Zero(r + c, r + c);
  dilation.topRightCorner(r, c) = a;
  dilation.bottomLeftCorner(c, r) = a.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(dilation, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

HermitianEig hermitian_eig(const CMatrix& a) {
  require_finite(a, "hermitian_eig");
  if (a.rows() != a.cols()) throw InputError("hermitian_eig: matrix is not square");
  if (a.size() == 0) return {Eigen::VectorXd(0), CMatrix(0, 0)};
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  const double norm = a.cwiseAbs().maxCoeff() * static_cast<double>(a.rows());
  if (asym > 1e-10 * (1.0 + norm)) {
    throw InputError("hermitian_eig: matrix is not Hermitian (asymmetry " + std::to_string(asym) +
                     ")");
  }
  const CMatrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw InputError("hermitian_eig: eigensolver failed");
  HermitianEig out{es.eigenvalues(), es.eigenvectors()};
  fix_phase(out.eigenvectors);
  return out;
}

UnitaryEig unitary_eig(const CMatrix& u, double tol) {
  require_finite(u, "unitary_eig");
  if (u.rows() != u.cols()) throw InputError("unitary_eig: matrix is not square");
  const Eigen::Index n = u.rows();
  if (n == 0) return {Eigen::VectorXd(0), CMatrix(0, 0)};
  const double defect = (u.adjoint() * u - identity(n)).cwiseAbs().maxCoeff();
  if (defect > tol) {
    throw InputError("unitary_eig: matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  Eigen::ComplexSchur<CMatrix> cs(u);
  if (cs.info() != Eigen::Success) throw InputError("unitary_eig: Schur decomposition failed");
  const CMatrix& t = cs.matrixT();
  UnitaryEig out;
  out.phases.resize(n);
  out.eigenvectors = cs.matrixU();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex lambda = t(k, k);
    if (std::abs(std::abs(lambda) - 1.0) > tol) {
      throw InputError("unitary_eig: eigenvalue off the unit circle");
    }
    double theta = std::arg(lambda);
    if (theta <= -std::numbers::pi + 1e-15) theta = std::numbers::pi;
    out.phases(k) = theta;
  }
  fix_phase(out.eigenvectors);
  return out;
}

CMatrix schur(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError("schur: shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
  return a.cwiseProduct(b);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  require_finite(a, "kron");
  require_finite(b, "kron");
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix psd_factor_rows(const CMatrix& g, double rank_tol) {
  const HermitianEig eig = hermitian_eig(g);
  const Eigen::Index n = g.rows();
  if (n == 0) return CMatrix(0, 0);
  const double norm = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double cut = rank_tol * norm;
  if (eig.eigenvalues(0) < -cut) {
    throw NotPsdError("psd_factorize: eigenvalue " + std::to_string(eig.eigenvalues(0)) +
                      " below -rank_tol*||g|| = " + std::to_string(-cut));
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (eig.eigenvalues(k) > cut) kept.push_back(k);
  }
  CMatrix rows(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const Eigen::Index k = kept[c];
    rows.col(static_cast<Eigen::Index>(c)) = std::sqrt(eig.eigenvalues(k)) * eig.eigenvectors.col(k);
  }
  return rows;
}

std::vector<CVector> psd_factorize(const CMatrix& g, double rank_tol) {
  const CMatrix rows = psd_factor_rows(g, rank_tol);
  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index x = 0; x < rows.rows(); ++x) out.emplace_back(rows.row(x).adjoint());
  return out;
}

CMatrix gram(std::span<const CVector> vectors) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  CMatrix g(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      g(x, y) = vectors[static_cast<std::size_t>(x)].dot(vectors[static_cast<std::size_t>(y)]);
    }
  }
  return g;
}

CMatrix complement_basis(std::span<const CVector> spanning, Eigen::Index dim, double rank_tol) {
  if (spanning.empty()) return identity(dim);
  CMatrix v(dim, static_cast<Eigen::Index>(spanning.size()));
  for (std::size_t i = 0; i < spanning.size(); ++i) {
    if (spanning[i].size() != dim) {
      throw InputError("complement_basis: vector " + std::to_string(i) + " has dimension " +
                       std::to_string(spanning[i].size()) + ", expected " + std::to_string(dim));
    }
    v.col(static_cast<Eigen::Index>(i)) = spanning[i];
  }
  require_finite(v, "complement_basis");
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeFullU);
  const Eigen::VectorXd& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > rank_tol * smax && smax > 0.0) ++rank;
  }
  CMatrix basis = svd.matrixU().rightCols(dim - rank);
  fix_phase(basis);
  return basis;
}

CMatrix projector(const CMatrix& orthonormal_columns) {
  return orthonormal_columns * orthonormal_columns.adjoint();
}

}  // namespace stateconv
