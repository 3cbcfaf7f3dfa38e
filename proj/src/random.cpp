#include "stateconv/random.hpp"

#include <Eigen/QR>

#include <vector>

namespace stateconv {

Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (std::uint64_t s : stream) {
    words.push_back(static_cast<std::uint32_t>(s));
    words.push_back(static_cast<std::uint32_t>(s >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

CMatrix random_real(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), 0.0);
  }
  return m;
}

CMatrix random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

CMatrix random_hermitian(Rng& rng, Eigen::Index n) {
  const CMatrix g = random_complex(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

CVector random_unit(Rng& rng, Eigen::Index dim) {
  CVector v = random_complex(rng, dim, 1).col(0);
  return v / v.norm();
}

CMatrix random_unitary(Rng& rng, Eigen::Index n) {
  const CMatrix g = random_complex(rng, n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_projector(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  const CMatrix u = random_unitary(rng, n);
  return projector(u.leftCols(rank));
}

CMatrix random_mask(Rng& rng, Eigen::Index rows, Eigen::Index cols, double p) {
  std::bernoulli_distribution b(p);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = b(rng) ? 1.0 : 0.0;
  }
  return m;
}

}  // namespace stateconv
