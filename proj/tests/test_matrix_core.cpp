#include "stateconv/errors.hpp"
#include "stateconv/matrix_core.hpp"
#include "stateconv/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace stateconv;

TEST_SUITE("matrix_core") {

TEST_CASE("spectral norm of small fixed matrices") {
  CHECK(spectral_norm(identity(2)) == doctest::Approx(1.0));
  CHECK(spectral_norm(ones(3)) == doctest::Approx(3.0));
  CHECK(spectral_norm(ones(2) - identity(2)) == doctest::Approx(1.0));
  CMatrix a(1, 2);
  a << Complex(3, 0), Complex(0, 4);
  CHECK(spectral_norm(a) == doctest::Approx(5.0));
}

TEST_CASE("hermitian eig") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const HermitianEig e = hermitian_eig(d);
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(2.0));
  CHECK((e.eigenvectors - identity(2)).norm() < 1e-12);

  const HermitianEig j = hermitian_eig(ones(2));
  CHECK(std::abs(j.eigenvalues(0)) < 1e-12);
  CHECK(j.eigenvalues(1) == doctest::Approx(2.0));

  Rng rng = make_rng(11);
  const CMatrix h = random_hermitian(rng, 6);
  const HermitianEig r = hermitian_eig(h);
  const CMatrix back = r.eigenvectors * r.eigenvalues.cast<Complex>().asDiagonal() * r.eigenvectors.adjoint();
  CHECK((back - h).cwiseAbs().maxCoeff() <= 1e-10);

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(bad), InputError);
}

TEST_CASE("schur and kron") {
  Rng rng = make_rng(12);
  const CMatrix a = random_complex(rng, 3, 3);
  CHECK((schur(a, ones(3)) - a).norm() == 0.0);
  CHECK(schur(a, CMatrix::Zero(3, 3)).norm() == 0.0);
  const CMatrix off = ones(3) - identity(3);
  CHECK((schur(off, off) - off).norm() == 0.0);
  CHECK_THROWS_AS(schur(a, ones(2)), InputError);

  CHECK((kron(identity(2), identity(2)) - identity(4)).norm() == 0.0);
  CHECK((kron(ones(2), ones(2)) - ones(4)).norm() == 0.0);
  const CMatrix b = random_complex(rng, 3, 3);
  CHECK(spectral_norm(kron(a, b)) == doctest::Approx(spectral_norm(a) * spectral_norm(b)).epsilon(1e-10));
  CHECK(direct_sum(identity(1), ones(2)).rows() == 3);
}

TEST_CASE("psd factorize") {
  const std::vector<CVector> e = psd_factorize(identity(2));
  REQUIRE(e.size() == 2);
  CHECK(std::abs(e[0].dot(e[1])) < 1e-14);
  CHECK(e[0].norm() == doctest::Approx(1.0));

  const std::vector<CVector> j = psd_factorize(ones(2));
  REQUIRE(j.size() == 2);
  CHECK(j[0].size() == 1);
  CHECK((j[0] - j[1]).norm() < 1e-14);

  Rng rng = make_rng(13);
  std::vector<CVector> v;
  for (int i = 0; i < 4; ++i) v.push_back(random_unit(rng, 3));
  const CMatrix g = gram(v);
  const CMatrix back = gram(psd_factorize(g));
  CHECK((back - g).cwiseAbs().maxCoeff() <= 1e-8);

  CMatrix neg = identity(2);
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(psd_factorize(neg), NotPsdError);
}

TEST_CASE("complement basis") {
  std::vector<CVector> span{CVector::Unit(2, 0)};
  const CMatrix c = complement_basis(span, 2);
  REQUIRE(c.cols() == 1);
  CHECK(std::abs(c(0, 0)) < 1e-14);
  CHECK(std::abs(c(1, 0)) == doctest::Approx(1.0));

  std::vector<CVector> full{CVector::Unit(3, 0), CVector::Unit(3, 1), CVector::Unit(3, 2)};
  CHECK(complement_basis(full, 3).cols() == 0);

  Rng rng = make_rng(14);
  std::vector<CVector> three;
  for (int i = 0; i < 3; ++i) three.push_back(random_unit(rng, 8));
  const CMatrix b = complement_basis(three, 8);
  CHECK(b.cols() == 5);
  for (const CVector& s : three) CHECK((b.adjoint() * s).norm() <= 1e-10);
  CHECK((b.adjoint() * b - identity(5)).norm() <= 1e-10);
  CHECK((projector(b) * b - b).norm() <= 1e-10);
}

TEST_CASE("unitary eig") {
  const UnitaryEig one = unitary_eig(identity(3));
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(one.phases(i)) < 1e-12);
  const UnitaryEig minus = unitary_eig(-identity(2));
  for (Eigen::Index i = 0; i < 2; ++i) CHECK(minus.phases(i) == doctest::Approx(M_PI));

  Rng rng = make_rng(15);
  const CMatrix u = random_unitary(rng, 5);
  const UnitaryEig e = unitary_eig(u);
  CMatrix d = CMatrix::Zero(5, 5);
  for (Eigen::Index i = 0; i < 5; ++i) d(i, i) = std::polar(1.0, e.phases(i));
  CHECK((e.eigenvectors * d * e.eigenvectors.adjoint() - u).norm() <= 1e-10);
  CHECK_THROWS_AS(unitary_eig(2.0 * identity(2)), InputError);
}

TEST_CASE("non-finite input is rejected") {
  CMatrix a = identity(2);
  a(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(require_finite(a, "a"), InputError);
}

}
