#include "stateconv/errors.hpp"
#include "stateconv/gamma2.hpp"
#include "stateconv/random.hpp"
#include "stateconv/simulation.hpp"

#include <doctest.h>

#include <cmath>

using namespace stateconv;

TEST_SUITE("gamma2") {

TEST_CASE("gamma2 of small fixed matrices") {
  for (int n : {1, 3, 5}) {
    const Gamma2Result r = gamma2(ones(n));
    CHECK(r.value.value == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(std::abs(gamma2(CMatrix::Zero(3, 3)).value.value) <= 1e-8);
  CHECK(gamma2(ones(2) - identity(2)).value.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(gamma2(ones(4) - identity(4)).value.value == doctest::Approx(1.5).epsilon(1e-4));
}

TEST_CASE("solver certificate factors the input") {
  Rng rng = make_rng(21);
  const CMatrix a = random_complex(rng, 3, 4);
  const Gamma2Result r = gamma2(a);
  const FactorizationCheck chk = check_factorization(a, {ones(3, 4)}, r.cert);
  CHECK(chk.residual <= 1e-6);
  CHECK(chk.objective == doctest::Approx(r.value.value).epsilon(1e-4));
}

TEST_CASE("filtered gamma2") {
  const CMatrix off = ones(2) - identity(2);
  CHECK(filtered_gamma2(off, {off}).value.value == doctest::Approx(1.0).epsilon(1e-6));

  const Gamma2Result inf = filtered_gamma2(identity(2), {off});
  CHECK(inf.value.infinite);
  CHECK(filtered_infeasible(identity(2), {off}));
  CHECK(inf.value.str() == "inf");

  Rng rng = make_rng(22);
  const CMatrix a = random_complex(rng, 3, 3);
  CHECK(filtered_gamma2(a, {ones(3)}).value.value == doctest::Approx(gamma2(a).value.value).epsilon(1e-5));

  CHECK_THROWS_AS(filtered_gamma2(a, {ones(2)}), InputError);
}

TEST_CASE("dual side agrees with the primal") {
  Rng rng = make_rng(23);
  const CMatrix a = random_complex(rng, 3, 3);
  const FilterSet z{random_mask(rng, 3, 3, 0.7), ones(3)};
  const double p = filtered_gamma2(a, z).value.value;
  const ExtendedReal d = filtered_gamma2_dual(a, z);
  REQUIRE_FALSE(d.infinite);
  CHECK(d.value == doctest::Approx(p).epsilon(1e-4));
}

TEST_CASE("gamma2 star") {
  CMatrix one(1, 1);
  one(0, 0) = 1.0;
  CHECK(gamma2_star(one, {one}).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(gamma2_star(CMatrix::Zero(2, 2), {ones(2)}).value) <= 1e-7);

  Rng rng = make_rng(24);
  const CMatrix h = random_hermitian(rng, 3);
  const Gamma2StarResult s = gamma2_star(h, {ones(3)});
  REQUIRE(s.hermitian_form);
  CHECK(s.hermitian_value == doctest::Approx(s.value).epsilon(1e-4));
  // the maximizer has gamma_2 at most 1 and attains the value
  CHECK(gamma2(s.b).value.value <= 1.0 + 1e-4);
  CHECK((h.conjugate().cwiseProduct(s.b)).sum().real() == doctest::Approx(s.value).epsilon(1e-4));
  // random normalized B never beats the maximum
  for (int t = 0; t < 20; ++t) {
    const CMatrix b = random_complex(rng, 3, 3);
    const double g = gamma2(b).value.value;
    CHECK((h.conjugate().cwiseProduct(b)).sum().real() / g <= s.value + 1e-4);
  }
}

TEST_CASE("check factorization") {
  Factorization f;
  f.dim = 1;
  for (int x = 0; x < 3; ++x) {
    f.u.push_back({CVector::Ones(1)});
    f.v.push_back({CVector::Ones(1)});
  }
  const FactorizationCheck c = check_factorization(ones(3), {ones(3)}, f);
  CHECK(c.residual == 0.0);
  CHECK(c.objective == 1.0);

  const FactorizationCheck m = check_factorization(ones(3) - identity(3), {ones(3)}, mu_nu_factorization(3));
  CHECK(m.residual <= 1e-12);
  CHECK(m.objective == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  Factorization bad = f;
  bad.u.pop_back();
  CHECK_THROWS_AS(check_factorization(ones(3), {ones(3)}, bad), InputError);
}

TEST_CASE("property suite, short run") {
  const std::vector<PropertyOutcome> r = property_suite(3, 99);
  REQUIRE(r.size() == 13);
  for (const PropertyOutcome& p : r) {
    INFO(p.name << ": " << p.first_failure);
    CHECK(p.passed());
  }
}

}
