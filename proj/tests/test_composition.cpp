#include "stateconv/composition.hpp"
#include "stateconv/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace stateconv;

TEST_SUITE("composition") {

TEST_CASE("compose") {
  const ComposedSpec ii = compose(identity_bit(), identity_bit(), 1);
  CHECK(ii.composed.domain == identity_bit().domain);
  CHECK(ii.composed.outputs == identity_bit().outputs);

  const ComposedSpec xa = compose(parity_fn(2), and_fn(2), 2);
  REQUIRE(xa.composed.size() == 16);
  CHECK(xa.composed.arity() == 4);
  for (int x = 0; x < 16; ++x) {
    const std::string& p = xa.composed.domain[x];
    const int want = ((p[0] == '1') && (p[1] == '1')) ^ ((p[2] == '1') && (p[3] == '1'));
    CHECK(xa.composed.outputs[x] == std::to_string(want));
  }

  const FunctionSpec o = or_fn(2);
  const ComposedSpec sum = compose(identity_on_outputs(o, 2), o, 2);
  for (int x = 0; x < sum.composed.size(); ++x) {
    const std::string& p = sum.composed.domain[x];
    const std::string want = o.outputs[o.index_of(p.substr(0, 2))] + o.outputs[o.index_of(p.substr(2, 2))];
    CHECK(sum.composed.outputs[x] == want);
  }

  CHECK_THROWS_AS(compose(parity_fn(2), and_fn(2), 3), InputError);
  CHECK_THROWS_AS(compose(identity_on_outputs(identity_bit(), 9), identity_bit(), 9), InputError);
}

TEST_CASE("upper bound") {
  const UpperReport id = check_upper(identity_bit(), identity_bit(), 1);
  CHECK(id.pass);
  CHECK(id.adv_composed == doctest::Approx(1.0).epsilon(1e-4));
  const UpperReport xa = check_upper(parity_fn(2), and_fn(2), 2);
  CHECK(xa.pass);
  CHECK(xa.bound == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-4));
  const UpperReport ds = check_upper(identity_on_outputs(or_fn(2), 2), or_fn(2), 2);
  CHECK(ds.pass);
  CHECK(ds.adv_composed <= 2.0 * std::sqrt(2.0) + 1e-4);
}

TEST_CASE("balancing") {
  AdversaryWitness w;
  w.omega = Eigen::VectorXd::Constant(2, 0.5);
  w.w = (Eigen::MatrixXd::Ones(2, 2) - Eigen::MatrixXd::Identity(2, 2)) / 2.0;
  w.objective = 1.0;
  const BalanceReport same = balance_witness(identity_bit(), w);
  CHECK(same.trace0 == doctest::Approx(0.5));
  CHECK((same.witness.omega - w.omega).norm() < 1e-15);
  CHECK(same.min_eigenvalue >= -1e-15);

  const BalanceReport o = balance_witness(or_fn(2), adv_pm(or_fn(2)).witness);
  CHECK(std::abs(o.trace0 - 0.5) <= 1e-6);
  CHECK(std::abs(o.trace1 - 0.5) <= 1e-6);

  AdversaryWitness skew;
  skew.omega = Eigen::Vector2d(0.7, 0.3);
  skew.w = 0.4 * (Eigen::MatrixXd::Ones(2, 2) - Eigen::MatrixXd::Identity(2, 2));
  skew.objective = 0.8;
  REQUIRE(check_witness(identity_bit(), skew).min_eigenvalue >= 0.0);
  const BalanceReport b = balance_witness(identity_bit(), skew);
  CHECK(b.witness.objective == doctest::Approx(0.8));
  CHECK(b.trace0 == doctest::Approx(0.5));
  CHECK(b.trace1 == doctest::Approx(0.5));
  CHECK(check_witness(identity_bit(), b.witness).min_eigenvalue >= -1e-12);

  AdversaryWitness infeasible = skew;
  infeasible.w *= 2.0;
  CHECK_THROWS_AS(balance_witness(identity_bit(), infeasible), CertificateError);
  const FunctionSpec t = make_function({"012"}, {"0", "1", "2"}, {"0", "1", "2"});
  CHECK_THROWS_AS(balance_witness(t, adv_pm(t).witness), InputError);
}

TEST_CASE("composed witness") {
  const ComposedWitness id = compose_lower(compose(identity_bit(), identity_bit(), 1));
  CHECK(id.pass);
  CHECK(id.value >= 1.0 - 1e-4);

  const ComposedWitness xa = compose_lower(compose(parity_fn(2), and_fn(2), 2));
  CHECK(xa.pass);
  CHECK(xa.value >= 2.0 * std::sqrt(2.0) - 1e-3);
  CHECK(xa.raw_objective == doctest::Approx(xa.expected_objective).epsilon(1e-4));
  CHECK(xa.min_eigenvalue >= -1e-6);
  CHECK(xa.support_ok);

  const ComposedWitness op = compose_lower(compose(or_fn(2), parity_fn(2), 2));
  CHECK(op.pass);
  CHECK(op.value >= 2.0 * std::sqrt(2.0) - 1e-3);
}

TEST_CASE("direct sum") {
  const DirectSumReport id = direct_sum_check(identity_bit(), 2);
  CHECK(id.pass);
  CHECK(id.adv_sum == doctest::Approx(2.0).epsilon(1e-4));
  const DirectSumReport o = direct_sum_check(or_fn(2), 2);
  CHECK(o.pass);
  CHECK(std::abs(o.adv_sum - 2.0 * std::sqrt(2.0)) <= 1e-3);
  const DirectSumReport c = direct_sum_check(constant_fn(1), 2);
  CHECK(c.pass);
  CHECK(std::abs(c.adv_sum) <= 1e-6);
}

TEST_CASE("even outputs break the product bound") {
  const FunctionSpec g = make_function({"01"}, {"0", "1"}, {"0", "2"});
  const FunctionSpec f = function_from_rule(3, 2, [](const std::vector<int>& x) {
    return std::to_string((x[0] + x[1]) % 2);
  });
  const ComposedSpec c = compose(f, g, 2);
  CHECK(std::abs(adv_pm(c.composed).value) <= 1e-6);
  CHECK(adv_pm(f).value == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(adv_pm(g).value == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(compose_lower(c), InputError);
}

}
