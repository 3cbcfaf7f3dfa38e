#include "stateconv/errors.hpp"
#include "stateconv/sdp.hpp"
#include "stateconv/sdp_build.hpp"

#include <doctest.h>

#include <sstream>

using namespace stateconv;
using namespace stateconv::sdp;

TEST_SUITE("sdp") {

TEST_CASE("scalar lower bound") {
  // min x  s.t.  x - s = 1, x >= 0, s >= 0
  Program p;
  const int bx = p.add_block(BlockKind::psd, 1);
  const int bs = p.add_block(BlockKind::nonneg, 1);
  p.objective.add(bx, 0, 0, 1.0);
  Constraint c;
  c.a.add(bx, 0, 0, 1.0);
  c.a.add(bs, 0, 0, -1.0);
  c.rhs = 1.0;
  p.constraints.push_back(c);
  const Result r = solve(p);
  REQUIRE(r.status == Status::optimal);
  CHECK(r.primal_value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.dual_value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("two by two with fixed off-diagonal") {
  // min (a + b) / 2  s.t. [[a, -1], [-1, b]] >= 0
  Program p;
  const int b = p.add_block(BlockKind::psd, 2);
  p.objective.add(b, 0, 0, 0.5);
  p.objective.add(b, 1, 1, 0.5);
  Constraint c;
  c.a.add(b, 0, 1, 0.5);
  c.rhs = -1.0;
  p.constraints.push_back(c);
  const Result r = solve(p);
  REQUIRE(r.status == Status::optimal);
  CHECK(r.primal_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[0](0, 1) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(min_cone_eigenvalue(p, r.x) >= -1e-8);
}

TEST_CASE("infeasible program is reported") {
  // x >= 0 with x = -1
  Program p;
  const int b = p.add_block(BlockKind::nonneg, 1);
  p.objective.add(b, 0, 0, 1.0);
  Constraint c;
  c.a.add(b, 0, 0, 1.0);
  c.rhs = -1.0;
  p.constraints.push_back(c);
  const Result r = solve(p);
  CHECK(r.status == Status::infeasible);
  CHECK_THROWS_AS(solve_checked(p, {}, "test"), SolverError);
}

TEST_CASE("unbounded program is reported") {
  // min -x  s.t. x - y = 0, x, y free... on nonneg blocks: x - y = 0, x, y >= 0
  Program p;
  const int b = p.add_block(BlockKind::nonneg, 2);
  p.objective.add(b, 0, 0, -1.0);
  Constraint c;
  c.a.add(b, 0, 0, 1.0);
  c.a.add(b, 1, 1, -1.0);
  c.rhs = 0.0;
  p.constraints.push_back(c);
  CHECK(solve(p).status == Status::unbounded);
}

TEST_CASE("malformed programs are rejected") {
  Program p;
  const int b = p.add_block(BlockKind::nonneg, 2);
  p.objective.add(b, 0, 1, 1.0);
  CHECK_THROWS_AS(p.validate(), InputError);
  Program q;
  q.add_block(BlockKind::psd, 2);
  q.objective.add(3, 0, 0, 1.0);
  CHECK_THROWS_AS(q.validate(), InputError);
}

TEST_CASE("dump round trip") {
  Program p;
  const int b = p.add_block(BlockKind::psd, 2);
  const int s = p.add_block(BlockKind::nonneg, 1);
  p.objective.add(b, 0, 0, 0.5);
  p.objective.add(b, 1, 1, 0.5);
  Constraint c;
  c.a.add(b, 0, 1, 0.5);
  c.a.add(s, 0, 0, 1.0);
  c.rhs = -1.0;
  p.constraints.push_back(c);
  std::stringstream ss;
  dump(p, ss);
  const Program q = parse_dump(ss);
  REQUIRE(q.blocks.size() == 2);
  REQUIRE(q.constraints.size() == 1);
  CHECK(solve(q).primal_value == doctest::Approx(solve(p).primal_value));
}

TEST_CASE("lmi builder matches the dual side") {
  // maximize y  s.t. [[1, y], [y, 1]] >= 0  -> 1
  LmiProgram lmi;
  const int y = lmi.add_var(1.0);
  const HermitianLayout h = lmi.add_lmi(2, false);
  lmi.constant(h, 0, 0, 1.0);
  lmi.constant(h, 1, 1, 1.0);
  lmi.coef(y, h, 0, 1, 1.0);
  const Result r = solve_checked(lmi.program(), {}, "lmi");
  CHECK(r.dual_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.y(y) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("hermitian block round trip") {
  Program p;
  const HermitianLayout h = add_hermitian_block(p, 2, true);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(4, 4);
  y << 1, 0.5, 0, -0.25, 0.5, 1, 0.25, 0, 0, 0.25, 1, 0.5, -0.25, 0, 0.5, 1;
  const CMatrix x = hermitian_value(y, h);
  CHECK(x(0, 1).real() == doctest::Approx(0.5));
  CHECK(std::abs(x(1, 0).imag()) == doctest::Approx(0.25));
  CHECK(std::abs(x(0, 1) - std::conj(x(1, 0))) < 1e-15);
}

}
