#include "stateconv/errors.hpp"
#include "stateconv/simulation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace stateconv;

TEST_SUITE("simulation") {

TEST_CASE("mu and nu") {
  const MuNu two = build_mu_nu(2);
  CHECK(two.alpha == 0.0);
  CHECK((two.mu[0] - CVector::Unit(2, 1)).norm() < 1e-15);
  CHECK((two.nu[0] - CVector::Unit(2, 0)).norm() < 1e-15);
  CHECK(two.mu[0].dot(two.nu[1]).real() == doctest::Approx(1.0));
  CHECK(std::abs(two.mu[0].dot(two.nu[0])) < 1e-15);

  const MuNu three = build_mu_nu(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double want = i == j ? 0.0 : 0.75;
      CHECK(std::abs(three.mu[i].dot(three.nu[j]) - want) <= 1e-10);
    }
  }

  const FactorizationCheck f = check_factorization(ones(5) - identity(5), {ones(5)}, mu_nu_factorization(5));
  CHECK(f.residual <= 1e-10);
  CHECK(f.objective == doctest::Approx(1.6).epsilon(1e-12));
  CHECK_THROWS_AS(build_mu_nu(1), InputError);
}

TEST_CASE("canonical states") {
  const StateRealization j = canonical_states(ones(3), identity(3));
  CHECK(j.dim == 6);
  for (int x = 1; x < 3; ++x) CHECK((j.rho[x] - j.rho[0]).norm() < 1e-12);
  CHECK((gram(j.sigma) - identity(3)).norm() < 1e-12);
  for (int x = 0; x < 3; ++x) CHECK(std::abs(j.rho[x].dot(j.sigma[x])) < 1e-15);

  Rng rng = make_rng(31);
  std::vector<CVector> v;
  for (int i = 0; i < 4; ++i) v.push_back(random_unit(rng, 3));
  const CMatrix g = gram(v);
  const StateRealization r = canonical_states(g, g);
  CHECK((gram(r.rho) - g).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK_THROWS_AS(canonical_states(2.0 * identity(2), identity(2)), InputError);
}

TEST_CASE("algorithm instance") {
  const AlgorithmInstance id = build_instance(identity_bit(), 0.1);
  CHECK(id.w == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(id.theta == doctest::Approx(0.01).epsilon(1e-5));
  CHECK(id.dim_h == 4);
  CHECK(id.dim == 2 * 4 + 1 * 2 * id.m);
  const CMatrix u = id.unitary(0);
  CHECK((u.adjoint() * u - identity(id.dim)).norm() <= 1e-10);

  const AlgorithmInstance o = build_instance(or_fn(2), 0.1);
  CHECK(o.w == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));

  CHECK_THROWS_AS(build_instance(identity_bit(), 1.5), InputError);
  CHECK_THROWS_AS(build_instance(identity_bit(), 0.0), InputError);
  CHECK_THROWS_AS(build_instance(constant_fn(1), 0.1), InputError);
}

TEST_CASE("eigenphases") {
  const PhaseSpectrum one = phase_spectrum(identity(4));
  CHECK(one.phases.cwiseAbs().maxCoeff() < 1e-12);
  const PhaseSpectrum minus = phase_spectrum(-identity(3));
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(minus.phases(i) == doctest::Approx(M_PI));

  Rng rng = make_rng(32);
  const CMatrix r1 = 2.0 * random_projector(rng, 6, 2) - identity(6);
  const CMatrix r2 = 2.0 * random_projector(rng, 6, 3) - identity(6);
  const Eigen::VectorXd ph = phase_spectrum(r1 * r2).phases;
  for (Eigen::Index i = 0; i < ph.size(); ++i) {
    const double p = ph(i);
    if (std::abs(p) < 1e-8 || std::abs(std::abs(p) - M_PI) < 1e-8) continue;
    bool paired = false;
    for (Eigen::Index j = 0; j < ph.size(); ++j) paired = paired || std::abs(ph(j) + p) < 1e-8;
    CHECK(paired);
  }

  const Eigen::VectorXd ip = eigenphases(build_instance(identity_bit(), 0.1), 0);
  CHECK(std::is_sorted(ip.data(), ip.data() + ip.size()));
}

TEST_CASE("ideal reflection") {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = -1.0;
  const CMatrix r = ideal_reflection(u, 0.1);
  const CVector b0 = CVector::Unit(2, 0);
  const CVector bpi = CVector::Unit(2, 1);
  CHECK((r * b0 - b0).norm() < 1e-12);
  CHECK((r * bpi + bpi).norm() < 1e-12);
  CHECK((r * (0.5 * (b0 + bpi)) - 0.5 * (b0 - bpi)).norm() < 1e-12);

  std::ostringstream csv;
  write_phase_csv(csv, phase_histogram(phase_spectrum(u).phases));
  CHECK(csv.str().rfind("phase,multiplicity\n", 0) == 0);
}

TEST_CASE("conversion and claims") {
  const AlgorithmInstance id = build_instance(identity_bit(), 0.1);
  for (int x = 0; x < 2; ++x) {
    const ClaimMargins c = verify_claims(id, x);
    CHECK(c.tplus >= 0.99 - 1e-12);
    // (Theta^2 / 4)(W^2 / eps^2 + 1) = (1e-4 / 4) * 101
    CHECK(c.tminus_bound == doctest::Approx(2.525e-3).epsilon(1e-3));
    CHECK(c.tminus <= c.tminus_bound + 1e-12);
    CHECK(c.tminus <= 2.525e-5);
    const SimulationEntry e = run_conversion(id, x);
    CHECK(e.error < 0.4);
    CHECK(e.error < (std::sqrt(2.0) + 1.0) * 0.1);
    CHECK(e.fixed_residual <= 1e-8);
    CHECK(e.kernel_residual <= 1e-8);
  }

  const SimulationReport small = simulate(build_instance(identity_bit(), 0.02));
  CHECK(small.pass);
  for (const SimulationEntry& e : small.entries) CHECK(e.error < 0.08);

  const SimulationReport o = simulate(build_instance(or_fn(2), 0.1));
  CHECK(o.pass);
  CHECK(o.entries.size() == 4);
  for (const SimulationEntry& e : o.entries) CHECK(e.error < 0.4);
  CHECK(o.query_estimate > 0);
}

TEST_CASE("effective spectral gap") {
  Rng rng = make_rng(33);
  const CMatrix pi = random_projector(rng, 6, 3);
  const CMatrix lambda = random_projector(rng, 6, 2);
  CVector w = (identity(6) - lambda) * random_unit(rng, 6);
  CHECK(spectral_gap_check(pi, lambda, w, 0.0) >= -1e-8);
  CHECK(spectral_gap_check(pi, lambda, w, M_PI) >= 0.0);
  CHECK_THROWS_AS(spectral_gap_check(pi, lambda, lambda * w + CVector::Unit(6, 0), 0.5), InputError);

  const GapTrials g = spectral_gap_trials(40, 5);
  CHECK(g.failures == 0);
  CHECK(g.worst_margin >= -1e-8);
}

TEST_CASE("one-query certificate") {
  // trivial oracles
  OneQueryInstance triv;
  triv.domain = identity_bit();
  triv.workspace = 2;
  Rng rng = make_rng(34);
  for (int x = 0; x < 2; ++x) {
    triv.states.push_back(random_unit(rng, 2));
    triv.oracles.push_back(identity(2));
  }
  const OneQueryCertificate t = one_query_certificate(triv);
  CHECK(t.check.residual <= 1e-15);
  CHECK(t.check.objective == doctest::Approx(2.0));
  CHECK((t.rho - t.sigma).norm() <= 1e-15);

  // phase oracle on one bit, query register |1>
  OneQueryInstance phase;
  phase.domain = identity_bit();
  phase.workspace = 1;
  for (int x = 0; x < 2; ++x) {
    phase.states.push_back(CVector::Ones(1));
    phase.oracles.push_back(CMatrix::Constant(1, 1, x == 0 ? 1.0 : -1.0));
  }
  const OneQueryCertificate p = one_query_certificate(phase);
  CHECK(p.check.residual <= 1e-12);
  CHECK(p.check.objective <= 2.0 + 1e-12);
  const double sdp = filtered_gamma2(p.rho - p.sigma, build_filters(phase.domain)).value.value;
  CHECK(sdp <= 2.0 + 1e-4);
  CHECK(sdp == doctest::Approx(2.0).epsilon(1e-4));

  for (int i = 0; i < 5; ++i) {
    const OneQueryCertificate c = one_query_certificate(random_one_query(rng, 2, 2, 2));
    CHECK(c.check.residual <= 1e-8);
    CHECK(c.check.objective <= 2.0 + 1e-8);
  }
}

TEST_CASE("fractional query") {
  Rng rng = make_rng(35);
  const FractionalInstance inst = random_fractional(rng, 2, 2);
  const FractionalCertificate zero = fractional_query_certificate(inst, 0.0);
  CHECK((zero.rho - zero.sigma).norm() <= 1e-15);
  CHECK(zero.bound == 0.0);
  CHECK(zero.max_diagonal <= 1e-15);

  const FractionalCertificate half = fractional_query_certificate(inst, 0.5);
  CHECK(half.p_lambda == doctest::Approx(2.0));
  CHECK(half.bound == doctest::Approx(0.5 * M_PI * std::sqrt(2.0)));
  CHECK(half.pass);
  for (int l = 1; l <= 20; ++l) CHECK(fractional_query_certificate(inst, 0.05 * l).pass);
}

TEST_CASE("output condition") {
  Rng rng = make_rng(36);
  std::vector<CVector> rho;
  for (int i = 0; i < 3; ++i) rho.push_back(random_unit(rng, 3));
  const OutputConditionReport same = output_condition(rho, rho);
  CHECK(std::abs(same.forward.gamma2) <= 1e-6);
  CHECK(same.reverse.min_fidelity == doctest::Approx(1.0).epsilon(1e-6));

  for (int t = 0; t < 5; ++t) {
    const auto [r, s] = random_ensembles(rng, 3, 3, 0.1);
    const OutputForward f = output_condition_forward(r, s);
    if (f.eps <= 0.04) CHECK(f.gamma2 <= 0.4);
    CHECK(f.pass);
    const OutputReverse b = output_condition_reverse(r, s);
    CHECK(b.pass);
    CHECK(b.unitarity <= 1e-8);
  }
}

}
