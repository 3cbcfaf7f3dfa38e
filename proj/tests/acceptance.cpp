// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "stateconv/composition.hpp"
#include "stateconv/errors.hpp"
#include "stateconv/simulation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace stateconv;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0, double e = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
  return buf;
}

Verdict c1_gamma2_of_offdiagonal() {
  const auto t0 = Clock::now();
  double worst_value = 0.0;
  double worst_residual = 0.0;
  double worst_objective = 0.0;
  for (int k = 2; k <= 6; ++k) {
    const CMatrix a = ones(k) - identity(k);
    const double want = 2.0 * (1.0 - 1.0 / k);
    worst_value = std::max(worst_value, std::abs(gamma2(a).value.value - want));
    const FactorizationCheck f = check_factorization(a, {ones(k)}, mu_nu_factorization(k));
    worst_residual = std::max(worst_residual, f.residual);
    worst_objective = std::max(worst_objective, std::abs(f.objective - want));
  }
  const double t = seconds_since(t0);
  return {worst_value <= 1e-4 && worst_residual <= 1e-10 && worst_objective <= 1e-10 && t < 5.0,
          fmt("max |gamma2 - 2(1-1/k)| = %.2e, factorization residual %.1e, objective error %.1e, %.1f s",
              worst_value, worst_residual, worst_objective, t)};
}

Verdict c2_sandwich() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int failures = 0;
  std::vector<FunctionSpec> fs;
  for (int table = 0; table < 16; ++table) fs.push_back(boolean2(table));
  fs.push_back(or_fn(3));
  fs.push_back(parity_fn(3));
  fs.push_back(majority3());
  for (const FunctionSpec& f : fs) {
    const SandwichReport s = sandwich_check(f);
    worst = std::max(worst, std::abs(s.adv - s.qdist));
    failures += std::abs(s.adv - s.qdist) > 1e-4;
  }
  const FunctionSpec ternary = make_function({"012"}, {"0", "1", "2"}, {"0", "1", "2"});
  const SandwichReport t = sandwich_check(ternary);
  const double time = seconds_since(t0);
  return {failures == 0 && t.ratio <= 4.0 / 3.0 + 1e-4 && time < 60.0,
          fmt("19 boolean-output functions, max |adv - qdist| = %.2e; ternary ratio %.6f; %.1f s", worst, t.ratio,
              time)};
}

Verdict c3_small_values() {
  struct Case {
    FunctionSpec f;
    double want;
  };
  const Case cases[] = {{or_fn(2), std::sqrt(2.0)}, {parity_fn(2), 2.0}, {identity_bit(), 1.0}};
  bool ok = true;
  std::ostringstream d;
  for (const Case& c : cases) {
    const AdvResult r = adv_pm(c.f);
    const double primal = adv_pm_certify(c.f, r.gamma);
    const bool good = std::abs(r.value - c.want) <= 1e-4 && std::abs(primal - r.value) <= 1e-4 &&
                      std::abs(r.filtered_value - r.value) <= 1e-4;
    ok = ok && good;
    d << fmt("%.6f (primal %.6f) ", r.value, primal);
  }
  return {ok, "OR2, PARITY2, identity: " + d.str()};
}

Verdict c4_simulation() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_ratio = 0.0;
  double worst_tplus = 1.0;
  double worst_tminus = 1.0;
  for (const FunctionSpec& f : {identity_bit(), or_fn(2)}) {
    for (double eps : {0.02, 0.1}) {
      const SimulationReport r = simulate(build_instance(f, eps));
      for (const SimulationEntry& e : r.entries) {
        ok = ok && e.error < 4.0 * eps && e.claims.tplus_margin() >= -1e-8 && e.claims.tminus_margin() >= -1e-8;
        worst_ratio = std::max(worst_ratio, e.error / eps);
        worst_tplus = std::min(worst_tplus, e.claims.tplus_margin());
        worst_tminus = std::min(worst_tminus, e.claims.tminus_margin());
      }
    }
  }
  const double t = seconds_since(t0);
  return {ok && t < 30.0, fmt("max error/eps = %.4f (< 4), claim margins %.2e / %.2e, %.1f s", worst_ratio,
                              worst_tplus, worst_tminus, t)};
}

Verdict c5_spectral_gap() {
  const GapTrials g = spectral_gap_trials(200, 5);
  return {g.failures == 0 && g.worst_margin >= -1e-8,
          fmt("200 trials, %.0f failures, worst margin %.3e", g.failures, g.worst_margin)};
}

Verdict c6_properties() {
  const std::vector<PropertyOutcome> r = property_suite(50, 7, 1e-4);
  int passed = 0;
  std::string first;
  for (const PropertyOutcome& p : r) {
    passed += p.passed();
    if (!p.passed() && first.empty()) first = " first failure: " + p.name + ": " + p.first_failure;
  }
  return {r.size() == 13 && passed == 13, fmt("%.0f of 13 properties pass 50 trials", passed) + first};
}

Verdict c7_composition() {
  const auto t0 = Clock::now();
  const FunctionSpec f = parity_fn(2);
  const FunctionSpec g = and_fn(2);
  const ComposedSpec c = compose(f, g, 2);
  const UpperReport up = check_upper(f, g, 2);
  const ComposedWitness lo = compose_lower(c);
  const double want = 2.0 * std::sqrt(2.0);
  const double scale = std::max(1.0, std::abs(lo.expected_objective));
  const double t = seconds_since(t0);
  const bool ok = std::abs(up.adv_composed - want) <= 1e-3 && up.pass && lo.min_eigenvalue >= -1e-6 &&
                  lo.support_ok && std::abs(lo.raw_objective - lo.expected_objective) <= 1e-4 * scale &&
                  lo.value >= want - 1e-3 && t < 300.0;
  return {ok, fmt("ADV = %.6f, witness %.6f, upper bound %.6f, witness min eigenvalue %.1e, %.1f s", up.adv_composed,
                  lo.value, up.bound, lo.min_eigenvalue, t)};
}

Verdict c8_direct_sum() {
  const DirectSumReport d = direct_sum_check(or_fn(2), 2);
  const double want = 2.0 * std::sqrt(2.0);
  return {std::abs(d.adv_sum - want) <= 1e-3, fmt("ADV(OR2^2) = %.6f on 16 points, target %.6f", d.adv_sum, want)};
}

Verdict c9_query_certificates() {
  Rng rng = make_rng(9);
  double worst_obj = 0.0;
  double worst_res = 0.0;
  for (int t = 0; t < 20; ++t) {
    const OneQueryInstance inst =
        random_one_query(rng, uniform_int(rng, 1, 3), uniform_int(rng, 2, 3), uniform_int(rng, 1, 3));
    const OneQueryCertificate c = one_query_certificate(inst);
    worst_obj = std::max(worst_obj, c.check.objective);
    worst_res = std::max(worst_res, c.check.residual);
  }
  int frac_fail = 0;
  double frac_res = 0.0;
  for (int t = 0; t < 5; ++t) {
    const FractionalInstance inst = random_fractional(rng, 2, 2);
    for (int l = 1; l <= 20; ++l) {
      const FractionalCertificate c = fractional_query_certificate(inst, 0.05 * l);
      frac_fail += !c.pass;
      frac_res = std::max(frac_res, c.residual);
    }
  }
  return {worst_obj <= 2.0 + 1e-8 && worst_res <= 1e-8 && frac_fail == 0,
          fmt("one-query max objective %.12f, residual %.1e; fractional failures %.0f, residual %.1e", worst_obj,
              worst_res, frac_fail, frac_res)};
}

Verdict c10_output_condition() {
  Rng rng = make_rng(10);
  int f1 = 0;
  int f2 = 0;
  double m1 = 1e9;
  double m2 = 1e9;
  for (int t = 0; t < 50; ++t) {
    const int count = uniform_int(rng, 2, 5);
    const int dim = uniform_int(rng, 2, 5);
    const double eta = uniform(rng, 0.01, 0.3);
    const auto [r, s] = random_ensembles(rng, count, dim, eta);
    const OutputConditionReport o = output_condition(r, s);
    f1 += !o.forward.pass;
    f2 += !o.reverse.pass;
    m1 = std::min(m1, o.forward.bound - o.forward.gamma2);
    m2 = std::min(m2, o.reverse.min_fidelity - o.reverse.bound);
  }
  return {f1 == 0 && f2 == 0, fmt("direction 1: %.0f failures (margin %.2e); direction 2: %.0f failures (margin %.2e)",
                                  f1, m1, f2, m2)};
}

Verdict c11_q_delta() {
  const FunctionSpec id = identity_bit();
  const FilterSet d = build_filters(id);
  const CMatrix rho = ones(2);
  const CMatrix sigma = output_gram(id);
  const double qd = query_distance(rho, sigma, d).value.value;
  const double g = gamma2(rho - sigma).value.value;
  bool monotone = true;
  double prev = 0.0;
  double q0 = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double q = q_delta(rho, sigma, d, 0.05 * i).value;
    if (i == 0) q0 = q;
    else monotone = monotone && q <= prev + 1e-6;
    prev = q;
  }
  double tail = 0.0;
  for (double delta : {g, g + 0.25, g + 1.0}) tail = std::max(tail, std::abs(q_delta(rho, sigma, d, delta).value));
  return {monotone && std::abs(q0 - qd) <= 1e-4 && tail <= 1e-6,
          fmt("q_0 = %.6f vs query distance %.6f; q at 0.5 = %.6f; max |q| for delta >= %.4f: %.1e", q0, qd, prev,
              g, tail)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"gamma2(J - 1_k) = 2(1 - 1/k), k = 2..6, with the mu/nu factorization", c1_gamma2_of_offdiagonal},
      {"adversary bound equals query distance for boolean outputs; ternary ratio <= 4/3", c2_sandwich},
      {"ADV(OR2) = sqrt 2, ADV(PARITY2) = 2, ADV(id) = 1 from both sides", c3_small_values},
      {"state conversion error below 4 eps with both claims, id and OR2", c4_simulation},
      {"effective spectral gap on 200 random instances", c5_spectral_gap},
      {"gamma2 property suite, 13 properties x 50 trials", c6_properties},
      {"ADV(XOR2 o AND2^2) = 2 sqrt 2 from the composed witness and the upper bound", c7_composition},
      {"direct sum ADV(OR2^2) = 2 sqrt 2", c8_direct_sum},
      {"one-query and fractional-query certificates", c9_query_certificates},
      {"output condition, both directions, 50 ensembles", c10_output_condition},
      {"q_delta on the identity: monotone, q_0 = query distance, zero past gamma2", c11_q_delta},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria pass\n", n - failures, n);
  return failures == 0 ? 0 : 1;
}
