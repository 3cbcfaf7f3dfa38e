#include "stateconv/composition.hpp"

#include "stateconv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace stateconv {

ComposedSpec compose(const FunctionSpec& f, const FunctionSpec& g, int n) {
  if (n < 1) throw InputError("compose: copies must be at least 1");
  if (f.arity() != n) {
    throw InputError("compose: outer arity " + std::to_string(f.arity()) + " differs from copies " + std::to_string(n));
  }
  for (const std::string& label : g.labels) {
    if (label.size() != 1) throw InputError("compose: inner output '" + label + "' is not a single symbol");
  }
  for (int p = 0; p < n; ++p) {
    for (const std::string& label : g.labels) {
      if (f.alphabets[static_cast<std::size_t>(p)].find(label[0]) == std::string::npos) {
        throw InputError("compose: inner output '" + label + "' is not in the outer alphabet at position " +
                         std::to_string(p + 1));
      }
    }
  }
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= g.size();
  if (total > kComposedCap) {
    throw InputError("compose: composed domain has " + std::to_string(static_cast<long long>(total)) +
                     " points, above the cap of " + std::to_string(kComposedCap));
  }
  ComposedSpec c;
  c.outer = f;
  c.inner = g;
  c.copies = n;
  const int points = static_cast<int>(total);
  std::vector<std::string> domain;
  std::vector<std::string> outputs;
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  for (int x = 0; x < points; ++x) {
    std::string point;
    std::string lifted;
    for (int i = 0; i < n; ++i) {
      const auto gi = static_cast<std::size_t>(digits[static_cast<std::size_t>(i)]);
      point += g.domain[gi];
      lifted += g.outputs[gi];
    }
    const int a = f.index_of(lifted);
    if (a < 0) throw InputError("compose: lifted input '" + lifted + "' is outside the outer domain");
    domain.push_back(point);
    outputs.push_back(f.outputs[static_cast<std::size_t>(a)]);
    c.parts.push_back(digits);
    c.lift.push_back(a);
    for (int i = n - 1; i >= 0; --i) {
      if (++digits[static_cast<std::size_t>(i)] < g.size()) break;
      digits[static_cast<std::size_t>(i)] = 0;
    }
  }
  std::vector<std::string> alphabets;
  for (int i = 0; i < n; ++i) alphabets.insert(alphabets.end(), g.alphabets.begin(), g.alphabets.end());
  c.composed = make_function(alphabets, domain, outputs);
  return c;
}

UpperReport check_upper(const FunctionSpec& f, const FunctionSpec& g, int n, double tol) {
  const ComposedSpec c = compose(f, g, n);
  UpperReport r;
  r.adv_f = adv_pm(f).value;
  const int m = g.size();
  const Gamma2Result q = query_distance(ones(m), output_gram(g), build_filters(g));
  r.qdist_g = q.value.value;
  r.adv_composed = adv_pm(c.composed).value;
  r.bound = r.adv_f * r.qdist_g;
  r.margin = r.bound - r.adv_composed;
  r.pass = r.margin >= -tol;
  return r;
}

namespace {

double min_eig(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double witness_min_eig(const FunctionSpec& spec, const AdversaryWitness& w) {
  const Eigen::MatrixXd om = w.omega.asDiagonal();
  double lo = std::numeric_limits<double>::infinity();
  for (const CMatrix& d : build_filters(spec)) {
    const Eigen::MatrixXd wd = w.w.cwiseProduct(d.real());
    lo = std::min({lo, min_eig(om + wd), min_eig(om - wd)});
  }
  return lo;
}

void require_boolean_output(const FunctionSpec& g, const std::string& what) {
  if (g.num_outputs() != 2) {
    throw InputError(what + ": inner function must have exactly two outputs, found " + std::to_string(g.num_outputs()));
  }
}

}  // namespace

BalanceReport balance_witness(const FunctionSpec& g, const AdversaryWitness& w) {
  require_boolean_output(g, "balance_witness");
  const WitnessCheck chk = check_witness(g, w);
  if (!chk.support_ok || chk.trace_defect > 1e-6 || chk.min_eigenvalue < -1e-8 || chk.max_negative_omega > 1e-8) {
    throw CertificateError("balance_witness: input witness is not feasible");
  }
  double t[2] = {0.0, 0.0};
  for (int x = 0; x < g.size(); ++x) t[g.output_index[static_cast<std::size_t>(x)]] += std::max(0.0, w.omega(x));
  if (t[0] <= 0.0 || t[1] <= 0.0) throw CertificateError("balance_witness: an output block carries no weight");
  BalanceReport r;
  r.witness = w;
  for (int x = 0; x < g.size(); ++x) {
    r.witness.omega(x) = std::max(0.0, w.omega(x)) / (2.0 * t[g.output_index[static_cast<std::size_t>(x)]]);
  }
  r.witness.objective = r.witness.w.sum();
  for (int x = 0; x < g.size(); ++x) {
    (g.output_index[static_cast<std::size_t>(x)] == 0 ? r.trace0 : r.trace1) += r.witness.omega(x);
  }
  const double dg = r.witness.objective;
  const Eigen::MatrixXd om = r.witness.omega.asDiagonal();
  r.min_eigenvalue = std::min({witness_min_eig(g, r.witness), min_eig(dg * om + r.witness.w), min_eig(dg * om - r.witness.w)});
  if (r.min_eigenvalue < -1e-8) {
    throw VerificationFailure("balance_witness: balanced witness has eigenvalue " + std::to_string(r.min_eigenvalue));
  }
  if (std::abs(r.trace0 - 0.5) > 1e-6 || std::abs(r.trace1 - 0.5) > 1e-6) {
    throw VerificationFailure("balance_witness: trace split not restored");
  }
  return r;
}

ComposedWitness compose_witness(const ComposedSpec& c, const AdversaryWitness& outer_witness,
                                const AdversaryWitness& inner_witness) {
  const FunctionSpec& f = c.outer;
  const FunctionSpec& g = c.inner;
  require_boolean_output(g, "compose_witness");
  for (const std::string& a : f.alphabets) {
    if (a.size() != 2) throw InputError("compose_witness: outer function must have boolean inputs");
  }
  if (outer_witness.omega.size() != f.size() || inner_witness.omega.size() != g.size()) {
    throw InputError("compose_witness: witness sizes do not match the functions");
  }
  double t[2] = {0.0, 0.0};
  for (int x = 0; x < g.size(); ++x) t[g.output_index[static_cast<std::size_t>(x)]] += inner_witness.omega(x);
  if (std::abs(t[0] - 0.5) > 1e-6 || std::abs(t[1] - 0.5) > 1e-6) {
    throw InputError("compose_witness: inner witness is not balanced");
  }
  const int n = c.copies;
  const double df = outer_witness.w.sum();
  const double dg = inner_witness.w.sum();
  const Eigen::MatrixXd pos = dg * Eigen::MatrixXd(inner_witness.omega.asDiagonal()) + inner_witness.w;
  const int npts = c.composed.size();

  ComposedWitness r;
  AdversaryWitness raw;
  raw.omega = Eigen::VectorXd::Zero(npts);
  raw.w = Eigen::MatrixXd::Zero(npts, npts);
  const double lead = std::pow(dg, n - 1);
  for (int x = 0; x < npts; ++x) {
    const auto& px = c.parts[static_cast<std::size_t>(x)];
    double om = lead * outer_witness.omega(c.lift[static_cast<std::size_t>(x)]);
    for (int i = 0; i < n; ++i) om *= inner_witness.omega(px[static_cast<std::size_t>(i)]);
    raw.omega(x) = om;
    for (int y = 0; y < npts; ++y) {
      const double v = outer_witness.w(c.lift[static_cast<std::size_t>(x)], c.lift[static_cast<std::size_t>(y)]);
      if (v == 0.0) continue;
      const auto& py = c.parts[static_cast<std::size_t>(y)];
      double prod = v;
      for (int i = 0; i < n; ++i) prod *= pos(px[static_cast<std::size_t>(i)], py[static_cast<std::size_t>(i)]);
      raw.w(x, y) = prod;
    }
  }
  r.raw_objective = raw.w.sum();
  r.expected_objective = df * std::pow(dg / 2.0, n);
  r.raw_trace = raw.omega.sum();
  r.expected_trace = lead / std::pow(2.0, n);
  r.min_eigenvalue = witness_min_eig(c.composed, raw);
  const CMatrix fc = output_gram(c.composed);
  r.support_ok = true;
  for (int x = 0; x < npts; ++x) {
    for (int y = 0; y < npts; ++y) {
      if (fc(x, y) != Complex(0.0, 0.0) && raw.w(x, y) != 0.0) r.support_ok = false;
    }
  }
  if (r.raw_trace > 0.0) {
    r.witness.omega = raw.omega / r.raw_trace;
    r.witness.w = raw.w / r.raw_trace;
  } else {
    r.witness = raw;
  }
  r.witness.objective = r.witness.w.sum();
  r.value = r.witness.objective;
  const double scale = std::max(1.0, std::abs(r.expected_objective));
  r.pass = std::abs(r.raw_objective - r.expected_objective) <= 1e-4 * scale &&
           std::abs(r.raw_trace - r.expected_trace) <= 1e-6 && r.min_eigenvalue >= -1e-6 && r.support_ok;
  return r;
}

ComposedWitness compose_lower(const ComposedSpec& c) {
  require_boolean_output(c.inner, "compose_lower");
  const AdvResult af = adv_pm(c.outer);
  const AdvResult ag = adv_pm(c.inner);
  const BalanceReport b = balance_witness(c.inner, ag.witness);
  return compose_witness(c, af.witness, b.witness);
}

FunctionSpec identity_on_outputs(const FunctionSpec& g, int n) {
  std::string alphabet;
  for (const std::string& label : g.labels) {
    if (label.size() != 1) throw InputError("identity_on_outputs: output '" + label + "' is not a single symbol");
    alphabet += label;
  }
  if (n < 1) throw InputError("identity_on_outputs: n must be at least 1");
  const int k = static_cast<int>(alphabet.size());
  std::vector<std::string> domain;
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  while (true) {
    std::string s;
    for (int d : digits) s += alphabet[static_cast<std::size_t>(d)];
    domain.push_back(s);
    int j = n - 1;
    while (j >= 0 && digits[static_cast<std::size_t>(j)] == k - 1) digits[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
    ++digits[static_cast<std::size_t>(j)];
  }
  std::vector<std::string> outputs = domain;
  return make_function(std::vector<std::string>(static_cast<std::size_t>(n), alphabet), domain, outputs);
}

DirectSumReport direct_sum_check(const FunctionSpec& g, int n, double tol) {
  DirectSumReport r;
  r.adv_g = adv_pm(g).value;
  const ComposedSpec c = compose(identity_on_outputs(g, n), g, n);
  r.adv_sum = adv_pm(c.composed).value;
  r.expected = n * r.adv_g;
  r.difference = r.adv_sum - r.expected;
  r.pass = std::abs(r.difference) <= tol;
  return r;
}

}  // namespace stateconv
