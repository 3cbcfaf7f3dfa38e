#include "stateconv/simulation.hpp"

#include "stateconv/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace stateconv {

MuNu build_mu_nu(int k) {
  if (k < 2) throw InputError("build_mu_nu: k must be at least 2");
  MuNu s;
  s.k = k;
  s.alpha = std::sqrt(std::max(0.0, 0.5 - std::sqrt(k - 1.0) / k));
  const double beta = std::sqrt(1.0 - s.alpha * s.alpha);
  const double r = std::sqrt(k - 1.0);
  for (int i = 0; i < k; ++i) {
    CVector mu = CVector::Constant(k, beta / r);
    CVector nu = CVector::Constant(k, s.alpha / r);
    mu(i) = -s.alpha;
    nu(i) = beta;
    s.mu.push_back(mu);
    s.nu.push_back(nu);
  }
  const double off = k / (2.0 * (k - 1.0));
  for (int i = 0; i < k; ++i) {
    if (std::abs(s.mu[static_cast<std::size_t>(i)].norm() - 1.0) > 1e-12 ||
        std::abs(s.nu[static_cast<std::size_t>(i)].norm() - 1.0) > 1e-12) {
      throw VerificationFailure("build_mu_nu: vectors are not unit");
    }
    for (int j = 0; j < k; ++j) {
      const Complex ip = s.mu[static_cast<std::size_t>(i)].dot(s.nu[static_cast<std::size_t>(j)]);
      if (std::abs(ip - (i == j ? 0.0 : off)) > 1e-10) {
        throw VerificationFailure("build_mu_nu: inner products off at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  return s;
}

Factorization mu_nu_factorization(int k) {
  const MuNu s = build_mu_nu(k);
  const double scale = std::sqrt(2.0 * (k - 1.0) / k);
  Factorization f;
  f.dim = k;
  for (int i = 0; i < k; ++i) {
    f.u.push_back({scale * s.mu[static_cast<std::size_t>(i)]});
    f.v.push_back({scale * s.nu[static_cast<std::size_t>(i)]});
  }
  f.value = scale * scale;
  return f;
}

namespace {

void check_states_gram(const CMatrix& g, const std::string& what) {
  check_gram(g, what);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (std::abs(g(i, i).real() - 1.0) > 1e-8) throw InputError(what + ": Gram matrix must have unit diagonal");
  }
}

std::vector<CVector> padded_factor(const CMatrix& g, int dim) {
  std::vector<CVector> w = psd_factorize(g);
  for (CVector& v : w) {
    CVector p = CVector::Zero(dim);
    p.head(v.size()) = v;
    v = p;
  }
  return w;
}

CVector tensor3(int n, int k, int m, int j, const CVector& a, const CVector& c) {
  CVector out = CVector::Zero(n * k * m);
  for (int i = 0; i < k; ++i) out.segment((j * k + i) * m, m) = a(i) * c;
  return out;
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

StateRealization canonical_states(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows()) throw InputError("canonical_states: rho and sigma differ in size");
  check_states_gram(rho, "rho");
  check_states_gram(sigma, "sigma");
  const int n = static_cast<int>(rho.rows());
  StateRealization s;
  s.dim = 2 * n;
  for (const CVector& r : padded_factor(rho, n)) {
    CVector v = CVector::Zero(s.dim);
    v.head(n) = r;
    s.rho.push_back(v);
  }
  for (const CVector& r : padded_factor(sigma, n)) {
    CVector v = CVector::Zero(s.dim);
    v.tail(n) = r;
    s.sigma.push_back(v);
  }
  return s;
}

CMatrix AlgorithmInstance::pi(int x) const {
  CMatrix p = identity(dim);
  const auto& sym = domain.symbols[static_cast<std::size_t>(x)];
  for (int j = 0; j < n; ++j) {
    const CVector& mu = munu.mu[static_cast<std::size_t>(sym[static_cast<std::size_t>(j)])];
    const CMatrix block = kron(mu * mu.adjoint(), identity(m));
    p.block(register_index(j, 0, 0), register_index(j, 0, 0), k * m, k * m) -= block;
  }
  return p;
}

CMatrix AlgorithmInstance::unitary(int x) const {
  const CMatrix id = identity(dim);
  return (2.0 * pi(x) - id) * (2.0 * reflection_space - id);
}

CVector AlgorithmInstance::fixed_vector(int x) const {
  CVector phi = t_plus[static_cast<std::size_t>(x)];
  const double c = 0.5 * eps / std::sqrt(w) * 2.0 * (k - 1.0) / k;
  const auto& sym = domain.symbols[static_cast<std::size_t>(x)];
  for (int j = 0; j < n; ++j) {
    phi.tail(n * k * m) += c * tensor3(n, k, m, j, munu.nu[static_cast<std::size_t>(sym[static_cast<std::size_t>(j)])],
                                       cert.v[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)]);
  }
  return phi;
}

CVector AlgorithmInstance::initial_state(int x) const {
  CVector s = CVector::Zero(dim);
  s.head(dim_h) = states.rho[static_cast<std::size_t>(x)];
  return s;
}

CVector AlgorithmInstance::target_state(int x) const {
  CVector s = CVector::Zero(dim);
  s.segment(dim_h, dim_h) = states.sigma[static_cast<std::size_t>(x)];
  return s;
}

AlgorithmInstance build_instance(const CMatrix& rho, const CMatrix& sigma, const FunctionSpec& domain, double eps,
                                 const sdp::Settings& settings) {
  const int npts = domain.size();
  if (rho.rows() != npts || sigma.rows() != npts) {
    throw InputError("build_instance: Gram matrices must be " + std::to_string(npts) + "x" + std::to_string(npts));
  }
  if (!std::isfinite(eps) || eps <= 0.0) throw InputError("build_instance: eps must be positive");
  AlgorithmInstance inst;
  inst.states = canonical_states(rho, sigma);
  const FilterSet delta = build_filters(domain);
  const CMatrix a = rho - sigma;
  Gamma2Result g = filtered_gamma2(a, delta, settings);
  if (g.value.infinite) throw InputError("build_instance: query distance is infinite");
  if (eps >= g.value.value) {
    throw InputError("build_instance: eps = " + std::to_string(eps) + " must be below W = " + std::to_string(g.value.value));
  }
  const FactorizationCheck chk = check_factorization(a, delta, g.cert);
  if (chk.residual > 1e-6 * (1.0 + max_abs(a))) {
    throw VerificationFailure("build_instance: certificate residual " + std::to_string(chk.residual));
  }
  inst.sdp_value = g.value.value;
  inst.w = std::max(chk.objective, g.value.value);
  inst.cert = std::move(g.cert);
  inst.domain = domain;
  inst.eps = eps;
  inst.theta = eps * eps / inst.w;
  inst.delta = eps;
  inst.n = domain.arity();
  inst.k = std::max(2, domain.alphabet_size());
  inst.m = std::max(1, inst.cert.dim);
  inst.munu = build_mu_nu(inst.k);
  inst.dim_h = inst.states.dim;
  inst.dim = 2 * inst.dim_h + inst.n * inst.k * inst.m;

  for (auto* side : {&inst.cert.u, &inst.cert.v}) {
    for (auto& row : *side) {
      for (CVector& v : row) {
        if (v.size() != inst.m) v = CVector::Zero(inst.m);
      }
    }
  }

  const double r2 = std::sqrt(0.5);
  const double c = eps / std::sqrt(inst.w);
  for (int y = 0; y < npts; ++y) {
    CVector tp = CVector::Zero(inst.dim);
    CVector tm = CVector::Zero(inst.dim);
    tp.head(inst.dim_h) = r2 * inst.states.rho[static_cast<std::size_t>(y)];
    tm.head(inst.dim_h) = r2 * inst.states.rho[static_cast<std::size_t>(y)];
    tp.segment(inst.dim_h, inst.dim_h) = r2 * inst.states.sigma[static_cast<std::size_t>(y)];
    tm.segment(inst.dim_h, inst.dim_h) = -r2 * inst.states.sigma[static_cast<std::size_t>(y)];
    CVector psi = c * tm;
    const auto& sym = domain.symbols[static_cast<std::size_t>(y)];
    for (int j = 0; j < inst.n; ++j) {
      psi.tail(inst.n * inst.k * inst.m) -=
          tensor3(inst.n, inst.k, inst.m, j, inst.munu.mu[static_cast<std::size_t>(sym[static_cast<std::size_t>(j)])],
                  inst.cert.u[static_cast<std::size_t>(y)][static_cast<std::size_t>(j)]);
    }
    inst.t_plus.push_back(tp);
    inst.t_minus.push_back(tm);
    inst.psi.push_back(psi);
  }
  inst.reflection_space = projector(complement_basis(inst.psi, inst.dim));
  return inst;
}

AlgorithmInstance build_instance(const FunctionSpec& spec, double eps, const sdp::Settings& s) {
  return build_instance(ones(spec.size()), output_gram(spec), spec, eps, s);
}

PhaseSpectrum phase_spectrum(const CMatrix& u) {
  const UnitaryEig e = unitary_eig(u);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(e.phases.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return e.phases(a) < e.phases(b); });
  PhaseSpectrum s;
  s.phases.resize(e.phases.size());
  s.vectors.resize(e.eigenvectors.rows(), e.eigenvectors.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    s.phases(static_cast<Eigen::Index>(i)) = e.phases(order[i]);
    s.vectors.col(static_cast<Eigen::Index>(i)) = e.eigenvectors.col(order[i]);
  }
  return s;
}

Eigen::VectorXd eigenphases(const AlgorithmInstance& inst, int x) { return phase_spectrum(inst.unitary(x)).phases; }

namespace {

bool zero_bucket(double phase) { return std::abs(std::polar(1.0, phase) - Complex(1.0, 0.0)) < kZeroPhaseTol; }

}  // namespace

CMatrix small_phase_projector(const PhaseSpectrum& s, double threshold) {
  const Eigen::Index d = s.vectors.rows();
  CMatrix p = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < s.phases.size(); ++i) {
    if (std::abs(s.phases(i)) <= threshold || zero_bucket(s.phases(i))) {
      p.noalias() += s.vectors.col(i) * s.vectors.col(i).adjoint();
    }
  }
  return p;
}

CMatrix ideal_reflection(const CMatrix& u, double threshold) {
  const PhaseSpectrum s = phase_spectrum(u);
  return 2.0 * small_phase_projector(s, threshold) - identity(u.rows());
}

CVector ideal_phase_detect(const AlgorithmInstance& inst, int x, const CVector& state) {
  if (state.size() != inst.dim) {
    throw InputError("ideal_phase_detect: state has dimension " + std::to_string(state.size()) + ", expected " +
                     std::to_string(inst.dim));
  }
  return ideal_reflection(inst.unitary(x), inst.theta) * state;
}

std::vector<PhaseCount> phase_histogram(const Eigen::VectorXd& phases, double tol) {
  std::vector<double> p(phases.data(), phases.data() + phases.size());
  for (double& v : p) {
    if (zero_bucket(v)) v = 0.0;
  }
  std::sort(p.begin(), p.end());
  std::vector<PhaseCount> out;
  for (double v : p) {
    if (!out.empty() && std::abs(v - out.back().phase) <= tol) {
      ++out.back().multiplicity;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

void write_phase_csv(std::ostream& out, const std::vector<PhaseCount>& hist) {
  out << "phase,multiplicity\n";
  const auto old = out.precision(17);
  for (const PhaseCount& h : hist) out << h.phase << ',' << h.multiplicity << '\n';
  out.precision(old);
}

namespace {

ClaimMargins claims_from(const AlgorithmInstance& inst, int x, const PhaseSpectrum& s) {
  ClaimMargins c;
  c.tplus = (small_phase_projector(s, 0.0) * inst.t_plus[static_cast<std::size_t>(x)]).squaredNorm();
  c.tminus = (small_phase_projector(s, inst.theta) * inst.t_minus[static_cast<std::size_t>(x)]).squaredNorm();
  c.tplus_bound = 1.0 - inst.eps * inst.eps;
  c.tminus_bound = inst.theta * inst.theta / 4.0 * (inst.w * inst.w / (inst.eps * inst.eps) + 1.0);
  return c;
}

void check_index(const AlgorithmInstance& inst, int x) {
  if (x < 0 || x >= inst.domain.size()) throw InputError("input index " + std::to_string(x) + " out of range");
}

}  // namespace

ClaimMargins verify_claims(const AlgorithmInstance& inst, int x) {
  check_index(inst, x);
  const ClaimMargins c = claims_from(inst, x, phase_spectrum(inst.unitary(x)));
  if (c.tplus_margin() < -1e-8) {
    throw VerificationFailure("||P_0 t+||^2 = " + std::to_string(c.tplus) + " below 1 - eps^2 = " + std::to_string(c.tplus_bound));
  }
  if (c.tminus_margin() < -1e-8) {
    throw VerificationFailure("||P_Theta t-||^2 = " + std::to_string(c.tminus) + " above " + std::to_string(c.tminus_bound));
  }
  return c;
}

SimulationEntry simulate_input(const AlgorithmInstance& inst, int x) {
  check_index(inst, x);
  SimulationEntry e;
  e.point = inst.domain.domain[static_cast<std::size_t>(x)];
  const CMatrix u = inst.unitary(x);
  const PhaseSpectrum s = phase_spectrum(u);
  e.claims = claims_from(inst, x, s);
  const CMatrix r = 2.0 * small_phase_projector(s, inst.theta) - identity(inst.dim);
  const CVector out = r * inst.initial_state(x);
  const CVector target = inst.target_state(x);
  e.error = (out - target).norm();
  e.fidelity = std::norm(target.dot(out));
  e.error_bound = 4.0 * inst.eps;
  e.ideal_bound = (std::numbers::sqrt2 + 1.0) * inst.eps;
  e.unitarity = max_abs(u.adjoint() * u - identity(inst.dim));
  const CVector phi = inst.fixed_vector(x);
  e.fixed_residual = (u * phi - phi).norm() / phi.norm();
  e.kernel_residual = (inst.reflection_space * inst.psi[static_cast<std::size_t>(x)]).norm();
  e.histogram = phase_histogram(s.phases);
  e.pass = e.error < e.error_bound && e.claims.tplus_margin() >= -1e-8 && e.claims.tminus_margin() >= -1e-8 &&
           e.fixed_residual <= 1e-6 && e.kernel_residual <= 1e-8 && e.unitarity <= 1e-8;
  return e;
}

SimulationEntry run_conversion(const AlgorithmInstance& inst, int x) {
  SimulationEntry e = simulate_input(inst, x);
  if (!(e.error < e.error_bound)) {
    throw VerificationFailure("run_conversion: error " + std::to_string(e.error) + " on input " + e.point +
                              " is not below 4 eps = " + std::to_string(e.error_bound));
  }
  return e;
}

SimulationReport simulate(const AlgorithmInstance& inst) {
  SimulationReport r;
  r.eps = inst.eps;
  r.w = inst.w;
  r.theta = inst.theta;
  r.delta = inst.delta;
  r.dim = inst.dim;
  r.m = inst.m;
  r.query_estimate = static_cast<long long>(std::ceil(kPhaseDetectConstant * std::log(1.0 / inst.delta) / inst.theta));
  r.pass = true;
  for (int x = 0; x < inst.domain.size(); ++x) {
    r.entries.push_back(simulate_input(inst, x));
    r.pass = r.pass && r.entries.back().pass;
  }
  return r;
}

namespace {

void require_projection(const CMatrix& p, const std::string& what) {
  if (p.rows() != p.cols()) throw InputError(what + " is not square");
  require_finite(p, what);
  if (max_abs(p - p.adjoint()) > 1e-8) throw InputError(what + " is not Hermitian");
  if (max_abs(p * p - p) > 1e-8) throw InputError(what + " is not idempotent");
}

}  // namespace

double spectral_gap_check(const CMatrix& pi, const CMatrix& lambda, const CVector& w, double theta) {
  require_projection(pi, "Pi");
  require_projection(lambda, "Lambda");
  if (pi.rows() != lambda.rows() || w.size() != pi.rows()) throw InputError("spectral_gap_check: dimension mismatch");
  if (!(theta >= 0.0)) throw InputError("spectral_gap_check: Theta must be nonnegative");
  if ((lambda * w).norm() > 1e-8 * (1.0 + w.norm())) throw InputError("spectral_gap_check: Lambda w != 0");
  const CMatrix id = identity(pi.rows());
  const PhaseSpectrum s = phase_spectrum((2.0 * pi - id) * (2.0 * lambda - id));
  const double margin = theta / 2.0 * w.norm() - (small_phase_projector(s, theta) * (pi * w)).norm();
  if (margin < -1e-8) {
    throw VerificationFailure("effective spectral gap violated: margin " + std::to_string(margin));
  }
  return margin;
}

GapInstance random_gap_instance(Rng& rng) {
  const int d = uniform_int(rng, 4, 16);
  GapInstance g;
  g.pi = random_projector(rng, d, uniform_int(rng, 1, d - 1));
  g.lambda = random_projector(rng, d, uniform_int(rng, 1, d - 1));
  g.w = (identity(d) - g.lambda) * random_complex(rng, d, 1).col(0);
  g.theta = uniform(rng, 0.01, 1.0);
  return g;
}

GapTrials spectral_gap_trials(int trials, std::uint64_t seed) {
  GapTrials t;
  t.trials = trials;
  t.worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < trials; ++i) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(i)});
    const GapInstance g = random_gap_instance(rng);
    try {
      t.worst_margin = std::min(t.worst_margin, spectral_gap_check(g.pi, g.lambda, g.w, g.theta));
    } catch (const VerificationFailure&) {
      ++t.failures;
      const CMatrix id = identity(g.pi.rows());
      const PhaseSpectrum s = phase_spectrum((2.0 * g.pi - id) * (2.0 * g.lambda - id));
      t.worst_margin = std::min(t.worst_margin, g.theta / 2.0 * g.w.norm() - (small_phase_projector(s, g.theta) * (g.pi * g.w)).norm());
    }
  }
  return t;
}

CMatrix oracle_from_local(const FunctionSpec& domain, int x, const std::vector<std::vector<CMatrix>>& local) {
  const int n = domain.arity();
  if (static_cast<int>(local.size()) != n) throw InputError("oracle_from_local: need one unitary family per coordinate");
  const int d = static_cast<int>(local[0][0].rows());
  CMatrix o = CMatrix::Zero(n * d, n * d);
  for (int j = 0; j < n; ++j) {
    const int a = domain.symbols[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)];
    o.block(j * d, j * d, d, d) = local[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)];
  }
  return o;
}

OneQueryInstance random_one_query(Rng& rng, int arity, int alphabet, int workspace) {
  OneQueryInstance inst;
  inst.domain = function_from_rule(alphabet, arity, [](const std::vector<int>&) { return std::string("0"); });
  inst.workspace = workspace;
  std::vector<std::vector<CMatrix>> local(static_cast<std::size_t>(arity));
  for (auto& family : local) {
    for (int a = 0; a < alphabet; ++a) family.push_back(random_unitary(rng, workspace));
  }
  for (int x = 0; x < inst.domain.size(); ++x) {
    inst.states.push_back(random_unit(rng, arity * workspace));
    inst.oracles.push_back(oracle_from_local(inst.domain, x, local));
  }
  return inst;
}

namespace {

CMatrix gram_of(const std::vector<CVector>& v) { return gram(v); }

CVector gamma_block(const CVector& s, int j, int d) {
  CVector out = CVector::Zero(s.size());
  out.segment(j * d, d) = s.segment(j * d, d);
  return out;
}

}  // namespace

OneQueryCertificate one_query_certificate(const OneQueryInstance& inst) {
  const int npts = inst.domain.size();
  const int n = inst.domain.arity();
  const int d = inst.workspace;
  const int dim = n * d;
  if (static_cast<int>(inst.states.size()) != npts || static_cast<int>(inst.oracles.size()) != npts) {
    throw InputError("one_query_certificate: need one state and one oracle per domain point");
  }
  for (int x = 0; x < npts; ++x) {
    const CMatrix& o = inst.oracles[static_cast<std::size_t>(x)];
    if (inst.states[static_cast<std::size_t>(x)].size() != dim || o.rows() != dim || o.cols() != dim) {
      throw InputError("one_query_certificate: dimension mismatch at input " + inst.domain.domain[static_cast<std::size_t>(x)]);
    }
    if (max_abs(o.adjoint() * o - identity(dim)) > 1e-8) {
      throw InputError("one_query_certificate: oracle for " + inst.domain.domain[static_cast<std::size_t>(x)] + " is not unitary");
    }
  }
  // O_x^dagger O_y Gamma_j = Gamma_j whenever x_j = y_j
  for (int x = 0; x < npts; ++x) {
    for (int y = 0; y < npts; ++y) {
      const CMatrix oo = inst.oracles[static_cast<std::size_t>(x)].adjoint() * inst.oracles[static_cast<std::size_t>(y)];
      for (int j = 0; j < n; ++j) {
        if (inst.domain.symbols[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] !=
            inst.domain.symbols[static_cast<std::size_t>(y)][static_cast<std::size_t>(j)]) {
          continue;
        }
        CMatrix expect = CMatrix::Zero(dim, d);
        expect.middleRows(j * d, d) = identity(d);
        if (max_abs(oo.middleCols(j * d, d) - expect) > 1e-8) {
          throw InputError("one_query_certificate: oracle convention violated for (" + inst.domain.domain[static_cast<std::size_t>(x)] +
                           ", " + inst.domain.domain[static_cast<std::size_t>(y)] + ") at coordinate " + std::to_string(j + 1));
        }
      }
    }
  }
  OneQueryCertificate c;
  std::vector<CVector> sigma;
  for (int x = 0; x < npts; ++x) sigma.push_back(inst.oracles[static_cast<std::size_t>(x)] * inst.states[static_cast<std::size_t>(x)]);
  c.rho = gram_of(inst.states);
  c.sigma = gram_of(sigma);
  c.cert.dim = 2 * dim;
  for (int x = 0; x < npts; ++x) {
    std::vector<CVector> u;
    std::vector<CVector> v;
    for (int j = 0; j < n; ++j) {
      const CVector g = gamma_block(inst.states[static_cast<std::size_t>(x)], j, d);
      const CVector og = inst.oracles[static_cast<std::size_t>(x)] * g;
      CVector uj(2 * dim);
      CVector vj(2 * dim);
      uj << g, og;
      vj << g, -og;
      u.push_back(uj);
      v.push_back(vj);
    }
    c.cert.u.push_back(std::move(u));
    c.cert.v.push_back(std::move(v));
  }
  c.check = check_factorization(c.rho - c.sigma, build_filters(inst.domain), c.cert);
  c.cert.value = c.check.objective;
  return c;
}

FractionalInstance random_fractional(Rng& rng, int arity, int workspace) {
  FractionalInstance inst;
  inst.domain = function_from_rule(2, arity, [](const std::vector<int>&) { return std::string("0"); });
  inst.workspace = workspace;
  for (int x = 0; x < inst.domain.size(); ++x) inst.states.push_back(random_unit(rng, arity * workspace));
  return inst;
}

FractionalCertificate fractional_query_certificate(const FractionalInstance& inst, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InputError("fractional_query_certificate: lambda must lie in [0, 1]");
  const int npts = inst.domain.size();
  const int n = inst.domain.arity();
  const int d = inst.workspace;
  for (const std::string& a : inst.domain.alphabets) {
    if (a.size() != 2) throw InputError("fractional_query_certificate: inputs must be boolean");
  }
  if (static_cast<int>(inst.states.size()) != npts) throw InputError("fractional_query_certificate: one state per input");
  for (const CVector& s : inst.states) {
    if (s.size() != n * d) throw InputError("fractional_query_certificate: state dimension mismatch");
    if (std::abs(s.norm() - 1.0) > 1e-8) throw InputError("fractional_query_certificate: states must be unit vectors");
  }
  const double lp = lambda * std::numbers::pi;
  FractionalCertificate c;
  c.lambda = lambda;
  auto bit = [&](int x, int j) { return inst.domain.symbols[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)]; };
  std::vector<CVector> sigma;
  for (int x = 0; x < npts; ++x) {
    CVector s = inst.states[static_cast<std::size_t>(x)];
    for (int j = 0; j < n; ++j) s.segment(j * d, d) *= std::polar(1.0, lp * bit(x, j));
    sigma.push_back(s);
  }
  c.rho = gram_of(inst.states);
  c.sigma = gram_of(sigma);
  const FilterSet delta = build_filters(inst.domain);
  CMatrix sum = CMatrix::Zero(npts, npts);
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  auto e_of = [](int b) { return Complex(b, 1 - b); };
  for (int j = 0; j < n; ++j) {
    CMatrix mj(npts, npts);
    CMatrix ej(npts, npts);
    for (int x = 0; x < npts; ++x) {
      for (int y = 0; y < npts; ++y) {
        mj(x, y) = inst.states[static_cast<std::size_t>(x)].segment(j * d, d).dot(inst.states[static_cast<std::size_t>(y)].segment(j * d, d));
        ej(x, y) = std::conj(e_of(bit(x, j))) * e_of(bit(y, j));
      }
    }
    const CMatrix pj = (1.0 - std::cos(lp)) * mj + std::sin(lp) * schur(mj, ej);
    c.min_eigenvalue = std::min(c.min_eigenvalue, hermitian_eig(0.5 * (pj + pj.adjoint())).eigenvalues(0));
    sum += schur(pj, delta[static_cast<std::size_t>(j)]);
    c.p.push_back(pj);
  }
  c.residual = max_abs(c.rho - c.sigma - sum);
  c.max_diagonal = 0.0;
  for (int x = 0; x < npts; ++x) {
    double s = 0.0;
    for (const CMatrix& pj : c.p) s += pj(x, x).real();
    c.max_diagonal = std::max(c.max_diagonal, s);
  }
  c.p_lambda = (1.0 - std::cos(lp)) + std::sin(lp);
  c.bound = lp * std::numbers::sqrt2;
  c.pass = c.residual <= 1e-8 && c.min_eigenvalue >= -1e-8 && c.max_diagonal <= c.p_lambda + 1e-12 &&
           c.p_lambda <= c.bound + 1e-12;
  return c;
}

namespace {

void check_ensembles(const std::vector<CVector>& rho, const std::vector<CVector>& sigma) {
  if (rho.empty() || rho.size() != sigma.size()) throw InputError("output_condition: ensembles must be nonempty and equal in size");
  const Eigen::Index d = rho[0].size();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i].size() != d || sigma[i].size() != d) throw InputError("output_condition: vectors differ in dimension");
    if (std::abs(rho[i].norm() - 1.0) > 1e-8 || std::abs(sigma[i].norm() - 1.0) > 1e-8) {
      throw InputError("output_condition: vectors must be unit");
    }
  }
}

}  // namespace

OutputForward output_condition_forward(const std::vector<CVector>& rho, const std::vector<CVector>& sigma,
                                       const sdp::Settings& s) {
  check_ensembles(rho, sigma);
  OutputForward f;
  const std::size_t n = rho.size();
  double mp = 0.0;
  double mm = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double re = std::max(0.0, rho[x].dot(sigma[x]).real());
    f.eps = std::max(f.eps, 1.0 - re * re);
    mp = std::max(mp, (rho[x] + sigma[x]).norm());
    mm = std::max(mm, (rho[x] - sigma[x]).norm());
  }
  f.bound = 2.0 * std::sqrt(f.eps);
  const CMatrix a = gram(rho) - gram(sigma);
  // (rho - sigma)_{xy} = (<p_x|m_y> + <m_x|p_y>) / 2 with p = rho + sigma, m = rho - sigma
  Factorization cert;
  const Eigen::Index d = rho[0].size();
  cert.dim = static_cast<int>(2 * d);
  const double sc = mm > 0.0 ? std::sqrt(mm / mp) : 1.0;
  const double r2 = std::sqrt(0.5);
  for (std::size_t x = 0; x < n; ++x) {
    const CVector p = rho[x] + sigma[x];
    const CVector m = rho[x] - sigma[x];
    CVector u(2 * d);
    CVector v(2 * d);
    u << r2 * sc * p, r2 / sc * m;
    v << r2 / sc * m, r2 * sc * p;
    cert.u.push_back({u});
    cert.v.push_back({v});
  }
  const FactorizationCheck chk = check_factorization(a, {ones(static_cast<Eigen::Index>(n))}, cert);
  f.factorization = chk.objective;
  f.residual = chk.residual;
  f.gamma2 = gamma2(a, s).value.value;
  f.pass = f.gamma2 <= f.bound + 1e-6 && f.residual <= 1e-10;
  return f;
}

OutputReverse output_condition_reverse(const std::vector<CVector>& rho, const std::vector<CVector>& sigma,
                                       const sdp::Settings& s) {
  check_ensembles(rho, sigma);
  OutputReverse r;
  const Eigen::Index n = static_cast<Eigen::Index>(rho.size());
  const Eigen::Index d = rho[0].size();
  const CMatrix a = gram(rho) - gram(sigma);
  const Gamma2Result g = gamma2(a, s);
  const FactorizationCheck chk = check_factorization(a, {ones(n)}, g.cert);
  if (chk.residual > 1e-6) throw VerificationFailure("output_condition: gamma_2 certificate residual " + std::to_string(chk.residual));
  r.eps = chk.objective;
  r.bound = 1.0 - std::sqrt(2.0 * r.eps);
  const Eigen::Index m = g.cert.dim;
  // columns a_x = (rho_x, p_x), b_x = (sigma_x, q_x) share a Gram matrix
  CMatrix am = CMatrix::Zero(d + m, n);
  CMatrix bm = CMatrix::Zero(d + m, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto xi = static_cast<std::size_t>(x);
    am.col(x).head(d) = rho[xi];
    bm.col(x).head(d) = sigma[xi];
    if (m > 0) {
      const CVector& al = g.cert.u[xi][0];
      const CVector& be = g.cert.v[xi][0];
      am.col(x).tail(m) = 0.5 * (al - be);
      bm.col(x).tail(m) = 0.5 * (al + be);
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(bm * am.adjoint(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix v = svd.matrixU() * svd.matrixV().adjoint();
  r.u = v.adjoint();
  r.unitarity = max_abs(v.adjoint() * v - identity(d + m));
  r.alignment = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) r.alignment = std::max(r.alignment, (v * am.col(x) - bm.col(x)).norm());
  r.min_fidelity = std::numeric_limits<double>::infinity();
  for (Eigen::Index x = 0; x < n; ++x) {
    CVector rx = CVector::Zero(d + m);
    CVector sx = CVector::Zero(d + m);
    rx.head(d) = rho[static_cast<std::size_t>(x)];
    sx.head(d) = sigma[static_cast<std::size_t>(x)];
    r.min_fidelity = std::min(r.min_fidelity, rx.dot(r.u * sx).real());
  }
  r.pass = r.min_fidelity >= r.bound - 1e-6 && r.unitarity <= 1e-8;
  return r;
}

OutputConditionReport output_condition(const std::vector<CVector>& rho, const std::vector<CVector>& sigma,
                                       const sdp::Settings& s) {
  return {output_condition_forward(rho, sigma, s), output_condition_reverse(rho, sigma, s)};
}

std::pair<std::vector<CVector>, std::vector<CVector>> random_ensembles(Rng& rng, int count, int dim, double eta) {
  std::vector<CVector> rho;
  std::vector<CVector> sigma;
  for (int x = 0; x < count; ++x) {
    const CVector r = random_unit(rng, dim);
    CVector s = r + eta * random_unit(rng, dim);
    s /= s.norm();
    rho.push_back(r);
    sigma.push_back(s);
  }
  return {rho, sigma};
}

}  // namespace stateconv
