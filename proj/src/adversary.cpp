#include "stateconv/adversary.hpp"

#include "stateconv/errors.hpp"
#include "stateconv/sdp_build.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace stateconv {

int FunctionSpec::alphabet_size() const {
  std::size_t k = 0;
  for (const std::string& a : alphabets) k = std::max(k, a.size());
  return static_cast<int>(k);
}

int FunctionSpec::index_of(const std::string& point) const {
  const auto it = std::find(domain.begin(), domain.end(), point);
  return it == domain.end() ? -1 : static_cast<int>(it - domain.begin());
}

FunctionSpec make_function(std::vector<std::string> alphabets, std::vector<std::string> domain,
                           std::vector<std::string> outputs) {
  FunctionSpec f;
  if (alphabets.empty()) throw InputError("function: arity must be at least 1");
  for (std::size_t j = 0; j < alphabets.size(); ++j) {
    const std::string& a = alphabets[j];
    if (a.empty()) throw InputError("function: alphabet of coordinate " + std::to_string(j) + " is empty");
    if (std::set<char>(a.begin(), a.end()).size() != a.size()) {
      throw InputError("function: repeated symbol in alphabet of coordinate " + std::to_string(j));
    }
  }
  if (domain.empty()) throw InputError("function: domain is empty");
  if (outputs.size() != domain.size()) {
    throw InputError("function: " + std::to_string(domain.size()) + " domain points but " +
                     std::to_string(outputs.size()) + " outputs");
  }
  std::set<std::string> seen;
  f.symbols.reserve(domain.size());
  for (const std::string& x : domain) {
    if (x.size() != alphabets.size()) {
      throw InputError("function: domain point '" + x + "' has length " + std::to_string(x.size()) +
                       ", expected " + std::to_string(alphabets.size()));
    }
    if (!seen.insert(x).second) throw InputError("function: duplicate domain point '" + x + "'");
    std::vector<int> sym(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto pos = alphabets[j].find(x[j]);
      if (pos == std::string::npos) {
        throw InputError("function: symbol '" + std::string(1, x[j]) + "' of point '" + x +
                         "' is not in the alphabet of coordinate " + std::to_string(j));
      }
      sym[j] = static_cast<int>(pos);
    }
    f.symbols.push_back(std::move(sym));
  }
  for (const std::string& o : outputs) {
    auto it = std::find(f.labels.begin(), f.labels.end(), o);
    if (it == f.labels.end()) {
      f.labels.push_back(o);
      f.output_index.push_back(static_cast<int>(f.labels.size()) - 1);
    } else {
      f.output_index.push_back(static_cast<int>(it - f.labels.begin()));
    }
  }
  f.alphabets = std::move(alphabets);
  f.domain = std::move(domain);
  f.outputs = std::move(outputs);
  return f;
}

std::string uniform_symbols(int k) {
  static const std::string all = "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
  if (k < 1 || k > static_cast<int>(all.size())) {
    throw InputError("alphabet size " + std::to_string(k) + " outside [1, " + std::to_string(all.size()) + "]");
  }
  return all.substr(0, static_cast<std::size_t>(k));
}

FunctionSpec function_from_rule(int k, int n, const std::function<std::string(const std::vector<int>&)>& rule) {
  if (n < 1) throw InputError("function: arity must be at least 1");
  const std::string sym = uniform_symbols(k);
  std::vector<std::string> domain;
  std::vector<std::string> outputs;
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  while (true) {
    std::string s;
    for (int d : digits) s += sym[static_cast<std::size_t>(d)];
    domain.push_back(s);
    outputs.push_back(rule(digits));
    int j = n - 1;
    while (j >= 0 && digits[static_cast<std::size_t>(j)] == k - 1) digits[static_cast<std::size_t>(j--)] = 0;
    if (j < 0) break;
    ++digits[static_cast<std::size_t>(j)];
  }
  return make_function(std::vector<std::string>(static_cast<std::size_t>(n), sym), domain, outputs);
}

FunctionSpec identity_bit() {
  return function_from_rule(2, 1, [](const std::vector<int>& x) { return std::to_string(x[0]); });
}

FunctionSpec or_fn(int n) {
  return function_from_rule(2, n, [](const std::vector<int>& x) {
    return std::string(std::any_of(x.begin(), x.end(), [](int b) { return b == 1; }) ? "1" : "0");
  });
}

FunctionSpec and_fn(int n) {
  return function_from_rule(2, n, [](const std::vector<int>& x) {
    return std::string(std::all_of(x.begin(), x.end(), [](int b) { return b == 1; }) ? "1" : "0");
  });
}

FunctionSpec parity_fn(int n) {
  return function_from_rule(2, n, [](const std::vector<int>& x) {
    int s = 0;
    for (int b : x) s ^= b;
    return std::to_string(s);
  });
}

FunctionSpec majority3() {
  return function_from_rule(2, 3, [](const std::vector<int>& x) { return std::string(x[0] + x[1] + x[2] >= 2 ? "1" : "0"); });
}

FunctionSpec constant_fn(int n) {
  return function_from_rule(2, n, [](const std::vector<int>&) { return std::string("0"); });
}

FunctionSpec boolean2(int table) {
  if (table < 0 || table > 15) throw InputError("boolean2: truth table must be in [0, 15]");
  return function_from_rule(2, 2, [table](const std::vector<int>& x) {
    return std::to_string((table >> (2 * x[0] + x[1])) & 1);
  });
}

FilterSet build_filters(const FunctionSpec& spec) {
  const int n = spec.size();
  FilterSet out;
  for (int j = 0; j < spec.arity(); ++j) {
    CMatrix d = CMatrix::Zero(n, n);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (spec.symbols[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] !=
            spec.symbols[static_cast<std::size_t>(y)][static_cast<std::size_t>(j)]) {
          d(x, y) = 1.0;
        }
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

CMatrix output_gram(const FunctionSpec& spec) {
  const int n = spec.size();
  CMatrix f = CMatrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (spec.output_index[static_cast<std::size_t>(x)] == spec.output_index[static_cast<std::size_t>(y)]) f(x, y) = 1.0;
    }
  }
  return f;
}

namespace {

Eigen::MatrixXd real_part(const CMatrix& m) { return m.real(); }

double min_eig(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

SolveInfo info_of(const sdp::Result& r) { return {r.iterations, r.primal_value, r.dual_value, r.gap, r.residual}; }

}  // namespace

WitnessCheck check_witness(const FunctionSpec& spec, const AdversaryWitness& w) {
  const int n = spec.size();
  if (w.omega.size() != n || w.w.rows() != n || w.w.cols() != n) {
    throw InputError("witness shape does not match the function domain");
  }
  WitnessCheck c;
  c.objective = w.w.sum();
  c.trace_defect = std::abs(w.omega.sum() - 1.0);
  c.max_negative_omega = std::max(0.0, -w.omega.minCoeff());
  const Eigen::MatrixXd f = real_part(output_gram(spec));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (f(x, y) != 0.0 && w.w(x, y) != 0.0) c.support_ok = false;
    }
  }
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd om = w.omega.asDiagonal();
  for (const CMatrix& d : build_filters(spec)) {
    const Eigen::MatrixXd wd = w.w.cwiseProduct(real_part(d));
    c.min_eigenvalue = std::min({c.min_eigenvalue, min_eig(om + wd), min_eig(om - wd)});
  }
  return c;
}

double adv_pm_certify(const FunctionSpec& spec, const Eigen::MatrixXd& gamma) {
  const int n = spec.size();
  if (gamma.rows() != n || gamma.cols() != n) {
    throw InputError("adv_pm_certify: Gamma must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!gamma.allFinite()) throw InputError("adv_pm_certify: Gamma has non-finite entries");
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw InputError("adv_pm_certify: Gamma is not symmetric");
  }
  const Eigen::MatrixXd f = real_part(output_gram(spec));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (f(x, y) != 0.0 && gamma(x, y) != 0.0) {
        throw CertificateError("adv_pm_certify: Gamma o F != 0 at (" + spec.domain[static_cast<std::size_t>(x)] + ", " +
                               spec.domain[static_cast<std::size_t>(y)] + ")");
      }
    }
  }
  const FilterSet delta = build_filters(spec);
  for (std::size_t j = 0; j < delta.size(); ++j) {
    const double nj = spectral_norm(gamma.cwiseProduct(real_part(delta[j])).cast<Complex>());
    if (nj > 1.0 + 1e-8) {
      throw CertificateError("adv_pm_certify: ||Gamma o Delta_" + std::to_string(j + 1) + "|| = " + std::to_string(nj) +
                             " exceeds 1");
    }
  }
  return spectral_norm(gamma.cast<Complex>());
}

AdvResult adv_pm(const FunctionSpec& spec, const sdp::Settings& settings) {
  const int n = spec.size();
  const FilterSet delta = build_filters(spec);
  const CMatrix f = output_gram(spec);
  AdvResult out;
  out.gamma = Eigen::MatrixXd::Zero(n, n);
  out.witness.w = Eigen::MatrixXd::Zero(n, n);
  out.witness.omega = Eigen::VectorXd::Constant(n, 1.0 / n);
  if (spec.num_outputs() == 1) return out;

  sdp::LmiProgram lp;
  std::vector<sdp::HermitianLayout> blocks;
  for (std::size_t j = 0; j < delta.size(); ++j) {
    blocks.push_back(lp.add_lmi(n, false));
    blocks.push_back(lp.add_lmi(n, false));
  }
  const int sb = lp.add_scalars(1);
  lp.scalar_constant(sb, 0, 1.0);
  std::vector<int> omega_var(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) {
    const int v = lp.add_var(0.0);
    omega_var[static_cast<std::size_t>(x)] = v;
    for (const auto& b : blocks) lp.coef(v, b, x, x, 1.0);
    lp.scalar_coef(v, sb, 0, -1.0);
  }
  struct Pair {
    int x, y, var;
  };
  std::vector<Pair> pairs;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (f(x, y) != Complex(0.0, 0.0)) continue;
      const int v = lp.add_var(2.0);
      pairs.push_back({x, y, v});
      for (std::size_t j = 0; j < delta.size(); ++j) {
        const double d = delta[j](x, y).real();
        if (d == 0.0) continue;
        lp.coef(v, blocks[2 * j], x, y, d);
        lp.coef(v, blocks[2 * j + 1], x, y, -d);
      }
    }
  }
  const sdp::Result r = sdp::solve_checked(lp.program(), settings, "adv_pm");
  out.info = info_of(r);
  out.value = r.dual_value;
  for (int x = 0; x < n; ++x) out.witness.omega(x) = r.y(omega_var[static_cast<std::size_t>(x)]);
  for (const Pair& p : pairs) {
    out.witness.w(p.x, p.y) = r.y(p.var);
    out.witness.w(p.y, p.x) = r.y(p.var);
  }
  const double trace = out.witness.omega.sum();
  if (trace > 0.0) {
    out.witness.omega /= trace;
    out.witness.w /= trace;
  }
  out.witness.objective = out.witness.w.sum();

  const CMatrix jf = ones(n) - f;
  FilterSet z;
  for (const CMatrix& d : delta) z.push_back(d.cwiseProduct(jf));
  const Gamma2Result g = filtered_gamma2(jf, z, settings);
  out.filtered_value = g.value.value;
  if (std::abs(out.filtered_value - out.value) > 1e-4) {
    throw VerificationFailure("adv_pm: witness program value " + std::to_string(out.value) +
                              " disagrees with filtered gamma_2 value " + std::to_string(out.filtered_value));
  }

  // Gamma = Omega^{-1/2} W Omega^{-1/2}
  const double cut = 1e-12 * std::max(1.0, out.witness.omega.maxCoeff());
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(n);
  for (int x = 0; x < n; ++x) {
    if (out.witness.omega(x) > cut) scale(x) = 1.0 / std::sqrt(out.witness.omega(x));
  }
  for (const Pair& p : pairs) {
    const double gxy = out.witness.w(p.x, p.y) * scale(p.x) * scale(p.y);
    out.gamma(p.x, p.y) = gxy;
    out.gamma(p.y, p.x) = gxy;
  }
  double worst = 0.0;
  for (const CMatrix& d : delta) {
    worst = std::max(worst, spectral_norm(out.gamma.cwiseProduct(real_part(d)).cast<Complex>()));
  }
  if (worst > 1.0) out.gamma /= worst;
  out.gamma_norm = adv_pm_certify(spec, out.gamma);
  return out;
}

Gamma2Result query_distance(const CMatrix& rho, const CMatrix& sigma, const FilterSet& delta, const sdp::Settings& s) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw InputError("query_distance: rho and sigma have different shapes");
  }
  return filtered_gamma2(rho - sigma, delta, s);
}

SandwichReport sandwich_check(const FunctionSpec& spec, double tol) {
  SandwichReport r;
  r.adv = adv_pm(spec).value;
  const int n = spec.size();
  r.qdist = query_distance(ones(n), output_gram(spec), build_filters(spec)).value.value;
  const int e = spec.num_outputs();
  r.bound = 2.0 * (1.0 - 1.0 / e);
  r.ratio = r.adv > tol ? r.qdist / r.adv : 1.0;
  r.lower_margin = r.qdist - r.adv;
  r.upper_margin = r.bound * r.adv - r.qdist;
  r.pass = r.lower_margin >= -tol && r.upper_margin >= -tol;
  if (e == 2) r.pass = r.pass && std::abs(r.qdist - r.adv) <= tol;
  return r;
}

void check_gram(const CMatrix& g, const std::string& what) {
  if (g.rows() != g.cols()) throw InputError(what + ": Gram matrix is not square");
  require_finite(g, what);
  if (g.size() == 0) throw InputError(what + ": Gram matrix is empty");
  const double norm = g.cwiseAbs().maxCoeff();
  if (!is_hermitian(g, 1e-10 * (1.0 + norm))) throw InputError(what + ": Gram matrix is not Hermitian");
  const HermitianEig e = hermitian_eig(g);
  if (e.eigenvalues(0) < -1e-8) {
    throw NotPsdError(what + ": Gram matrix has eigenvalue " + std::to_string(e.eigenvalues(0)));
  }
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    const double d = g(i, i).real();
    if (d < 0.0 || d > 1.0 + 1e-10) throw InputError(what + ": diagonal entry outside [0, 1]");
  }
}

namespace {

QDeltaResult q_program(const CMatrix& rho, const CMatrix& sigma, const FilterSet& delta, double tol_delta,
                       bool noncoherent, const sdp::Settings& settings) {
  const int n = static_cast<int>(rho.rows());
  if (sigma.rows() != n || sigma.cols() != n || rho.cols() != n) throw InputError("q_delta: shape mismatch");
  check_filters(rho, delta);
  if (!(tol_delta >= 0.0) || !std::isfinite(tol_delta)) throw InputError("q_delta: delta must be finite and >= 0");
  const bool cplx = rho.imag().cwiseAbs().maxCoeff() > 0.0 || sigma.imag().cwiseAbs().maxCoeff() > 0.0;

  // gram index for the filtered factorization of rho - sigma'
  std::vector<std::vector<int>> ridx(static_cast<std::size_t>(n), std::vector<int>(delta.size(), -1));
  std::vector<std::vector<int>> cidx = ridx;
  int next = 0;
  for (int x = 0; x < n; ++x) {
    for (std::size_t j = 0; j < delta.size(); ++j) {
      if (delta[j].row(x).cwiseAbs().maxCoeff() > 0.0) ridx[static_cast<std::size_t>(x)][j] = next++;
    }
  }
  for (int y = 0; y < n; ++y) {
    for (std::size_t j = 0; j < delta.size(); ++j) {
      if (delta[j].col(y).cwiseAbs().maxCoeff() > 0.0) cidx[static_cast<std::size_t>(y)][j] = next++;
    }
  }

  sdp::Program p;
  const sdp::HermitianLayout h1 = sdp::add_hermitian_block(p, std::max(next, 1), cplx);
  const sdp::HermitianLayout hs = sdp::add_hermitian_block(p, n, cplx);
  const bool ball = tol_delta > 0.0;
  sdp::HermitianLayout h2;
  if (ball) h2 = sdp::add_hermitian_block(p, 2 * n, cplx);
  sdp::HermitianLayout hg;
  if (noncoherent) hg = sdp::add_hermitian_block(p, n, cplx);

  std::vector<int> rslack(static_cast<std::size_t>(n), -1);
  std::vector<int> cslack(static_cast<std::size_t>(n), -1);
  int scalars = 1;
  for (int x = 0; x < n; ++x) {
    const auto& r = ridx[static_cast<std::size_t>(x)];
    if (std::any_of(r.begin(), r.end(), [](int i) { return i >= 0; })) rslack[static_cast<std::size_t>(x)] = scalars++;
    const auto& c = cidx[static_cast<std::size_t>(x)];
    if (std::any_of(c.begin(), c.end(), [](int i) { return i >= 0; })) cslack[static_cast<std::size_t>(x)] = scalars++;
  }
  const int ball_slack = scalars;
  if (ball) scalars += 2 * n;
  const int sb = p.add_block(sdp::BlockKind::nonneg, scalars);
  p.objective.add(sb, 0, 0, 1.0);

  const Complex minus_i(0.0, -1.0);
  auto push_pair = [&](sdp::Constraint& re, sdp::Constraint& im, Complex rhs, bool with_imag) {
    re.rhs = rhs.real();
    p.constraints.push_back(std::move(re));
    if (with_imag) {
      im.rhs = rhs.imag();
      p.constraints.push_back(std::move(im));
    }
  };

  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      bool filtered = false;
      for (const CMatrix& d : delta) filtered = filtered || d(x, y) != Complex(0.0, 0.0);
      sdp::Constraint re;
      sdp::Constraint im;
      if (filtered) {
        // sum_j Delta_j <u_xj | v_yj> + sigma'_xy = rho_xy
        for (std::size_t j = 0; j < delta.size(); ++j) {
          const Complex d = delta[j](x, y);
          if (d == Complex(0.0, 0.0)) continue;
          const int r = ridx[static_cast<std::size_t>(x)][j];
          const int c = cidx[static_cast<std::size_t>(y)][j];
          sdp::add_re(re.a, h1, r, c, d);
          if (cplx) sdp::add_re(im.a, h1, r, c, minus_i * d);
        }
        sdp::add_re(re.a, hs, x, y, 1.0);
        if (cplx) sdp::add_re(im.a, hs, x, y, minus_i);
        push_pair(re, im, rho(x, y), cplx);
      } else if (x <= y) {
        // unfiltered entries of rho - sigma' must vanish
        sdp::add_re(re.a, hs, x, y, 1.0);
        if (cplx && x != y) sdp::add_re(im.a, hs, x, y, minus_i);
        push_pair(re, im, rho(x, y), cplx && x != y);
      }
    }
  }
  auto diag_constraint = [&](const std::vector<int>& idx, int slack) {
    sdp::Constraint c;
    for (int i : idx) {
      if (i >= 0) sdp::add_re(c.a, h1, i, i, 1.0);
    }
    c.a.add(sb, slack, slack, 1.0);
    c.a.add(sb, 0, 0, -1.0);
    p.constraints.push_back(std::move(c));
  };
  for (int x = 0; x < n; ++x) {
    if (rslack[static_cast<std::size_t>(x)] >= 0) diag_constraint(ridx[static_cast<std::size_t>(x)], rslack[static_cast<std::size_t>(x)]);
    if (cslack[static_cast<std::size_t>(x)] >= 0) diag_constraint(cidx[static_cast<std::size_t>(x)], cslack[static_cast<std::size_t>(x)]);
  }
  if (next == 0) {
    // no filtered entries at all; keep the placeholder block bounded
    sdp::Constraint c;
    sdp::add_re(c.a, h1, 0, 0, 1.0);
    c.rhs = 0.0;
    p.constraints.push_back(std::move(c));
  }
  // gamma_2(sigma' - sigma [o S]) <= delta: <a_x | b_y> = sigma'_xy - sigma_xy [S_xy]
  auto unfiltered = [&](int x, int y) {
    for (const CMatrix& d : delta) {
      if (d(x, y) != Complex(0.0, 0.0)) return false;
    }
    return true;
  };
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (!ball) {
        // sigma' = sigma o S exactly; drop rows already implied by the others
        if (y < x) continue;
        const bool pinned = unfiltered(x, y) && (x == y || sigma(x, y) == Complex(0.0, 0.0));
        if (pinned) {
          const Complex target = x == y ? sigma(x, y) : Complex(0.0, 0.0);
          if (std::abs(rho(x, y) - target) > 1e-9) throw InputError("q_delta_nc: program is infeasible");
          continue;
        }
        sdp::Constraint re;
        sdp::Constraint im;
        sdp::add_re(re.a, hs, x, y, -1.0);
        sdp::add_re(re.a, hg, x, y, sigma(x, y));
        const bool with_imag = cplx && x != y;
        if (with_imag) {
          sdp::add_re(im.a, hs, x, y, -minus_i);
          sdp::add_re(im.a, hg, x, y, minus_i * sigma(x, y));
        }
        push_pair(re, im, 0.0, with_imag);
        continue;
      }
      sdp::Constraint re;
      sdp::Constraint im;
      if (ball) sdp::add_re(re.a, h2, x, n + y, 1.0);
      sdp::add_re(re.a, hs, x, y, -1.0);
      if (cplx) {
        if (ball) sdp::add_re(im.a, h2, x, n + y, minus_i);
        sdp::add_re(im.a, hs, x, y, -minus_i);
      }
      Complex rhs = -sigma(x, y);
      if (noncoherent) {
        // + sigma_xy S_xy
        sdp::add_re(re.a, hg, x, y, sigma(x, y));
        if (cplx) sdp::add_re(im.a, hg, x, y, minus_i * sigma(x, y));
        rhs = 0.0;
      }
      push_pair(re, im, rhs, cplx);
    }
  }
  for (int i = 0; ball && i < 2 * n; ++i) {
    sdp::Constraint c;
    sdp::add_re(c.a, h2, i, i, 1.0);
    c.a.add(sb, ball_slack + i, ball_slack + i, 1.0);
    c.rhs = tol_delta;
    p.constraints.push_back(std::move(c));
  }
  if (noncoherent) {
    for (int x = 0; x < n; ++x) {
      sdp::Constraint c;
      sdp::add_re(c.a, hg, x, x, 1.0);
      c.rhs = 1.0;
      p.constraints.push_back(std::move(c));
    }
  }

  const sdp::Result r = sdp::solve_checked(p, settings, noncoherent ? "q_delta_nc" : "q_delta");
  QDeltaResult out;
  out.value = r.primal_value;
  out.info = info_of(r);
  out.sigma_prime = sdp::hermitian_value(r.x[static_cast<std::size_t>(hs.block)], hs);
  if (noncoherent) out.s = sdp::hermitian_value(r.x[static_cast<std::size_t>(hg.block)], hg);
  return out;
}

}  // namespace

QDeltaResult q_delta(const CMatrix& rho, const CMatrix& sigma, const FilterSet& delta, double tol_delta,
                     const sdp::Settings& s) {
  if (tol_delta == 0.0) {
    // the ball collapses to sigma' = sigma
    const Gamma2Result g = query_distance(rho, sigma, delta, s);
    if (g.value.infinite) throw InputError("q_delta: query distance is infinite");
    QDeltaResult out;
    out.value = g.value.value;
    out.sigma_prime = sigma;
    out.info = g.info;
    return out;
  }
  return q_program(rho, sigma, delta, tol_delta, false, s);
}

QDeltaResult q_delta_nc(const CMatrix& rho, const CMatrix& sigma, const FilterSet& delta, double tol_delta,
                        const sdp::Settings& s) {
  return q_program(rho, sigma, delta, tol_delta, true, s);
}

}  // namespace stateconv
