#pragma once

// The state-conversion algorithm built from a filtered gamma_2 certificate,
// simulated with an ideal phase-detection reflection, plus the lower-bound
// certificates (one query, fractional query, output condition).

#include "stateconv/adversary.hpp"
#include "stateconv/gamma2.hpp"
#include "stateconv/matrix_core.hpp"
#include "stateconv/random.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace stateconv {

/// mu_i, nu_i in R^k with <mu_i|nu_j> = k / (2 (k - 1)) for i != j and 0 for i == j.
struct MuNu {
  int k = 0;
  double alpha = 0.0;
  std::vector<CVector> mu;
  std::vector<CVector> nu;
};

MuNu build_mu_nu(int k);

/// The factorization of J - 1_k given by mu and nu scaled by sqrt(2 (k - 1) / k).
Factorization mu_nu_factorization(int k);

/// Realizations of two Gram matrices in H = H_rho (+) H_sigma, each summand
/// of dimension |D|.
struct StateRealization {
  int dim = 0;
  std::vector<CVector> rho;
  std::vector<CVector> sigma;
};

StateRealization canonical_states(const CMatrix& rho, const CMatrix& sigma);

/// Ideal phase detection keeps eigenvectors with |theta| <= threshold (and the
/// zero bucket |e^{i theta} - 1| < kZeroPhaseTol) and negates the rest.
inline constexpr double kZeroPhaseTol = 1e-10;
inline constexpr double kPhaseDetectConstant = 100.0;

struct AlgorithmInstance {
  int n = 0;      // arity
  int k = 0;      // alphabet size
  int m = 0;      // certificate dimension
  int dim_h = 0;  // dim H
  int dim = 0;    // 2 dim_h + n k m
  double eps = 0.0;
  double w = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  double sdp_value = 0.0;  // filtered gamma_2 value reported by the solver
  FunctionSpec domain;
  StateRealization states;
  Factorization cert;
  MuNu munu;
  std::vector<CVector> t_plus;
  std::vector<CVector> t_minus;
  std::vector<CVector> psi;
  CMatrix reflection_space;  // projector onto the complement of span{psi_y}

  int register_index(int j, int a, int c) const { return 2 * dim_h + (j * k + a) * m + c; }
  CMatrix pi(int x) const;
  CMatrix unitary(int x) const;
  /// phi = t_{x+} + (eps / (2 sqrt W)) (2 (k - 1) / k) sum_j |j>|nu_{x_j}>|v_{xj}>
  CVector fixed_vector(int x) const;
  CVector initial_state(int x) const;  // |0>|rho_x>
  CVector target_state(int x) const;   // |1>|sigma_x>
};

/// Requires unit-diagonal Gram matrices over the points of `domain` and
/// 0 < eps < gamma_2(rho - sigma | Delta).
AlgorithmInstance build_instance(const CMatrix& rho, const CMatrix& sigma, const FunctionSpec& domain, double eps,
                                 const sdp::Settings& s = {});
/// Function evaluation: rho = J, sigma = F.
AlgorithmInstance build_instance(const FunctionSpec& spec, double eps, const sdp::Settings& s = {});

struct PhaseSpectrum {
  Eigen::VectorXd phases;  // ascending, in (-pi, pi]
  CMatrix vectors;
};

PhaseSpectrum phase_spectrum(const CMatrix& u);
Eigen::VectorXd eigenphases(const AlgorithmInstance& inst, int x);

/// Projector onto eigenvectors with |theta| <= threshold or in the zero bucket.
CMatrix small_phase_projector(const PhaseSpectrum& s, double threshold);
CMatrix ideal_reflection(const CMatrix& u, double threshold);
CVector ideal_phase_detect(const AlgorithmInstance& inst, int x, const CVector& state);

struct PhaseCount {
  double phase = 0.0;
  int multiplicity = 0;
};

/// Groups phases that agree within tol; zero-bucket phases are reported as 0.
std::vector<PhaseCount> phase_histogram(const Eigen::VectorXd& phases, double tol = 1e-8);
void write_phase_csv(std::ostream& out, const std::vector<PhaseCount>& hist);

struct ClaimMargins {
  double tplus = 0.0;         // ||P_0 t_{x+}||^2
  double tplus_bound = 0.0;   // 1 - eps^2
  double tminus = 0.0;        // ||P_Theta t_{x-}||^2
  double tminus_bound = 0.0;  // (Theta^2 / 4) (W^2 / eps^2 + 1)
  double tplus_margin() const { return tplus - tplus_bound; }
  double tminus_margin() const { return tminus_bound - tminus; }
};

/// Throws VerificationFailure if either claim fails by more than 1e-8.
ClaimMargins verify_claims(const AlgorithmInstance& inst, int x);

struct SimulationEntry {
  std::string point;
  ClaimMargins claims;
  double error = 0.0;          // || R |0>|rho_x> - |1>|sigma_x> ||
  double fidelity = 0.0;       // |<1, sigma_x | output>|^2
  double error_bound = 0.0;    // 4 eps
  double ideal_bound = 0.0;    // (sqrt 2 + 1) eps
  double unitarity = 0.0;      // ||U^dagger U - 1||
  double fixed_residual = 0.0; // ||U phi - phi|| / ||phi||
  double kernel_residual = 0.0;  // ||Lambda psi_x||
  std::vector<PhaseCount> histogram;
  bool pass = false;
};

/// Computes every quantity without throwing on violations.
SimulationEntry simulate_input(const AlgorithmInstance& inst, int x);
/// simulate_input, throwing VerificationFailure when the final error is not below 4 eps.
SimulationEntry run_conversion(const AlgorithmInstance& inst, int x);

struct SimulationReport {
  double eps = 0.0;
  double w = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  int dim = 0;
  int m = 0;
  long long query_estimate = 0;  // ceil(C log(1 / delta) / Theta)
  std::vector<SimulationEntry> entries;
  bool pass = false;
};

SimulationReport simulate(const AlgorithmInstance& inst);

/// Returns (Theta / 2) ||w|| - ||P_Theta Pi w|| for R = (2 Pi - 1)(2 Lambda - 1).
/// Throws InputError on violated preconditions and VerificationFailure when
/// the margin is below -1e-8.
double spectral_gap_check(const CMatrix& pi, const CMatrix& lambda, const CVector& w, double theta);

struct GapInstance {
  CMatrix pi;
  CMatrix lambda;
  CVector w;
  double theta = 0.0;
};

/// Random projections in dimension 4..16, w in ker Lambda, Theta in [0.01, 1].
GapInstance random_gap_instance(Rng& rng);

struct GapTrials {
  int trials = 0;
  int failures = 0;
  double worst_margin = 0.0;
};

GapTrials spectral_gap_trials(int trials, std::uint64_t seed);

/// Query register C^n (x) workspace C^d; Gamma_j = |j><j| (x) 1_d.
struct OneQueryInstance {
  FunctionSpec domain;
  int workspace = 1;
  std::vector<CVector> states;   // rho_x
  std::vector<CMatrix> oracles;  // O_x
};

/// O_x = sum_j |j><j| (x) local[j][x_j].
CMatrix oracle_from_local(const FunctionSpec& domain, int x, const std::vector<std::vector<CMatrix>>& local);
OneQueryInstance random_one_query(Rng& rng, int arity, int alphabet, int workspace);

struct OneQueryCertificate {
  Factorization cert;
  CMatrix rho;
  CMatrix sigma;
  FactorizationCheck check;
};

/// u_{xj} = (Gamma_j rho_x, O_x Gamma_j rho_x), v_{xj} = (Gamma_j rho_x, -O_x Gamma_j rho_x).
OneQueryCertificate one_query_certificate(const OneQueryInstance& inst);

/// Boolean inputs; lambda-fractional phase oracle e^{i lambda pi x_j} on |j>.
struct FractionalInstance {
  FunctionSpec domain;
  int workspace = 1;
  std::vector<CVector> states;
};

FractionalInstance random_fractional(Rng& rng, int arity, int workspace);

struct FractionalCertificate {
  double lambda = 0.0;
  std::vector<CMatrix> p;
  CMatrix rho;
  CMatrix sigma;
  double residual = 0.0;        // max |rho - sigma - sum_j P_j o Delta_j|
  double min_eigenvalue = 0.0;  // over all P_j
  double max_diagonal = 0.0;    // max_x sum_j P_j(x, x)
  double p_lambda = 0.0;        // (1 - cos lambda pi) + sin lambda pi
  double bound = 0.0;           // lambda pi sqrt 2
  bool pass = false;
};

FractionalCertificate fractional_query_certificate(const FractionalInstance& inst, double lambda);

struct OutputForward {
  double eps = 0.0;          // max_x 1 - Re<rho_x|sigma_x>^2
  double bound = 0.0;        // 2 sqrt(eps)
  double gamma2 = 0.0;       // SDP value of gamma_2(rho - sigma)
  double factorization = 0.0;  // objective of the explicit (rho + sigma, rho - sigma) factorization
  double residual = 0.0;
  bool pass = false;
};

struct OutputReverse {
  double eps = 0.0;  // objective of the gamma_2 certificate
  double bound = 0.0;  // 1 - sqrt(2 eps)
  double min_fidelity = 0.0;  // min_x Re<sigma_x|U|rho_x>
  double alignment = 0.0;     // max_x ||U a_x - b_x||
  double unitarity = 0.0;
  CMatrix u;
  bool pass = false;
};

struct OutputConditionReport {
  OutputForward forward;
  OutputReverse reverse;
};

OutputForward output_condition_forward(const std::vector<CVector>& rho, const std::vector<CVector>& sigma,
                                       const sdp::Settings& s = {});
OutputReverse output_condition_reverse(const std::vector<CVector>& rho, const std::vector<CVector>& sigma,
                                       const sdp::Settings& s = {});
OutputConditionReport output_condition(const std::vector<CVector>& rho, const std::vector<CVector>& sigma,
                                       const sdp::Settings& s = {});

/// Ensembles sigma_x = normalize(rho_x + eta g_x) with Re<rho_x|sigma_x> > 0.
std::pair<std::vector<CVector>, std::vector<CVector>> random_ensembles(Rng& rng, int count, int dim, double eta);

}  // namespace stateconv
