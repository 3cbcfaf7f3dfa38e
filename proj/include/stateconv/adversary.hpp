#pragma once

// Functions on finite domains, difference filters, the general adversary
// bound, query distance and the bounded-error programs q_delta, q_delta^nc.

#include "stateconv/gamma2.hpp"
#include "stateconv/matrix_core.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stateconv {

/// f : D (subset of A_1 x ... x A_n) -> E. Each coordinate alphabet is a
/// string of single-character symbols; domain points are strings of length
/// n. Output labels are arbitrary strings.
struct FunctionSpec {
  std::vector<std::string> alphabets;
  std::vector<std::string> domain;
  std::vector<std::string> outputs;

  // filled by make_function
  std::vector<std::vector<int>> symbols;  // symbols[x][j] = index in alphabets[j]
  std::vector<std::string> labels;        // distinct outputs in order of first appearance
  std::vector<int> output_index;          // per domain point, index into labels

  int arity() const { return static_cast<int>(alphabets.size()); }
  int size() const { return static_cast<int>(domain.size()); }
  int alphabet_size() const;  // largest coordinate alphabet
  int num_outputs() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& point) const;  // -1 if absent
};

/// Validates and fills the derived fields. Throws InputError.
FunctionSpec make_function(std::vector<std::string> alphabets, std::vector<std::string> domain,
                           std::vector<std::string> outputs);

/// "0123456789abcdef..." truncated to k symbols.
std::string uniform_symbols(int k);

/// Full domain over a uniform alphabet of size k, lexicographic order.
FunctionSpec function_from_rule(int k, int n, const std::function<std::string(const std::vector<int>&)>& rule);

FunctionSpec identity_bit();
FunctionSpec or_fn(int n);
FunctionSpec and_fn(int n);
FunctionSpec parity_fn(int n);
FunctionSpec majority3();
FunctionSpec constant_fn(int n);
/// Boolean function on 2 bits with truth table bits (bit i = f(i), i = 2 x1 + x2).
FunctionSpec boolean2(int table);

FilterSet build_filters(const FunctionSpec& spec);
CMatrix output_gram(const FunctionSpec& spec);

/// Dual adversary witness: diagonal Omega (as a vector) and symmetric W.
struct AdversaryWitness {
  Eigen::VectorXd omega;
  Eigen::MatrixXd w;
  double objective = 0.0;  // <J, W>
};

struct WitnessCheck {
  double objective = 0.0;
  double trace_defect = 0.0;   // |Tr Omega - 1|
  double min_eigenvalue = 0.0; // over Omega +- W o Delta_j
  bool support_ok = true;      // W o F = 0 exactly
  double max_negative_omega = 0.0;
};

WitnessCheck check_witness(const FunctionSpec& spec, const AdversaryWitness& w);

struct AdvResult {
  double value = 0.0;
  AdversaryWitness witness;
  double filtered_value = 0.0;  // gamma_2(J - F | {Delta_j o (J - F)})
  Eigen::MatrixXd gamma;        // max-form certificate derived from the witness
  double gamma_norm = 0.0;
  SolveInfo info;
};

/// Solves the witness program and the filtered-gamma_2 program; throws
/// VerificationFailure if they disagree by more than 1e-4.
AdvResult adv_pm(const FunctionSpec& spec, const sdp::Settings& s = {});

/// Checks Gamma o F = 0 and ||Gamma o Delta_j|| <= 1 + 1e-8 and returns
/// ||Gamma||. Throws CertificateError naming the violated constraint.
double adv_pm_certify(const FunctionSpec& spec, const Eigen::MatrixXd& gamma);

Gamma2Result query_distance(const CMatrix& rho, const CMatrix& sigma, const FilterSet& delta,
                            const sdp::Settings& s = {});

struct SandwichReport {
  double adv = 0.0;
  double qdist = 0.0;
  double ratio = 1.0;
  double bound = 0.0;  // 2 (1 - 1/|E|)
  double lower_margin = 0.0;
  double upper_margin = 0.0;
  bool pass = false;
};

SandwichReport sandwich_check(const FunctionSpec& spec, double tol = 1e-4);

struct QDeltaResult {
  double value = 0.0;
  CMatrix sigma_prime;
  CMatrix s;  // garbage Gram (non-coherent variant only)
  SolveInfo info;
};

QDeltaResult q_delta(const CMatrix& rho, const CMatrix& sigma, const FilterSet& delta, double tol_delta,
                     const sdp::Settings& s = {});
QDeltaResult q_delta_nc(const CMatrix& rho, const CMatrix& sigma, const FilterSet& delta, double tol_delta,
                        const sdp::Settings& s = {});

/// Validates a Gram matrix: square, Hermitian within 1e-10, PSD within
/// -1e-8, diagonal in [0, 1 + 1e-10].
void check_gram(const CMatrix& g, const std::string& what);

}  // namespace stateconv
