#pragma once

// f o g^n, the composition upper bound, the composed dual witness for boolean
// inner functions, and the direct-sum check.

#include "stateconv/adversary.hpp"

#include <string>
#include <vector>

namespace stateconv {

inline constexpr int kComposedCap = 256;

struct ComposedSpec {
  FunctionSpec outer;
  FunctionSpec inner;
  int copies = 0;
  FunctionSpec composed;
  std::vector<std::vector<int>> parts;  // parts[x][i] = index in inner.domain of block i
  std::vector<int> lift;                // lift[x] = index in outer.domain of g(x^1) ... g(x^n)
};

/// Domain: all n-tuples of inner points, lexicographic with the first block
/// most significant. Inner output labels must be single symbols of the outer
/// alphabet at their position, and every lifted string must lie in the outer
/// domain.
ComposedSpec compose(const FunctionSpec& f, const FunctionSpec& g, int n);

struct UpperReport {
  double adv_f = 0.0;
  double qdist_g = 0.0;  // gamma_2(J - G | Delta)
  double adv_composed = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
};

UpperReport check_upper(const FunctionSpec& f, const FunctionSpec& g, int n, double tol = 1e-4);

struct BalanceReport {
  AdversaryWitness witness;
  double trace0 = 0.0;  // Omega trace on the first output label
  double trace1 = 0.0;
  double min_eigenvalue = 0.0;  // over d_g Omega +- W and Omega +- W o Delta_j
};

/// Rescales the two output blocks of Omega (a congruence by c on one block and
/// 1/c on the other, then a common scale) so each carries trace 1/2. W is kept.
BalanceReport balance_witness(const FunctionSpec& g, const AdversaryWitness& w);

struct ComposedWitness {
  AdversaryWitness witness;  // normalized to Tr Omega = 1
  double raw_objective = 0.0;
  double expected_objective = 0.0;  // d_f (d_g / 2)^n
  double raw_trace = 0.0;
  double expected_trace = 0.0;      // d_g^(n-1) / 2^n
  double min_eigenvalue = 0.0;      // over Omega~ +- W~ o Delta_(p,q), unnormalized
  bool support_ok = false;
  double value = 0.0;               // <J, W> after normalization
  bool pass = false;
};

/// outer_witness (Lambda, V) for f, balanced (Omega, W) for g.
ComposedWitness compose_witness(const ComposedSpec& c, const AdversaryWitness& outer_witness,
                                const AdversaryWitness& inner_witness);

/// Solves both adversary programs, balances g's witness and composes.
ComposedWitness compose_lower(const ComposedSpec& c);

/// The identity on E^n, over the output labels of g (single symbols).
FunctionSpec identity_on_outputs(const FunctionSpec& g, int n);

struct DirectSumReport {
  double adv_g = 0.0;
  double adv_sum = 0.0;
  double expected = 0.0;
  double difference = 0.0;
  bool pass = false;
};

DirectSumReport direct_sum_check(const FunctionSpec& g, int n, double tol = 1e-3);

}  // namespace stateconv
