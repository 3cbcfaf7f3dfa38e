#pragma once

// gamma_2 and filtered gamma_2 norms, the dual norm, factorization
// certificates and the randomized property suite.

#include "stateconv/matrix_core.hpp"
#include "stateconv/sdp.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stateconv {

using FilterSet = std::vector<CMatrix>;

/// A real number or +infinity. Infinity is a tag, never a float value.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;

  static ExtendedReal finite(double v) { return {v, false}; }
  static ExtendedReal infinity() { return {0.0, true}; }
  std::string str() const;
};

/// Vectors u[x][j], v[y][j] in C^dim. Pairs whose filter row (column) is
/// zero hold zero vectors.
struct Factorization {
  int dim = 0;
  std::vector<std::vector<CVector>> u;
  std::vector<std::vector<CVector>> v;
  double value = 0.0;
};

struct SolveInfo {
  int iterations = 0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double residual = 0.0;
};

struct Gamma2Result {
  ExtendedReal value;
  Factorization cert;
  SolveInfo info;
};

struct FactorizationCheck {
  double residual = 0.0;
  double objective = 0.0;
};

/// Throws InputError unless every filter has the shape of a.
void check_filters(const CMatrix& a, const FilterSet& z);

/// True iff some entry of a is nonzero where every filter vanishes.
bool filtered_infeasible(const CMatrix& a, const FilterSet& z);

Gamma2Result filtered_gamma2(const CMatrix& a, const FilterSet& z, const sdp::Settings& s = {});
Gamma2Result gamma2(const CMatrix& a, const sdp::Settings& s = {});

/// The same value computed from the maximization side,
///   max Re<A, B>  s.t.  Omega - (B o Z_j)^ >= 0,  Omega diagonal, Tr Omega / 2 <= 1,
/// where M^ = [[0, M], [M^dagger, 0]]. Independent of the Gram encoding.
ExtendedReal filtered_gamma2_dual(const CMatrix& a, const FilterSet& z, const sdp::Settings& s = {});

struct Gamma2StarResult {
  double value = 0.0;
  /// Value of the simplified program min Tr Omega, Omega +- A o Z_j >= 0;
  /// only computed when A and every Z_j are Hermitian.
  bool hermitian_form = false;
  double hermitian_value = 0.0;
  /// Maximizer of Re<A, B> over gamma_2(B | conj Z) <= 1, read off the
  /// solver's primal blocks.
  CMatrix b;
  SolveInfo info;
};

Gamma2StarResult gamma2_star(const CMatrix& a, const FilterSet& z, const sdp::Settings& s = {});

FactorizationCheck check_factorization(const CMatrix& a, const FilterSet& z, const Factorization& cert);

/// Least-norm correction of the v vectors so that the factorization
/// reproduces a to rounding error.
void polish_factorization(const CMatrix& a, const FilterSet& z, Factorization& cert);

struct PropertyOutcome {
  int id = 0;
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_margin = 0.0;  // most negative slack observed (>= -tol passes)
  std::string first_failure;
  bool passed() const { return failures == 0; }
};

std::vector<PropertyOutcome> property_suite(int trials, std::uint64_t seed, double tol = 1e-4);

}  // namespace stateconv
