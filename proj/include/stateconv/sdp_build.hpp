#pragma once

// Helpers for writing complex Hermitian programs in the real canonical form.
//
// A Hermitian n x n matrix X is stored in a real psd block either directly
// (real data, size n) or through the embedding
//   Y = [[Re X, -Im X], [Im X, Re X]]   (size 2n).

#include "stateconv/matrix_core.hpp"
#include "stateconv/sdp.hpp"

#include <string_view>

namespace stateconv::sdp {

struct HermitianLayout {
  int block = 0;
  int n = 0;
  bool complex = false;

  int size() const { return complex ? 2 * n : n; }
};

HermitianLayout add_hermitian_block(Program& p, int n, bool complex);

/// Adds the real functional X -> Re(c * X(p, q)) to m.
void add_re(SymSparse& m, const HermitianLayout& h, int p, int q, Complex c);

/// Adds c at (p, q) and conj(c) at (q, p) of the Hermitian matrix stored in
/// the block (for p == q, c must be real).
void add_herm(SymSparse& m, const HermitianLayout& h, int p, int q, Complex c);

/// Reads back the Hermitian matrix from its real block value.
CMatrix hermitian_value(const Eigen::MatrixXd& y, const HermitianLayout& h);

/// Builder for programs written in "LMI form":
///   maximize  sum_i b_i y_i
///   s.t.      G_0 + sum_i y_i G_i >= 0   (per psd or nonneg block)
/// which is the dual side of the canonical program. The optimal y is in
/// Result::y and the LMI values G(y) in Result::s.
class LmiProgram {
 public:
  int add_var(double objective);
  HermitianLayout add_lmi(int n, bool complex);
  int add_scalars(int count);

  void constant(const HermitianLayout& h, int p, int q, Complex c);
  void coef(int var, const HermitianLayout& h, int p, int q, Complex c);
  void scalar_constant(int block, int row, double c);
  void scalar_coef(int var, int block, int row, double c);

  const Program& program() const { return p_; }

 private:
  Program p_;
};

/// solve(), throwing SolverError unless the status is optimal.
Result solve_checked(const Program& p, const Settings& s, std::string_view what);

}  // namespace stateconv::sdp
