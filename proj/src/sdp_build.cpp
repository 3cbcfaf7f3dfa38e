#include "stateconv/sdp_build.hpp"

#include "stateconv/errors.hpp"

#include <string>

namespace stateconv::sdp {

HermitianLayout add_hermitian_block(Program& p, int n, bool complex) {
  HermitianLayout h;
  h.n = n;
  h.complex = complex;
  h.block = p.add_block(BlockKind::psd, h.size());
  return h;
}

void add_re(SymSparse& m, const HermitianLayout& h, int p, int q, Complex c) {
  const int n = h.n;
  if (!h.complex) {
    m.add(h.block, p, q, p == q ? c.real() : 0.5 * c.real());
    return;
  }
  // Re(c X) = Re c * Re X - Im c * Im X
  if (p == q) {
    m.add(h.block, p, p, 0.5 * c.real());
    m.add(h.block, n + p, n + p, 0.5 * c.real());
    return;
  }
  m.add(h.block, p, q, 0.25 * c.real());
  m.add(h.block, n + p, n + q, 0.25 * c.real());
  m.add(h.block, n + p, q, -0.25 * c.imag());
  m.add(h.block, p, n + q, 0.25 * c.imag());
}

void add_herm(SymSparse& m, const HermitianLayout& h, int p, int q, Complex c) {
  const int n = h.n;
  if (!h.complex) {
    m.add(h.block, p, q, c.real());
    return;
  }
  m.add(h.block, p, q, c.real());
  m.add(h.block, n + p, n + q, c.real());
  if (p != q) {
    m.add(h.block, n + p, q, c.imag());
    m.add(h.block, p, n + q, -c.imag());
  }
}

CMatrix hermitian_value(const Eigen::MatrixXd& y, const HermitianLayout& h) {
  if (!h.complex) return y.cast<Complex>();
  const int n = h.n;
  CMatrix x(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double re = 0.5 * (y(p, q) + y(n + p, n + q));
      const double im = 0.5 * (y(n + p, q) - y(p, n + q));
      x(p, q) = Complex(re, im);
    }
  }
  return x;
}

int LmiProgram::add_var(double objective) {
  Constraint c;
  c.rhs = objective;
  p_.constraints.push_back(std::move(c));
  return static_cast<int>(p_.constraints.size()) - 1;
}

HermitianLayout LmiProgram::add_lmi(int n, bool complex) { return add_hermitian_block(p_, n, complex); }

int LmiProgram::add_scalars(int count) { return p_.add_block(BlockKind::nonneg, count); }

void LmiProgram::constant(const HermitianLayout& h, int p, int q, Complex c) {
  add_herm(p_.objective, h, p, q, c);
}

void LmiProgram::coef(int var, const HermitianLayout& h, int p, int q, Complex c) {
  add_herm(p_.constraints[static_cast<std::size_t>(var)].a, h, p, q, -c);
}

void LmiProgram::scalar_constant(int block, int row, double c) { p_.objective.add(block, row, row, c); }

void LmiProgram::scalar_coef(int var, int block, int row, double c) {
  p_.constraints[static_cast<std::size_t>(var)].a.add(block, row, row, -c);
}

Result solve_checked(const Program& p, const Settings& s, std::string_view what) {
  Result r = solve(p, s);
  if (r.status != Status::optimal) {
    throw SolverError(std::string(what) + ": solver status " + to_string(r.status) + " (" +
                      r.diagnostics + ", gap " + std::to_string(r.gap) + ", residual " +
                      std::to_string(r.residual) + ")");
  }
  return r;
}

}  // namespace stateconv::sdp
