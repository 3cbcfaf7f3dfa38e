#include "stateconv/gamma2.hpp"

#include "stateconv/errors.hpp"
#include "stateconv/sdp_build.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stateconv {

std::string ExtendedReal::str() const {
  if (infinite) return "inf";
  std::ostringstream os;
  os.precision(12);
  os << value;
  return os.str();
}

void check_filters(const CMatrix& a, const FilterSet& z) {
  if (z.empty()) throw InputError("filter set is empty");
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (z[j].rows() != a.rows() || z[j].cols() != a.cols()) {
      throw InputError("filter " + std::to_string(j) + " has shape " + std::to_string(z[j].rows()) + "x" +
                       std::to_string(z[j].cols()) + ", expected " + std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()));
    }
    require_finite(z[j], "filter");
  }
  require_finite(a, "matrix");
}

namespace {

bool any_filter(const FilterSet& z, Eigen::Index x, Eigen::Index y) {
  for (const CMatrix& m : z) {
    if (m(x, y) != Complex(0.0, 0.0)) return true;
  }
  return false;
}

bool has_imag(const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() > 0.0; }

bool any_complex(const CMatrix& a, const FilterSet& z) {
  if (has_imag(a)) return true;
  return std::any_of(z.begin(), z.end(), [](const CMatrix& m) { return has_imag(m); });
}

SolveInfo info_of(const sdp::Result& r) {
  return {r.iterations, r.primal_value, r.dual_value, r.gap, r.residual};
}

// Gram index layout: rows (x, j) with row x of Z_j nonzero, then columns.
struct GramIndex {
  std::vector<std::vector<int>> row;  // row[x][j] or -1
  std::vector<std::vector<int>> col;  // col[y][j] or -1 (offset by row count)
  int rows = 0;
  int total = 0;
};

GramIndex index_filters(const FilterSet& z) {
  const Eigen::Index nr = z.front().rows();
  const Eigen::Index nc = z.front().cols();
  GramIndex g;
  g.row.assign(static_cast<std::size_t>(nr), std::vector<int>(z.size(), -1));
  g.col.assign(static_cast<std::size_t>(nc), std::vector<int>(z.size(), -1));
  int next = 0;
  for (Eigen::Index x = 0; x < nr; ++x) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (z[j].row(x).cwiseAbs().maxCoeff() > 0.0) g.row[static_cast<std::size_t>(x)][j] = next++;
    }
  }
  g.rows = next;
  for (Eigen::Index y = 0; y < nc; ++y) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (z[j].col(y).cwiseAbs().maxCoeff() > 0.0) g.col[static_cast<std::size_t>(y)][j] = next++;
    }
  }
  g.total = next;
  return g;
}

Factorization zero_factorization(Eigen::Index rows, Eigen::Index cols, std::size_t filters) {
  Factorization f;
  f.dim = 0;
  f.u.assign(static_cast<std::size_t>(rows), std::vector<CVector>(filters, CVector(0)));
  f.v.assign(static_cast<std::size_t>(cols), std::vector<CVector>(filters, CVector(0)));
  return f;
}

}  // namespace

bool filtered_infeasible(const CMatrix& a, const FilterSet& z) {
  check_filters(a, z);
  for (Eigen::Index y = 0; y < a.cols(); ++y) {
    for (Eigen::Index x = 0; x < a.rows(); ++x) {
      if (a(x, y) != Complex(0.0, 0.0) && !any_filter(z, x, y)) return true;
    }
  }
  return false;
}

Gamma2Result filtered_gamma2(const CMatrix& a, const FilterSet& z, const sdp::Settings& settings) {
  check_filters(a, z);
  Gamma2Result out;
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) {
    out.value = ExtendedReal::finite(0.0);
    out.cert = zero_factorization(a.rows(), a.cols(), z.size());
    return out;
  }
  if (filtered_infeasible(a, z)) {
    out.value = ExtendedReal::infinity();
    return out;
  }

  const GramIndex gi = index_filters(z);
  const bool cplx = any_complex(a, z);
  sdp::Program p;
  const sdp::HermitianLayout h = sdp::add_hermitian_block(p, gi.total, cplx);

  // nonneg block: t, then one slack per active row and column
  std::vector<int> row_slack(static_cast<std::size_t>(a.rows()), -1);
  std::vector<int> col_slack(static_cast<std::size_t>(a.cols()), -1);
  int scalars = 1;
  for (Eigen::Index x = 0; x < a.rows(); ++x) {
    const auto& r = gi.row[static_cast<std::size_t>(x)];
    if (std::any_of(r.begin(), r.end(), [](int i) { return i >= 0; })) row_slack[static_cast<std::size_t>(x)] = scalars++;
  }
  for (Eigen::Index y = 0; y < a.cols(); ++y) {
    const auto& c = gi.col[static_cast<std::size_t>(y)];
    if (std::any_of(c.begin(), c.end(), [](int i) { return i >= 0; })) col_slack[static_cast<std::size_t>(y)] = scalars++;
  }
  const int sb = p.add_block(sdp::BlockKind::nonneg, scalars);
  p.objective.add(sb, 0, 0, 1.0);

  for (Eigen::Index x = 0; x < a.rows(); ++x) {
    for (Eigen::Index y = 0; y < a.cols(); ++y) {
      if (!any_filter(z, x, y)) continue;
      sdp::Constraint re;
      sdp::Constraint im;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const Complex zj = z[j](x, y);
        if (zj == Complex(0.0, 0.0)) continue;
        const int r = gi.row[static_cast<std::size_t>(x)][j];
        const int c = gi.col[static_cast<std::size_t>(y)][j];
        sdp::add_re(re.a, h, r, c, zj);
        if (cplx) sdp::add_re(im.a, h, r, c, Complex(0.0, -1.0) * zj);
      }
      re.rhs = a(x, y).real();
      p.constraints.push_back(std::move(re));
      if (cplx) {
        im.rhs = a(x, y).imag();
        p.constraints.push_back(std::move(im));
      }
    }
  }
  auto diag_constraint = [&](const std::vector<int>& idx, int slack) {
    sdp::Constraint c;
    for (int i : idx) {
      if (i >= 0) sdp::add_re(c.a, h, i, i, 1.0);
    }
    c.a.add(sb, slack, slack, 1.0);
    c.a.add(sb, 0, 0, -1.0);
    c.rhs = 0.0;
    p.constraints.push_back(std::move(c));
  };
  for (Eigen::Index x = 0; x < a.rows(); ++x) {
    if (row_slack[static_cast<std::size_t>(x)] >= 0) diag_constraint(gi.row[static_cast<std::size_t>(x)], row_slack[static_cast<std::size_t>(x)]);
  }
  for (Eigen::Index y = 0; y < a.cols(); ++y) {
    if (col_slack[static_cast<std::size_t>(y)] >= 0) diag_constraint(gi.col[static_cast<std::size_t>(y)], col_slack[static_cast<std::size_t>(y)]);
  }

  const sdp::Result r = sdp::solve_checked(p, settings, "filtered_gamma2");
  out.info = info_of(r);
  out.value = ExtendedReal::finite(r.primal_value);

  const CMatrix gram_x = sdp::hermitian_value(r.x[static_cast<std::size_t>(h.block)], h);
  const CMatrix rows = psd_factor_rows(gram_x, 1e-8);
  const Eigen::Index m = rows.cols();
  Factorization f;
  f.dim = static_cast<int>(m);
  f.u.assign(static_cast<std::size_t>(a.rows()), std::vector<CVector>(z.size(), CVector::Zero(m)));
  f.v.assign(static_cast<std::size_t>(a.cols()), std::vector<CVector>(z.size(), CVector::Zero(m)));
  for (std::size_t x = 0; x < f.u.size(); ++x) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (gi.row[x][j] >= 0) f.u[x][j] = rows.row(gi.row[x][j]).adjoint();
    }
  }
  for (std::size_t y = 0; y < f.v.size(); ++y) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (gi.col[y][j] >= 0) f.v[y][j] = rows.row(gi.col[y][j]).adjoint();
    }
  }
  polish_factorization(a, z, f);
  f.value = check_factorization(a, z, f).objective;
  out.cert = std::move(f);
  return out;
}

Gamma2Result gamma2(const CMatrix& a, const sdp::Settings& s) {
  return filtered_gamma2(a, FilterSet{ones(a.rows(), a.cols())}, s);
}

ExtendedReal filtered_gamma2_dual(const CMatrix& a, const FilterSet& z, const sdp::Settings& settings) {
  check_filters(a, z);
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return ExtendedReal::finite(0.0);
  if (filtered_infeasible(a, z)) return ExtendedReal::infinity();
  const GramIndex gi = index_filters(z);
  const bool cplx = any_complex(a, z);

  sdp::LmiProgram lp;
  // per-filter LMI over the active rows and columns of Z_j
  std::vector<sdp::HermitianLayout> lmi(z.size());
  std::vector<std::vector<int>> local(z.size(), std::vector<int>(static_cast<std::size_t>(gi.total), -1));
  for (std::size_t j = 0; j < z.size(); ++j) {
    int n = 0;
    for (std::size_t x = 0; x < gi.row.size(); ++x) {
      if (gi.row[x][j] >= 0) local[j][static_cast<std::size_t>(gi.row[x][j])] = n++;
    }
    for (std::size_t y = 0; y < gi.col.size(); ++y) {
      if (gi.col[y][j] >= 0) local[j][static_cast<std::size_t>(gi.col[y][j])] = n++;
    }
    if (n > 0) lmi[j] = lp.add_lmi(n, cplx);
  }
  const int sb = lp.add_scalars(1);
  lp.scalar_constant(sb, 0, 1.0);

  for (Eigen::Index x = 0; x < a.rows(); ++x) {
    for (Eigen::Index y = 0; y < a.cols(); ++y) {
      if (!any_filter(z, x, y)) continue;
      const int bre = lp.add_var(a(x, y).real());
      const int bim = cplx ? lp.add_var(a(x, y).imag()) : -1;
      for (std::size_t j = 0; j < z.size(); ++j) {
        const Complex zj = z[j](x, y);
        if (zj == Complex(0.0, 0.0)) continue;
        const int r = local[j][static_cast<std::size_t>(gi.row[static_cast<std::size_t>(x)][j])];
        const int c = local[j][static_cast<std::size_t>(gi.col[static_cast<std::size_t>(y)][j])];
        lp.coef(bre, lmi[j], r, c, -zj);
        if (bim >= 0) lp.coef(bim, lmi[j], r, c, Complex(0.0, -1.0) * zj);
      }
    }
  }
  auto diag_var = [&](const std::vector<int>& idx) {
    const int v = lp.add_var(0.0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
      if (idx[j] < 0) continue;
      const int l = local[j][static_cast<std::size_t>(idx[j])];
      lp.coef(v, lmi[j], l, l, 1.0);
    }
    lp.scalar_coef(v, sb, 0, -0.5);
  };
  for (const auto& r : gi.row) {
    if (std::any_of(r.begin(), r.end(), [](int i) { return i >= 0; })) diag_var(r);
  }
  for (const auto& c : gi.col) {
    if (std::any_of(c.begin(), c.end(), [](int i) { return i >= 0; })) diag_var(c);
  }
  const sdp::Result r = sdp::solve_checked(lp.program(), settings, "filtered_gamma2_dual");
  return ExtendedReal::finite(r.dual_value);
}

Gamma2StarResult gamma2_star(const CMatrix& a, const FilterSet& z, const sdp::Settings& settings) {
  check_filters(a, z);
  Gamma2StarResult out;
  const Eigen::Index d1 = a.rows();
  const Eigen::Index d2 = a.cols();
  out.b = CMatrix::Zero(d1, d2);
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) return out;
  const bool cplx = any_complex(a, z);
  const int n = static_cast<int>(d1 + d2);

  sdp::LmiProgram lp;
  std::vector<sdp::HermitianLayout> lmi;
  for (std::size_t j = 0; j < z.size(); ++j) lmi.push_back(lp.add_lmi(n, cplx));
  for (int i = 0; i < n; ++i) {
    const int w = lp.add_var(-0.5);
    for (const auto& h : lmi) lp.coef(w, h, i, i, 1.0);
  }
  for (std::size_t j = 0; j < z.size(); ++j) {
    for (Eigen::Index x = 0; x < d1; ++x) {
      for (Eigen::Index y = 0; y < d2; ++y) {
        const Complex e = a(x, y) * z[j](x, y);
        if (e != Complex(0.0, 0.0)) lp.constant(lmi[j], static_cast<int>(x), static_cast<int>(d1 + y), -e);
      }
    }
  }
  const sdp::Result r = sdp::solve_checked(lp.program(), settings, "gamma2_star");
  out.value = -r.dual_value;
  out.info = info_of(r);

  // B from the off-diagonal blocks of the primal matrices
  CMatrix b = CMatrix::Zero(d1, d2);
  for (std::size_t j = 0; j < z.size(); ++j) {
    const CMatrix y = sdp::hermitian_value(r.x[static_cast<std::size_t>(lmi[j].block)], lmi[j]);
    b += z[j].conjugate().cwiseProduct(y.topRightCorner(d1, d2));
  }
  const double raw = (a.conjugate().cwiseProduct(b)).sum().real();
  if (raw > 0.0) out.b = b * (out.value / raw);

  bool herm = a.rows() == a.cols() && is_hermitian(a, 0.0);
  for (const CMatrix& m : z) herm = herm && m.rows() == m.cols() && is_hermitian(m, 0.0);
  if (herm) {
    const int d = static_cast<int>(d1);
    sdp::LmiProgram hp;
    std::vector<sdp::HermitianLayout> pm;
    for (std::size_t j = 0; j < 2 * z.size(); ++j) pm.push_back(hp.add_lmi(d, cplx));
    for (int i = 0; i < d; ++i) {
      const int w = hp.add_var(-1.0);
      for (const auto& h : pm) hp.coef(w, h, i, i, 1.0);
    }
    for (std::size_t j = 0; j < z.size(); ++j) {
      for (int x = 0; x < d; ++x) {
        for (int y = x; y < d; ++y) {
          const Complex e = a(x, y) * z[j](x, y);
          if (e == Complex(0.0, 0.0)) continue;
          hp.constant(pm[2 * j], x, y, e);
          hp.constant(pm[2 * j + 1], x, y, -e);
        }
      }
    }
    const sdp::Result hr = sdp::solve_checked(hp.program(), settings, "gamma2_star (hermitian form)");
    out.hermitian_form = true;
    out.hermitian_value = -hr.dual_value;
  }
  return out;
}

FactorizationCheck check_factorization(const CMatrix& a, const FilterSet& z, const Factorization& cert) {
  check_filters(a, z);
  FactorizationCheck out;
  if (cert.u.size() != static_cast<std::size_t>(a.rows()) || cert.v.size() != static_cast<std::size_t>(a.cols())) {
    throw InputError("check_factorization: certificate shape does not match the matrix");
  }
  for (Eigen::Index x = 0; x < a.rows(); ++x) {
    for (Eigen::Index y = 0; y < a.cols(); ++y) {
      Complex s(0.0, 0.0);
      for (std::size_t j = 0; j < z.size(); ++j) {
        const Complex zj = z[j](x, y);
        if (zj == Complex(0.0, 0.0)) continue;
        s += zj * cert.u[static_cast<std::size_t>(x)][j].dot(cert.v[static_cast<std::size_t>(y)][j]);
      }
      out.residual = std::max(out.residual, std::abs(a(x, y) - s));
    }
  }
  for (const auto& row : cert.u) {
    double s = 0.0;
    for (const CVector& w : row) s += w.squaredNorm();
    out.objective = std::max(out.objective, s);
  }
  for (const auto& col : cert.v) {
    double s = 0.0;
    for (const CVector& w : col) s += w.squaredNorm();
    out.objective = std::max(out.objective, s);
  }
  return out;
}

void polish_factorization(const CMatrix& a, const FilterSet& z, Factorization& cert) {
  const Eigen::Index m = cert.dim;
  if (m == 0) return;
  for (Eigen::Index y = 0; y < a.cols(); ++y) {
    std::vector<std::size_t> js;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (z[j].col(y).cwiseAbs().maxCoeff() > 0.0) js.push_back(j);
    }
    std::vector<Eigen::Index> xs;
    for (Eigen::Index x = 0; x < a.rows(); ++x) {
      if (any_filter(z, x, y)) xs.push_back(x);
    }
    if (js.empty() || xs.empty()) continue;
    const auto nv = static_cast<Eigen::Index>(js.size()) * m;
    CMatrix mat = CMatrix::Zero(static_cast<Eigen::Index>(xs.size()), nv);
    CVector resid(static_cast<Eigen::Index>(xs.size()));
    for (std::size_t r = 0; r < xs.size(); ++r) {
      const Eigen::Index x = xs[r];
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < js.size(); ++k) {
        const std::size_t j = js[k];
        const Complex zj = z[j](x, y);
        const CVector& u = cert.u[static_cast<std::size_t>(x)][j];
        mat.block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k) * m, 1, m) = zj * u.adjoint();
        s += zj * u.dot(cert.v[static_cast<std::size_t>(y)][j]);
      }
      resid(static_cast<Eigen::Index>(r)) = a(x, y) - s;
    }
    if (resid.cwiseAbs().maxCoeff() == 0.0) continue;
    const CVector delta = mat.completeOrthogonalDecomposition().solve(resid);
    for (std::size_t k = 0; k < js.size(); ++k) {
      cert.v[static_cast<std::size_t>(y)][js[k]] += delta.segment(static_cast<Eigen::Index>(k) * m, m);
    }
  }
}

}  // namespace stateconv
