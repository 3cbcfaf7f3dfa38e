// Randomized checks of the filtered gamma_2 norm identities and inequalities.

#include "stateconv/errors.hpp"
#include "stateconv/gamma2.hpp"
#include "stateconv/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace stateconv {
namespace {

struct Trial {
  double margin = 0.0;  // >= -tol * scale passes
  double scale = 1.0;
  std::string detail;
};

double g2(const CMatrix& a, const FilterSet& z) {
  const Gamma2Result r = filtered_gamma2(a, z);
  if (r.value.infinite) throw VerificationFailure("unexpected infinite value");
  return r.value.value;
}

Trial leq(double lhs, double rhs, const std::string& what) {
  std::ostringstream s;
  s << what << ": " << lhs << " <= " << rhs;
  return {rhs - lhs, std::max(1.0, std::abs(rhs)), s.str()};
}

Trial eq(double lhs, double rhs, const std::string& what) {
  std::ostringstream s;
  s << what << ": " << lhs << " == " << rhs;
  return {-std::abs(lhs - rhs), std::max(1.0, std::abs(rhs)), s.str()};
}

Trial worst(std::initializer_list<Trial> ts) {
  Trial w = *ts.begin();
  for (const Trial& t : ts) {
    if (t.margin / t.scale < w.margin / w.scale) w = t;
  }
  return w;
}

Complex random_entry(Rng& rng, bool cplx) {
  const double mag = uniform(rng, 0.5, 1.5);
  if (!cplx) return uniform_int(rng, 0, 1) == 0 ? mag : -mag;
  return std::polar(mag, uniform(rng, -std::numbers::pi, std::numbers::pi));
}

CMatrix random_filter(Rng& rng, Eigen::Index r, Eigen::Index c, bool cplx, double density = 0.6) {
  CMatrix z = CMatrix::Zero(r, c);
  const CMatrix mask = random_mask(rng, r, c, density);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) {
      if (mask(i, j) != Complex(0.0, 0.0)) z(i, j) = random_entry(rng, cplx);
    }
  }
  if (z.cwiseAbs().maxCoeff() == 0.0) z(uniform_int(rng, 0, static_cast<int>(r) - 1), uniform_int(rng, 0, static_cast<int>(c) - 1)) = random_entry(rng, cplx);
  return z;
}

FilterSet random_filters(Rng& rng, Eigen::Index r, Eigen::Index c, int count, bool cplx) {
  FilterSet z;
  for (int j = 0; j < count; ++j) z.push_back(random_filter(rng, r, c, cplx));
  return z;
}

CMatrix support(const FilterSet& z) {
  CMatrix s = CMatrix::Zero(z[0].rows(), z[0].cols());
  for (const CMatrix& m : z) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != Complex(0.0, 0.0)) s(i, j) = 1.0;
      }
    }
  }
  return s;
}

/// Random matrix supported on the union of the filter supports.
CMatrix random_within(Rng& rng, const FilterSet& z, bool cplx) {
  const CMatrix s = support(z);
  CMatrix a = cplx ? random_complex(rng, s.rows(), s.cols()) : random_real(rng, s.rows(), s.cols());
  return schur(a, s);
}

struct Shape {
  Eigen::Index r, c;
  int filters;
  bool cplx;
};

Shape random_shape(Rng& rng, int max_dim = 4, int max_filters = 3) {
  return {uniform_int(rng, 1, max_dim), uniform_int(rng, 1, max_dim), uniform_int(rng, 1, max_filters),
          uniform_int(rng, 0, 1) == 1};
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix m = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

Trial p1(Rng& rng) {
  const Shape s = random_shape(rng);
  CMatrix a = random_filter(rng, s.r, s.c, s.cplx);
  const double self = g2(a, {a});
  const CMatrix b = s.cplx ? random_complex(rng, s.r, s.c) : random_real(rng, s.r, s.c);
  const FilterSet j{ones(s.r, s.c)};
  const double primal = gamma2(b).value.value;
  const double dual = filtered_gamma2_dual(b, j).value;
  return worst({eq(self, 1.0, "gamma2(A|{A})"), eq(primal, dual, "gamma2(A|{J}) primal vs dual")});
}

Trial p2(Rng& rng) {
  const Shape s = random_shape(rng);
  FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix sup = support(z);
  Trial t{0.0, 1.0, "ok"};
  if (filtered_gamma2(CMatrix::Zero(s.r, s.c), z).value.value != 0.0) return {-1.0, 1.0, "gamma2(0|Z) != 0"};
  const CMatrix a = random_within(rng, z, s.cplx);
  const ExtendedReal fa = filtered_gamma2(a, z).value;
  if (fa.infinite) return {-1.0, 1.0, "supported A reported infinite"};
  if (a.cwiseAbs().maxCoeff() > 0.0 && !(fa.value > 0.0)) return {-1.0, 1.0, "nonzero A has zero norm"};
  // move one entry off the support when there is room
  std::vector<std::pair<Eigen::Index, Eigen::Index>> holes;
  for (Eigen::Index j = 0; j < s.c; ++j) {
    for (Eigen::Index i = 0; i < s.r; ++i) {
      if (sup(i, j) == Complex(0.0, 0.0)) holes.emplace_back(i, j);
    }
  }
  if (!holes.empty()) {
    const auto [i, j] = holes[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(holes.size()) - 1))];
    CMatrix b = a;
    b(i, j) = 1e-3;
    if (!filtered_gamma2(b, z).value.infinite) return {-1.0, 1.0, "entry off the support not reported infinite"};
  }
  return t;
}

Trial p3(Rng& rng) {
  const Shape s = random_shape(rng);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix a = random_within(rng, z, s.cplx);
  const Complex c = s.cplx ? std::polar(uniform(rng, 0.3, 3.0), uniform(rng, -3.0, 3.0)) : Complex(uniform(rng, 0.3, 3.0));
  const double base = g2(a, z);
  FilterSet zs = z;
  for (CMatrix& m : zs) m *= c;
  return worst({eq(g2(c * a, z), std::abs(c) * base, "gamma2(sA|Z)"), eq(g2(a, zs), base / std::abs(c), "gamma2(A|sZ)")});
}

Trial p4(Rng& rng) {
  const Shape s = random_shape(rng);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix a = random_within(rng, z, s.cplx);
  const CMatrix b = random_within(rng, z, s.cplx);
  return leq(g2(a + b, z), g2(a, z) + g2(b, z), "triangle");
}

CMatrix duplicate(const CMatrix& m, Eigen::Index row, Eigen::Index col) {
  CMatrix r(m.rows() + 1, m.cols());
  r << m, m.row(row);
  CMatrix c(r.rows(), r.cols() + 1);
  c << r, r.col(col);
  return c;
}

Trial p5(Rng& rng) {
  const Shape s = random_shape(rng, 3);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix a = random_within(rng, z, s.cplx);
  const Eigen::Index row = uniform_int(rng, 0, static_cast<int>(s.r) - 1);
  const Eigen::Index col = uniform_int(rng, 0, static_cast<int>(s.c) - 1);
  FilterSet zd;
  for (const CMatrix& m : z) zd.push_back(duplicate(m, row, col));
  return eq(g2(duplicate(a, row, col), zd), g2(a, z), "duplication");
}

Trial p6(Rng& rng) {
  const Shape s = random_shape(rng, 4, 2);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix a = random_within(rng, z, s.cplx);
  const double base = g2(a, z);
  FilterSet yz = random_filters(rng, s.r, s.c, uniform_int(rng, 1, 2), s.cplx);
  yz.insert(yz.end(), z.begin(), z.end());
  // rectangular restrictions of the Z_j
  FilterSet rz = z;
  for (int k = uniform_int(rng, 1, 2); k > 0; --k) {
    CMatrix y = z[static_cast<std::size_t>(uniform_int(rng, 0, s.filters - 1))];
    const CMatrix rows = random_mask(rng, s.r, 1, 0.6);
    const CMatrix cols = random_mask(rng, 1, s.c, 0.6);
    y = schur(y, rows * cols);
    rz.insert(rz.begin(), y);
  }
  return worst({leq(g2(a, yz), base, "union"), eq(g2(a, rz), base, "rectangular union")});
}

Trial p7(Rng& rng) {
  const Shape s = random_shape(rng);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix a = random_within(rng, z, s.cplx);
  std::vector<Complex> p;
  double total = 0.0;
  for (int j = 0; j < s.filters; ++j) {
    p.push_back(s.cplx ? std::polar(uniform(rng, 0.1, 1.0), uniform(rng, -3.0, 3.0)) : Complex(uniform(rng, -1.0, 1.0)));
    total += std::abs(p.back());
  }
  CMatrix hull = CMatrix::Zero(s.r, s.c);
  for (int j = 0; j < s.filters; ++j) hull += (p[static_cast<std::size_t>(j)] / total) * z[static_cast<std::size_t>(j)];
  FilterSet zh = z;
  zh.push_back(hull);
  return eq(g2(a, zh), g2(a, z), "convex hull");
}

Trial p8(Rng& rng) {
  const Eigen::Index r = uniform_int(rng, 2, 4);
  const Eigen::Index c = uniform_int(rng, 2, 4);
  const bool cplx = uniform_int(rng, 0, 1) == 1;
  // split rows and columns into two nonempty parts
  const Eigen::Index rs = uniform_int(rng, 1, static_cast<int>(r) - 1);
  const Eigen::Index cs = uniform_int(rng, 1, static_cast<int>(c) - 1);
  CMatrix z1 = CMatrix::Zero(r, c);
  CMatrix z2 = CMatrix::Zero(r, c);
  z1.topLeftCorner(rs, cs) = random_filter(rng, rs, cs, cplx, 0.8);
  z2.bottomRightCorner(r - rs, c - cs) = random_filter(rng, r - rs, c - cs, cplx, 0.8);
  FilterSet z{z1, z2};
  for (int k = uniform_int(rng, 0, 1); k > 0; --k) z.push_back(random_filter(rng, r, c, cplx));
  const CMatrix a = random_within(rng, z, cplx);
  FilterSet merged{z1 + z2};
  merged.insert(merged.end(), z.begin() + 2, z.end());
  return eq(g2(a, merged), g2(a, z), "row/column-disjoint merge");
}

Trial p9(Rng& rng) {
  const Shape s = random_shape(rng);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix a = random_within(rng, z, s.cplx);
  const CMatrix b = uniform_int(rng, 0, 1) == 1 ? random_mask(rng, s.r, s.c, 0.6) : random_complex(rng, s.r, s.c);
  return leq(g2(schur(a, b), z), g2(a, z) * gamma2(b).value.value, "gamma2(A o B|Z) <= gamma2(A|Z) gamma2(B)");
}

Trial p10(Rng& rng) {
  const Shape s = random_shape(rng);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  const CMatrix a = random_within(rng, z, s.cplx);
  CMatrix b(s.r, s.c);
  for (Eigen::Index j = 0; j < s.c; ++j) {
    for (Eigen::Index i = 0; i < s.r; ++i) b(i, j) = random_entry(rng, s.cplx);
  }
  FilterSet zb;
  for (const CMatrix& m : z) zb.push_back(schur(m, b));
  const double mid = g2(a, z);
  return worst({leq(g2(schur(a, b), zb), mid, "gamma2(A o B|Z o B) <= gamma2(A|Z)"),
                leq(mid, g2(a, zb) * gamma2(b).value.value, "gamma2(A|Z) <= gamma2(A|Z o B) gamma2(B)")});
}

Trial p11(Rng& rng) {
  const Shape s = random_shape(rng, 3, 2);
  const FilterSet z = random_filters(rng, s.r, s.c, s.filters, s.cplx);
  FilterSet y;
  for (int k = uniform_int(rng, 1, 2); k > 0; --k) y.push_back(random_within(rng, z, s.cplx));
  if (support(y).cwiseAbs().maxCoeff() == 0.0) y[0] = z[0];
  const CMatrix a = random_within(rng, y, s.cplx);
  double inner = 0.0;
  for (const CMatrix& m : y) inner = std::max(inner, g2(m, z));
  return leq(g2(a, z), g2(a, y) * inner, "composition");
}

Trial p12(Rng& rng) {
  const int count = uniform_int(rng, 1, 2);
  const bool cplx = uniform_int(rng, 0, 1) == 1;
  const Shape sa = random_shape(rng, 3);
  const Shape sb = random_shape(rng, 3);
  const FilterSet y = random_filters(rng, sa.r, sa.c, count, cplx);
  const FilterSet z = random_filters(rng, sb.r, sb.c, count, cplx);
  const CMatrix a = random_within(rng, y, cplx);
  const CMatrix b = random_within(rng, z, cplx);
  FilterSet yz;
  for (int j = 0; j < count; ++j) yz.push_back(block_diag(y[static_cast<std::size_t>(j)], z[static_cast<std::size_t>(j)]));
  return eq(g2(block_diag(a, b), yz), std::max(g2(a, y), g2(b, z)), "direct sum");
}

Trial p13(Rng& rng) {
  const bool cplx = uniform_int(rng, 0, 1) == 1;
  const FilterSet y = random_filters(rng, 2, 2, uniform_int(rng, 1, 2), cplx);
  const FilterSet z = random_filters(rng, 2, 2, uniform_int(rng, 1, 2), cplx);
  const CMatrix a = random_within(rng, y, cplx);
  const CMatrix b = random_within(rng, z, cplx);
  FilterSet yz;
  for (const CMatrix& yi : y) {
    for (const CMatrix& zj : z) yz.push_back(kron(yi, zj));
  }
  return eq(g2(kron(a, b), yz), g2(a, y) * g2(b, z), "tensor product");
}

}  // namespace

std::vector<PropertyOutcome> property_suite(int trials, std::uint64_t seed, double tol) {
  if (trials < 1) throw InputError("property_suite: trials must be at least 1");
  const std::vector<std::pair<std::string, std::function<Trial(Rng&)>>> props = {
      {"special cases", p1},          {"extremes", p2},         {"positive scalability", p3},
      {"triangle inequality", p4},    {"duplication", p5},      {"union", p6},
      {"convex hull", p7},            {"row/column-disjoint", p8}, {"Schur product with gamma2", p9},
      {"filter Schur product", p10},  {"composition", p11},     {"direct sum", p12},
      {"tensor product", p13},
  };
  std::vector<PropertyOutcome> out;
  for (std::size_t k = 0; k < props.size(); ++k) {
    PropertyOutcome o;
    o.id = static_cast<int>(k) + 1;
    o.name = props[k].first;
    o.trials = trials;
    o.worst_margin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      Rng rng = make_rng(seed, {k + 1, static_cast<std::uint64_t>(t)});
      Trial r;
      try {
        r = props[k].second(rng);
      } catch (const std::exception& e) {
        r = {-std::numeric_limits<double>::infinity(), 1.0, e.what()};
      }
      o.worst_margin = std::min(o.worst_margin, r.margin);
      if (!(r.margin >= -tol * r.scale)) {
        if (o.failures == 0) o.first_failure = "trial " + std::to_string(t) + ": " + r.detail;
        ++o.failures;
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace stateconv
