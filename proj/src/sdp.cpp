#include "stateconv/sdp.hpp"

#include "stateconv/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace stateconv::sdp {

void SymSparse::add(int block, int row, int col, double value) {
  if (value == 0.0) return;
  if (row > col) std::swap(row, col);
  entries.push_back({block, row, col, value});
}

int Program::add_block(BlockKind kind, int size) {
  blocks.push_back({kind, size});
  return static_cast<int>(blocks.size()) - 1;
}

int Program::total_dim() const {
  int n = 0;
  for (const Block& b : blocks) n += b.size;
  return n;
}

namespace {

void validate_matrix(const Program& p, const SymSparse& m, const std::string& what) {
  for (const Entry& e : m.entries) {
    if (e.block < 0 || e.block >= static_cast<int>(p.blocks.size())) {
      throw InputError(what + ": entry refers to missing block " + std::to_string(e.block));
    }
    const Block& b = p.blocks[static_cast<std::size_t>(e.block)];
    if (e.row < 0 || e.col < 0 || e.row >= b.size || e.col >= b.size) {
      throw InputError(what + ": entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                       ") outside block " + std::to_string(e.block));
    }
    if (b.kind != BlockKind::psd && e.row != e.col) {
      throw InputError(what + ": off-diagonal entry in diagonal block " + std::to_string(e.block));
    }
    if (!std::isfinite(e.value)) throw InputError(what + ": non-finite entry");
  }
}

}  // namespace

void Program::validate() const {
  for (const Block& b : blocks) {
    if (b.size <= 0) throw InputError("sdp: block sizes must be positive");
  }
  validate_matrix(*this, objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    validate_matrix(*this, constraints[i].a, "constraint " + std::to_string(i));
    if (!std::isfinite(constraints[i].rhs)) throw InputError("sdp: non-finite right-hand side");
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::max_iter: return "max_iter";
  }
  return "unknown";
}

double inner(const SymSparse& m, const BlockValues& x) {
  double acc = 0.0;
  for (const Entry& e : m.entries) {
    const Eigen::MatrixXd& xb = x[static_cast<std::size_t>(e.block)];
    if (xb.cols() == 1 && e.row == e.col) {
      acc += e.value * xb(e.row, 0);
    } else if (e.row == e.col) {
      acc += e.value * xb(e.row, e.row);
    } else {
      acc += e.value * (xb(e.row, e.col) + xb(e.col, e.row));
    }
  }
  return acc;
}

double min_cone_eigenvalue(const Program& p, const BlockValues& x) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k].kind == BlockKind::psd) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x[k], Eigen::EigenvaluesOnly);
      lo = std::min(lo, es.eigenvalues()(0));
    } else if (p.blocks[k].kind == BlockKind::nonneg) {
      lo = std::min(lo, x[k].minCoeff());
    }
  }
  return lo;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Ent {
  int r;
  int c;
  double v;
};

// Internal program: free blocks are split into nonneg pairs x = x+ - x-.
struct Work {
  std::vector<Block> blocks;          // psd or nonneg only
  std::vector<int> origin_block;      // internal -> original
  std::vector<int> internal_block;    // original -> internal
  std::vector<bool> split_free;       // original block was free
  // a[i]: (internal block, fully expanded entries)
  std::vector<std::vector<std::pair<int, std::vector<Ent>>>> a;
  // per internal block, (constraint index, position in a[i])
  std::vector<std::vector<std::pair<int, int>>> by_block;
  std::vector<std::vector<Ent>> c;  // objective, per internal block
  VectorXd b;
  int m = 0;
  double n_total = 0.0;
};

void expand_into(std::vector<std::vector<Ent>>& per_block, const Entry& e, const Work& w,
                 const std::vector<Block>& original) {
  const int ib = w.internal_block[static_cast<std::size_t>(e.block)];
  auto& dst = per_block[static_cast<std::size_t>(ib)];
  if (original[static_cast<std::size_t>(e.block)].kind == BlockKind::free) {
    const int half = original[static_cast<std::size_t>(e.block)].size;
    dst.push_back({e.row, e.row, e.value});
    dst.push_back({e.row + half, e.row + half, -e.value});
    return;
  }
  dst.push_back({e.row, e.col, e.value});
  if (e.row != e.col) dst.push_back({e.col, e.row, e.value});
}

Work build_work(const Program& p) {
  Work w;
  w.internal_block.resize(p.blocks.size());
  w.split_free.resize(p.blocks.size());
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const Block& b = p.blocks[k];
    w.internal_block[k] = static_cast<int>(w.blocks.size());
    w.split_free[k] = b.kind == BlockKind::free;
    if (b.kind == BlockKind::free) {
      w.blocks.push_back({BlockKind::nonneg, 2 * b.size});
    } else {
      w.blocks.push_back(b);
    }
    w.origin_block.push_back(static_cast<int>(k));
  }
  const std::size_t nb = w.blocks.size();
  w.m = static_cast<int>(p.constraints.size());
  w.b.resize(w.m);
  w.a.resize(static_cast<std::size_t>(w.m));
  w.by_block.resize(nb);
  for (int i = 0; i < w.m; ++i) {
    const Constraint& con = p.constraints[static_cast<std::size_t>(i)];
    w.b(i) = con.rhs;
    std::vector<std::vector<Ent>> per_block(nb);
    for (const Entry& e : con.a.entries) expand_into(per_block, e, w, p.blocks);
    for (std::size_t k = 0; k < nb; ++k) {
      if (per_block[k].empty()) continue;
      auto& row = w.a[static_cast<std::size_t>(i)];
      w.by_block[k].emplace_back(i, static_cast<int>(row.size()));
      row.emplace_back(static_cast<int>(k), std::move(per_block[k]));
    }
  }
  w.c.resize(nb);
  for (const Entry& e : p.objective.entries) expand_into(w.c, e, w, p.blocks);
  for (const Block& b : w.blocks) w.n_total += b.size;
  return w;
}

bool is_psd(const Work& w, std::size_t k) { return w.blocks[k].kind == BlockKind::psd; }

BlockValues zeros(const Work& w) {
  BlockValues out;
  for (const Block& b : w.blocks) {
    if (b.kind == BlockKind::psd) {
      out.emplace_back(MatrixXd::Zero(b.size, b.size));
    } else {
      out.emplace_back(MatrixXd::Zero(b.size, 1));
    }
  }
  return out;
}

void add_ents(MatrixXd& dst, const std::vector<Ent>& ents, double scale, bool psd) {
  for (const Ent& e : ents) {
    if (psd) {
      dst(e.r, e.c) += scale * e.v;
    } else {
      dst(e.r, 0) += scale * e.v;
    }
  }
}

double apply_ents(const std::vector<Ent>& ents, const MatrixXd& k, bool psd) {
  double acc = 0.0;
  for (const Ent& e : ents) acc += psd ? e.v * k(e.c, e.r) : e.v * k(e.r, 0);
  return acc;
}

VectorXd apply_a(const Work& w, const BlockValues& k) {
  VectorXd out(w.m);
  for (int i = 0; i < w.m; ++i) {
    double acc = 0.0;
    for (const auto& [blk, ents] : w.a[static_cast<std::size_t>(i)]) {
      acc += apply_ents(ents, k[static_cast<std::size_t>(blk)], is_psd(w, static_cast<std::size_t>(blk)));
    }
    out(i) = acc;
  }
  return out;
}

BlockValues apply_at(const Work& w, const VectorXd& y) {
  BlockValues out = zeros(w);
  for (int i = 0; i < w.m; ++i) {
    if (y(i) == 0.0) continue;
    for (const auto& [blk, ents] : w.a[static_cast<std::size_t>(i)]) {
      add_ents(out[static_cast<std::size_t>(blk)], ents, y(i), is_psd(w, static_cast<std::size_t>(blk)));
    }
  }
  return out;
}

BlockValues dense_c(const Work& w) {
  BlockValues out = zeros(w);
  for (std::size_t k = 0; k < w.blocks.size(); ++k) add_ents(out[k], w.c[k], 1.0, is_psd(w, k));
  return out;
}

double block_inner(const Work& w, const BlockValues& x, const BlockValues& s) {
  double acc = 0.0;
  for (std::size_t k = 0; k < w.blocks.size(); ++k) acc += (x[k].array() * s[k].array()).sum();
  (void)w;
  return acc;
}

double frob(const BlockValues& x) {
  double acc = 0.0;
  for (const MatrixXd& m : x) acc += m.squaredNorm();
  return std::sqrt(acc);
}

void axpy(BlockValues& x, double alpha, const BlockValues& d) {
  for (std::size_t k = 0; k < x.size(); ++k) x[k] += alpha * d[k];
}

// Largest alpha with x + alpha d still in the cone (infinity if unbounded).
double max_step(const Work& w, const BlockValues& x, const BlockValues& d) {
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < w.blocks.size(); ++k) {
    if (is_psd(w, k)) {
      Eigen::LLT<MatrixXd> llt(x[k]);
      if (llt.info() != Eigen::Success) return 0.0;
      const MatrixXd l = llt.matrixL();
      MatrixXd t = l.triangularView<Eigen::Lower>().solve(d[k]);
      t = l.triangularView<Eigen::Lower>().solve(t.transpose()).transpose();
      const MatrixXd sym = 0.5 * (t + t.transpose());
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym, Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues()(0);
      if (lmin < 0.0) step = std::min(step, -1.0 / lmin);
    } else {
      for (Eigen::Index i = 0; i < x[k].rows(); ++i) {
        if (d[k](i, 0) < 0.0) step = std::min(step, -x[k](i, 0) / d[k](i, 0));
      }
    }
  }
  return step;
}

struct Factor {
  BlockValues s_inv;
  Eigen::LDLT<MatrixXd> ldlt;
  Eigen::LLT<MatrixXd> llt;
  bool use_llt = true;

  VectorXd solve(const VectorXd& r) const { return use_llt ? VectorXd(llt.solve(r)) : VectorXd(ldlt.solve(r)); }
};

bool factorize(const Work& w, const BlockValues& x, const BlockValues& s, Factor& f) {
  f.s_inv = zeros(w);
  for (std::size_t k = 0; k < w.blocks.size(); ++k) {
    if (is_psd(w, k)) {
      Eigen::LLT<MatrixXd> llt(s[k]);
      if (llt.info() != Eigen::Success) return false;
      f.s_inv[k] = llt.solve(MatrixXd::Identity(s[k].rows(), s[k].cols()));
      f.s_inv[k] = 0.5 * (f.s_inv[k] + f.s_inv[k].transpose());
    } else {
      f.s_inv[k] = s[k].cwiseInverse();
    }
  }

  MatrixXd m = MatrixXd::Zero(w.m, w.m);
  for (std::size_t k = 0; k < w.blocks.size(); ++k) {
    const auto& members = w.by_block[k];
    if (members.empty()) continue;
    if (is_psd(w, k)) {
      const MatrixXd& xb = x[k];
      const MatrixXd& si = f.s_inv[k];
      for (std::size_t p = 0; p < members.size(); ++p) {
        const auto [i, pi] = members[p];
        const auto& ai = w.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(pi)].second;
        for (std::size_t q = p; q < members.size(); ++q) {
          const auto [j, qj] = members[q];
          const auto& aj = w.a[static_cast<std::size_t>(j)][static_cast<std::size_t>(qj)].second;
          // tr(A_i X A_j S^-1) = sum A_i[a,b] X[b,c] A_j[c,d] S^-1[d,a]
          double acc = 0.0;
          for (const Ent& e : ai) {
            for (const Ent& g : aj) acc += e.v * g.v * xb(e.c, g.r) * si(g.c, e.r);
          }
          m(i, j) += acc;
          if (i != j) m(j, i) += acc;
        }
      }
    } else {
      // diagonal block: sum_k a_ik a_jk x_k / s_k
      const VectorXd scale = x[k].col(0).cwiseProduct(f.s_inv[k].col(0));
      std::vector<std::vector<std::pair<int, double>>> by_index(static_cast<std::size_t>(w.blocks[k].size));
      for (const auto& [i, pi] : members) {
        for (const Ent& e : w.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(pi)].second) {
          by_index[static_cast<std::size_t>(e.r)].emplace_back(i, e.v);
        }
      }
      for (std::size_t idx = 0; idx < by_index.size(); ++idx) {
        const auto& list = by_index[idx];
        const double sc = scale(static_cast<Eigen::Index>(idx));
        for (const auto& [i, vi] : list) {
          for (const auto& [j, vj] : list) m(i, j) += vi * vj * sc;
        }
      }
    }
  }

  f.llt.compute(m);
  f.use_llt = f.llt.info() == Eigen::Success;
  if (!f.use_llt) {
    const double reg = 1e-13 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
    m.diagonal().array() += reg;
    f.ldlt.compute(m);
    if (f.ldlt.info() != Eigen::Success) return false;
  }
  return true;
}

struct Direction {
  BlockValues dx;
  VectorXd dy;
  BlockValues ds;
};

Direction direction(const Work& w, const BlockValues& x, const Factor& f, const BlockValues& rd,
                    const VectorXd& rp, double sigma_mu, const BlockValues* corr) {
  BlockValues k = zeros(w);
  for (std::size_t b = 0; b < w.blocks.size(); ++b) {
    const MatrixXd& si = f.s_inv[b];
    if (is_psd(w, b)) {
      k[b] = sigma_mu * si - x[b] - x[b] * rd[b] * si;
    } else {
      k[b] = sigma_mu * si - x[b] - x[b].cwiseProduct(rd[b]).cwiseProduct(si);
    }
    if (corr != nullptr) k[b] -= (*corr)[b];
  }
  Direction d;
  d.dy = f.solve(rp - apply_a(w, k));
  d.ds = rd;
  const BlockValues aty = apply_at(w, d.dy);
  for (std::size_t b = 0; b < w.blocks.size(); ++b) d.ds[b] -= aty[b];
  d.dx = zeros(w);
  for (std::size_t b = 0; b < w.blocks.size(); ++b) {
    const MatrixXd& si = f.s_inv[b];
    if (is_psd(w, b)) {
      MatrixXd t = sigma_mu * si - x[b] - x[b] * d.ds[b] * si;
      if (corr != nullptr) t -= (*corr)[b];
      d.dx[b] = 0.5 * (t + t.transpose());
    } else {
      d.dx[b] = sigma_mu * si - x[b] - x[b].cwiseProduct(d.ds[b]).cwiseProduct(si);
      if (corr != nullptr) d.dx[b] -= (*corr)[b];
    }
  }
  return d;
}

BlockValues to_original(const Program& p, const Work& w, const BlockValues& v, bool difference) {
  BlockValues out;
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const MatrixXd& iv = v[static_cast<std::size_t>(w.internal_block[k])];
    if (w.split_free[k]) {
      const int h = p.blocks[k].size;
      out.emplace_back(difference ? MatrixXd(iv.topRows(h) - iv.bottomRows(h)) : MatrixXd(iv.topRows(h)));
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

Result solve(const Program& p, const Settings& settings) {
  p.validate();
  if (p.total_dim() > settings.dim_cap) {
    throw InputError("sdp: total dimension " + std::to_string(p.total_dim()) + " exceeds cap " +
                     std::to_string(settings.dim_cap));
  }
  const Work w = build_work(p);
  const BlockValues c = dense_c(w);
  const double norm_b = w.b.norm();
  const double norm_c = frob(c);

  // Starting point scaled to the data.
  BlockValues x = zeros(w);
  BlockValues s = zeros(w);
  VectorXd y = VectorXd::Zero(w.m);
  for (std::size_t k = 0; k < w.blocks.size(); ++k) {
    const double n = w.blocks[k].size;
    double xi = std::max(10.0, std::sqrt(n));
    double eta = std::max({10.0, std::sqrt(n), std::sqrt((c[k].array() * c[k].array()).sum())});
    for (const auto& [i, pi] : w.by_block[k]) {
      double fro = 0.0;
      for (const Ent& e : w.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(pi)].second) fro += e.v * e.v;
      fro = std::sqrt(fro);
      xi = std::max(xi, n * (1.0 + std::abs(w.b(i))) / (1.0 + fro));
      eta = std::max(eta, fro);
    }
    if (is_psd(w, k)) {
      x[k] = xi * MatrixXd::Identity(w.blocks[k].size, w.blocks[k].size);
      s[k] = eta * MatrixXd::Identity(w.blocks[k].size, w.blocks[k].size);
    } else {
      x[k].setConstant(xi);
      s[k].setConstant(eta);
    }
  }

  Result res;
  int stalls = 0;
  for (int iter = 0;; ++iter) {
    const VectorXd rp = w.b - apply_a(w, x);
    BlockValues rd = c;
    {
      const BlockValues aty = apply_at(w, y);
      for (std::size_t k = 0; k < rd.size(); ++k) rd[k] -= s[k] + aty[k];
    }
    const double pobj = block_inner(w, c, x);
    const double dobj = w.b.dot(y);
    const double pinf = rp.norm() / (1.0 + norm_b);
    const double dinf = frob(rd) / (1.0 + norm_c);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const double mu = block_inner(w, x, s) / w.n_total;

    res.iterations = iter;
    res.primal_value = pobj;
    res.dual_value = dobj;
    res.gap = gap;
    res.residual = std::max(pinf, dinf);

    if (pinf <= settings.feas_tol && dinf <= settings.feas_tol && gap <= settings.gap_tol) {
      res.status = Status::optimal;
      break;
    }
    const double big = 1e8;
    if (dobj > big * (1.0 + norm_c) && dinf * (1.0 + norm_c) < 1e-6 * std::abs(dobj)) {
      res.status = Status::infeasible;
      res.infeasibility_ray = y / dobj;
      res.diagnostics = "dual objective diverged; primal infeasible";
      break;
    }
    if (-pobj > big * (1.0 + norm_b) && pinf * (1.0 + norm_b) < 1e-6 * std::abs(pobj)) {
      res.status = Status::unbounded;
      res.unbounded_ray = to_original(p, w, x, true);
      for (auto& m : res.unbounded_ray) m /= -pobj;
      res.diagnostics = "primal objective diverged; problem unbounded";
      break;
    }
    if (iter >= settings.max_iter) {
      res.status = Status::max_iter;
      res.diagnostics = "iteration limit reached";
      break;
    }

    Factor f;
    if (!factorize(w, x, s, f)) {
      res.status = Status::max_iter;
      res.diagnostics = "factorization breakdown at iteration " + std::to_string(iter);
      break;
    }

    // Predictor.
    const Direction aff = direction(w, x, f, rd, rp, 0.0, nullptr);
    const double ap_aff = std::min(1.0, max_step(w, x, aff.dx));
    const double ad_aff = std::min(1.0, max_step(w, s, aff.ds));
    BlockValues x_aff = x;
    BlockValues s_aff = s;
    axpy(x_aff, ap_aff, aff.dx);
    axpy(s_aff, ad_aff, aff.ds);
    const double mu_aff = std::max(0.0, block_inner(w, x_aff, s_aff)) / w.n_total;
    double sigma = std::pow(mu_aff / mu, 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    BlockValues corr = zeros(w);
    for (std::size_t k = 0; k < w.blocks.size(); ++k) {
      if (is_psd(w, k)) {
        corr[k] = aff.dx[k] * aff.ds[k] * f.s_inv[k];
      } else {
        corr[k] = aff.dx[k].cwiseProduct(aff.ds[k]).cwiseProduct(f.s_inv[k]);
      }
    }
    const Direction d = direction(w, x, f, rd, rp, sigma * mu, &corr);
    const double tau = std::min(0.995, 0.9 + 0.09 * std::min(ap_aff, ad_aff));
    const double ap = std::min(1.0, tau * max_step(w, x, d.dx));
    const double ad = std::min(1.0, tau * max_step(w, s, d.ds));
    if (ap < 1e-12 && ad < 1e-12) {
      if (++stalls >= 3) {
        res.status = Status::max_iter;
        res.diagnostics = "step length collapsed at iteration " + std::to_string(iter);
        break;
      }
    } else {
      stalls = 0;
    }
    axpy(x, ap, d.dx);
    y += ad * d.dy;
    axpy(s, ad, d.ds);
    for (std::size_t k = 0; k < w.blocks.size(); ++k) {
      if (is_psd(w, k)) {
        x[k] = 0.5 * (x[k] + x[k].transpose());
        s[k] = 0.5 * (s[k] + s[k].transpose());
      }
    }
  }

  res.x = to_original(p, w, x, true);
  res.s = to_original(p, w, s, false);
  res.y = y;
  if (res.diagnostics.empty()) {
    std::ostringstream os;
    os << "iterations=" << res.iterations << " gap=" << res.gap << " residual=" << res.residual;
    res.diagnostics = os.str();
  }
  return res;
}

namespace {

const char* kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::psd: return "psd";
    case BlockKind::nonneg: return "nonneg";
    case BlockKind::free: return "free";
  }
  return "psd";
}

}  // namespace

void dump(const Program& p, std::ostream& out) {
  out.precision(17);
  out << "sdp 1\n";
  out << "blocks " << p.blocks.size() << "\n";
  for (const Block& b : p.blocks) out << kind_name(b.kind) << " " << b.size << "\n";
  out << "constraints " << p.constraints.size() << "\n";
  out << "rhs";
  for (const Constraint& con : p.constraints) out << " " << con.rhs;
  out << "\n";
  for (const Entry& e : p.objective.entries) {
    out << 0 << " " << e.block << " " << e.row << " " << e.col << " " << e.value << "\n";
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    for (const Entry& e : p.constraints[i].a.entries) {
      out << i + 1 << " " << e.block << " " << e.row << " " << e.col << " " << e.value << "\n";
    }
  }
}

Program parse_dump(std::istream& in) {
  Program p;
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "sdp" || version != 1) throw InputError("sdp dump: bad header");
  std::size_t nblocks = 0;
  if (!(in >> tag >> nblocks) || tag != "blocks") throw InputError("sdp dump: expected 'blocks'");
  for (std::size_t k = 0; k < nblocks; ++k) {
    std::string kind;
    int size = 0;
    if (!(in >> kind >> size)) throw InputError("sdp dump: truncated block list");
    if (kind == "psd") {
      p.add_block(BlockKind::psd, size);
    } else if (kind == "nonneg") {
      p.add_block(BlockKind::nonneg, size);
    } else if (kind == "free") {
      p.add_block(BlockKind::free, size);
    } else {
      throw InputError("sdp dump: unknown block kind '" + kind + "'");
    }
  }
  std::size_t m = 0;
  if (!(in >> tag >> m) || tag != "constraints") throw InputError("sdp dump: expected 'constraints'");
  p.constraints.resize(m);
  if (!(in >> tag) || tag != "rhs") throw InputError("sdp dump: expected 'rhs'");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(in >> p.constraints[i].rhs)) throw InputError("sdp dump: truncated rhs");
  }
  std::size_t which = 0;
  Entry e;
  while (in >> which >> e.block >> e.row >> e.col >> e.value) {
    if (which > m) throw InputError("sdp dump: constraint index out of range");
    SymSparse& dst = which == 0 ? p.objective : p.constraints[which - 1].a;
    dst.entries.push_back(e);
  }
  if (!in.eof()) throw InputError("sdp dump: malformed entry line");
  p.validate();
  return p;
}

}  // namespace stateconv::sdp
