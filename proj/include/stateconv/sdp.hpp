#pragma once

// Small dense semidefinite programs in canonical primal form
//
//   minimize  <C, X>
//   s.t.      <A_i, X> = b_i,   i = 1..m
//             X block diagonal; psd blocks X_k >= 0, nonneg blocks are
//             diagonal with nonnegative entries, free blocks diagonal.
//
// with dual
//
//   maximize  b^T y   s.t.   C - sum_i y_i A_i = S,  S >= 0 on psd/nonneg
//                                                  blocks, S = 0 on free.
//
// Solved by a primal-dual path-following interior point method (HKM search
// direction, Mehrotra predictor-corrector) on dense blocks.

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace stateconv::sdp {

enum class BlockKind { psd, nonneg, free };

struct Block {
  BlockKind kind = BlockKind::psd;
  int size = 0;
};

/// One entry of a symmetric block-diagonal matrix. Off-diagonal entries stand
/// for both (row, col) and (col, row); nonneg and free blocks only accept
/// row == col.
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct SymSparse {
  std::vector<Entry> entries;

  void add(int block, int row, int col, double value);
  bool empty() const { return entries.empty(); }
};

struct Constraint {
  SymSparse a;
  double rhs = 0.0;
};

struct Program {
  std::vector<Block> blocks;
  SymSparse objective;
  std::vector<Constraint> constraints;

  int add_block(BlockKind kind, int size);
  int total_dim() const;
  /// Throws InputError on entries outside their block or misplaced
  /// off-diagonal entries in diagonal blocks.
  void validate() const;
};

enum class Status { optimal, infeasible, unbounded, max_iter };

std::string to_string(Status s);

struct Settings {
  double gap_tol = 1e-7;   // relative: |p - d| / (1 + |p|)
  double feas_tol = 1e-8;  // relative primal and dual residuals
  int max_iter = 200;
  int dim_cap = 1024;
};

/// Block values: psd blocks as square matrices, nonneg/free blocks as
/// column vectors holding the diagonal.
using BlockValues = std::vector<Eigen::MatrixXd>;

struct Result {
  Status status = Status::max_iter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  BlockValues x;
  Eigen::VectorXd y;
  BlockValues s;
  double gap = 0.0;       // |primal - dual| / (1 + |primal|)
  double residual = 0.0;  // max of relative primal and dual residuals
  int iterations = 0;
  std::string diagnostics;
  /// For infeasible: a Farkas ray y with b^T y = 1 and -A^T y >= 0 (approx).
  /// For unbounded: a primal ray X with <C, X> = -1 and A(X) = 0 (approx).
  Eigen::VectorXd infeasibility_ray;
  BlockValues unbounded_ray;
};

Result solve(const Program& p, const Settings& settings = {});

/// <M, X> for a sparse symmetric M against dense block values.
double inner(const SymSparse& m, const BlockValues& x);

/// Minimum eigenvalue over psd blocks and minimum entry over nonneg blocks.
double min_cone_eigenvalue(const Program& p, const BlockValues& x);

/// Writes the program as plain text for cross-checking with external
/// solvers. Layout:
///   sdp 1
///   blocks <count>
///   <kind> <size>                  (one line per block; kind psd|nonneg|free)
///   constraints <m>
///   rhs <b_1> ... <b_m>
///   <c> <block> <i> <j> <value>    (one line per entry; c = 0 objective,
///                                   c >= 1 constraint index, 0-based i, j)
void dump(const Program& p, std::ostream& out);

/// Inverse of dump.
Program parse_dump(std::istream& in);

}  // namespace stateconv::sdp
