#pragma once

#include <memory>
#include <vector>

#include "subalg/linops.hpp"

namespace subalg {

// One coefficient of A_i; Hermitian partners are stored explicitly.
struct SdpEntry {
  int block;
  int row;
  int col;
  cd val;
};

// Dual form: maximize b.y subject to S_k = C_k - sum_i y_i A_{i,k} >= 0 for every block k.
// Primal: minimize <C, X> subject to <A_i, X> = b_i, X >= 0, with <A, X> = Re tr(A X).
struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<Mat> c;
  std::vector<std::vector<SdpEntry>> a;
  RVec b;

  int num_vars() const { return static_cast<int>(a.size()); }
  int num_blocks() const { return static_cast<int>(block_sizes.size()); }
};

class SdpBuilder {
 public:
  int add_block(int size);
  int add_var(double objective);
  void set_objective(int var, double objective) { b_[var] = objective; }
  // C[r,c] += v and, off the diagonal, C[c,r] += conj(v).
  void add_c(int block, int r, int c, cd v);
  // A_var[r,c] += v and its Hermitian partner.
  void add_a(int var, int block, int r, int c, cd v);
  // Convenience for the "F0 + sum y F >= 0" convention: adds F to -A.
  void add_f(int var, int block, int r, int c, cd v) { add_a(var, block, r, c, -v); }
  void add_f0(int block, int r, int c, cd v) { add_c(block, r, c, v); }
  int num_vars() const { return static_cast<int>(b_.size()); }
  std::shared_ptr<const SdpProblem> build() const;

 private:
  std::vector<int> sizes_;
  std::vector<Mat> c_;
  std::vector<std::vector<SdpEntry>> a_;
  std::vector<double> b_;
};

struct SdpOptions {
  double tol = 1e-7;
  int max_iter = 500;
  bool parallel = true;
};

struct SolverCertificate {
  std::shared_ptr<const SdpProblem> problem;
  std::vector<Mat> x;  // primal
  RVec y;              // dual
  double primal_objective = 0;
  double dual_objective = 0;
  double gap = 0;  // relative
  double primal_infeasibility = 0;
  double dual_infeasibility = 0;
  int iterations = 0;
  double tol = 0;
};

SolverCertificate solve_sdp(std::shared_ptr<const SdpProblem> p, const SdpOptions& opts = {});

struct VerifyReport {
  bool ok = false;
  double primal_infeasibility = 0;
  double dual_min_eigenvalue = 0;
  double primal_min_eigenvalue = 0;
  double gap = 0;
};

// Recomputes S from y and checks both feasibilities and the gap from scratch.
VerifyReport verify(const SolverCertificate& cert);

// Slack S = C - sum y_i A_i.
std::vector<Mat> dual_slack(const SdpProblem& p, const RVec& y);
// (<A_i, X>)_i.
RVec apply_a(const SdpProblem& p, const std::vector<Mat>& x);

// Schur complement M_ij = Re tr(A_i X A_j S^-1).
Eigen::MatrixXd schur_reference(const SdpProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& sinv);
Eigen::MatrixXd schur_parallel(const SdpProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& sinv);

}  // namespace subalg
