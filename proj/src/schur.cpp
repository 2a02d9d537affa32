#include <algorithm>

#include "subalg/sdp.hpp"

namespace subalg {

Eigen::MatrixXd schur_reference(const SdpProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& sinv) {
  int m = p.num_vars();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      cd acc = 0;
      for (const auto& ei : p.a[i])
        for (const auto& ej : p.a[j]) {
          if (ei.block != ej.block) continue;
          acc += ei.val * ej.val * x[ei.block](ei.col, ej.row) * sinv[ei.block](ej.col, ei.row);
        }
      out(i, j) = out(j, i) = acc.real();
    }
  return out;
}

Eigen::MatrixXd schur_parallel(const SdpProblem& p, const std::vector<Mat>& x, const std::vector<Mat>& sinv) {
  int m = p.num_vars();
  // Entries of each A_i sorted by block, so pairs only meet inside shared blocks.
  std::vector<std::vector<SdpEntry>> sorted(p.a);
  for (auto& v : sorted) std::stable_sort(v.begin(), v.end(), [](const SdpEntry& a, const SdpEntry& b) { return a.block < b.block; });

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
#pragma omp parallel for schedule(dynamic, 8) if (m >= 64)
  for (int i = 0; i < m; ++i) {
    const auto& ai = sorted[i];
    for (int j = i; j < m; ++j) {
      const auto& aj = sorted[j];
      cd acc = 0;
      size_t u = 0, v = 0;
      while (u < ai.size() && v < aj.size()) {
        int k = ai[u].block;
        if (aj[v].block < k) {
          ++v;
          continue;
        }
        if (aj[v].block > k) {
          ++u;
          continue;
        }
        size_t u_end = u, v_end = v;
        while (u_end < ai.size() && ai[u_end].block == k) ++u_end;
        while (v_end < aj.size() && aj[v_end].block == k) ++v_end;
        const Mat& xk = x[k];
        const Mat& sk = sinv[k];
        for (size_t a = u; a < u_end; ++a)
          for (size_t b = v; b < v_end; ++b)
            acc += ai[a].val * aj[b].val * xk(ai[a].col, aj[b].row) * sk(aj[b].col, ai[a].row);
        u = u_end;
        v = v_end;
      }
      out(i, j) = out(j, i) = acc.real();
    }
  }
  return out;
}

}  // namespace subalg
