#pragma once

// Real parametrizations of matrix-valued SDP variables and their placement
// inside LMI blocks. Used by the problem assemblers.

#include <vector>

#include "subalg/algebra.hpp"
#include "subalg/sdp.hpp"

namespace subalg {

// Hermitian n x n matrix: diagonal entries one real each, strict upper
// triangle a (re, im) pair each.
struct HermVar {
  int n = 0;
  std::vector<int> ids;

  static HermVar make(SdpBuilder& sb, int n, double trace_objective = 0.0);
  // Adds coef * H at rows/cols [r0, r0 + n) of a block, in the F convention.
  void place(SdpBuilder& sb, int block, int r0, cd coef = 1.0) const;
  // Adds coef * tr(H) to entry (r, r).
  void place_trace(SdpBuilder& sb, int block, int r, double coef = 1.0) const;
  // Entry (r, r) += coef * Re tr(H A) for Hermitian A.
  void place_re_trace(SdpBuilder& sb, int block, int r, const Mat& a, double coef = 1.0) const;
  Mat value(const RVec& y) const;

  // Calls f(a, b, id_re, id_im) for every parameter, a <= b; id_im is -1 on the diagonal.
  template <class F>
  void for_each(F f) const {
    int k = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        if (a == b) {
          f(a, a, ids[k], -1);
          k += 1;
        } else {
          f(a, b, ids[k], ids[k + 1]);
          k += 2;
        }
      }
  }
};

// Complex rows x cols matrix.
struct CplxVar {
  int rows = 0, cols = 0;
  std::vector<int> re, im;

  static CplxVar make(SdpBuilder& sb, int rows, int cols);
  // Adds coef * Z at (r0 + i, c0 + j) and its adjoint in the mirrored position.
  void place(SdpBuilder& sb, int block, int r0, int c0, cd coef = 1.0) const;
  // Objective += Re tr(A Z) for a (cols x rows) matrix A.
  void add_re_trace_objective(SdpBuilder& sb, const Mat& a, double coef = 1.0) const;
  // Entry (r, r) += coef * Re tr(A Z).
  void place_re_trace(SdpBuilder& sb, int block, int r, const Mat& a, double coef = 1.0) const;
  Mat value(const RVec& y) const;
};

// X = sum_k embed(1_{m_k} (x) x_k) in canonical coordinates.
struct AlgebraVar {
  const Subalgebra* alg = nullptr;
  std::vector<HermVar> parts;

  // trace_objective multiplies tr X = sum_k m_k tr x_k.
  static AlgebraVar make(SdpBuilder& sb, const Subalgebra& N, double trace_objective = 0.0);
  void place(SdpBuilder& sb, int block, int r0, cd coef = 1.0) const;
  void place_trace(SdpBuilder& sb, int block, int r, double coef = 1.0) const;
  Mat value(const RVec& y) const;  // canonical
};

// Adds the constant coef * M at rows/cols [r0, r0 + n) of a block.
void place_constant(SdpBuilder& sb, int block, int r0, const Mat& m, cd coef = 1.0);

}  // namespace subalg
