#include "subalg/sdp_parts.hpp"

namespace subalg {

HermVar HermVar::make(SdpBuilder& sb, int n, double trace_objective) {
  HermVar h;
  h.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (a == b) {
        h.ids.push_back(sb.add_var(trace_objective));
      } else {
        h.ids.push_back(sb.add_var(0.0));
        h.ids.push_back(sb.add_var(0.0));
      }
    }
  return h;
}

void HermVar::place(SdpBuilder& sb, int block, int r0, cd coef) const {
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (a == b) {
        sb.add_f(ids[k++], block, r0 + a, r0 + a, coef);
      } else {
        sb.add_f(ids[k++], block, r0 + a, r0 + b, coef);
        sb.add_f(ids[k++], block, r0 + a, r0 + b, coef * cd(0, 1));
      }
    }
}

void HermVar::place_trace(SdpBuilder& sb, int block, int r, double coef) const {
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (a == b) sb.add_f(ids[k++], block, r, r, coef);
      else k += 2;
    }
}

void HermVar::place_re_trace(SdpBuilder& sb, int block, int r, const Mat& a, double coef) const {
  // H_ab A_ba + H_ba A_ab = 2 Re(A_ab) re + 2 Im(A_ab) im
  for_each([&](int i, int j, int re, int im) {
    if (im < 0) {
      sb.add_f(re, block, r, r, coef * a(i, i).real());
    } else {
      sb.add_f(re, block, r, r, 2 * coef * a(i, j).real());
      sb.add_f(im, block, r, r, 2 * coef * a(i, j).imag());
    }
  });
}

Mat HermVar::value(const RVec& y) const {
  Mat h = Mat::Zero(n, n);
  int k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (a == b) {
        h(a, a) = y(ids[k++]);
      } else {
        cd v(y(ids[k]), y(ids[k + 1]));
        k += 2;
        h(a, b) = v;
        h(b, a) = std::conj(v);
      }
    }
  return h;
}

CplxVar CplxVar::make(SdpBuilder& sb, int rows, int cols) {
  CplxVar z;
  z.rows = rows;
  z.cols = cols;
  for (int i = 0; i < rows * cols; ++i) {
    z.re.push_back(sb.add_var(0.0));
    z.im.push_back(sb.add_var(0.0));
  }
  return z;
}

void CplxVar::place(SdpBuilder& sb, int block, int r0, int c0, cd coef) const {
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      int k = i * cols + j;
      sb.add_f(re[k], block, r0 + i, c0 + j, coef);
      sb.add_f(im[k], block, r0 + i, c0 + j, coef * cd(0, 1));
    }
}

void CplxVar::add_re_trace_objective(SdpBuilder& sb, const Mat& a, double coef) const {
  // Re tr(A Z) = sum_ij Re(A_ji Z_ij)
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      int k = i * cols + j;
      cd aji = a(j, i);
      if (aji == cd(0)) continue;
      sb.set_objective(re[k], coef * aji.real());
      sb.set_objective(im[k], -coef * aji.imag());
    }
}

void CplxVar::place_re_trace(SdpBuilder& sb, int block, int r, const Mat& a, double coef) const {
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      int k = i * cols + j;
      cd aji = a(j, i);
      if (aji == cd(0)) continue;
      sb.add_f(re[k], block, r, r, coef * aji.real());
      sb.add_f(im[k], block, r, r, -coef * aji.imag());
    }
}

Mat CplxVar::value(const RVec& y) const {
  Mat z(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) z(i, j) = cd(y(re[i * cols + j]), y(im[i * cols + j]));
  return z;
}

AlgebraVar AlgebraVar::make(SdpBuilder& sb, const Subalgebra& N, double trace_objective) {
  AlgebraVar x;
  x.alg = &N;
  for (const auto& b : N.blocks()) x.parts.push_back(HermVar::make(sb, b.n, trace_objective * b.m));
  return x;
}

void AlgebraVar::place(SdpBuilder& sb, int block, int r0, cd coef) const {
  for (size_t k = 0; k < parts.size(); ++k) {
    const Block& b = alg->blocks()[k];
    int off = alg->offset(static_cast<int>(k));
    for (int i = 0; i < b.m; ++i) parts[k].place(sb, block, r0 + off + i * b.n, coef);
  }
}

void AlgebraVar::place_trace(SdpBuilder& sb, int block, int r, double coef) const {
  for (size_t k = 0; k < parts.size(); ++k) parts[k].place_trace(sb, block, r, coef * alg->blocks()[k].m);
}

Mat AlgebraVar::value(const RVec& y) const {
  Mat x = Mat::Zero(alg->dim(), alg->dim());
  for (size_t k = 0; k < parts.size(); ++k) x += embed_block(*alg, static_cast<int>(k), parts[k].value(y));
  return x;
}

void place_constant(SdpBuilder& sb, int block, int r0, const Mat& m, cd coef) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = r; c < m.cols(); ++c)
      if (m(r, c) != cd(0)) sb.add_f0(block, r0 + r, r0 + c, coef * m(r, c));
}

}  // namespace subalg
