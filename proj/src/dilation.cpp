#include "subalg/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace subalg {

std::vector<Mat> expectation_kraus(const Subalgebra& N) {
  std::vector<Mat> out;
  int d = N.dim();
  for (size_t k = 0; k < N.blocks().size(); ++k) {
    const Block& b = N.blocks()[k];
    int off = N.offset(static_cast<int>(k));
    double w = 1.0 / std::sqrt(static_cast<double>(b.m));
    for (int i = 0; i < b.m; ++i)
      for (int j = 0; j < b.m; ++j) {
        Mat kc = Mat::Zero(d, d);
        for (int a = 0; a < b.n; ++a) kc(off + i * b.n + a, off + j * b.n + a) = w;
        out.push_back(N.from_canonical(kc));
      }
  }
  return out;
}

StinespringIsometry stinespring(const Subalgebra& N) {
  auto kraus = expectation_kraus(N);
  int d = N.dim(), de = static_cast<int>(kraus.size());
  StinespringIsometry V{d, de, Mat::Zero(d * de, d)};
  for (int r = 0; r < de; ++r)
    for (int a = 0; a < d; ++a) V.v.row(a * de + r) = kraus[r].row(a);
  return V;
}

double domain_commutator(const StinespringIsometry& V, const Mat& a) {
  Mat big = kron(a, Mat::Identity(V.dim_env, V.dim_env));
  Mat p = V.v * V.v.adjoint();
  return max_abs(big * p - p * big);
}

CommutatorReport multiplicative_domain_check(const Subalgebra& N, const StinespringIsometry& V, int samples,
                                             std::uint64_t seed) {
  Rng rng(seed);
  CommutatorReport rep;
  rep.samples = samples;
  rep.min_outside = kInf;
  for (int s = 0; s < samples; ++s) {
    bool inside = s % 2 == 0;
    Mat a = inside ? random_algebra_element(N, rng) : random_hermitian(rng, N.dim());
    double c = domain_commutator(V, a);
    bool small = c <= 1e-9;
    if (small != membership(N, a)) ++rep.mismatches;
    if (inside) rep.max_inside = std::max(rep.max_inside, c);
    else rep.min_outside = std::min(rep.min_outside, c);
  }
  rep.passed = rep.mismatches == 0;
  return rep;
}

OrderReport order_inequality_check(const Subalgebra& N, const StinespringIsometry& V, int samples,
                                   std::uint64_t seed) {
  Rng rng(seed);
  OrderReport rep;
  rep.samples = samples;
  rep.min_eigenvalue = kInf;
  Mat ie = Mat::Identity(V.dim_env, V.dim_env);
  for (int s = 0; s < samples; ++s) {
    Mat ex = conditional_expectation(N, random_psd(rng, N.dim()));
    Mat gap = kron(ex, ie) - V.v * ex * V.v.adjoint();
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, eig_hermitian(gap).values.minCoeff());
  }
  rep.passed = rep.min_eigenvalue >= -1e-8;
  return rep;
}

Mat dilate_state(const StinespringIsometry& V, const Mat& rho) {
  if (rho.rows() != V.dim_in || rho.cols() != V.dim_in) throw DimensionMismatch("dilate_state");
  Mat ae = V.v * rho * V.v.adjoint();
  Mat ea = permute_systems(ae, {V.dim_in, V.dim_env}, {1, 0});
  return (ea + ea.adjoint()) / 2.0;
}

Purification purify(const Mat& rho) {
  EigH e = eig_hermitian(rho);
  int d = static_cast<int>(rho.rows());
  double top = std::max(e.values.maxCoeff(), 0.0);
  std::vector<int> keep;
  for (int i = d - 1; i >= 0; --i)
    if (e.values(i) > kSupportCut * top) keep.push_back(i);
  Purification p{d, static_cast<int>(keep.size()), Vec::Zero(d * static_cast<int>(keep.size()))};
  for (int f = 0; f < p.dim_f; ++f) {
    Vec v = e.vectors.col(keep[f]);
    Eigen::Index big;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::conj(v(big)) / std::abs(v(big));
    double w = std::sqrt(e.values(keep[f]));
    for (int a = 0; a < d; ++a) p.psi(a * p.dim_f + f) = w * v(a);
  }
  return p;
}

TripartitePureState build_xi(const StinespringIsometry& V, const Mat& rho) {
  Purification p = purify(rho);
  // (V (x) 1_F) psi lives on (A, E, F)
  Mat vf = kron(V.v, Mat::Identity(p.dim_f, p.dim_f));
  Vec aef = vf * p.psi;
  TripartitePureState xi;
  xi.dim_e = V.dim_env;
  xi.dim_a = V.dim_in;
  xi.dim_f = p.dim_f;
  xi.psi = permute_vector(aef, {V.dim_in, V.dim_env, p.dim_f}, {1, 0, 2});
  return xi;
}

Mat TripartitePureState::marginal(const std::vector<int>& keep) const {
  Mat full = psi * psi.adjoint();
  return partial_trace(full, {dim_e, dim_a, dim_f}, keep);
}

}  // namespace subalg
