#include <algorithm>
#include <cmath>

#include "subalg/entropy.hpp"
#include "subalg/sdp_parts.hpp"
#include "subalg/solver.hpp"

namespace subalg {

namespace {

Mat validated_state(const Mat& rho, int d) {
  if (rho.rows() != d || rho.cols() != d) throw DimensionMismatch("state dimension does not match the algebra");
  return DensityOperator(rho).matrix();
}

SdpOptions sdp_options(const SolverOptions& o, double tol) {
  SdpOptions s;
  s.tol = tol;
  s.max_iter = o.max_iter;
  s.parallel = o.parallel;
  return s;
}

// Either X = sum_k 1 (x) x_k in N or X = lambda sigma for a fixed sigma.
struct XModel {
  const Subalgebra* alg = nullptr;
  Mat sigma;  // used when alg is null
  AlgebraVar x;
  int lambda = -1;

  void make(SdpBuilder& sb) {
    if (alg) x = AlgebraVar::make(sb, *alg, -1.0);
    else lambda = sb.add_var(-1.0);
  }
  void place(SdpBuilder& sb, int block, int r0) const {
    if (alg) {
      x.place(sb, block, r0);
      return;
    }
    for (int r = 0; r < sigma.rows(); ++r)
      for (int c = r; c < sigma.cols(); ++c)
        if (sigma(r, c) != cd(0)) sb.add_f(lambda, block, r0 + r, r0 + c, sigma(r, c));
  }
  Mat value(const RVec& y) const { return alg ? x.value(y) : Mat(y(lambda) * sigma); }
};

// min tr X subject to X >= rho' with P(rho, rho') <= eps, in the coordinates of rho_c.
OptimizationResult smooth_dmax_impl(const Mat& rho_c, XModel model, double eps, const SolverOptions& opts) {
  int d = static_cast<int>(rho_c.rows());
  Mat L = psd_factor(rho_c);
  int r = static_cast<int>(L.cols());
  double c = std::sqrt(1.0 - eps * eps);

  SdpBuilder sb;
  int b1 = sb.add_block(d + r);
  int b2 = sb.add_block(r + d);
  int b3 = sb.add_block(1);
  int b4 = sb.add_block(1);
  model.make(sb);
  CplxVar w = CplxVar::make(sb, r, d);
  HermVar t = HermVar::make(sb, r);

  // [[X, W*], [W, 1]] >= 0
  model.place(sb, b1, 0);
  w.place(sb, b1, d, 0);
  place_constant(sb, b1, d, Mat::Identity(r, r));
  // [[T, W], [W*, 1]] >= 0
  t.place(sb, b2, 0);
  w.place(sb, b2, 0, r);
  place_constant(sb, b2, r, Mat::Identity(d, d));
  // tr T <= 1
  sb.add_f0(b3, 0, 0, 1.0);
  t.place_trace(sb, b3, 0, -1.0);
  // Re tr(L W) >= c
  sb.add_f0(b4, 0, 0, -c);
  w.place_re_trace(sb, b4, 0, L);

  SolverCertificate cert = solve_sdp(sb.build(), sdp_options(opts, opts.tol));
  OptimizationResult res;
  Mat x = model.value(cert.y);
  Mat wv = w.value(cert.y);
  double tr = -cert.dual_objective;
  res.value = log2(tr);
  res.optimizer = wv.adjoint() * wv;
  res.sigma = x / x.trace().real();
  res.cert = std::move(cert);
  return res;
}

}  // namespace

void check_epsilon(double eps, bool allow_zero) {
  if (!(eps >= 0.0) || eps >= 1.0 || (!allow_zero && eps == 0.0))
    throw InvalidEpsilon("epsilon must lie in " + std::string(allow_zero ? "[0, 1)" : "(0, 1)"));
}

bool in_smoothing_ball(const Mat& rho, const Mat& rho_prime, double eps, double tol) {
  double tr = rho_prime.trace().real();
  if (tr > 1 + tol) return false;
  if (eig_hermitian(hermitize(rho_prime, 1e-6)).values.minCoeff() < -tol) return false;
  return purified_distance(rho, rho_prime) <= eps + tol;
}

OptimizationResult dmax_subalgebra(const Mat& rho, const Subalgebra& N, const SolverOptions& opts) {
  Mat rc = N.to_canonical(validated_state(rho, N.dim()));
  SdpBuilder sb;
  int blk = sb.add_block(N.dim());
  AlgebraVar x = AlgebraVar::make(sb, N, -1.0);
  x.place(sb, blk, 0);
  place_constant(sb, blk, 0, rc, -1.0);

  SolverCertificate cert = solve_sdp(sb.build(), sdp_options(opts, opts.tol));
  OptimizationResult res;
  Mat xv = x.value(cert.y);
  double tr = -cert.dual_objective;
  res.value = log2(tr);
  res.sigma = N.from_canonical(xv / xv.trace().real());
  res.optimizer = N.from_canonical(xv);
  res.cert = std::move(cert);
  return res;
}

double dmax_pair(const Mat& rho, const Mat& sigma) {
  Mat r = hermitize(rho), s = hermitize(sigma);
  if (r.rows() != s.rows()) throw DimensionMismatch("dmax_pair");
  Mat perp = Mat::Identity(s.rows(), s.cols()) - support_projector(s);
  if (max_abs(perp * r * perp) > 1e-10 * std::max(1.0, max_abs(r))) return kInf;
  Mat inv = matrix_power(s, -0.5);
  return log2(eig_hermitian(hermitize(inv * r * inv, 1e-6)).values.maxCoeff());
}

NeymanPearsonResult neyman_pearson(const Mat& rho, const Mat& sigma, double eps) {
  check_epsilon(eps);
  Mat r = hermitize(rho), s = hermitize(sigma);
  if (r.rows() != s.rows()) throw DimensionMismatch("neyman_pearson");
  int d = static_cast<int>(r.rows());
  NeymanPearsonResult res;
  if (eps == 0.0) {
    res.q = support_projector(r);
    res.beta = (res.q * s).trace().real();
    res.value = res.beta > 0 ? -log2(res.beta) : kInf;
    res.threshold = kInf;
    return res;
  }
  double target = 1.0 - eps;
  // tr(P_+(t rho - sigma) rho) is the derivative of the convex map t -> tr(t rho - sigma)_+.
  auto slope = [&](double t) {
    EigH e = eig_hermitian(t * r - s);
    double acc = 0;
    for (int i = 0; i < d; ++i)
      if (e.values(i) > 0) acc += (e.vectors.col(i).adjoint() * r * e.vectors.col(i))(0, 0).real();
    return acc;
  };
  auto dual = [&](double t) {
    EigH e = eig_hermitian(t * r - s);
    double pos = 0;
    for (int i = 0; i < d; ++i) pos += std::max(e.values(i), 0.0);
    return t * target - pos;
  };
  double lo = 0, hi = 1;
  while (slope(hi) < target) {
    lo = hi;
    hi *= 2;
    if (hi > 1e15) {
      // rho keeps weight 1 - eps away from the support of sigma.
      res.q = Mat::Identity(d, d) - support_projector(s);
      res.beta = 0;
      res.value = kInf;
      res.threshold = kInf;
      return res;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (slope(mid) >= target ? hi : lo) = mid;
  }
  res.threshold = hi;
  res.beta = std::max(dual(hi), 0.0);

  EigH e = eig_hermitian(hi * r - s);
  double eta = 1e-9 * (hi * max_abs(r) + max_abs(s));
  Mat pp = Mat::Zero(d, d), p0 = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    Mat v = e.vectors.col(i) * e.vectors.col(i).adjoint();
    if (e.values(i) > eta) pp += v;
    else if (e.values(i) >= -eta) p0 += v;
  }
  double w0 = (p0 * r).trace().real();
  double gamma = w0 > 1e-300 ? std::clamp((target - (pp * r).trace().real()) / w0, 0.0, 1.0) : 0.0;
  res.q = pp + gamma * p0;
  res.value = res.beta > 0 ? -log2(res.beta) : kInf;
  return res;
}

OptimizationResult dh_subalgebra(const Mat& rho, const Subalgebra& N, double eps, const SolverOptions& opts) {
  check_epsilon(eps);
  int d = N.dim();
  Mat rc = N.to_canonical(validated_state(rho, d));
  OptimizationResult res;
  if (eps == 0.0) {
    Mat pc = support_projector(rc);
    double best = -1;
    for (int k = 0; k < static_cast<int>(N.blocks().size()); ++k) {
      const Block& b = N.blocks()[k];
      EigH e = eig_hermitian(reduce_block(N, pc, k) / static_cast<double>(b.m));
      if (e.values(b.n - 1) > best) {
        best = e.values(b.n - 1);
        Vec v = e.vectors.col(b.n - 1);
        res.sigma = N.from_canonical(embed_block(N, k, v * v.adjoint() / static_cast<double>(b.m)));
      }
    }
    res.value = -log2(best);
    res.optimizer = N.from_canonical(pc);
    return res;
  }

  SdpBuilder sb;
  int bq = sb.add_block(d);
  int bi = sb.add_block(d);
  int bt = sb.add_block(1);
  std::vector<int> bk;
  for (const auto& b : N.blocks()) bk.push_back(sb.add_block(b.n));
  HermVar q = HermVar::make(sb, d);
  int t = sb.add_var(-1.0);

  q.place(sb, bq, 0);
  q.place(sb, bi, 0, -1.0);
  place_constant(sb, bi, 0, Mat::Identity(d, d));
  sb.add_f0(bt, 0, 0, -(1.0 - eps));
  q.place_re_trace(sb, bt, 0, rc);
  for (int k = 0; k < static_cast<int>(N.blocks().size()); ++k) {
    const Block& b = N.blocks()[k];
    int off = N.offset(k);
    for (int a = 0; a < b.n; ++a) sb.add_f(t, bk[k], a, a, 1.0);
    // - A_k(Q), where A_k averages the m diagonal copies of block k.
    double w = -1.0 / b.m;
    q.for_each([&](int i, int j, int re, int im) {
      int ri = i - off, rj = j - off;
      if (ri < 0 || rj < 0 || ri >= b.m * b.n || rj >= b.m * b.n) return;
      if (ri / b.n != rj / b.n) return;
      int a = ri % b.n, c = rj % b.n;
      if (im < 0) {
        sb.add_f(re, bk[k], a, a, w);
      } else {
        sb.add_f(re, bk[k], a, c, w);
        sb.add_f(im, bk[k], a, c, cd(0, w));
      }
    });
  }

  SolverCertificate cert = solve_sdp(sb.build(), sdp_options(opts, std::min(opts.tol, 1e-10)));
  double tv = -cert.dual_objective;
  res.value = -log2(tv);
  res.optimizer = N.from_canonical(q.value(cert.y));
  Mat sc = Mat::Zero(d, d);
  for (int k = 0; k < static_cast<int>(N.blocks().size()); ++k)
    sc += embed_block(N, k, cert.x[bk[k]] / static_cast<double>(N.blocks()[k].m));
  res.sigma = N.from_canonical(sc);
  res.cert = std::move(cert);
  return res;
}

OptimizationResult smooth_dmax_subalgebra(const Mat& rho, const Subalgebra& N, double eps,
                                          const SolverOptions& opts) {
  check_epsilon(eps);
  if (eps == 0.0) return dmax_subalgebra(rho, N, opts);
  Mat rc = N.to_canonical(validated_state(rho, N.dim()));
  XModel model;
  model.alg = &N;
  OptimizationResult res = smooth_dmax_impl(rc, model, eps, opts);
  res.optimizer = N.from_canonical(res.optimizer);
  res.sigma = N.from_canonical(res.sigma);
  return res;
}

OptimizationResult smooth_dmax_pair(const Mat& rho, const Mat& sigma, double eps, const SolverOptions& opts) {
  check_epsilon(eps);
  Mat r = validated_state(rho, static_cast<int>(sigma.rows()));
  Mat s = DensityOperator(sigma).matrix();
  if (eps == 0.0) {
    OptimizationResult res;
    res.value = dmax_pair(r, s);
    res.optimizer = r;
    res.sigma = s;
    return res;
  }
  XModel model;
  model.sigma = s;
  return smooth_dmax_impl(r, model, eps, opts);
}

OptimizationResult dmin_subalgebra(const Mat& rho, const Subalgebra& N, const SolverOptions& opts) {
  int d = N.dim();
  Mat rc = N.to_canonical(validated_state(rho, d));
  Mat L = psd_factor(rc);
  int r = static_cast<int>(L.cols());

  SdpBuilder sb;
  int b1 = sb.add_block(r + d);
  int b2 = sb.add_block(1);
  CplxVar k = CplxVar::make(sb, r, d);
  AlgebraVar s = AlgebraVar::make(sb, N);
  k.add_re_trace_objective(sb, L);
  // [[1, K], [K*, sigma]] >= 0, tr sigma <= 1
  place_constant(sb, b1, 0, Mat::Identity(r, r));
  k.place(sb, b1, 0, r);
  s.place(sb, b1, r);
  sb.add_f0(b2, 0, 0, 1.0);
  s.place_trace(sb, b2, 0, -1.0);

  SolverCertificate cert = solve_sdp(sb.build(), sdp_options(opts, opts.tol));
  OptimizationResult res;
  double f = cert.dual_objective;
  res.value = f > 0 ? -2.0 * log2(f) : kInf;
  Mat sv = s.value(cert.y);
  res.sigma = N.from_canonical(sv / sv.trace().real());
  res.optimizer = res.sigma;
  res.cert = std::move(cert);
  return res;
}

OptimizationResult smooth_dmin_subalgebra(const Mat& rho, const Subalgebra& N, double eps,
                                          const SolverOptions& opts) {
  check_epsilon(eps);
  if (eps == 0.0) return dmin_subalgebra(rho, N, opts);
  int d = N.dim();
  Mat rc = N.to_canonical(validated_state(rho, d));
  Mat L = psd_factor(rc);
  Mat ell = L.adjoint();
  int r = static_cast<int>(L.cols());
  double c = std::sqrt(1.0 - eps * eps);

  // The inner minimum over the ball is dualized:
  // max mu c - s  s.t.  ||K - mu ell||_2 <= s, [[1, K], [K*, sigma]] >= 0, sigma in N, tr sigma <= 1.
  SdpBuilder sb;
  int b1 = sb.add_block(r + d);
  int b2 = sb.add_block(1);
  int b3 = sb.add_block(r + d);
  int b4 = sb.add_block(1);
  int b5 = sb.add_block(1);
  CplxVar k = CplxVar::make(sb, r, d);
  AlgebraVar s = AlgebraVar::make(sb, N);
  HermVar t = HermVar::make(sb, r);
  int mu = sb.add_var(c);
  int sv = sb.add_var(-1.0);

  place_constant(sb, b1, 0, Mat::Identity(r, r));
  k.place(sb, b1, 0, r);
  s.place(sb, b1, r);
  sb.add_f0(b2, 0, 0, 1.0);
  s.place_trace(sb, b2, 0, -1.0);

  t.place(sb, b3, 0);
  k.place(sb, b3, 0, r);
  for (int j = 0; j < r; ++j)
    for (int a = 0; a < d; ++a) sb.add_f(mu, b3, j, r + a, -ell(j, a));
  for (int a = 0; a < d; ++a) sb.add_f(sv, b3, r + a, r + a, 1.0);
  sb.add_f(sv, b4, 0, 0, 1.0);
  t.place_trace(sb, b4, 0, -1.0);
  sb.add_f(mu, b5, 0, 0, 1.0);

  SolverCertificate cert = solve_sdp(sb.build(), sdp_options(opts, opts.tol));
  OptimizationResult res;
  double f = cert.dual_objective;
  res.value = f > 0 ? -2.0 * log2(f) : kInf;
  Mat sg = s.value(cert.y);
  res.sigma = N.from_canonical(sg / sg.trace().real());
  // The minimizing W of the inner problem is read off the multiplier of the fidelity block.
  Mat w = -2.0 * cert.x[b1].block(0, r, r, d);
  res.optimizer = N.from_canonical(w.adjoint() * w);
  res.cert = std::move(cert);
  return res;
}

double dmin_pair(const Mat& rho, const Mat& sigma) {
  double f = trace_fidelity(hermitize(rho), hermitize(sigma));
  return f > 0 ? -2.0 * log2(f) : kInf;
}

double renyi_pair(const Mat& rho, const Mat& sigma, double alpha) {
  if (!(alpha >= 0.5)) throw PreconditionViolated("alpha must be at least 1/2");
  if (alpha == kInf) return dmax_pair(rho, sigma);
  if (alpha == 1.0) return relative_entropy(rho, sigma);
  if (alpha == 0.5) return dmin_pair(rho, sigma);
  Mat r = hermitize(rho), s = hermitize(sigma);
  if (r.rows() != s.rows()) throw DimensionMismatch("renyi_pair");
  if (alpha > 1) {
    Mat perp = Mat::Identity(s.rows(), s.cols()) - support_projector(s);
    if (max_abs(perp * r * perp) > 1e-10 * std::max(1.0, max_abs(r))) return kInf;
  }
  double beta = (1.0 - alpha) / (2.0 * alpha);
  Mat sb = matrix_power(s, beta);
  Mat b = hermitize(sb * r * sb, 1e-6);
  EigH e = eig_hermitian(b);
  double q = 0;
  for (int i = 0; i < e.values.size(); ++i) q += std::pow(std::max(e.values(i), 0.0), alpha);
  if (q <= 0) return kInf;
  return log2(q / r.trace().real()) / (alpha - 1.0);
}

}  // namespace subalg
