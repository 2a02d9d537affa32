#include "subalg/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace subalg {

int SdpBuilder::add_block(int size) {
  if (size < 1) throw PreconditionViolated("block size must be positive");
  sizes_.push_back(size);
  c_.push_back(Mat::Zero(size, size));
  return static_cast<int>(sizes_.size()) - 1;
}

int SdpBuilder::add_var(double objective) {
  b_.push_back(objective);
  a_.emplace_back();
  return static_cast<int>(b_.size()) - 1;
}

void SdpBuilder::add_c(int block, int r, int c, cd v) {
  if (r == c) {
    c_[block](r, r) += v.real();
    return;
  }
  c_[block](r, c) += v;
  c_[block](c, r) += std::conj(v);
}

void SdpBuilder::add_a(int var, int block, int r, int c, cd v) {
  if (v == cd(0)) return;
  if (r == c) {
    a_[var].push_back({block, r, r, cd(v.real(), 0)});
    return;
  }
  a_[var].push_back({block, r, c, v});
  a_[var].push_back({block, c, r, std::conj(v)});
}

std::shared_ptr<const SdpProblem> SdpBuilder::build() const {
  auto p = std::make_shared<SdpProblem>();
  p->block_sizes = sizes_;
  p->c = c_;
  p->a = a_;
  p->b = Eigen::Map<const RVec>(b_.data(), static_cast<Eigen::Index>(b_.size()));
  return p;
}

std::vector<Mat> dual_slack(const SdpProblem& p, const RVec& y) {
  std::vector<Mat> s = p.c;
  for (int i = 0; i < p.num_vars(); ++i) {
    if (y(i) == 0) continue;
    for (const auto& e : p.a[i]) s[e.block](e.row, e.col) -= y(i) * e.val;
  }
  return s;
}

RVec apply_a(const SdpProblem& p, const std::vector<Mat>& x) {
  RVec out(p.num_vars());
  for (int i = 0; i < p.num_vars(); ++i) {
    double acc = 0;
    for (const auto& e : p.a[i]) acc += (e.val * x[e.block](e.col, e.row)).real();
    out(i) = acc;
  }
  return out;
}

namespace {

using Blocks = std::vector<Mat>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0;
  for (size_t k = 0; k < a.size(); ++k) s += (a[k].conjugate().cwiseProduct(b[k])).sum().real();
  return s;
}

double fro(const Blocks& a) {
  double s = 0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

Blocks adjoint_a(const SdpProblem& p, const RVec& y) {
  Blocks out;
  for (int n : p.block_sizes) out.push_back(Mat::Zero(n, n));
  for (int i = 0; i < p.num_vars(); ++i) {
    if (y(i) == 0) continue;
    for (const auto& e : p.a[i]) out[e.block](e.row, e.col) += y(i) * e.val;
  }
  return out;
}

Mat herm(const Mat& m) { return (m + m.adjoint()) / 2.0; }

// Largest alpha in (0, 1] with X + alpha dX >= 0, damped by tau.
double step_length(const Blocks& x, const Blocks& dx, double tau) {
  double alpha = 1.0;
  for (size_t k = 0; k < x.size(); ++k) {
    Eigen::LLT<Mat> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    Mat l = llt.matrixL();
    Mat t = l.triangularView<Eigen::Lower>().solve(dx[k]);
    Mat w = l.triangularView<Eigen::Lower>().solve(t.adjoint()).adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(herm(w), Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin < 0) alpha = std::min(alpha, -tau / lmin);
  }
  return alpha;
}

struct Factor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  void compute(Eigen::MatrixXd m) {
    double shift = 0, scale = std::max(1e-300, m.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 12; ++attempt) {
      llt.compute(m);
      if (llt.info() == Eigen::Success) return;
      shift = shift == 0 ? 1e-14 * scale : shift * 100;
      m.diagonal().array() += shift;
    }
    throw NonConvergence("Schur complement is not positive definite");
  }
};

}  // namespace

SolverCertificate solve_sdp(std::shared_ptr<const SdpProblem> pp, const SdpOptions& opts) {
  const SdpProblem& p = *pp;
  int m = p.num_vars(), nb = p.num_blocks();
  if (!(opts.tol > 0)) throw PreconditionViolated("tolerance must be positive");
  int ntot = 0;
  for (int n : p.block_sizes) ntot += n;

  // SDPT3-style starting point
  double bnorm = p.b.norm(), cnorm = fro(p.c);
  Blocks x(nb), s(nb);
  for (int k = 0; k < nb; ++k) {
    int n = p.block_sizes[k];
    double amax = 0, ratio = 0;
    std::vector<double> sq(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (const auto& e : p.a[i])
        if (e.block == k) sq[i] += std::norm(e.val);
    for (int i = 0; i < m; ++i) {
      double an = std::sqrt(sq[i]);
      amax = std::max(amax, an);
      ratio = std::max(ratio, (1 + std::abs(p.b(i))) / (1 + an));
    }
    double xi = std::max({10.0, std::sqrt(static_cast<double>(n)), n * ratio});
    double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), amax, p.c[k].norm()});
    x[k] = xi * Mat::Identity(n, n);
    s[k] = eta * Mat::Identity(n, n);
  }
  RVec y = RVec::Zero(m);

  static const bool trace = std::getenv("SUBALG_SDP_TRACE") != nullptr;
  SolverCertificate cert;
  cert.problem = pp;
  cert.tol = opts.tol;
  double pinf = kInf, dinf = kInf, relgap = kInf;
  int stall = 0;
  int it = 0;
  // best iterate by the worst of the three residuals
  double best_err = kInf;
  Blocks best_x;
  RVec best_y;
  double best_p = kInf, best_d = kInf, best_g = kInf;
  int best_it = 0;
  for (; it < opts.max_iter; ++it) {
    RVec rp = p.b - apply_a(p, x);
    Blocks aty = adjoint_a(p, y);
    Blocks rd(nb);
    for (int k = 0; k < nb; ++k) rd[k] = p.c[k] - s[k] - aty[k];
    double pobj = inner(p.c, x), dobj = p.b.dot(y);
    pinf = rp.norm() / (1 + bnorm);
    dinf = fro(rd) / (1 + cnorm);
    relgap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    double err = std::max({pinf, dinf, relgap});
    if (err < best_err) {
      best_err = err;
      best_x = x;
      best_y = y;
      best_p = pinf;
      best_d = dinf;
      best_g = relgap;
      best_it = it;
    }
    if (err <= opts.tol) break;

    double mu = inner(x, s) / ntot;
    Blocks sinv(nb);
    for (int k = 0; k < nb; ++k) {
      Eigen::LLT<Mat> llt(s[k]);
      sinv[k] = herm(llt.solve(Mat::Identity(p.block_sizes[k], p.block_sizes[k])));
    }
    Eigen::MatrixXd schur = opts.parallel ? schur_parallel(p, x, sinv) : schur_reference(p, x, sinv);
    Factor fac;
    fac.compute(schur);

    Blocks xrs(nb);
    for (int k = 0; k < nb; ++k) xrs[k] = x[k] * rd[k] * sinv[k];

    auto direction = [&](const Blocks& h, Blocks& dx, Blocks& ds, RVec& dy) {
      Blocks t(nb);
      for (int k = 0; k < nb; ++k) t[k] = h[k] * sinv[k] - xrs[k];
      RVec rhs = p.b - apply_a(p, t);
      dy = fac.llt.solve(rhs);
      Blocks ady = adjoint_a(p, dy);
      dx.resize(nb);
      ds.resize(nb);
      for (int k = 0; k < nb; ++k) {
        ds[k] = herm(rd[k] - ady[k]);
        dx[k] = herm(h[k] * sinv[k] - x[k] - x[k] * ds[k] * sinv[k]);
      }
    };

    // predictor
    Blocks h0(nb), dxa, dsa;
    RVec dya;
    for (int k = 0; k < nb; ++k) h0[k] = Mat::Zero(p.block_sizes[k], p.block_sizes[k]);
    direction(h0, dxa, dsa, dya);
    double ap = step_length(x, dxa, 1.0), ad = step_length(s, dsa, 1.0);
    Blocks xa(nb), sa(nb);
    for (int k = 0; k < nb; ++k) {
      xa[k] = x[k] + ap * dxa[k];
      sa[k] = s[k] + ad * dsa[k];
    }
    double mu_aff = inner(xa, sa) / ntot;
    double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    // corrector
    Blocks h(nb), dx, ds;
    RVec dy;
    for (int k = 0; k < nb; ++k)
      h[k] = sigma * mu * Mat::Identity(p.block_sizes[k], p.block_sizes[k]) - dxa[k] * dsa[k];
    direction(h, dx, ds, dy);
    double tau = 0.98;
    ap = step_length(x, dx, tau);
    ad = step_length(s, ds, tau);
    for (int k = 0; k < nb; ++k) {
      x[k] = herm(x[k] + ap * dx[k]);
      s[k] = herm(s[k] + ad * ds[k]);
    }
    y += ad * dy;
    if (trace) std::fprintf(stderr, "it %d pinf %.2e dinf %.2e gap %.2e mu %.2e ap %.3f ad %.3f\n", it, pinf, dinf, relgap, mu, ap, ad);
    stall = (ap < 1e-6 && ad < 1e-6) || mu <= 0 ? stall + 1 : 0;
    if (stall >= 3 || it - best_it > 15) break;
  }
  cert.x = best_x;
  cert.y = best_y;
  cert.primal_objective = inner(p.c, best_x);
  cert.dual_objective = p.b.dot(best_y);
  cert.gap = best_g;
  cert.primal_infeasibility = best_p;
  cert.dual_infeasibility = best_d;
  cert.iterations = it;
  if (best_err > 10 * opts.tol)
    throw NonConvergence("interior point: pinf " + std::to_string(best_p) + " dinf " + std::to_string(best_d) +
                         " gap " + std::to_string(best_g));
  return cert;
}

VerifyReport verify(const SolverCertificate& cert) {
  const SdpProblem& p = *cert.problem;
  VerifyReport r;
  if (static_cast<int>(cert.x.size()) != p.num_blocks() || cert.y.size() != p.num_vars()) return r;
  std::vector<Mat> s = dual_slack(p, cert.y);
  double cscale = 1 + fro(p.c);
  double xscale = 1 + fro(cert.x);
  r.dual_min_eigenvalue = kInf;
  r.primal_min_eigenvalue = kInf;
  for (int k = 0; k < p.num_blocks(); ++k) {
    Eigen::SelfAdjointEigenSolver<Mat> es(herm(s[k]), Eigen::EigenvaluesOnly);
    r.dual_min_eigenvalue = std::min(r.dual_min_eigenvalue, es.eigenvalues().minCoeff());
    Eigen::SelfAdjointEigenSolver<Mat> ex(herm(cert.x[k]), Eigen::EigenvaluesOnly);
    r.primal_min_eigenvalue = std::min(r.primal_min_eigenvalue, ex.eigenvalues().minCoeff());
  }
  r.primal_infeasibility = (p.b - apply_a(p, cert.x)).norm() / (1 + p.b.norm());
  double pobj = inner(p.c, cert.x), dobj = p.b.dot(cert.y);
  r.gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
  double lim = 10 * cert.tol;
  r.ok = r.primal_infeasibility <= lim && r.gap <= lim && r.dual_min_eigenvalue >= -lim * cscale &&
         r.primal_min_eigenvalue >= -lim * xscale;
  return r;
}

}  // namespace subalg
