#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>

#include "subalg/entropy.hpp"
#include "subalg/solver.hpp"

namespace subalg {

namespace {

// Divided differences of x -> x^p on a positive spectrum.
Eigen::MatrixXd divided_differences(const RVec& lam, double p) {
  int n = static_cast<int>(lam.size());
  Eigen::MatrixXd g(n, n);
  double scale = std::max(lam.maxCoeff(), 1e-300);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double a = lam(i), b = lam(j);
      if (std::abs(a - b) > 1e-9 * scale)
        g(i, j) = (std::pow(a, p) - std::pow(b, p)) / (a - b);
      else
        g(i, j) = p * std::pow(0.5 * (a + b), p - 1.0);
    }
  return g;
}

int num_params(const Subalgebra& N) {
  int p = 0;
  for (const auto& b : N.blocks()) p += 2 * b.n * b.n;
  return p;
}

std::vector<Mat> unpack(const Subalgebra& N, const gsl_vector* x) {
  std::vector<Mat> out;
  size_t idx = 0;
  for (const auto& b : N.blocks()) {
    Mat l(b.n, b.n);
    for (int i = 0; i < b.n; ++i)
      for (int j = 0; j < b.n; ++j) {
        l(i, j) = cd(gsl_vector_get(x, idx), gsl_vector_get(x, idx + 1));
        idx += 2;
      }
    out.push_back(l);
  }
  return out;
}

void pack(const std::vector<Mat>& ms, gsl_vector* x) {
  size_t idx = 0;
  for (const auto& m : ms)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) {
        gsl_vector_set(x, idx++, m(i, j).real());
        gsl_vector_set(x, idx++, m(i, j).imag());
      }
}

constexpr double kPenalty = 1e30;

double gsl_f(const gsl_vector* x, void* params) {
  const auto* obj = static_cast<const RenyiObjective*>(params);
  double v = obj->value(unpack(*obj->alg, x), nullptr);
  return std::isfinite(v) ? v : kPenalty;
}

void gsl_df(const gsl_vector* x, void* params, gsl_vector* g) {
  const auto* obj = static_cast<const RenyiObjective*>(params);
  std::vector<Mat> grad;
  double v = obj->value(unpack(*obj->alg, x), &grad);
  if (!std::isfinite(v)) {
    gsl_vector_set_zero(g);
    return;
  }
  pack(grad, g);
}

void gsl_fdf(const gsl_vector* x, void* params, double* f, gsl_vector* g) {
  const auto* obj = static_cast<const RenyiObjective*>(params);
  std::vector<Mat> grad;
  double v = obj->value(unpack(*obj->alg, x), &grad);
  if (!std::isfinite(v)) {
    *f = kPenalty;
    gsl_vector_set_zero(g);
    return;
  }
  *f = v;
  pack(grad, g);
}

struct Run {
  double f = kInf;
  std::vector<Mat> factors;
  bool converged = false;
};

Run minimize_from(const RenyiObjective& obj, const std::vector<Mat>& start, int max_iter) {
  int np = num_params(*obj.alg);
  gsl_multimin_function_fdf fn;
  fn.n = static_cast<size_t>(np);
  fn.f = gsl_f;
  fn.df = gsl_df;
  fn.fdf = gsl_fdf;
  fn.params = const_cast<RenyiObjective*>(&obj);

  gsl_vector* x = gsl_vector_alloc(fn.n);
  pack(start, x);
  Run best;
  best.factors = start;
  best.f = obj.value(start, nullptr);

  gsl_multimin_fdfminimizer* m = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, fn.n);
  // Restarts refresh the curvature model after line-search stalls.
  for (int restart = 0; restart < 8; ++restart) {
    double step = 0.05 * std::max(gsl_blas_dnrm2(x), 1e-3);
    gsl_multimin_fdfminimizer_set(m, &fn, x, step, 0.1);
    int status = GSL_CONTINUE;
    for (int it = 0; it < max_iter && status == GSL_CONTINUE; ++it) {
      if (gsl_multimin_fdfminimizer_iterate(m)) break;
      status = gsl_multimin_test_gradient(m->gradient, 1e-11);
    }
    double f = m->f;
    gsl_vector_memcpy(x, m->x);
    bool improved = f < best.f - 1e-13 * std::max(1.0, std::abs(best.f));
    if (f <= best.f) {
      best.f = f;
      best.factors = unpack(*obj.alg, x);
    }
    if (status == GSL_SUCCESS) {
      best.converged = true;
      break;
    }
    if (!improved && restart > 0) {
      best.converged = gsl_blas_dnrm2(m->gradient) < 1e-7;
      break;
    }
  }
  gsl_multimin_fdfminimizer_free(m);
  gsl_vector_free(x);
  return best;
}

}  // namespace

double RenyiObjective::value(const std::vector<Mat>& factors, std::vector<Mat>* grad) const {
  const Subalgebra& N = *alg;
  int d = N.dim();
  int nb = static_cast<int>(N.blocks().size());
  double beta = (1.0 - alpha) / (2.0 * alpha);

  double tau = 0;
  std::vector<EigH> es;
  Mat sb = Mat::Zero(d, d);
  for (int k = 0; k < nb; ++k) {
    const Block& b = N.blocks()[k];
    Mat s = factors[k] * factors[k].adjoint();
    tau += b.m * s.trace().real();
    es.push_back(eig_hermitian(hermitize(s, 1e-6)));
    const EigH& e = es.back();
    double top = std::max(e.values.maxCoeff(), 0.0);
    if (beta < 0 && e.values.minCoeff() <= 1e-14 * top) return kInf;
    if (top <= 0) {
      if (beta < 0) return kInf;
      continue;
    }
    Mat p = spectral_apply(e, [&](double x) { return x > 0 ? std::pow(x, beta) : 0.0; });
    sb += embed_block(N, k, p);
  }
  if (tau <= 0) return kInf;

  Mat bm = hermitize(sb * rho_c * sb, 1e-6);
  EigH eb = eig_hermitian(bm);
  double btop = std::max(eb.values.maxCoeff(), 0.0);
  double q = 0;
  for (int i = 0; i < eb.values.size(); ++i)
    if (eb.values(i) > 1e-14 * btop) q += std::pow(eb.values(i), alpha);
  if (q <= 0) return kInf;
  double f = std::log(q) / (alpha - 1.0) + std::log(tau);

  if (grad) {
    grad->clear();
    Mat bpow = spectral_apply(eb, [&](double x) { return x > 1e-14 * btop ? std::pow(x, alpha - 1.0) : 0.0; });
    Mat h = rho_c * sb * bpow;
    h = h + h.adjoint().eval();
    for (int k = 0; k < nb; ++k) {
      const Block& b = N.blocks()[k];
      const EigH& e = es[k];
      Mat hr = reduce_block(N, h, k);
      Mat hu = e.vectors.adjoint() * hr * e.vectors;
      Mat g = divided_differences(e.values.cwiseMax(1e-300), beta).cast<cd>().cwiseProduct(hu);
      Mat gk = alpha * e.vectors * g * e.vectors.adjoint();
      Mat G = gk / ((alpha - 1.0) * q) + (b.m / tau) * Mat::Identity(b.n, b.n);
      grad->push_back(2.0 * G * factors[k]);
    }
  }
  return f;
}

OptimizationResult renyi_subalgebra(const Mat& rho, const Subalgebra& N, double alpha, const SolverOptions& opts) {
  if (!(alpha >= 0.5)) throw PreconditionViolated("alpha must be at least 1/2");
  if (rho.rows() != N.dim() || rho.cols() != N.dim()) throw DimensionMismatch("renyi_subalgebra");
  Mat r = DensityOperator(rho).matrix();
  if (alpha == kInf) return dmax_subalgebra(r, N, opts);
  if (alpha == 0.5) return dmin_subalgebra(r, N, opts);
  OptimizationResult res;
  if (alpha == 1.0) {
    res.sigma = conditional_expectation(N, r);
    res.value = relative_entropy(r, res.sigma);
    res.optimizer = res.sigma;
    return res;
  }

  gsl_set_error_handler_off();
  RenyiObjective obj{&N, N.to_canonical(r), alpha};
  Mat ec = canonical_expectation(N, obj.rho_c);
  std::vector<Mat> from_e, from_id;
  for (int k = 0; k < static_cast<int>(N.blocks().size()); ++k) {
    const Block& b = N.blocks()[k];
    Mat s = reduce_block(N, ec, k) / static_cast<double>(b.m);
    from_e.push_back(matrix_sqrt(hermitize(s, 1e-6) + 1e-6 * Mat::Identity(b.n, b.n)));
    from_id.push_back(Mat::Identity(b.n, b.n) / std::sqrt(static_cast<double>(N.dim())));
  }
  int iters = std::max(opts.max_iter, 2000);
  Run a = minimize_from(obj, from_e, iters);
  Run b = minimize_from(obj, from_id, iters);
  const Run& best = a.f <= b.f ? a : b;

  Mat sc = Mat::Zero(N.dim(), N.dim());
  for (int k = 0; k < static_cast<int>(N.blocks().size()); ++k)
    sc += embed_block(N, k, best.factors[k] * best.factors[k].adjoint());
  sc /= sc.trace().real();
  res.sigma = N.from_canonical(sc);
  res.optimizer = res.sigma;
  res.value = best.f / std::log(2.0);
  res.converged = a.converged || b.converged;
  return res;
}

}  // namespace subalg
