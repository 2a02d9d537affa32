#include "subalg/resource.hpp"

#include <algorithm>
#include <cmath>

#include "subalg/sdp_parts.hpp"

namespace subalg {

QuantumChannel::QuantumChannel(int dim_in, int dim_out, std::vector<Mat> kraus)
    : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
  if (dim_in < 1 || dim_out < 1) throw PreconditionViolated("channel dimensions must be positive");
  Mat sum = Mat::Zero(dim_in, dim_in);
  for (const auto& k : kraus_) {
    if (k.rows() != dim_out || k.cols() != dim_in) throw DimensionMismatch("Kraus operator shape");
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - Mat::Identity(dim_in, dim_in)) > 1e-9) throw PreconditionViolated("Kraus operators are not trace preserving");
  choi_ = Mat::Zero(dim_in * dim_out, dim_in * dim_out);
  for (int i = 0; i < dim_in; ++i)
    for (int j = 0; j < dim_in; ++j) {
      Mat u = Mat::Zero(dim_in, dim_in);
      u(i, j) = 1;
      choi_.block(i * dim_out, j * dim_out, dim_out, dim_out) = apply(u);
    }
}

Mat QuantumChannel::apply(const Mat& x) const {
  if (x.rows() != dim_in_ || x.cols() != dim_in_) throw DimensionMismatch("channel input");
  Mat y = Mat::Zero(dim_out_, dim_out_);
  for (const auto& k : kraus_) y += k * x * k.adjoint();
  return y;
}

QuantumChannel::Validation QuantumChannel::validate(double tol) const {
  Validation v;
  Mat sum = Mat::Zero(dim_in_, dim_in_);
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  v.trace_preservation = max_abs(sum - Mat::Identity(dim_in_, dim_in_));
  v.choi_min_eigenvalue = eig_hermitian(hermitize(choi_, 1e-6)).values.minCoeff();
  v.choi_marginal = max_abs(partial_trace(choi_, {dim_in_, dim_out_}, {0}) - Mat::Identity(dim_in_, dim_in_));
  v.ok = v.trace_preservation <= tol && v.choi_min_eigenvalue >= -tol && v.choi_marginal <= tol;
  return v;
}

QuantumChannel measure_prepare(const std::vector<Mat>& effects, const std::vector<Mat>& states) {
  if (effects.empty() || effects.size() != states.size()) throw PreconditionViolated("measure_prepare arity");
  int din = static_cast<int>(effects[0].rows()), dout = static_cast<int>(states[0].rows());
  std::vector<Mat> kraus;
  for (size_t j = 0; j < effects.size(); ++j) {
    EigH ew = eig_hermitian(hermitize(states[j], 1e-6));
    EigH ee = eig_hermitian(hermitize(effects[j], 1e-6));
    for (int a = 0; a < dout; ++a) {
      if (ew.values(a) <= 0) continue;
      for (int b = 0; b < din; ++b) {
        if (ee.values(b) <= 1e-15) continue;
        kraus.push_back(std::sqrt(ew.values(a) * ee.values(b)) * ew.vectors.col(a) * ee.vectors.col(b).adjoint());
      }
    }
  }
  return QuantumChannel(din, dout, std::move(kraus));
}

namespace {

template <class F>
double max_over_units(int d, F f) {
  double worst = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat u = Mat::Zero(d, d);
      u(i, j) = 1;
      worst = std::max(worst, f(u));
    }
  return worst;
}

void check_channel_algebras(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N) {
  if (M.dim() != phi.dim_in() || N.dim() != phi.dim_out()) throw DimensionMismatch("channel and algebra dimensions");
}

// Clips eigenvalues below zero; the construction tolerates -1e-9 violations.
Mat clip_psd(const Mat& m) {
  EigH e = eig_hermitian(hermitize(m, 1e-6));
  return spectral_apply(e, [](double x) { return std::max(x, 0.0); });
}

Mat validated_normalized(const Mat& rho) { return DensityOperator(rho).matrix(); }

}  // namespace

double mio_deviation(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N) {
  check_channel_algebras(phi, M, N);
  return max_over_units(phi.dim_in(), [&](const Mat& u) {
    Mat a = phi.apply(conditional_expectation(M, u));
    return (a - conditional_expectation(N, a)).norm();
  });
}

double dio_deviation(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N) {
  check_channel_algebras(phi, M, N);
  return max_over_units(phi.dim_in(), [&](const Mat& u) {
    return (phi.apply(conditional_expectation(M, u)) - conditional_expectation(N, phi.apply(u))).norm();
  });
}

bool is_mio(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N, double tol) {
  return mio_deviation(phi, M, N) <= tol;
}

bool is_dio(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N, double tol) {
  return dio_deviation(phi, M, N) <= tol;
}

Mat maximally_coherent(int n) {
  if (n < 1) throw PreconditionViolated("n must be positive");
  return Mat::Constant(n, n, cd(1.0 / n, 0));
}

QuantumChannel build_mio_dilution(const Mat& rho_prime, const Mat& sigma, int n) {
  Mat r = validated_normalized(rho_prime);
  Mat s = validated_normalized(sigma);
  if (r.rows() != s.rows()) throw DimensionMismatch("build_mio_dilution");
  if (n < 1) throw PreconditionViolated("n must be positive");
  if (n == 1) return measure_prepare({Mat::Identity(1, 1)}, {r});
  Mat slack = static_cast<double>(n) * s - r;
  if (eig_hermitian(hermitize(slack, 1e-6)).values.minCoeff() < -1e-9)
    throw PreconditionViolated("n sigma does not dominate rho'");
  Mat e = maximally_coherent(n);
  Mat w0 = clip_psd(slack / static_cast<double>(n - 1));
  return measure_prepare({Mat::Identity(n, n) - e, e}, {w0, r});
}

QuantumChannel build_dio_dilution(const Mat& rho_prime, const Subalgebra& N, int n) {
  Mat r = validated_normalized(rho_prime);
  if (r.rows() != N.dim()) throw DimensionMismatch("build_dio_dilution");
  return build_mio_dilution(r, conditional_expectation(N, r), n);
}

double dmax_pinned(const Mat& rho, const Subalgebra& N) {
  Mat r = validated_normalized(rho);
  if (r.rows() != N.dim()) throw DimensionMismatch("dmax_pinned");
  return dmax_pair(r, conditional_expectation(N, r));
}

namespace {

struct PinnedProbe {
  double fidelity = 0;
  Mat r;  // canonical
};

// max Re tr(L W) subject to R >= W*W, tr R <= 1, lambda E(R) - R >= 0.
PinnedProbe pinned_probe(const Mat& L, const Subalgebra& N, double lambda, const SolverOptions& opts) {
  int d = N.dim();
  int r = static_cast<int>(L.cols());
  SdpBuilder sb;
  int b1 = sb.add_block(d + r);
  int b2 = sb.add_block(1);
  int b3 = sb.add_block(d);
  HermVar R = HermVar::make(sb, d);
  CplxVar W = CplxVar::make(sb, r, d);
  W.add_re_trace_objective(sb, L);
  R.place(sb, b1, 0);
  W.place(sb, b1, d, 0);
  place_constant(sb, b1, d, Mat::Identity(r, r));
  sb.add_f0(b2, 0, 0, 1.0);
  R.place_trace(sb, b2, 0, -1.0);
  R.for_each([&](int a, int b, int re, int im) {
    auto add = [&](int id, const Mat& f) {
      Mat g = lambda * canonical_expectation(N, f) - f;
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
          if (std::abs(g(i, j)) > 1e-15) sb.add_f(id, b3, i, j, g(i, j));
    };
    Mat f = Mat::Zero(d, d);
    if (im < 0) {
      f(a, a) = 1;
      add(re, f);
      return;
    }
    f(a, b) = 1;
    f(b, a) = 1;
    add(re, f);
    f(a, b) = cd(0, 1);
    f(b, a) = cd(0, -1);
    add(im, f);
  });
  SdpOptions so;
  so.tol = opts.tol;
  so.max_iter = opts.max_iter;
  so.parallel = opts.parallel;
  SolverCertificate cert = solve_sdp(sb.build(), so);
  return {cert.dual_objective, R.value(cert.y)};
}

}  // namespace

PinnedResult dmax_pinned_eps(const Mat& rho, const Subalgebra& N, double eps, const SolverOptions& opts,
                             double bits_tol) {
  check_epsilon(eps);
  Mat r = validated_normalized(rho);
  if (r.rows() != N.dim()) throw DimensionMismatch("dmax_pinned_eps");
  PinnedResult res;
  if (eps == 0.0) {
    res.value = dmax_pinned(r, N);
    res.optimizer = r;
    return res;
  }
  Mat L = psd_factor(N.to_canonical(r));
  double c = std::sqrt(1.0 - eps * eps);
  // rho itself is feasible at the inverse index.
  double lo = 0.0, hi = log2(pimsner_popa_index(N).inverse);
  Mat best = N.to_canonical(r);
  while (hi - lo > bits_tol) {
    double mid = 0.5 * (lo + hi);
    PinnedProbe p = pinned_probe(L, N, std::exp2(mid), opts);
    ++res.sdp_solves;
    if (p.fidelity >= c) {
      hi = mid;
      best = p.r;
    } else {
      lo = mid;
    }
  }
  res.value = hi;
  res.optimizer = N.from_canonical(best);
  return res;
}

namespace {

// max t subject to n sigma - target >= t 1, sigma in S(N).
double polish_sigma(const Mat& target_c, const Subalgebra& N, int n, Mat& sigma_c) {
  int d = N.dim();
  SdpBuilder sb;
  int b1 = sb.add_block(d);
  int b2 = sb.add_block(1);
  int b3 = sb.add_block(d);
  AlgebraVar s = AlgebraVar::make(sb, N);
  int t = sb.add_var(1.0);
  s.place(sb, b1, 0, static_cast<double>(n));
  place_constant(sb, b1, 0, target_c, -1.0);
  for (int a = 0; a < d; ++a) sb.add_f(t, b1, a, a, -1.0);
  sb.add_f0(b2, 0, 0, 1.0);
  s.place_trace(sb, b2, 0, -1.0);
  s.place(sb, b3, 0);
  SdpOptions so;
  so.tol = 1e-11;
  SolverCertificate cert = solve_sdp(sb.build(), so);
  Mat sv = s.value(cert.y);
  sigma_c = sv / sv.trace().real();
  return eig_hermitian(hermitize(static_cast<double>(n) * sigma_c - target_c, 1e-6)).values.minCoeff();
}

}  // namespace

CostBracket one_shot_cost_bracket(const Mat& rho, const Subalgebra& N, double eps, const SolverOptions& opts) {
  check_epsilon(eps);
  Mat r = validated_normalized(rho);
  if (r.rows() != N.dim()) throw DimensionMismatch("one_shot_cost_bracket");
  OptimizationResult sm = smooth_dmax_subalgebra(r, N, eps, opts);
  CostBracket br;
  br.lower = sm.value;
  br.upper = sm.value + 1.0;

  Mat rp = eps == 0.0 ? r : sm.optimizer;
  Mat sigma = sm.sigma;
  double lambda = std::exp2(sm.value);
  double t = rp.trace().real();

  Mat target;
  int n = 1;
  if (lambda <= 1.0 + 1e-9) {
    // sigma >= rho'/lambda >= rho', so sigma itself lies in the ball.
    target = sigma;
  } else {
    // Completing rho' with sigma keeps rho' <= target, so the fidelity does not drop.
    target = hermitize(rp + (1.0 - t) * sigma, 1e-6);
    target /= target.trace().real();
    double need = std::exp2(dmax_pair(target, sigma));
    n = std::max(1, static_cast<int>(std::ceil(need * (1.0 - 1e-6))));
  }
  if (n >= 2) {
    Mat tc = N.to_canonical(target), sc;
    while (polish_sigma(tc, N, n, sc) < -1e-10) ++n;
    sigma = N.from_canonical(sc);
  }

  DilutionResult& w = br.witness;
  w.n = n;
  w.source = make_diagonal(n);
  w.sigma = sigma;
  w.target = target;
  w.channel = build_mio_dilution(target, sigma, n);
  Mat out = w.channel.apply(maximally_coherent(n));
  w.fidelity_achieved = root_fidelity(r, out);
  w.cost_bits = log2(static_cast<double>(n));

  bool channel_ok = w.channel.validate().ok && is_mio(w.channel, w.source, N) && max_abs(out - target) <= 1e-9;
  bool fid_ok = w.fidelity_achieved >= std::sqrt(1.0 - eps * eps) - 1e-6;
  bool cost_ok = w.cost_bits >= br.lower - 1e-6 && w.cost_bits <= br.upper + 1e-6;
  br.verified = channel_ok && fid_ok && cost_ok;
  return br;
}

}  // namespace subalg
