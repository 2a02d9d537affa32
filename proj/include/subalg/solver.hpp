#pragma once

// Optimization-based divergences against a subalgebra or a fixed state.
// All values are in bits.

#include <cstdint>
#include <optional>

#include "subalg/algebra.hpp"
#include "subalg/sdp.hpp"

namespace subalg {

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 500;
  std::uint64_t seed = 0xC0FFEE;
  bool parallel = true;
};

struct OptimizationResult {
  double value = 0;
  std::optional<SolverCertificate> cert;
  Mat optimizer;  // smoothed state, test operator or witness, ambient basis
  Mat sigma;      // optimal free state, ambient basis
  bool converged = true;
};

// D_max(rho || N) = log min { tr X : X in N, X >= rho }.
OptimizationResult dmax_subalgebra(const Mat& rho, const Subalgebra& N, const SolverOptions& opts = {});
// log lambda_max(sigma^-1/2 rho sigma^-1/2), +inf when supp rho is not inside supp sigma.
double dmax_pair(const Mat& rho, const Mat& sigma);

struct NeymanPearsonResult {
  double beta = 0;   // min tr(Q sigma) subject to tr(Q rho) >= 1 - eps
  double value = 0;  // -log beta
  Mat q;
  double threshold = 0;
};
NeymanPearsonResult neyman_pearson(const Mat& rho, const Mat& sigma, double eps);

// min over sigma in S(N) of the hypothesis-testing divergence.
OptimizationResult dh_subalgebra(const Mat& rho, const Subalgebra& N, double eps, const SolverOptions& opts = {});

// Purified-distance smoothing over subnormalized states.
OptimizationResult smooth_dmax_subalgebra(const Mat& rho, const Subalgebra& N, double eps,
                                          const SolverOptions& opts = {});
OptimizationResult smooth_dmax_pair(const Mat& rho, const Mat& sigma, double eps, const SolverOptions& opts = {});

// min over sigma in S(N) of -2 log tr|sqrt(rho) sqrt(sigma)|.
OptimizationResult dmin_subalgebra(const Mat& rho, const Subalgebra& N, const SolverOptions& opts = {});
OptimizationResult smooth_dmin_subalgebra(const Mat& rho, const Subalgebra& N, double eps,
                                          const SolverOptions& opts = {});
double dmin_pair(const Mat& rho, const Mat& sigma);

// Sandwiched Renyi divergence. alpha = 1 is the relative entropy, alpha = inf is D_max.
double renyi_pair(const Mat& rho, const Mat& sigma, double alpha);
OptimizationResult renyi_subalgebra(const Mat& rho, const Subalgebra& N, double alpha,
                                    const SolverOptions& opts = {});

// Objective and gradient used by the Renyi minimizer, exposed for testing.
// f(L) = D_alpha(rho || S(L) / tr S(L)) in nats with S(L) = sum_k 1 (x) L_k L_k^*.
struct RenyiObjective {
  const Subalgebra* alg;
  Mat rho_c;  // canonical
  double alpha;
  double value(const std::vector<Mat>& factors, std::vector<Mat>* grad) const;
};

// Ambient state of the smoothing ball membership test: P(rho, rho') <= eps.
bool in_smoothing_ball(const Mat& rho, const Mat& rho_prime, double eps, double tol = 1e-7);

void check_epsilon(double eps, bool allow_zero = true);

}  // namespace subalg
