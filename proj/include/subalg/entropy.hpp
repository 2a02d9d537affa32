#pragma once

// Entropy API: relative and conditional entropies, the dilation dualities and
// the asymptotic equipartition trace.

#include <optional>
#include <string>
#include <vector>

#include "subalg/solver.hpp"

namespace subalg {

// Bits; +inf when supp rho is not inside supp sigma.
double relative_entropy(const Mat& rho, const Mat& sigma);
// D(rho || E_N(rho)).
double subalgebra_relative_entropy(const Mat& rho, const Subalgebra& N);

enum class CondKind { Hmin, Hmax, Halpha, H };

// Conditional entropy of A given B for rho on A (x) B. eps smooths Hmin/Hmax;
// alpha is used by Halpha. Uses the subalgebra 1_A (x) B(H_B).
double conditional_entropy(const Mat& rho_ab, int dim_a, int dim_b, CondKind kind, double eps = 0.0,
                           double alpha = 1.0, const SolverOptions& opts = {});

struct EntropyReport {
  std::string quantity;  // D, D_alpha(a), DmaxEps, DminEps, DH, Hmin, ...
  double value_bits = 0;
  int n = 1;
  double epsilon = 0;
  std::string route;  // direct or dilated
  double certificate_gap = 0;
  std::optional<SolverCertificate> certificate;
};

struct DualityRow {
  std::string quantity;
  double epsilon = 0;
  double alpha = 0;  // 0 when not a Renyi row
  EntropyReport direct;
  EntropyReport dilated;
  double difference = 0;
  double tolerance = 0;
  bool passed = false;
};

struct DualityReport {
  std::vector<DualityRow> rows;
  bool passed = true;
};

// Direct subalgebra values against conditional entropies of the dilated state.
// Smoothed rows (DmaxEps, DminEps) are produced for every eps; Renyi rows for eps = 0.
DualityReport duality_check(const Mat& rho, const Subalgebra& N, const std::vector<double>& eps_list,
                            const std::vector<double>& alpha_list, const SolverOptions& opts = {});

// Checks against the E|F marginal of the purified dilation.
DualityReport triple_duality_check(const Mat& rho, const Subalgebra& N, double eps,
                                   const std::vector<double>& alpha_list = {0.5, 2.0 / 3.0, 1.0, 2.0, kInf},
                                   const SolverOptions& opts = {});

// 1/alpha + 1/beta = 2.
double conjugate_order(double alpha);

struct AepRow {
  int n = 1;
  double dmax_eps = 0;       // (1/n) D_max^eps(rho^n || N^n)
  double dmin_eps = 0;       // (1/n) D_min^eps(rho^n || N^n)
  double dh_eps = 0;         // (1/n) D_H^eps(rho^n || N^n)
  double dmax_eps_pair = 0;  // (1/n) D_max^eps(rho^n || E(rho)^n)
  double relative_entropy = 0;
  double max_gap = 0;  // largest certificate gap among the rows' solves
};

std::vector<AepRow> aep_trace(const Mat& rho, const Subalgebra& N, double eps, int n_max,
                              const SolverOptions& opts = {});

std::string quantity_name(const std::string& base, double alpha = 0);

}  // namespace subalg
