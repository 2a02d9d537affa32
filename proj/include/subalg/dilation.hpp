#pragma once

#include <cstdint>

#include "subalg/algebra.hpp"

namespace subalg {

// V : H_A -> H_A (x) H_E, rows indexed a * dim_env + r.
struct StinespringIsometry {
  int dim_in = 0;
  int dim_env = 0;
  Mat v;
};

StinespringIsometry stinespring(const Subalgebra& N);

// Kraus operators in ambient coordinates, block-major then i then j.
std::vector<Mat> expectation_kraus(const Subalgebra& N);

struct CommutatorReport {
  int samples = 0;
  double max_inside = 0;    // largest commutator over sampled a in N
  double min_outside = 0;   // smallest commutator over sampled a outside N
  int mismatches = 0;       // samples where (commutator small) != membership
  bool passed = true;
};

// [(a (x) 1_E), VV*] for random Hermitian a, half drawn from N and half generic.
CommutatorReport multiplicative_domain_check(const Subalgebra& N, const StinespringIsometry& V, int samples,
                                             std::uint64_t seed = 0xC0FFEE);
double domain_commutator(const StinespringIsometry& V, const Mat& a);

struct OrderReport {
  int samples = 0;
  double min_eigenvalue = 0;
  bool passed = true;
};

// lambda_min(E(x) (x) 1_E - V E(x) V*) over random PSD x.
OrderReport order_inequality_check(const Subalgebra& N, const StinespringIsometry& V, int samples,
                                   std::uint64_t seed = 0xC0FFEE);

// V rho V* with factors ordered (E, A).
Mat dilate_state(const StinespringIsometry& V, const Mat& rho);

struct Purification {
  int dim_a = 0;
  int dim_f = 0;
  Vec psi;  // (A, F) order
};
Purification purify(const Mat& rho);

struct TripartitePureState {
  int dim_e = 0, dim_a = 0, dim_f = 0;
  Vec psi;  // (E, A, F) order
  Mat marginal(const std::vector<int>& keep) const;  // 0 = E, 1 = A, 2 = F
};
TripartitePureState build_xi(const StinespringIsometry& V, const Mat& rho);

}  // namespace subalg
