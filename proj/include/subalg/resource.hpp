#pragma once

// Channels, MIO/DIO predicates and the dilution constructions.

#include <vector>

#include "subalg/solver.hpp"

namespace subalg {

class QuantumChannel {
 public:
  QuantumChannel() = default;
  // Validates sum K*K = 1 to 1e-9.
  QuantumChannel(int dim_in, int dim_out, std::vector<Mat> kraus);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<Mat>& kraus() const { return kraus_; }
  // sum_ij |i><j| (x) Phi(|i><j|), input factor first.
  const Mat& choi() const { return choi_; }
  Mat apply(const Mat& x) const;

  struct Validation {
    double trace_preservation = 0;  // || sum K*K - 1 ||
    double choi_min_eigenvalue = 0;
    double choi_marginal = 0;  // || tr_out choi - 1 ||
    bool ok = false;
  };
  Validation validate(double tol = 1e-9) const;

 private:
  int dim_in_ = 0, dim_out_ = 0;
  std::vector<Mat> kraus_;
  Mat choi_;
};

// x -> sum_j tr(E_j x) omega_j for PSD effects summing to 1 and states omega_j.
QuantumChannel measure_prepare(const std::vector<Mat>& effects, const std::vector<Mat>& states);

// Largest Frobenius deviation over matrix units of Phi o E_M against E_N o Phi o E_M.
double mio_deviation(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N);
// Same for Phi o E_M against E_N o Phi.
double dio_deviation(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N);
bool is_mio(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N, double tol = 1e-9);
bool is_dio(const QuantumChannel& phi, const Subalgebra& M, const Subalgebra& N, double tol = 1e-9);

// Uniform superposition projector on C^n.
Mat maximally_coherent(int n);

// x -> (1 - tr(e x)) (n sigma - rho') / (n - 1) + tr(e x) rho' on C^n; n = 1 prepares rho'.
QuantumChannel build_mio_dilution(const Mat& rho_prime, const Mat& sigma, int n);
// As above with sigma replaced by E_N(rho').
QuantumChannel build_dio_dilution(const Mat& rho_prime, const Subalgebra& N, int n);

// log min { lambda : rho <= lambda E_N(rho) }.
double dmax_pinned(const Mat& rho, const Subalgebra& N);

struct PinnedResult {
  double value = 0;
  Mat optimizer;  // substate in the ball
  int sdp_solves = 0;
};
// Smoothed over the purified-distance ball, by bisection on lambda with a feasibility SDP.
PinnedResult dmax_pinned_eps(const Mat& rho, const Subalgebra& N, double eps, const SolverOptions& opts = {},
                             double bits_tol = 1e-6);

struct DilutionResult {
  Subalgebra source;  // diagonal algebra on C^n
  QuantumChannel channel;
  int n = 1;
  Mat target;  // Phi(e_M)
  Mat sigma;   // free state used by the construction
  double fidelity_achieved = 0;
  double cost_bits = 0;  // log n = log of the inverse source index
};

struct CostBracket {
  double lower = 0;
  double upper = 0;  // lower + 1
  DilutionResult witness;
  bool verified = false;  // channel checks, fidelity and lower <= cost <= upper
};

CostBracket one_shot_cost_bracket(const Mat& rho, const Subalgebra& N, double eps, const SolverOptions& opts = {});

}  // namespace subalg
