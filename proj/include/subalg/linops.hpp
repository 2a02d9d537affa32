#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "subalg/errors.hpp"

namespace subalg {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative cut below which eigenvalues are treated as zero for negative powers.
inline constexpr double kSupportCut = 1e-12;

double log2(double x);

struct EigH {
  RVec values;  // ascending
  Mat vectors;
};

double max_abs(const Mat& m);
bool is_hermitian(const Mat& m, double rel_tol = 1e-10);
// (m + m*)/2, or NonHermitian if the asymmetry is above rel_tol.
Mat hermitize(const Mat& m, double rel_tol = 1e-10);

EigH eig_hermitian(const Mat& m);

template <class F>
Mat spectral_apply(const EigH& e, F f) {
  RVec v(e.values.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f(e.values(i));
  return e.vectors * v.asDiagonal() * e.vectors.adjoint();
}

// Pseudo-power: only eigenvalues above kSupportCut * lambda_max are raised,
// the rest map to zero.
Mat matrix_power(const Mat& m, double p);
Mat matrix_sqrt(const Mat& m);
Mat support_projector(const Mat& m);
// Natural matrix log on the support.
Mat matrix_log(const Mat& m);

Mat kron(const Mat& a, const Mat& b);
Mat kron_power(const Mat& a, int n);

// Trace over all factors not in keep; kept factors come out in ascending order.
Mat partial_trace(const Mat& m, const std::vector<int>& dims, std::vector<int> keep);
// Output factor j is input factor perm[j].
Mat permute_systems(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm);
Vec permute_vector(const Vec& v, const std::vector<int>& dims, const std::vector<int>& perm);

// tr|sqrt(rho) sqrt(sigma)| plus sqrt((1 - tr rho)(1 - tr sigma)).
double root_fidelity(const Mat& rho, const Mat& sigma);
double trace_fidelity(const Mat& rho, const Mat& sigma);  // tr|sqrt(rho) sqrt(sigma)| only
double purified_distance(const Mat& rho, const Mat& sigma);

double von_neumann_entropy(const Mat& rho);  // bits

// Factor L (d x r) with L L* = rho, columns ordered by descending eigenvalue.
Mat psd_factor(const Mat& rho, double rel_cut = kSupportCut);

class DensityOperator {
 public:
  DensityOperator() = default;
  DensityOperator(Mat m, bool substate_allowed = false);
  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }
  bool substate_allowed() const { return substate_; }

 private:
  Mat m_;
  bool substate_ = false;
};

class Projection {
 public:
  explicit Projection(Mat m);
  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& matrix() const { return m_; }

 private:
  Mat m_;
};

// Sampling helpers.
Mat random_ginibre(Rng& rng, int rows, int cols);
Mat random_unitary(Rng& rng, int d);
Mat random_hermitian(Rng& rng, int d);
Mat random_state(Rng& rng, int d, int rank = -1);  // Hilbert-Schmidt type
Vec random_unit_vector(Rng& rng, int d);
Mat random_psd(Rng& rng, int d);

}  // namespace subalg
