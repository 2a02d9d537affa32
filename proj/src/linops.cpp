#include "subalg/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subalg {

double log2(double x) { return std::log2(x); }

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Mat& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  double scale = std::max(max_abs(m), 1e-300);
  return max_abs(m - m.adjoint()) <= rel_tol * scale;
}

Mat hermitize(const Mat& m, double rel_tol) {
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix is not square");
  if (!is_hermitian(m, rel_tol)) throw NonHermitian("asymmetry above tolerance");
  return (m + m.adjoint()) / 2.0;
}

EigH eig_hermitian(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat matrix_power(const Mat& m, double p) {
  EigH e = eig_hermitian(m);
  double top = std::max(e.values.maxCoeff(), 0.0);
  double cut = kSupportCut * top;
  // noise-level eigenvalues are dropped for every exponent, since x^p amplifies them for p < 1
  return spectral_apply(e, [&](double x) { return x > cut && x > 0 ? std::pow(x, p) : 0.0; });
}

Mat matrix_sqrt(const Mat& m) { return matrix_power(m, 0.5); }

Mat support_projector(const Mat& m) { return matrix_power(m, 0.0); }

Mat matrix_log(const Mat& m) {
  EigH e = eig_hermitian(m);
  double cut = kSupportCut * std::max(e.values.maxCoeff(), 0.0);
  return spectral_apply(e, [&](double x) { return x > cut && x > 0 ? std::log(x) : 0.0; });
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat kron_power(const Mat& a, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

namespace {

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

std::vector<int> digits_of(int r, const std::vector<int>& dims) {
  std::vector<int> dig(dims.size());
  for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
    dig[s] = r % dims[s];
    r /= dims[s];
  }
  return dig;
}

}  // namespace

Mat partial_trace(const Mat& m, const std::vector<int>& dims, std::vector<int> keep) {
  int total = product(dims);
  if (m.rows() != total || m.cols() != total)
    throw DimensionMismatch("partial_trace: factor dimensions do not match matrix");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw DimensionMismatch("partial_trace: bad factor index");
    kept[k] = true;
  }
  int dk = 1, dt = 1;
  for (size_t s = 0; s < dims.size(); ++s) (kept[s] ? dk : dt) *= dims[s];

  // rows grouped by their traced multi-index
  std::vector<std::vector<std::pair<int, int>>> groups(dt);
  for (int r = 0; r < total; ++r) {
    auto dig = digits_of(r, dims);
    int ki = 0, ti = 0;
    for (size_t s = 0; s < dims.size(); ++s) {
      if (kept[s]) ki = ki * dims[s] + dig[s];
      else ti = ti * dims[s] + dig[s];
    }
    groups[ti].push_back({r, ki});
  }
  Mat out = Mat::Zero(dk, dk);
  for (const auto& g : groups)
    for (auto [r, kr] : g)
      for (auto [c, kc] : g) out(kr, kc) += m(r, c);
  return out;
}

namespace {

std::vector<int> permutation_map(const std::vector<int>& dims, const std::vector<int>& perm) {
  if (perm.size() != dims.size()) throw DimensionMismatch("permutation size");
  std::vector<int> new_dims(dims.size());
  for (size_t j = 0; j < perm.size(); ++j) new_dims[j] = dims[perm[j]];
  int total = product(dims);
  std::vector<int> map(total);
  for (int r = 0; r < total; ++r) {
    auto dig = digits_of(r, dims);
    int q = 0;
    for (size_t j = 0; j < perm.size(); ++j) q = q * new_dims[j] + dig[perm[j]];
    map[r] = q;
  }
  return map;
}

}  // namespace

Mat permute_systems(const Mat& m, const std::vector<int>& dims, const std::vector<int>& perm) {
  int total = product(dims);
  if (m.rows() != total || m.cols() != total) throw DimensionMismatch("permute_systems");
  auto map = permutation_map(dims, perm);
  Mat out(total, total);
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c) out(map[r], map[c]) = m(r, c);
  return out;
}

Vec permute_vector(const Vec& v, const std::vector<int>& dims, const std::vector<int>& perm) {
  int total = product(dims);
  if (v.size() != total) throw DimensionMismatch("permute_vector");
  auto map = permutation_map(dims, perm);
  Vec out(total);
  for (int r = 0; r < total; ++r) out(map[r]) = v(r);
  return out;
}

double trace_fidelity(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows()) throw DimensionMismatch("fidelity");
  Mat s = matrix_sqrt(rho) * matrix_sqrt(sigma);
  Eigen::JacobiSVD<Mat> svd(s);
  return svd.singularValues().sum();
}

double root_fidelity(const Mat& rho, const Mat& sigma) {
  double tr1 = rho.trace().real(), tr2 = sigma.trace().real();
  double corr = std::sqrt(std::max(0.0, (1.0 - tr1) * (1.0 - tr2)));
  return std::min(1.0, trace_fidelity(rho, sigma) + corr);
}

double purified_distance(const Mat& rho, const Mat& sigma) {
  double f = root_fidelity(rho, sigma);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

double von_neumann_entropy(const Mat& rho) {
  EigH e = eig_hermitian(rho);
  double h = 0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    double p = e.values(i);
    if (p > 1e-300) h -= p * std::log2(p);
  }
  return h;
}

Mat psd_factor(const Mat& rho, double rel_cut) {
  EigH e = eig_hermitian(rho);
  double top = std::max(e.values.maxCoeff(), 0.0);
  std::vector<int> idx;
  for (Eigen::Index i = e.values.size() - 1; i >= 0; --i)
    if (e.values(i) > rel_cut * top && e.values(i) > 0) idx.push_back(static_cast<int>(i));
  Mat L(rho.rows(), static_cast<Eigen::Index>(idx.size()));
  for (size_t a = 0; a < idx.size(); ++a)
    L.col(a) = std::sqrt(e.values(idx[a])) * e.vectors.col(idx[a]);
  return L;
}

DensityOperator::DensityOperator(Mat m, bool substate_allowed) : substate_(substate_allowed) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionMismatch("density operator shape");
  m_ = hermitize(m);
  EigH e = eig_hermitian(m_);
  double top = std::max(e.values.maxCoeff(), 0.0);
  if (e.values.minCoeff() < -1e-9 * std::max(top, 1e-300))
    throw PreconditionViolated("density operator has a negative eigenvalue");
  double tr = m_.trace().real();
  if (!substate_ && std::abs(tr - 1.0) > 1e-9) throw PreconditionViolated("trace is not 1");
  if (substate_ && (tr <= 0 || tr > 1 + 1e-9)) throw PreconditionViolated("substate trace out of (0,1]");
}

Projection::Projection(Mat m) {
  m_ = hermitize(m);
  if (max_abs(m_ * m_ - m_) > 1e-9) throw PreconditionViolated("not idempotent");
}

Mat random_ginibre(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = cd(n01(rng), n01(rng));
  return g;
}

Mat random_unitary(Rng& rng, int d) {
  Eigen::HouseholderQR<Mat> qr(random_ginibre(rng, d, d));
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  Mat r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    cd ph = r(j, j) / std::abs(r(j, j));
    q.col(j) *= ph;
  }
  return q;
}

Mat random_hermitian(Rng& rng, int d) {
  Mat g = random_ginibre(rng, d, d);
  return (g + g.adjoint()) / 2.0;
}

Mat random_state(Rng& rng, int d, int rank) {
  if (rank <= 0 || rank > d) rank = d;
  Mat g = random_ginibre(rng, d, rank);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

Vec random_unit_vector(Rng& rng, int d) {
  Mat g = random_ginibre(rng, d, 1);
  Vec v = g.col(0);
  return v / v.norm();
}

Mat random_psd(Rng& rng, int d) {
  Mat g = random_ginibre(rng, d, d);
  return g * g.adjoint();
}

}  // namespace subalg
