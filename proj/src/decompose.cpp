#include <algorithm>
#include <cmath>

#include "subalg/algebra.hpp"

namespace subalg {

namespace {

// Column-major vectorization.
Vec vec_of(const Mat& x) { return Eigen::Map<const Vec>(x.data(), x.size()); }

Mat unvec(const Vec& v, int d) { return Eigen::Map<const Mat>(v.data(), d, d); }

// Orthonormal (Hilbert-Schmidt) basis of a matrix subspace, built incrementally.
class SpanBasis {
 public:
  explicit SpanBasis(int d) : d_(d) {}
  bool add(const Mat& x, double tol = 1e-9) {
    Vec v = vec_of(x);
    double n0 = v.norm();
    if (n0 == 0) return false;
    v /= n0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis_) v -= b * b.dot(v);
    double n1 = v.norm();
    if (n1 <= tol) return false;
    basis_.push_back(v / n1);
    return true;
  }
  bool contains(const Mat& x, double tol = 1e-8) const {
    Vec v = vec_of(x);
    double n0 = v.norm();
    if (n0 == 0) return true;
    v /= n0;
    for (const auto& b : basis_) v -= b * b.dot(v);
    return v.norm() <= tol;
  }
  int size() const { return static_cast<int>(basis_.size()); }
  Mat element(int i) const { return unvec(basis_[i], d_); }

 private:
  int d_;
  std::vector<Vec> basis_;
};

// Null space of x -> ([a, x])_a within the span of `domain` (or all of M_d if empty).
std::vector<Mat> commuting_subspace(const std::vector<Mat>& ops, const std::vector<Mat>& domain, int d) {
  bool full = domain.empty();
  int dim = full ? d * d : static_cast<int>(domain.size());
  auto dom = [&](int j) {
    if (!full) return domain[j];
    Mat e = Mat::Zero(d, d);
    e(j % d, j / d) = 1.0;
    return e;
  };
  Mat gram = Mat::Zero(dim, dim);
  if (!ops.empty()) {
    for (const auto& a : ops) {
      Mat cols(d * d, dim);
      for (int j = 0; j < dim; ++j) {
        Mat x = dom(j);
        cols.col(j) = vec_of(a * x - x * a);
      }
      gram += cols.adjoint() * cols;
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  double top = std::max(1.0, es.eigenvalues().maxCoeff());
  std::vector<Mat> out;
  for (int j = 0; j < dim; ++j) {
    if (es.eigenvalues()(j) > 1e-9 * top) continue;
    Mat x = Mat::Zero(d, d);
    for (int i = 0; i < dim; ++i) x += es.eigenvectors()(i, j) * dom(i);
    out.push_back(x);
  }
  return out;
}

std::vector<Mat> orthonormalize(const std::vector<Mat>& xs, int d) {
  SpanBasis sb(d);
  for (const auto& x : xs) sb.add(x);
  std::vector<Mat> out;
  for (int i = 0; i < sb.size(); ++i) out.push_back(sb.element(i));
  return out;
}

Mat random_combination(const std::vector<Mat>& basis, Rng& rng, int d) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat x = Mat::Zero(d, d);
  for (const auto& b : basis) x += cd(n01(rng), n01(rng)) * b;
  return x;
}

// Groups ascending eigenvalues whose consecutive gap is below `gap`.
std::vector<std::vector<int>> eigen_groups(const RVec& vals, double gap) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < vals.size(); ++i) {
    if (groups.empty() || vals(i) - vals(groups.back().back()) > gap) groups.push_back({});
    groups.back().push_back(i);
  }
  return groups;
}

struct Attempt {
  std::vector<Block> blocks;
  Mat w;  // columns are canonical basis vectors
  bool ok = false;
};

Attempt try_decompose(const std::vector<Mat>& alg, const std::vector<Mat>& comm,
                      const std::vector<Mat>& center, int d, Rng& rng, double gap) {
  Attempt at;
  Mat z = random_combination(center, rng, d);
  Mat h = z + z.adjoint();
  double s = max_abs(h);
  if (s == 0) return at;
  EigH ez = eig_hermitian(h / s);
  auto cgroups = eigen_groups(ez.values, gap);
  if (static_cast<int>(cgroups.size()) != static_cast<int>(center.size())) return at;

  at.w = Mat(d, d);
  int col = 0;
  Mat g = random_combination(comm, rng, d);
  for (const auto& grp : cgroups) {
    int dk = static_cast<int>(grp.size());
    Mat q(d, dk);
    for (int i = 0; i < dk; ++i) q.col(i) = ez.vectors.col(grp[i]);

    std::vector<Mat> compressed;
    for (const auto& a : alg) compressed.push_back(q.adjoint() * a * q);
    int alg_dim = static_cast<int>(orthonormalize(compressed, dk).size());
    int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(alg_dim))));
    if (n * n != alg_dim || dk % n != 0) return at;
    int m = dk / n;

    Mat gk = q.adjoint() * g * q;
    std::vector<Mat> spaces;
    if (m == 1) {
      spaces.push_back(Mat::Identity(dk, dk));
    } else {
      Mat hk = gk + gk.adjoint();
      EigH eh = eig_hermitian(hk / std::max(max_abs(hk), 1e-300));
      auto mgroups = eigen_groups(eh.values, gap);
      if (static_cast<int>(mgroups.size()) != m) return at;
      for (const auto& mg : mgroups) {
        if (static_cast<int>(mg.size()) != n) return at;
        Mat e(dk, n);
        for (int i = 0; i < n; ++i) e.col(i) = eh.vectors.col(mg[i]);
        spaces.push_back(e);
      }
    }
    // Transport copy 0 onto copy i through a generic commutant element.
    Mat p0 = spaces[0] * spaces[0].adjoint();
    Mat f = spaces[0];
    for (int i = 0; i < m; ++i) {
      Mat vi;
      if (i == 0) {
        vi = p0;
      } else {
        Mat pi = spaces[i] * spaces[i].adjoint();
        Mat t = pi * gk * p0;
        Mat gram = t.adjoint() * t;
        EigH eg = eig_hermitian(gram);
        double top = eg.values.maxCoeff();
        if (top <= 1e-12) return at;
        Mat inv = spectral_apply(eg, [&](double x) { return x > 1e-6 * top ? 1.0 / std::sqrt(x) : 0.0; });
        vi = t * inv;
      }
      Mat cols = vi * f;
      for (int j = 0; j < n; ++j) at.w.col(col + i * n + j) = q * cols.col(j);
    }
    col += dk;
    at.blocks.push_back({m, n});
  }
  if (max_abs(at.w.adjoint() * at.w - Mat::Identity(d, d)) > 1e-8) return at;

  // Every algebra element must land exactly in block form.
  Subalgebra probe(at.blocks, Mat::Identity(d, d));
  for (const auto& a : alg) {
    Mat ac = at.w.adjoint() * a * at.w;
    if (max_abs(canonical_expectation(probe, ac) - ac) > 1e-8 * std::max(1.0, max_abs(ac))) return at;
  }
  at.ok = true;
  return at;
}

}  // namespace

Subalgebra decompose_from_generators(const std::vector<Mat>& gens, int dim, const DecomposeOptions& opts) {
  if (dim < 1) throw PreconditionViolated("dimension must be positive");
  for (const auto& g : gens)
    if (g.rows() != dim || g.cols() != dim) throw DimensionMismatch("generator dimension");
  int d = dim;

  std::vector<Mat> alg;
  if (opts.mode == GeneratorMode::Algebra) {
    std::vector<Mat> words = {Mat::Identity(d, d)};
    for (const auto& g : gens) {
      words.push_back(g);
      words.push_back(g.adjoint());
    }
    SpanBasis sb(d);
    std::vector<Mat> queue;
    for (const auto& w : words)
      if (sb.add(w)) queue.push_back(sb.element(sb.size() - 1));
    for (size_t qi = 0; qi < queue.size(); ++qi)
      for (size_t gi = 1; gi < words.size(); ++gi)
        if (sb.add(words[gi] * queue[qi])) queue.push_back(sb.element(sb.size() - 1));
    for (int i = 0; i < sb.size(); ++i) alg.push_back(sb.element(i));
  } else {
    alg = orthonormalize(commuting_subspace(gens, {}, d), d);
    SpanBasis sb(d);
    for (const auto& a : alg) sb.add(a);
    for (const auto& a : alg)
      if (!sb.contains(a.adjoint())) throw NotClosedUnderStar("commutant basis is not closed under adjoint");
  }

  std::vector<Mat> comm = orthonormalize(commuting_subspace(alg, {}, d), d);
  std::vector<Mat> center = orthonormalize(commuting_subspace(alg, alg, d), d);

  Rng rng(opts.seed);
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    Attempt at = try_decompose(alg, comm, center, d, rng, opts.degeneracy_gap);
    if (at.ok) return Subalgebra(at.blocks, at.w.adjoint());
  }
  throw DegenerateSample("no generic sample after retries");
}

}  // namespace subalg
