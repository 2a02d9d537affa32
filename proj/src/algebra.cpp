#include "subalg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace subalg {

Subalgebra::Subalgebra(std::vector<Block> blocks, Mat u) {
  int d = 0;
  for (const auto& b : blocks) {
    if (b.m < 1 || b.n < 1) throw PreconditionViolated("block sizes must be positive");
    d += b.m * b.n;
  }
  if (u.rows() != d || u.cols() != d) throw DimensionMismatch("basis unitary does not match blocks");
  if (max_abs(u * u.adjoint() - Mat::Identity(d, d)) > 1e-10)
    throw PreconditionViolated("basis matrix is not unitary");

  std::vector<int> start(blocks.size());
  for (size_t k = 0, acc = 0; k < blocks.size(); ++k) {
    start[k] = static_cast<int>(acc);
    acc += blocks[k].m * blocks[k].n;
  }
  std::vector<int> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (blocks[a].n != blocks[b].n) return blocks[a].n > blocks[b].n;
    return blocks[a].m > blocks[b].m;
  });

  dim_ = d;
  u_ = Mat(d, d);
  int row = 0;
  for (int k : order) {
    blocks_.push_back(blocks[k]);
    offsets_.push_back(row);
    int size = blocks[k].m * blocks[k].n;
    u_.middleRows(row, size) = u.middleRows(start[k], size);
    row += size;
  }
  identity_ = max_abs(u_ - Mat::Identity(d, d)) == 0.0;
}

int Subalgebra::env_dim() const {
  int s = 0;
  for (const auto& b : blocks_) s += b.m * b.m;
  return s;
}

Mat Subalgebra::to_canonical(const Mat& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionMismatch("operator dimension vs subalgebra");
  if (identity_) return x;
  return u_ * x * u_.adjoint();
}

Mat Subalgebra::from_canonical(const Mat& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw DimensionMismatch("operator dimension vs subalgebra");
  if (identity_) return x;
  return u_.adjoint() * x * u_;
}

Subalgebra make_diagonal(int d) {
  if (d < 1) throw PreconditionViolated("dimension must be positive");
  return Subalgebra(std::vector<Block>(d, Block{1, 1}), Mat::Identity(d, d));
}

Subalgebra make_tensor_factor(int m, int n, bool keep_first) {
  if (m < 1 || n < 1) throw PreconditionViolated("factor dimensions must be positive");
  int d = m * n;
  if (!keep_first) return Subalgebra({Block{m, n}}, Mat::Identity(d, d));
  // M_m (x) 1_n: canonical index i*m + a  <->  ambient a*n + i
  Mat u = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) u(i * m + a, a * n + i) = 1.0;
  return Subalgebra({Block{n, m}}, u);
}

Subalgebra make_trivial(int d) {
  if (d < 1) throw PreconditionViolated("dimension must be positive");
  return Subalgebra({Block{d, 1}}, Mat::Identity(d, d));
}

Subalgebra make_full(int d) {
  if (d < 1) throw PreconditionViolated("dimension must be positive");
  return Subalgebra({Block{1, d}}, Mat::Identity(d, d));
}

Mat reduce_block(const Subalgebra& N, const Mat& xc, int k) {
  const Block& b = N.blocks()[k];
  int off = N.offset(k);
  Mat y = Mat::Zero(b.n, b.n);
  for (int i = 0; i < b.m; ++i) y += xc.block(off + i * b.n, off + i * b.n, b.n, b.n);
  return y;
}

Mat embed_block(const Subalgebra& N, int k, const Mat& y) {
  const Block& b = N.blocks()[k];
  int off = N.offset(k);
  Mat out = Mat::Zero(N.dim(), N.dim());
  for (int i = 0; i < b.m; ++i) out.block(off + i * b.n, off + i * b.n, b.n, b.n) = y;
  return out;
}

Mat canonical_expectation(const Subalgebra& N, const Mat& xc) {
  Mat out = Mat::Zero(N.dim(), N.dim());
  for (size_t k = 0; k < N.blocks().size(); ++k) {
    const Block& b = N.blocks()[k];
    Mat y = reduce_block(N, xc, static_cast<int>(k)) / static_cast<double>(b.m);
    int off = N.offset(static_cast<int>(k));
    for (int i = 0; i < b.m; ++i) out.block(off + i * b.n, off + i * b.n, b.n, b.n) = y;
  }
  return out;
}

Mat conditional_expectation(const Subalgebra& N, const Mat& x) {
  return N.from_canonical(canonical_expectation(N, N.to_canonical(x)));
}

bool membership(const Subalgebra& N, const Mat& x, double tol) {
  return max_abs(conditional_expectation(N, x) - x) <= tol;
}

Mat random_algebra_state(const Subalgebra& N, Rng& rng) {
  std::exponential_distribution<double> w(1.0);
  Mat xc = Mat::Zero(N.dim(), N.dim());
  std::vector<double> p(N.blocks().size());
  for (auto& v : p) v = w(rng) + 1e-3;
  double tot = std::accumulate(p.begin(), p.end(), 0.0);
  for (size_t k = 0; k < p.size(); ++k) {
    const Block& b = N.blocks()[k];
    Mat s = random_state(rng, b.n) * (p[k] / tot / b.m);
    xc += embed_block(N, static_cast<int>(k), s);
  }
  Mat x = N.from_canonical(xc);
  return (x + x.adjoint()) / 2.0;
}

Mat random_algebra_element(const Subalgebra& N, Rng& rng) {
  Mat xc = Mat::Zero(N.dim(), N.dim());
  for (size_t k = 0; k < N.blocks().size(); ++k)
    xc += embed_block(N, static_cast<int>(k), random_hermitian(rng, N.blocks()[k].n));
  Mat x = N.from_canonical(xc);
  return (x + x.adjoint()) / 2.0;
}

std::string PimsnerPopaIndex::fraction() const {
  return inverse == 1 ? std::string("1") : "1/" + std::to_string(inverse);
}

PimsnerPopaIndex pimsner_popa_index(const Subalgebra& N) {
  // m_k is the multiplicity; see index_by_sdp for the independent check
  std::int64_t inv = 0;
  for (const auto& b : N.blocks()) inv += static_cast<std::int64_t>(std::min(b.m, b.n)) * b.m;
  return {inv, 1.0 / static_cast<double>(inv)};
}

double rank_one_index(const Subalgebra& N, const Vec& psi) {
  Mat x = psi * psi.adjoint();
  Mat e = conditional_expectation(N, x);
  Mat pinv = matrix_power(e, -1.0);
  double q = (psi.adjoint() * pinv * psi)(0, 0).real();
  return 1.0 / q;
}

IndexOracleResult index_by_sdp(const Subalgebra& N, std::uint64_t seed, int starts) {
  Rng rng(seed);
  double lo = kInf, hi = 0;
  for (int s = 0; s < starts; ++s) {
    double l = rank_one_index(N, random_unit_vector(rng, N.dim()));
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  double spread = hi - lo;
  if (spread > 1e-5) throw NonConvergence("index oracle: spread across starts " + std::to_string(spread));
  IndexProjection ip = index_projection(N);
  EigH eh = eig_hermitian(ip.e);
  Vec phi = eh.vectors.col(eh.values.size() - 1);
  double cand = rank_one_index(N, phi);
  return {std::min(lo, cand), spread, starts};
}

IndexProjection index_projection(const Subalgebra& N) {
  PimsnerPopaIndex pp = pimsner_popa_index(N);
  int d = N.dim();
  auto build = [&](const std::vector<int>& use, double lam) {
    Vec psi = Vec::Zero(d);
    Mat fc = Mat::Zero(d, d);
    for (int k : use) {
      const Block& b = N.blocks()[k];
      int r = std::min(b.m, b.n), off = N.offset(k);
      double ck = std::sqrt(lam * b.m * r);
      for (int i = 0; i < r; ++i) psi(off + i * b.n + i) = ck / std::sqrt(static_cast<double>(r));
      Mat pr = Mat::Zero(b.n, b.n);
      pr.topLeftCorner(r, r).setIdentity();
      fc += embed_block(N, k, pr);
    }
    IndexProjection out;
    out.e = N.from_canonical(psi * psi.adjoint());
    out.f = N.from_canonical(fc);
    out.lambda = lam;
    return out;
  };
  auto ok = [&](const IndexProjection& ip) {
    return max_abs(conditional_expectation(N, ip.e) - ip.lambda * ip.f) <= 1e-9 &&
           std::abs(ip.e.trace().real() - 1.0) <= 1e-9;
  };
  std::vector<int> all(N.blocks().size());
  std::iota(all.begin(), all.end(), 0);
  IndexProjection ip = build(all, pp.lambda);
  if (ok(ip)) return ip;

  int best = 0;
  for (size_t k = 1; k < N.blocks().size(); ++k) {
    const Block& a = N.blocks()[k];
    const Block& b = N.blocks()[best];
    if (std::min(a.m, a.n) * a.m > std::min(b.m, b.n) * b.m) best = static_cast<int>(k);
  }
  const Block& b = N.blocks()[best];
  ip = build({best}, 1.0 / (std::min(b.m, b.n) * b.m));
  ip.single_block_fallback = true;
  if (!ok(ip)) throw ConstructionFailed("index projection identity check failed");
  return ip;
}

namespace {

Subalgebra tensor_pair(const Subalgebra& A, const Subalgebra& B) {
  int da = A.dim(), db = B.dim(), d = da * db;
  std::vector<Block> blocks;
  Mat perm = Mat::Zero(d, d);
  int row = 0;
  for (size_t k1 = 0; k1 < A.blocks().size(); ++k1) {
    const Block& b1 = A.blocks()[k1];
    for (size_t k2 = 0; k2 < B.blocks().size(); ++k2) {
      const Block& b2 = B.blocks()[k2];
      blocks.push_back({b1.m * b2.m, b1.n * b2.n});
      int nn = b1.n * b2.n;
      for (int i1 = 0; i1 < b1.m; ++i1)
        for (int i2 = 0; i2 < b2.m; ++i2)
          for (int a1 = 0; a1 < b1.n; ++a1)
            for (int a2 = 0; a2 < b2.n; ++a2) {
              int src = (A.offset(k1) + i1 * b1.n + a1) * db + (B.offset(k2) + i2 * b2.n + a2);
              int dst = row + (i1 * b2.m + i2) * nn + a1 * b2.n + a2;
              perm(dst, src) = 1.0;
            }
      row += b1.m * b2.m * nn;
    }
  }
  return Subalgebra(blocks, perm * kron(A.unitary(), B.unitary()));
}

}  // namespace

Subalgebra tensor_power(const Subalgebra& N, int n) {
  if (n < 1) throw PreconditionViolated("tensor power must be at least 1");
  double total = std::pow(static_cast<double>(N.dim()), n);
  if (total > 512) throw DimensionTooLarge("d^n exceeds 512");
  Subalgebra out = N;
  for (int i = 1; i < n; ++i) out = tensor_pair(out, N);
  return out;
}

std::vector<AxiomRow> axioms_check(const Subalgebra& N, int n_max, int samples, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<AxiomRow> rows;
  std::vector<Subalgebra> pw;
  for (int n = 1; n <= n_max; ++n) pw.push_back(tensor_power(N, n));
  auto viol = [](const Subalgebra& A, const Mat& x) {
    return max_abs(conditional_expectation(A, x) - x);
  };
  auto record = [&](int n, const std::string& name, double v, int s) {
    rows.push_back({n, name, s, v, v <= 1e-9});
  };
  int d = N.dim();
  for (int n = 1; n <= n_max; ++n) {
    const Subalgebra& A = pw[n - 1];
    double v1 = 0, v2 = 0, v3 = 0, v4 = 0, v5 = 0;
    for (int s = 0; s < samples; ++s) {
      Mat a = random_algebra_state(A, rng), b = random_algebra_state(A, rng);
      std::uniform_real_distribution<double> u01(0, 1);
      double t = u01(rng);
      v1 = std::max(v1, viol(A, t * a + (1 - t) * b));

      Mat sigma = random_algebra_state(N, rng);
      v2 = std::max(v2, viol(A, kron_power(sigma, n)));

      if (n >= 2) {
        std::vector<int> dims(n, d), keep(n - 1);
        std::iota(keep.begin(), keep.end(), 0);
        std::uniform_int_distribution<int> pick(0, n - 1);
        int drop = pick(rng);
        keep.erase(std::remove(keep.begin(), keep.end(), drop), keep.end());
        if (static_cast<int>(keep.size()) < n - 1) keep.push_back(n - 1);
        v3 = std::max(v3, viol(pw[n - 2], partial_trace(a, dims, keep)));

        std::uniform_int_distribution<int> split(1, n - 1);
        int k = split(rng);
        Mat x = random_algebra_state(pw[k - 1], rng), y = random_algebra_state(pw[n - k - 1], rng);
        v4 = std::max(v4, viol(A, kron(x, y)));

        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        v5 = std::max(v5, viol(A, permute_systems(a, dims, perm)));
      }
    }
    record(n, "convexity", v1, samples);
    record(n, "product_of_free", v2, samples);
    if (n >= 2) {
      record(n, "partial_trace", v3, samples);
      record(n, "tensor_product", v4, samples);
      record(n, "permutation", v5, samples);
    }
  }
  return rows;
}

}  // namespace subalg
