#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subalg/linops.hpp"

namespace subalg {

// One central summand 1_m (x) M_n: m is the multiplicity, n the block size.
struct Block {
  int m = 1;
  int n = 1;
  bool operator==(const Block&) const = default;
};

class Subalgebra {
 public:
  Subalgebra() = default;
  // Blocks in construction order; rows of u are the canonical basis vectors in
  // that order. Blocks get sorted by (n desc, m desc), stable.
  Subalgebra(std::vector<Block> blocks, Mat u);

  int dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Mat& unitary() const { return u_; }
  int offset(int k) const { return offsets_[k]; }
  int env_dim() const;  // sum of m_k^2
  bool canonical_is_identity() const { return identity_; }

  Mat to_canonical(const Mat& x) const;
  Mat from_canonical(const Mat& x) const;

 private:
  int dim_ = 0;
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  Mat u_;
  bool identity_ = false;
};

Subalgebra make_diagonal(int d);
// keep_first: N = M_m (x) 1_n, blocks [(n, m)]; otherwise N = 1_m (x) M_n, blocks [(m, n)].
Subalgebra make_tensor_factor(int m, int n, bool keep_first = true);
Subalgebra make_trivial(int d);
Subalgebra make_full(int d);

// Canonical-coordinate kernels (no basis change).
Mat canonical_expectation(const Subalgebra& N, const Mat& xc);
// tr over the multiplicity factor of block k, an n_k x n_k matrix.
Mat reduce_block(const Subalgebra& N, const Mat& xc, int k);
// Places 1_{m_k} (x) y into block k of a zero d x d matrix.
Mat embed_block(const Subalgebra& N, int k, const Mat& y);

Mat conditional_expectation(const Subalgebra& N, const Mat& x);
bool membership(const Subalgebra& N, const Mat& x, double tol = 1e-9);
// Random element of S(N) (full rank inside each block).
Mat random_algebra_state(const Subalgebra& N, Rng& rng);
Mat random_algebra_element(const Subalgebra& N, Rng& rng);  // Hermitian

struct PimsnerPopaIndex {
  std::int64_t inverse = 1;
  double lambda = 1.0;
  std::string fraction() const;
};

PimsnerPopaIndex pimsner_popa_index(const Subalgebra& N);

struct IndexOracleResult {
  double lambda = 0;
  double spread = 0;
  int starts = 0;
};
// Minimizes, over unit vectors psi, the largest lambda with
// lambda |psi><psi| <= E_N(|psi><psi|).
IndexOracleResult index_by_sdp(const Subalgebra& N, std::uint64_t seed = 0xC0FFEE, int starts = 64);
double rank_one_index(const Subalgebra& N, const Vec& psi);

struct IndexProjection {
  Mat e;  // ambient coordinates
  Mat f;
  double lambda = 0;
  bool single_block_fallback = false;
};
IndexProjection index_projection(const Subalgebra& N);

Subalgebra tensor_power(const Subalgebra& N, int n);

enum class GeneratorMode { Algebra, Commutant };

struct DecomposeOptions {
  GeneratorMode mode = GeneratorMode::Algebra;
  std::uint64_t seed = 0xC0FFEE;
  double degeneracy_gap = 1e-7;
  int max_retries = 20;
};

Subalgebra decompose_from_generators(const std::vector<Mat>& gens, int dim,
                                     const DecomposeOptions& opts = {});

struct AxiomRow {
  int n = 0;
  std::string axiom;
  int samples = 0;
  double max_violation = 0;
  bool passed = true;
};

std::vector<AxiomRow> axioms_check(const Subalgebra& N, int n_max, int samples,
                                   std::uint64_t seed = 0xC0FFEE);

}  // namespace subalg
