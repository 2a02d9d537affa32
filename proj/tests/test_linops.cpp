#include <cmath>

#include "doctest.h"
#include "subalg/linops.hpp"

using namespace subalg;

namespace {

Mat ket_bra(const Vec& v) { return v * v.adjoint(); }

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Mat pauli_x() {
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

}  // namespace

TEST_SUITE("linops") {

TEST_CASE("eig_hermitian spectra and reconstruction") {
  EigH e = eig_hermitian(Mat::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(e.values(i) == doctest::Approx(1.0));

  EigH x = eig_hermitian(pauli_x());
  CHECK(x.values(0) == doctest::Approx(-1.0));
  CHECK(x.values(1) == doctest::Approx(1.0));

  Rng rng(7);
  for (int d : {8, 32, 128, 256}) {
    Mat h = random_hermitian(rng, d);
    EigH eh = eig_hermitian(h);
    Mat rec = eh.vectors * eh.values.cast<cd>().asDiagonal() * eh.vectors.adjoint();
    CHECK(max_abs(rec - h) <= 1e-10 * max_abs(h));
    CHECK(max_abs(eh.vectors.adjoint() * eh.vectors - Mat::Identity(d, d)) <= 1e-10);
  }
}

TEST_CASE("asymmetric input is rejected") {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_hermitian(m), NonHermitian);
  Mat near = pauli_x();
  near(0, 1) += 1e-13;
  CHECK_NOTHROW(eig_hermitian(near));
}

TEST_CASE("matrix_power closed forms and pseudo-inverse") {
  CHECK(max_abs(matrix_power(diag2(4, 9), 0.5) - diag2(2, 3)) < 1e-12);
  CHECK(max_abs(matrix_power(diag2(2, 0), -1.0) - diag2(0.5, 0)) < 1e-12);
  Rng rng(11);
  Mat p = random_psd(rng, 6);
  Mat c = matrix_power(p, 1.0 / 3.0);
  CHECK(max_abs(c * c * c - p) < 1e-9 * std::max(1.0, max_abs(p)));
  CHECK(max_abs(matrix_power(p, 1.0) - p) < 1e-9 * max_abs(p));
}

TEST_CASE("matrix_power semigroup law on the support") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    Mat rho = random_state(rng, 5, 3);
    for (auto [p, q] : {std::pair{0.5, -0.25}, {-1.0, 2.0}, {0.3, 0.7}, {-0.5, -0.5}}) {
      Mat lhs = matrix_power(rho, p) * matrix_power(rho, q);
      Mat rhs = matrix_power(rho, p + q);
      if (p + q == 0.0) rhs = support_projector(rho);
      CHECK(max_abs(lhs - rhs) < 1e-8 * std::max(1.0, max_abs(rhs)));
    }
  }
}

TEST_CASE("kron identities") {
  Mat one = Mat::Identity(1, 1);
  Rng rng(3);
  Mat m = random_ginibre(rng, 3, 2);
  CHECK(max_abs(kron(one, m) - m) == 0.0);
  Mat k = kron(diag2(1, 2), diag2(3, 4));
  CHECK(k(0, 0).real() == 3.0);
  CHECK(k(1, 1).real() == 4.0);
  CHECK(k(2, 2).real() == 6.0);
  CHECK(k(3, 3).real() == 8.0);
  Mat rho = random_state(rng, 3) * 0.7;
  CHECK(kron(rho, rho).trace().real() == doctest::Approx(0.49).epsilon(1e-12));
  Mat a = random_ginibre(rng, 2, 3), b = random_ginibre(rng, 2, 2), c = random_ginibre(rng, 3, 2),
      e = random_ginibre(rng, 2, 2);
  CHECK(max_abs(kron(a, b) * kron(c, e) - kron(a * c, b * e)) < 1e-12);
}

TEST_CASE("partial trace") {
  Rng rng(5);
  Mat ra = random_state(rng, 3), rb = random_state(rng, 2);
  CHECK(max_abs(partial_trace(kron(ra, rb), {3, 2}, {0}) - ra) < 1e-12);
  CHECK(max_abs(partial_trace(kron(ra, rb), {3, 2}, {1}) - rb) < 1e-12);

  Vec bell = Vec::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  Mat half = Mat::Identity(2, 2) / 2.0;
  CHECK(max_abs(partial_trace(ket_bra(bell), {2, 2}, {0}) - half) < 1e-12);
  CHECK(max_abs(partial_trace(ket_bra(bell), {2, 2}, {1}) - half) < 1e-12);

  Mat r = random_state(rng, 12);
  CHECK(partial_trace(r, {4, 3}, {0}).trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(partial_trace(r, {4, 4}, {0}), DimensionMismatch);

  Mat t = random_state(rng, 24);
  Mat two_step = partial_trace(partial_trace(t, {2, 3, 4}, {0, 2}), {2, 4}, {0});
  CHECK(max_abs(two_step - partial_trace(t, {2, 3, 4}, {0})) < 1e-12);
}

TEST_CASE("permute_systems swaps factors") {
  Rng rng(6);
  Mat a = random_state(rng, 2), b = random_state(rng, 3);
  CHECK(max_abs(permute_systems(kron(a, b), {2, 3}, {1, 0}) - kron(b, a)) < 1e-14);
}

TEST_CASE("fidelity values") {
  Vec k0 = Vec::Zero(2), k1 = Vec::Zero(2);
  k0(0) = 1.0;
  k1(1) = 1.0;
  Rng rng(8);
  Mat rho = random_state(rng, 3);
  CHECK(root_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(root_fidelity(ket_bra(k0), ket_bra(k1)) == doctest::Approx(0.0));
  CHECK(root_fidelity(ket_bra(k0), Mat::Identity(2, 2) / 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  Mat s = random_state(rng, 3);
  CHECK(root_fidelity(rho, s) == doctest::Approx(root_fidelity(s, rho)).epsilon(1e-10));
}

TEST_CASE("generalized fidelity correction for substates") {
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 0.5;
  b(1, 1) = 0.5;
  CHECK(root_fidelity(a, b) == doctest::Approx(0.5));
}

TEST_CASE("purified distance identities") {
  Vec k0 = Vec::Zero(2), k1 = Vec::Zero(2);
  k0(0) = 1.0;
  k1(1) = 1.0;
  CHECK(purified_distance(ket_bra(k0), ket_bra(k1)) == doctest::Approx(1.0));
  Rng rng(9);
  Mat r = random_state(rng, 2);
  CHECK(purified_distance(r, r) < 1e-6);
  for (int t = 0; t < 20; ++t) {
    Mat p = random_state(rng, 2), q = random_state(rng, 2);
    double f = root_fidelity(p, q), dd = purified_distance(p, q);
    CHECK(std::abs(1 - f * f - dd * dd) < 1e-12);
  }
  for (int t = 0; t < 50; ++t) {
    Mat x = random_state(rng, 3), y = random_state(rng, 3), z = random_state(rng, 3);
    CHECK(purified_distance(x, z) <= purified_distance(x, y) + purified_distance(y, z) + 1e-8);
  }
}

TEST_CASE("density operator validation") {
  CHECK_NOTHROW(DensityOperator(Mat::Identity(2, 2) / 2.0));
  CHECK_THROWS_AS(DensityOperator(Mat::Identity(2, 2)), PreconditionViolated);
  CHECK_NOTHROW(DensityOperator(Mat::Identity(2, 2) / 4.0, true));
  CHECK_THROWS_AS(DensityOperator(Mat::Zero(2, 2), true), PreconditionViolated);
  CHECK_THROWS_AS(DensityOperator(diag2(1.5, -0.5)), PreconditionViolated);
  CHECK_THROWS_AS(Projection(diag2(0.5, 1.0)), PreconditionViolated);
  CHECK_NOTHROW(Projection(diag2(0.0, 1.0)));
}

TEST_CASE("psd_factor reproduces the state") {
  Rng rng(10);
  Mat rho = random_state(rng, 5, 3);
  Mat L = psd_factor(rho);
  CHECK(L.cols() == 3);
  CHECK(max_abs(L * L.adjoint() - rho) < 1e-12);
}

}  // TEST_SUITE
