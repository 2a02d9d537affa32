#include <doctest.h>

#include <cmath>

#include "subalg/dilation.hpp"
#include "subalg/entropy.hpp"

using namespace subalg;

namespace {

Mat plus_state() {
  Mat p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  return p;
}

Mat bell_state() {
  Vec v = Vec::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

double shannon(const Eigen::VectorXd& p) {
  double h = 0;
  for (double x : p)
    if (x > 0) h -= x * std::log2(x);
  return h;
}

// log tr rho^alpha / (1 - alpha) from the spectrum.
double renyi_entropy(const Mat& rho, double alpha) {
  Eigen::VectorXd ev = eig_hermitian(rho).values;
  if (std::isinf(alpha)) return -std::log2(ev.maxCoeff());
  double s = 0;
  for (double x : ev)
    if (x > 1e-14) s += std::pow(x, alpha);
  return std::log2(s) / (1 - alpha);
}

}  // namespace

TEST_SUITE("entropy") {
  TEST_CASE("relative entropy of commuting pairs") {
    Mat r = Mat::Zero(2, 2), s = Mat::Zero(2, 2);
    r(0, 0) = 0.7, r(1, 1) = 0.3;
    s(0, 0) = 0.4, s(1, 1) = 0.6;
    double expect = 0.7 * std::log2(0.7 / 0.4) + 0.3 * std::log2(0.3 / 0.6);
    CHECK(relative_entropy(r, s) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(relative_entropy(r, r)) < 1e-12);
    Mat z = Mat::Zero(2, 2);
    z(0, 0) = 1;
    CHECK(std::isinf(relative_entropy(r, z)));
    CHECK(std::isfinite(relative_entropy(z, r)));
  }

  TEST_CASE("subalgebra relative entropy anchors") {
    CHECK(std::abs(subalgebra_relative_entropy(plus_state(), make_diagonal(2)) - 1.0) < 1e-9);
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
      int d = 2 + t % 3;
      Mat r = random_state(rng, d);
      CHECK(subalgebra_relative_entropy(r, make_trivial(d)) ==
            doctest::Approx(std::log2(d) - von_neumann_entropy(r)).epsilon(1e-9));
      Eigen::VectorXd diag = r.diagonal().real();
      CHECK(subalgebra_relative_entropy(r, make_diagonal(d)) ==
            doctest::Approx(shannon(diag) - von_neumann_entropy(r)).epsilon(1e-9));
      CHECK(std::abs(subalgebra_relative_entropy(random_algebra_state(make_diagonal(d), rng), make_diagonal(d))) <
            1e-9);
    }
  }

  TEST_CASE("subalgebra relative entropy is additive") {
    Rng rng(12);
    for (const auto& N : {make_diagonal(2), make_tensor_factor(2, 2)}) {
      Mat r = random_state(rng, N.dim());
      double one = subalgebra_relative_entropy(r, N);
      CHECK(subalgebra_relative_entropy(kron(r, r), tensor_power(N, 2)) == doctest::Approx(2 * one).epsilon(1e-9));
    }
  }

  TEST_CASE("conditional entropies of a Bell state") {
    Mat b = bell_state();
    CHECK(conditional_entropy(b, 2, 2, CondKind::H) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(conditional_entropy(b, 2, 2, CondKind::Hmin) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(conditional_entropy(b, 2, 2, CondKind::Hmax) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(conditional_entropy(b, 2, 2, CondKind::Halpha, 0, 2.0) == doctest::Approx(-1.0).epsilon(1e-5));
  }

  TEST_CASE("conditional entropies of product states") {
    Rng rng(13);
    for (int t = 0; t < 4; ++t) {
      Mat ra = random_state(rng, 2), rb = random_state(rng, 2);
      Mat rab = kron(ra, rb);
      CHECK(conditional_entropy(rab, 2, 2, CondKind::H) == doctest::Approx(von_neumann_entropy(ra)).epsilon(1e-9));
      CHECK(conditional_entropy(rab, 2, 2, CondKind::Hmin) == doctest::Approx(renyi_entropy(ra, kInf)).epsilon(1e-5));
      CHECK(conditional_entropy(rab, 2, 2, CondKind::Hmax) == doctest::Approx(renyi_entropy(ra, 0.5)).epsilon(1e-5));
      for (double a : {0.7, 2.0})
        CHECK(conditional_entropy(rab, 2, 2, CondKind::Halpha, 0, a) ==
              doctest::Approx(renyi_entropy(ra, a)).epsilon(1e-5));
    }
    // Smoothing can only raise Hmin and lower Hmax.
    Mat rab = kron(random_state(rng, 2), random_state(rng, 2));
    CHECK(conditional_entropy(rab, 2, 2, CondKind::Hmin, 0.1) >= conditional_entropy(rab, 2, 2, CondKind::Hmin) - 1e-6);
    CHECK(conditional_entropy(rab, 2, 2, CondKind::Hmax, 0.1) <= conditional_entropy(rab, 2, 2, CondKind::Hmax) + 1e-6);
  }

  TEST_CASE("conjugate orders") {
    CHECK(conjugate_order(1.0) == doctest::Approx(1.0));
    CHECK(conjugate_order(0.5) == kInf);
    CHECK(conjugate_order(kInf) == doctest::Approx(0.5));
    CHECK(conjugate_order(2.0) == doctest::Approx(2.0 / 3.0));
    for (double a : {0.6, 0.8, 1.5, 3.0}) CHECK(1 / a + 1 / conjugate_order(a) == doctest::Approx(2.0));
  }

  TEST_CASE("duality holds on small cases") {
    Rng rng(14);
    std::vector<Subalgebra> algs = {make_diagonal(2), make_trivial(2), make_tensor_factor(2, 2)};
    for (const auto& N : algs) {
      Mat r = random_state(rng, N.dim());
      auto rep = duality_check(r, N, {0.0, 0.1}, {0.5, 1.0, 2.0, kInf});
      CHECK(rep.passed);
      for (const auto& row : rep.rows) {
        INFO(row.quantity << " eps=" << row.epsilon << " diff=" << row.difference);
        CHECK(row.difference <= row.tolerance);
      }
      CHECK(rep.rows.size() == 4 + 4);
    }
    auto plus = duality_check(plus_state(), make_diagonal(2), {0.0}, {1.0});
    CHECK(plus.passed);
  }

  TEST_CASE("triple duality on a qubit") {
    Rng rng(15);
    Mat r = random_state(rng, 2);
    auto rep = triple_duality_check(r, make_diagonal(2), 0.1);
    for (const auto& row : rep.rows) {
      INFO(row.quantity << " diff=" << row.difference);
      CHECK(row.passed);
    }
    CHECK(rep.passed);
    CHECK_THROWS_AS(triple_duality_check(random_state(rng, 9), make_trivial(9), 0.1), DimensionTooLarge);
  }

  TEST_CASE("equipartition trace of the plus state") {
    auto rows = aep_trace(plus_state(), make_diagonal(2), 0.1, 2);
    REQUIRE(rows.size() == 2);
    // Flat spectrum: smoothing pushes D_max^eps below D and D_min^eps above it.
    for (const auto& row : rows) {
      CHECK(row.relative_entropy == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(row.dmax_eps <= row.relative_entropy + 1e-6);
      CHECK(row.dmin_eps >= row.relative_entropy - 1e-6);
      CHECK(row.dmax_eps <= row.dmax_eps_pair + 1e-6);
      CHECK(row.max_gap < 1e-4);
    }
    CHECK(std::abs(rows[1].dmax_eps - 1.0) < std::abs(rows[0].dmax_eps - 1.0));
    CHECK(std::abs(rows[1].dmin_eps - 1.0) < std::abs(rows[0].dmin_eps - 1.0));
  }

  TEST_CASE("subalgebra Renyi divergence is monotone in alpha") {
    Rng rng(16);
    auto N = make_diagonal(3);
    Mat r = random_state(rng, 3);
    double prev = -kInf;
    for (double a : {0.5, 0.7, 1.0, 1.5, 2.0, 4.0, kInf}) {
      double v = renyi_subalgebra(r, N, a).value;
      CHECK(v >= prev - 1e-6);
      prev = v;
    }
    CHECK(renyi_subalgebra(r, N, 1.0).value == doctest::Approx(subalgebra_relative_entropy(r, N)).epsilon(1e-9));
  }
}
