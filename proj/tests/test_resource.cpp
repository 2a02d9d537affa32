#include <doctest.h>

#include <cmath>

#include "subalg/dilation.hpp"
#include "subalg/entropy.hpp"
#include "subalg/resource.hpp"

using namespace subalg;

namespace {

Mat plus_state() {
  Mat p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  return p;
}

QuantumChannel identity_channel(int d) { return QuantumChannel(d, d, {Mat::Identity(d, d)}); }

QuantumChannel expectation_channel(const Subalgebra& N) {
  return QuantumChannel(N.dim(), N.dim(), expectation_kraus(N));
}

void check_construction(const QuantumChannel& phi, const Mat& target, int n) {
  CHECK(phi.validate(1e-9).ok);
  CHECK(max_abs(phi.apply(maximally_coherent(n)) - target) <= 1e-9);
}

}  // namespace

TEST_SUITE("resource") {
  TEST_CASE("channels validate") {
    auto id = identity_channel(3);
    CHECK(id.validate().ok);
    Rng rng(1);
    Mat x = random_state(rng, 3);
    CHECK(max_abs(id.apply(x) - x) < 1e-15);
    std::vector<Mat> bad = {Mat::Identity(2, 2) * 0.9};
    CHECK_THROWS_AS(QuantumChannel(2, 2, bad), PreconditionViolated);

    auto N = make_tensor_factor(2, 2);
    auto E = expectation_channel(N);
    CHECK(E.validate().ok);
    Mat y = random_state(rng, 4);
    CHECK(max_abs(E.apply(y) - conditional_expectation(N, y)) < 1e-12);
  }

  TEST_CASE("MIO and DIO predicates") {
    Rng rng(2);
    for (const auto& N : {make_diagonal(3), make_tensor_factor(2, 2), make_trivial(2)}) {
      auto E = expectation_channel(N);
      CHECK(is_mio(E, N, N));
      CHECK(is_dio(E, N, N));
      auto id = identity_channel(N.dim());
      CHECK(is_mio(id, N, N));
      CHECK(is_dio(id, N, N));
    }
    // Random unitary channels against the diagonal algebra.
    auto D = make_diagonal(3);
    int mio_hits = 0;
    for (int t = 0; t < 10; ++t) {
      auto u = QuantumChannel(3, 3, {random_unitary(rng, 3)});
      bool dio = is_dio(u, D, D), mio = is_mio(u, D, D);
      if (dio) CHECK(mio);
      mio_hits += mio;
    }
    CHECK(mio_hits == 0);
  }

  TEST_CASE("MIO dilution channel") {
    auto D = make_diagonal(2);
    auto phi = build_mio_dilution(plus_state(), Mat::Identity(2, 2) / 2.0, 2);
    check_construction(phi, plus_state(), 2);
    CHECK(is_mio(phi, make_diagonal(2), D));

    Rng rng(3);
    auto N = make_tensor_factor(2, 2);
    Mat free = random_algebra_state(N, rng);
    auto phi2 = build_mio_dilution(free, free, 2);
    check_construction(phi2, free, 2);
    CHECK(is_mio(phi2, make_diagonal(2), N));

    Mat zero = Mat::Zero(2, 2);
    zero(0, 0) = 1;
    CHECK_THROWS_AS(build_mio_dilution(plus_state(), zero, 2), PreconditionViolated);

    // n = 1 prepares the target; this is free iff the target is.
    auto prep = build_mio_dilution(free, free, 1);
    CHECK(is_mio(prep, make_diagonal(1), N));
    auto prep_bad = build_mio_dilution(plus_state(), plus_state(), 1);
    CHECK_FALSE(is_mio(prep_bad, make_diagonal(1), D));
  }

  TEST_CASE("DIO dilution channel") {
    auto D = make_diagonal(2);
    auto phi = build_dio_dilution(plus_state(), D, 2);
    check_construction(phi, plus_state(), 2);
    CHECK(is_dio(phi, make_diagonal(2), D));
    CHECK(std::abs(dmax_pinned(plus_state(), D) - 1.0) < 1e-12);

    Rng rng(4);
    std::vector<Subalgebra> algs = {make_diagonal(2), make_diagonal(3), make_tensor_factor(2, 2)};
    for (int t = 0; t < 30; ++t) {
      const Subalgebra& N = algs[t % algs.size()];
      Mat r = random_state(rng, N.dim());
      int n = std::max(2, static_cast<int>(std::ceil(std::exp2(dmax_pinned(r, N)) - 1e-12)));
      auto ch = build_dio_dilution(r, N, n);
      auto M = make_diagonal(n);
      check_construction(ch, r, n);
      CHECK(is_dio(ch, M, N));
      CHECK(is_mio(ch, M, N));
    }
    Mat free = random_algebra_state(make_diagonal(3), rng);
    for (int n : {2, 3}) CHECK(is_dio(build_dio_dilution(free, make_diagonal(3), n), make_diagonal(n), make_diagonal(3)));
  }

  TEST_CASE("pinned D_max") {
    Rng rng(5);
    std::vector<Subalgebra> algs = {make_diagonal(2), make_diagonal(3), make_tensor_factor(2, 2)};
    for (const auto& N : algs) CHECK(std::abs(dmax_pinned(random_algebra_state(N, rng), N)) < 1e-9);
    for (int t = 0; t < 30; ++t) {
      const Subalgebra& N = algs[t % algs.size()];
      Mat r = random_state(rng, N.dim());
      double p = dmax_pinned(r, N);
      CHECK(p >= dmax_subalgebra(r, N).value - 1e-6);
      CHECK(p <= subalg::log2(static_cast<double>(pimsner_popa_index(N).inverse)) + 1e-9);
    }
  }

  TEST_CASE("smoothed pinned D_max") {
    Rng rng(6);
    auto D = make_diagonal(2);
    Mat r0 = random_state(rng, 2);
    CHECK(dmax_pinned_eps(r0, D, 0.0).value == doctest::Approx(dmax_pinned(r0, D)).epsilon(1e-12));
    for (int t = 0; t < 8; ++t) {
      auto N = t % 2 ? make_diagonal(3) : make_diagonal(2);
      Mat r = random_state(rng, N.dim());
      auto pe = dmax_pinned_eps(r, N, 0.1);
      CHECK(pe.value >= smooth_dmax_subalgebra(r, N, 0.1).value - 1e-5);
      CHECK(pe.value <= dmax_pinned(r, N) + 1e-6);
      CHECK(in_smoothing_ball(r, pe.optimizer, 0.1, 1e-5));
      CHECK(dmax_pinned(pe.optimizer / pe.optimizer.trace().real(), N) <= pe.value + 1e-4);
    }
    // Sampled substates in the ball are upper bounds.
    Mat p = plus_state();
    auto pe = dmax_pinned_eps(p, D, 0.1);
    std::uniform_real_distribution<double> u(-1, 1);
    double best = kInf;
    for (int s = 0; s < 20000; ++s) {
      Mat g(2, 2);
      g << 0.5 + 0.15 * u(rng), cd(0.5 + 0.15 * u(rng), 0.05 * u(rng)), 0, 0;
      g(1, 0) = std::conj(g(0, 1));
      g(1, 1) = 1.0 - g(0, 0).real();
      if (eig_hermitian(g).values.minCoeff() < 0) continue;
      if (purified_distance(p, g) > 0.1) continue;
      best = std::min(best, dmax_pinned(g, D));
    }
    CHECK(pe.value <= best + 1e-3);
  }

  TEST_CASE("one-shot cost bracket") {
    auto D = make_diagonal(2);
    auto b = one_shot_cost_bracket(plus_state(), D, 0.0);
    CHECK(b.verified);
    CHECK(std::abs(b.lower - 1.0) < 1e-6);
    CHECK(std::abs(b.upper - 2.0) < 1e-6);
    CHECK(b.witness.n == 2);
    CHECK(b.witness.cost_bits == doctest::Approx(1.0));

    Rng rng(7);
    auto N = make_diagonal(3);
    Mat free = random_algebra_state(N, rng);
    auto bf = one_shot_cost_bracket(free, N, 0.0);
    CHECK(bf.verified);
    CHECK(bf.witness.n == 1);
    CHECK(std::abs(bf.lower) < 1e-6);

    std::vector<Subalgebra> algs = {make_diagonal(2), make_diagonal(3), make_tensor_factor(2, 2), make_trivial(3)};
    for (int t = 0; t < 12; ++t) {
      const Subalgebra& A = algs[t % algs.size()];
      Mat r = random_state(rng, A.dim(), 1 + t % A.dim());
      double eps = (t % 3) * 0.1;
      auto br = one_shot_cost_bracket(r, A, eps);
      CHECK(br.verified);
      CHECK(br.witness.cost_bits - br.lower <= 1.0 + 1e-6);
      CHECK(br.witness.fidelity_achieved >= std::sqrt(1 - eps * eps) - 1e-6);
    }
  }

  TEST_CASE("constructed MIO channels are monotone") {
    Rng rng(8);
    auto N = make_diagonal(2);
    for (int t = 0; t < 4; ++t) {
      Mat r = random_state(rng, 2);
      auto br = one_shot_cost_bracket(r, N, 0.0);
      int n = br.witness.n;
      if (n < 2) continue;
      auto M = make_diagonal(n);
      for (int s = 0; s < 3; ++s) {
        Mat x = random_state(rng, n);
        Mat y = br.witness.channel.apply(x);
        for (double a : {0.5, 1.0, 2.0, kInf})
          CHECK(renyi_subalgebra(y, N, a).value <= renyi_subalgebra(x, M, a).value + 1e-6);
      }
    }
  }
}
