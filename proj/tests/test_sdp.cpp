#include <cmath>

#include "doctest.h"
#include "subalg/sdp.hpp"

using namespace subalg;

namespace {

// max Re tr(Z) s.t. [[rho, Z], [Z*, sigma]] >= 0, whose value is tr|sqrt(rho) sqrt(sigma)|.
std::shared_ptr<const SdpProblem> fidelity_problem(const Mat& rho, const Mat& sigma) {
  int d = static_cast<int>(rho.rows());
  SdpBuilder sb;
  int blk = sb.add_block(2 * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      sb.add_f0(blk, r, c, r <= c ? rho(r, c) : cd(0));
      sb.add_f0(blk, d + r, d + c, r <= c ? sigma(r, c) : cd(0));
    }
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      int re = sb.add_var(r == c ? 1.0 : 0.0);
      sb.add_f(re, blk, r, d + c, 1.0);
      int im = sb.add_var(0.0);
      sb.add_f(im, blk, r, d + c, cd(0, 1));
    }
  return sb.build();
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("largest eigenvalue as an SDP") {
  Rng rng(1);
  Mat h = random_hermitian(rng, 5);
  SdpBuilder sb;
  int blk = sb.add_block(5);
  for (int r = 0; r < 5; ++r)
    for (int c = r; c < 5; ++c) sb.add_f0(blk, r, c, -h(r, c));
  int t = sb.add_var(-1.0);
  for (int r = 0; r < 5; ++r) sb.add_f(t, blk, r, r, 1.0);
  SolverCertificate cert = solve_sdp(sb.build());
  CHECK(-cert.dual_objective == doctest::Approx(eig_hermitian(h).values.maxCoeff()).epsilon(1e-7));
  CHECK(verify(cert).ok);
}

TEST_CASE("linear program through scalar blocks") {
  SdpBuilder sb;
  int y1 = sb.add_var(1.0), y2 = sb.add_var(1.0);
  int b1 = sb.add_block(1), b2 = sb.add_block(1), b3 = sb.add_block(1);
  sb.add_f0(b1, 0, 0, 1.0);
  sb.add_f(y1, b1, 0, 0, -1.0);
  sb.add_f0(b2, 0, 0, 1.0);
  sb.add_f(y2, b2, 0, 0, -1.0);
  sb.add_f0(b3, 0, 0, 1.5);
  sb.add_f(y1, b3, 0, 0, -1.0);
  sb.add_f(y2, b3, 0, 0, -1.0);
  SolverCertificate cert = solve_sdp(sb.build(), {1e-9, 200, true});
  CHECK(cert.dual_objective == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(cert.primal_objective == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("fidelity block encoding matches the closed form") {
  Rng rng(2);
  for (int d : {2, 3, 4}) {
    Mat rho = random_state(rng, d), sigma = random_state(rng, d);
    SolverCertificate cert = solve_sdp(fidelity_problem(rho, sigma), {1e-9, 200, true});
    CHECK(cert.dual_objective == doctest::Approx(trace_fidelity(rho, sigma)).epsilon(1e-7));
    VerifyReport vr = verify(cert);
    CHECK(vr.ok);
  }
}

TEST_CASE("Schur kernels agree") {
  Rng rng(3);
  Mat rho = random_state(rng, 4), sigma = random_state(rng, 4);
  auto p = fidelity_problem(rho, sigma);
  std::vector<Mat> x = {random_psd(rng, 8)}, sinv = {random_psd(rng, 8)};
  Eigen::MatrixXd a = schur_reference(*p, x, sinv), b = schur_parallel(*p, x, sinv);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()));
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff()));
  SolverCertificate c1 = solve_sdp(p, {1e-8, 200, true}), c2 = solve_sdp(p, {1e-8, 200, false});
  CHECK(c1.dual_objective == doctest::Approx(c2.dual_objective).epsilon(1e-7));
}

TEST_CASE("verifier rejects tampered certificates") {
  Rng rng(4);
  SolverCertificate cert = solve_sdp(fidelity_problem(random_state(rng, 2), random_state(rng, 2)));
  CHECK(verify(cert).ok);
  SolverCertificate bad = cert;
  bad.y *= 1.5;
  CHECK_FALSE(verify(bad).ok);
  bad = cert;
  bad.x[0] *= 0.5;
  CHECK_FALSE(verify(bad).ok);
}

}  // TEST_SUITE
