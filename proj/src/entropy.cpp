#include "subalg/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "subalg/dilation.hpp"

namespace subalg {

double relative_entropy(const Mat& rho, const Mat& sigma) {
  Mat r = hermitize(rho), s = hermitize(sigma);
  if (r.rows() != s.rows()) throw DimensionMismatch("relative_entropy");
  Mat perp = Mat::Identity(s.rows(), s.cols()) - support_projector(s);
  if (max_abs(perp * r * perp) > 1e-10 * std::max(1.0, max_abs(r))) return kInf;
  // matrix_log acts on the support only.
  double v = (r * (matrix_log(r) - matrix_log(s))).trace().real();
  return v / std::log(2.0);
}

double subalgebra_relative_entropy(const Mat& rho, const Subalgebra& N) {
  Mat r = DensityOperator(rho).matrix();
  if (r.rows() != N.dim()) throw DimensionMismatch("subalgebra_relative_entropy");
  return relative_entropy(r, conditional_expectation(N, r));
}

double conjugate_order(double alpha) {
  if (alpha == kInf) return 0.5;
  if (alpha == 0.5) return kInf;
  return 1.0 / (2.0 - 1.0 / alpha);
}

std::string quantity_name(const std::string& base, double alpha) {
  if (base != "D_alpha") return base;
  if (alpha == kInf) return "D_alpha(inf)";
  char buf[64];
  std::snprintf(buf, sizeof buf, "D_alpha(%.6g)", alpha);
  return buf;
}

namespace {

double gap_of(const OptimizationResult& r) { return r.cert ? r.cert->gap : 0.0; }

EntropyReport report(const std::string& q, double value, double eps, const std::string& route,
                     const OptimizationResult* r = nullptr) {
  EntropyReport e;
  e.quantity = q;
  e.value_bits = value;
  e.epsilon = eps;
  e.route = route;
  if (r) {
    e.certificate_gap = gap_of(*r);
    e.certificate = r->cert;
  }
  return e;
}

// Divergence of a bipartite state against 1_X (x) B(H_Y), where X is the first factor.
struct Conditioner {
  int dim_x, dim_y;
  Subalgebra alg;
  Conditioner(int dx, int dy) : dim_x(dx), dim_y(dy), alg(make_tensor_factor(dx, dy, false)) {}
  double shift() const { return log2(static_cast<double>(dim_x)); }
};

// Renyi order dispatch shared by both routes.
OptimizationResult renyi_any(const Mat& rho, const Subalgebra& N, double alpha, const SolverOptions& opts) {
  return renyi_subalgebra(rho, N, alpha, opts);
}

DualityRow make_row(const std::string& q, double eps, double alpha, EntropyReport direct, EntropyReport dilated,
                    double tol) {
  DualityRow row;
  row.quantity = q;
  row.epsilon = eps;
  row.alpha = alpha;
  row.direct = std::move(direct);
  row.dilated = std::move(dilated);
  double a = row.direct.value_bits, b = row.dilated.value_bits;
  if (std::isinf(a) && std::isinf(b) && (a > 0) == (b > 0)) row.difference = 0;
  else row.difference = std::abs(a - b);
  row.tolerance = tol;
  row.passed = row.difference <= tol;
  return row;
}

double row_tolerance(const SolverOptions& opts) { return std::max(1e-5, 20 * opts.tol); }

}  // namespace

double conditional_entropy(const Mat& rho_ab, int dim_a, int dim_b, CondKind kind, double eps, double alpha,
                           const SolverOptions& opts) {
  if (dim_a < 1 || dim_b < 1 || rho_ab.rows() != dim_a * dim_b || rho_ab.cols() != dim_a * dim_b)
    throw DimensionMismatch("conditional_entropy dims");
  check_epsilon(eps);
  Conditioner c(dim_a, dim_b);
  switch (kind) {
    case CondKind::Hmin:
      return c.shift() - smooth_dmax_subalgebra(rho_ab, c.alg, eps, opts).value;
    case CondKind::Hmax:
      return c.shift() - smooth_dmin_subalgebra(rho_ab, c.alg, eps, opts).value;
    case CondKind::Halpha:
      if (eps != 0.0) throw InvalidEpsilon("Renyi conditional entropy is not smoothed");
      return c.shift() - renyi_any(rho_ab, c.alg, alpha, opts).value;
    case CondKind::H: {
      if (eps != 0.0) throw InvalidEpsilon("von Neumann conditional entropy is not smoothed");
      Mat r = DensityOperator(rho_ab).matrix();
      return von_neumann_entropy(r) - von_neumann_entropy(partial_trace(r, {dim_a, dim_b}, {1}));
    }
  }
  return 0;
}

DualityReport duality_check(const Mat& rho, const Subalgebra& N, const std::vector<double>& eps_list,
                            const std::vector<double>& alpha_list, const SolverOptions& opts) {
  Mat r = DensityOperator(rho).matrix();
  if (r.rows() != N.dim()) throw DimensionMismatch("duality_check");
  StinespringIsometry V = stinespring(N);
  int d = N.dim(), de = V.dim_env;
  Mat omega = dilate_state(V, r);
  Conditioner ea(de, d);
  double tol = row_tolerance(opts);
  DualityReport rep;
  auto add = [&](DualityRow row) {
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(std::move(row));
  };

  for (double eps : eps_list) {
    check_epsilon(eps);
    {
      auto a = smooth_dmax_subalgebra(r, N, eps, opts);
      auto b = smooth_dmax_subalgebra(omega, ea.alg, eps, opts);
      add(make_row("DmaxEps", eps, 0, report("DmaxEps", a.value, eps, "direct", &a),
                   report("HminEps", b.value - ea.shift(), eps, "dilated", &b), tol));
    }
    {
      auto a = smooth_dmin_subalgebra(r, N, eps, opts);
      auto b = smooth_dmin_subalgebra(omega, ea.alg, eps, opts);
      add(make_row("DminEps", eps, 0, report("DminEps", a.value, eps, "direct", &a),
                   report("HmaxEps", b.value - ea.shift(), eps, "dilated", &b), tol));
    }
    if (eps != 0.0) continue;
    for (double alpha : alpha_list) {
      std::string q = quantity_name("D_alpha", alpha);
      if (alpha == 1.0) {
        double a = subalgebra_relative_entropy(r, N);
        double b = von_neumann_entropy(partial_trace(omega, {de, d}, {1})) - von_neumann_entropy(omega);
        add(make_row(q, 0, alpha, report("D", a, 0, "direct"), report("H", b, 0, "dilated"), tol));
        continue;
      }
      auto a = renyi_any(r, N, alpha, opts);
      auto b = renyi_any(omega, ea.alg, alpha, opts);
      add(make_row(q, 0, alpha, report(q, a.value, 0, "direct", &a),
                   report("Halpha", b.value - ea.shift(), 0, "dilated", &b), tol));
    }
  }
  return rep;
}

DualityReport triple_duality_check(const Mat& rho, const Subalgebra& N, double eps,
                                   const std::vector<double>& alpha_list, const SolverOptions& opts) {
  check_epsilon(eps);
  Mat r = DensityOperator(rho).matrix();
  if (r.rows() != N.dim()) throw DimensionMismatch("triple_duality_check");
  StinespringIsometry V = stinespring(N);
  TripartitePureState xi = build_xi(V, r);
  if (static_cast<long>(xi.dim_e) * xi.dim_a * xi.dim_f > 512)
    throw DimensionTooLarge("purified dilation exceeds 512 dimensions");
  Mat ef = xi.marginal({0, 2});
  Conditioner cf(xi.dim_e, xi.dim_f);
  double tol = row_tolerance(opts);
  DualityReport rep;
  auto add = [&](DualityRow row) {
    rep.passed = rep.passed && row.passed;
    rep.rows.push_back(std::move(row));
  };

  {
    auto a = smooth_dmax_subalgebra(r, N, eps, opts);
    auto b = smooth_dmin_subalgebra(ef, cf.alg, eps, opts);
    add(make_row("DmaxEps", eps, 0, report("DmaxEps", a.value, eps, "direct", &a),
                 report("HmaxEps", cf.shift() - b.value, eps, "dilated", &b), tol));
  }
  {
    auto a = smooth_dmin_subalgebra(r, N, eps, opts);
    auto b = smooth_dmax_subalgebra(ef, cf.alg, eps, opts);
    add(make_row("DminEps", eps, 0, report("DminEps", a.value, eps, "direct", &a),
                 report("HminEps", cf.shift() - b.value, eps, "dilated", &b), tol));
  }
  for (double alpha : alpha_list) {
    std::string q = quantity_name("D_alpha", alpha);
    double beta = conjugate_order(alpha);
    if (alpha == 1.0) {
      double a = subalgebra_relative_entropy(r, N);
      double b = von_neumann_entropy(ef) - von_neumann_entropy(xi.marginal({2}));
      add(make_row(q, 0, alpha, report("D", a, 0, "direct"), report("H", b, 0, "dilated"), tol));
      continue;
    }
    auto a = renyi_any(r, N, alpha, opts);
    auto b = renyi_any(ef, cf.alg, beta, opts);
    add(make_row(q, 0, alpha, report(q, a.value, 0, "direct", &a),
                 report("Halpha", cf.shift() - b.value, 0, "dilated", &b), tol));
  }
  return rep;
}

std::vector<AepRow> aep_trace(const Mat& rho, const Subalgebra& N, double eps, int n_max,
                              const SolverOptions& opts) {
  check_epsilon(eps);
  if (n_max < 1) throw PreconditionViolated("n_max must be positive");
  Mat r = DensityOperator(rho).matrix();
  Mat er = conditional_expectation(N, r);
  double d_rel = subalgebra_relative_entropy(r, N);
  std::vector<AepRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    Subalgebra Nn = tensor_power(N, n);
    Mat rn = kron_power(r, n);
    Mat en = kron_power(er, n);
    AepRow row;
    row.n = n;
    auto mx = smooth_dmax_subalgebra(rn, Nn, eps, opts);
    auto mn = smooth_dmin_subalgebra(rn, Nn, eps, opts);
    auto dh = dh_subalgebra(rn, Nn, eps, opts);
    auto pr = smooth_dmax_pair(rn, en, eps, opts);
    row.dmax_eps = mx.value / n;
    row.dmin_eps = mn.value / n;
    row.dh_eps = dh.value / n;
    row.dmax_eps_pair = pr.value / n;
    row.relative_entropy = d_rel;
    row.max_gap = std::max({gap_of(mx), gap_of(mn), gap_of(dh), gap_of(pr)});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace subalg
