#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "resolvex/operators.hpp"
#include "resolvex/rng.hpp"
#include "resolvex/solvers.hpp"
#include "resolvex/vector.hpp"
#include "resolvex/zoo.hpp"

namespace resolvex::bench {

// ---------------------------------------------------------------------------
// Best approximation: nearest PSD doubly stochastic matrix with a
// prescribed entry
// ---------------------------------------------------------------------------

struct MatrixInstance {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Vector X0;  // symmetric, entries uniform in (-2,2)
  zoo::PrescribedNonneg prescribed;
};

/// Deterministic instance: symmetric matrix with entries uniform on (-2,2),
/// first entry prescribed to 0.25.
inline MatrixInstance gen_matrix_instance(std::size_t n, std::uint64_t seed) {
  if (n < 5)
    throw std::invalid_argument(
        "gen_matrix_instance: n >= 5 required (feasibility witness must be positive definite)");
  MatrixInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.X0 = Vector(Shape::matrix(n, n));
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = rng.uniform(-2.0, 2.0);
      inst.X0.at(i, j) = v;
      inst.X0.at(j, i) = v;
    }
  inst.prescribed.n = n;
  inst.prescribed.omega = {{0, 0}};
  inst.prescribed.values = {0.25};
  return inst;
}

struct MethodRun {
  std::string method;
  std::size_t iterations = 0;
  double elapsed_ms = 0.0;
  double feasibility = 0.0;
  bool converged = false;
  Vector limit;
};

struct MatrixBenchReport {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double beta = 0.0, lambda = 0.0, tol = 0.0;
  MethodRun sryu, dykstra, aamr;
  double max_pairwise_gap = 0.0;
  bool limits_agree = false;
};

namespace detail {

inline double feasibility_gap(const Vector& U, const zoo::PrescribedNonneg& spec) {
  return norm(U - zoo::proj_doubly_stochastic_affine(U)) +
         norm(U - zoo::proj_prescribed_nonneg(U, spec)) + norm(U - zoo::proj_psd(U));
}

// Product-space splitting for AAMR on three sets: elements are nested pairs
// ((X1, X2), X3); the diagonal projector averages the blocks.
inline Vector triple(const Vector& a, const Vector& b, const Vector& c) {
  return Vector::concat(Vector::concat(a, b), c);
}

inline std::array<Vector, 3> untriple(const Vector& t) {
  Vector ab = t.first();
  return {ab.first(), ab.second(), t.second()};
}

}  // namespace detail

/// Runs the three-set splitting (sigma_i = (1-beta)/beta, gamma = 1), cyclic
/// Dykstra, and the product-space modified-reflections baseline on the same
/// instance, all stopped at feasibility gap sum_i ||U - P_i(U)|| <= tol.
inline MatrixBenchReport run_matrix_bench(const MatrixInstance& inst, double beta, double lambda,
                                          double tol = 1e-5, double aamr_kappa = 0.95,
                                          std::size_t max_iters = 500000) {
  if (inst.n < 5) throw std::invalid_argument("run_matrix_bench: n >= 5 required");
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("run_matrix_bench: beta must lie in (0,1)");
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw std::invalid_argument("run_matrix_bench: lambda must lie in (0,1]");

  MatrixBenchReport rep;
  rep.n = inst.n;
  rep.seed = inst.seed;
  rep.beta = beta;
  rep.lambda = lambda;
  rep.tol = tol;
  const auto& spec = inst.prescribed;
  const Vector& q = inst.X0;

  auto gap = [&spec](const Vector& U) { return detail::feasibility_gap(U, spec); };

  {  // strengthened three-operator splitting in projector form
    SumProblem pr;
    pr.operators = {zoo::make_doubly_stochastic_operator(),
                    zoo::make_prescribed_nonneg_operator(spec), zoo::make_psd_operator()};
    pr.q = q;
    pr.omega = 1.0;  // resolvent parameter is immaterial for normal cones
    SolverConfig cfg;
    cfg.gamma = 1.0;
    cfg.theta = 1.0;
    cfg.lambda = lambda;
    cfg.sigma.assign(3, (1.0 - beta) / beta);
    cfg.max_iters = max_iters;
    cfg.stop_tol = 0.0;
    cfg.stop_criterion = [&gap, tol](const Vector& u) { return gap(u) <= tol; };
    auto res = solve_sryu(pr, cfg, q, q);
    rep.sryu = {"sryu", res.trace.iterations,
                res.trace.entries.empty() ? 0.0 : res.trace.entries.back().elapsed_ms,
                gap(res.point), res.trace.converged, res.point};
  }

  {  // cyclic Dykstra
    std::vector<std::function<Vector(const Vector&)>> projs = {
        [](const Vector& x) { return zoo::proj_doubly_stochastic_affine(x); },
        [&spec](const Vector& x) { return zoo::proj_prescribed_nonneg(x, spec); },
        [](const Vector& x) { return zoo::proj_psd(x); }};
    SolverConfig cfg;
    cfg.max_iters = max_iters;
    cfg.stop_tol = tol;  // dykstra's recorded residual is the feasibility gap
    auto res = dykstra(projs, q, cfg);
    rep.dykstra = {"dykstra", res.trace.iterations,
                   res.trace.entries.empty() ? 0.0 : res.trace.entries.back().elapsed_ms,
                   gap(res.point), res.trace.converged, res.point};
  }

  {  // modified-reflections baseline in the product space
    const Shape triple_shape =
        Shape::pair(Shape::pair(q.shape(), q.shape()), q.shape());
    MonotoneOperator diag;
    diag.resolvent = [](double, const Vector& t) {
      auto [a, b, c] = detail::untriple(t);
      Vector m = (1.0 / 3.0) * (a + b + c);
      return detail::triple(m, m, m);
    };
    MonotoneOperator prod;
    prod.resolvent = [&spec](double, const Vector& t) {
      auto [a, b, c] = detail::untriple(t);
      return detail::triple(zoo::proj_doubly_stochastic_affine(a),
                            zoo::proj_prescribed_nonneg(b, spec), zoo::proj_psd(c));
    };
    const Vector Q = detail::triple(q, q, q);
    SolverConfig cfg;
    cfg.max_iters = max_iters;
    cfg.stop_tol = 0.0;
    cfg.stop_criterion = [&gap, tol](const Vector& u) { return gap(u.first().first()) <= tol; };
    auto res = aamr(diag, prod, Q, 1.0, beta, aamr_kappa, cfg, Vector::zeros(triple_shape));
    Vector limit = res.point.first().first();
    rep.aamr = {"aamr", res.trace.iterations,
                res.trace.entries.empty() ? 0.0 : res.trace.entries.back().elapsed_ms,
                gap(limit), res.trace.converged, limit};
  }

  const double g1 = norm(rep.sryu.limit - rep.dykstra.limit);
  const double g2 = norm(rep.sryu.limit - rep.aamr.limit);
  const double g3 = norm(rep.dykstra.limit - rep.aamr.limit);
  rep.max_pairwise_gap = std::max({g1, g2, g3});
  rep.limits_agree = rep.max_pairwise_gap <= 10.0 * tol;
  return rep;
}

// ---------------------------------------------------------------------------
// ROF-type denoising with a box constraint
// ---------------------------------------------------------------------------

struct RofInstance {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double eta = 12.0;
  double noise_std = 0.1;
  Vector clean;
  Vector noisy;
};

/// Piecewise-constant synthetic test image plus additive Gaussian noise.
/// The clean image stays in [0,1]; the noisy one may not.
inline RofInstance gen_rof_instance(std::size_t n, std::uint64_t seed, double noise_std = 0.1,
                                    double eta = 12.0) {
  RofInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.eta = eta;
  inst.noise_std = noise_std;
  inst.clean = Vector::constant(Shape::matrix(n, n), 0.2);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = static_cast<double>(i) / nd;
      const double y = static_cast<double>(j) / nd;
      if (x >= 0.15 && x <= 0.55 && y >= 0.1 && y <= 0.45) inst.clean.at(i, j) = 0.9;
      const double dx = x - 0.65, dy = y - 0.7;
      if (dx * dx + dy * dy <= 0.18 * 0.18) inst.clean.at(i, j) = 0.55;
    }
  inst.noisy = inst.clean;
  Rng rng(seed);
  for (std::size_t i = 0; i < inst.noisy.size(); ++i) inst.noisy[i] += rng.gaussian(0.0, noise_std);
  return inst;
}

enum class RofMethod { SPD, STSENG };

struct RofOptions {
  double gamma = 0.0;    // dual stepsize (SPD) / resolvent stepsize (STSENG); 0 = default
  double tau = 0.0;      // SPD primal stepsize; 0 = 0.99/(gamma ||K||^2)
  double lambda = 1.0;   // SPD inertia
  double theta = 10.1;   // STSENG strengthening scale
  double sigma_a = 10.0;
  double sigma_b = 0.1;
  std::size_t iters = 100;
};

struct RofReport {
  std::string method;
  std::size_t iterations = 0;
  double snr = 0.0;
  double objective = 0.0;
  double final_change = 0.0;
  bool primal_in_box = true;
  Vector denoised;
  std::vector<double> objective_history;
};

/// eta/2 ||x-q||^2 + TV(x); x is expected feasible for the box constraint.
inline double rof_objective(const Vector& x, const Vector& q, double eta) {
  Vector d = x - q;
  return 0.5 * eta * dot(d, d) + zoo::tv_value(x);
}

inline double snr_db(const Vector& clean, const Vector& x) {
  const double err = norm(x - clean);
  if (err == 0.0) return 300.0;  // capped
  return std::min(300.0, 20.0 * std::log10(norm(clean) / err));
}

/// Denoises inst.noisy by the primal-dual method or the two-stage
/// forward-backward-forward method applied to the saddle-point operators.
/// Runs a fixed number of iterations and reports the feasible primal iterate
/// after the box prox.
inline RofReport run_rof_bench(const RofInstance& inst, RofMethod method,
                               const RofOptions& opts = {}) {
  const double eta = inst.eta;
  const Vector& q = inst.noisy;
  const double K_norm_sq = 8.0;
  RofReport rep;
  rep.iterations = opts.iters;

  if (method == RofMethod::SPD) {
    rep.method = "spd";
    ProximableFunction g;
    g.prox = [](double, const Vector& x) { return zoo::proj_box(0.0, 1.0, x); };
    g.alpha = 0.0;
    ProximableFunction phi_star;
    phi_star.prox = [](double gamma, const Vector& y) { return zoo::prox_tv_conjugate(y, gamma); };
    LinearOperator K;
    K.apply = [](const Vector& x) { return zoo::discrete_gradient(x); };
    K.adjoint = [](const Vector& y) { return zoo::gradient_adjoint(y); };
    K.norm_bound = std::sqrt(K_norm_sq);

    SolverConfig cfg;
    cfg.gamma = (opts.gamma > 0.0) ? opts.gamma : 15.0;
    cfg.tau = (opts.tau > 0.0) ? opts.tau : 0.99 / (cfg.gamma * K_norm_sq);
    cfg.lambda = opts.lambda;
    cfg.sigma = {eta};
    cfg.max_iters = opts.iters;
    cfg.stop_tol = 0.0;

    Vector x_prev = q;
    Vector y_prev = Vector::zeros(Shape::pair(q.shape(), q.shape()));
    auto observer = [&](std::size_t, const Vector& x, const Vector& y) {
      rep.objective_history.push_back(rof_objective(x, q, eta));
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < 0.0 || x[i] > 1.0) rep.primal_in_box = false;
      rep.final_change = std::sqrt(dot(x - x_prev, x - x_prev) + dot(y - y_prev, y - y_prev));
      x_prev = x;
      y_prev = y;
    };
    auto res = solve_spd(g, phi_star, K, q, cfg, q, y_prev, observer);
    rep.denoised = res.point;
  } else {
    rep.method = "stseng";
    const double theta = opts.theta, sA = opts.sigma_a, sB = opts.sigma_b;
    if (!(sA > sB && sB > 0.0))
      throw std::invalid_argument("run_rof_bench: need sigma_a > sigma_b > 0");
    if (std::abs(theta - (sA + sB)) > 1e-12)
      throw std::invalid_argument("run_rof_bench: need theta = sigma_a + sigma_b");

    const Shape field = Shape::pair(q.shape(), q.shape());
    const Shape saddle = Shape::pair(q.shape(), field);

    // A = ((1/eta) d(box indicator), d((1/eta) phi* - ||.||^2/2)); the second
    // block's resolvent reduces to a unit-ball projection of y/(1-gamma).
    MonotoneOperator A;
    A.alpha = -0.5;
    A.resolvent = [](double gamma, const Vector& z) {
      if (!(gamma < 1.0))
        throw std::invalid_argument("rof saddle resolvent: needs gamma < 1");
      Vector x = zoo::proj_box(0.0, 1.0, z.first());
      Vector y = zoo::prox_tv_conjugate((1.0 / (1.0 - gamma)) * z.second(), 1.0);
      return Vector::concat(x, y);
    };
    MonotoneOperator B;
    B.alpha = 0.0;
    B.kappa = std::sqrt(K_norm_sq) / eta;
    B.forward = [eta](const Vector& z) {
      Vector x = z.first();
      Vector y = z.second();
      return Vector::concat((1.0 / eta) * zoo::gradient_adjoint(y),
                            (-1.0 / eta) * zoo::discrete_gradient(x));
    };

    SumProblem pr;
    pr.operators = {A, B};
    pr.q = Vector::concat(q, Vector::zeros(field));
    pr.omega = 1.0;

    SolverConfig cfg;
    cfg.theta = theta;
    cfg.sigma = {sA, sB};
    cfg.gamma = (opts.gamma > 0.0) ? opts.gamma : 0.99 / (theta * *B.kappa + sB);
    cfg.max_iters = opts.iters;
    cfg.stop_tol = 0.0;

    Vector z_prev = pr.q;
    Vector last_feasible = q;
    auto observer = [&](std::size_t, const Vector& z, const Vector& y) {
      Vector primal = y.first();
      rep.objective_history.push_back(rof_objective(primal, q, eta));
      last_feasible = primal;
      rep.final_change = norm(z - z_prev);
      z_prev = z;
    };
    (void)solve_sfbf(pr, cfg, pr.q, observer);
    rep.denoised = last_feasible;
  }

  rep.objective = rep.objective_history.empty() ? 0.0 : rep.objective_history.back();
  rep.snr = snr_db(inst.clean, rep.denoised);
  return rep;
}

// ---------------------------------------------------------------------------
// Elliptic PDE with partially blinded Laplacian (obstacle form)
// ---------------------------------------------------------------------------

struct PdeInstance {
  std::size_t nx = 0, ny = 0;
  double h = 0.0;  // mesh width; interior points at ((i+1)h, (j+1)h)
  Vector f;
  Vector v_exact;  // analytic obstacle solution when available
  Vector u_exact;  // analytic blinded-problem solution (v_exact = u_exact^+)
  bool has_exact = false;
};

/// Piecewise data function on (0, 2pi)^2 whose obstacle-problem solution is
/// max{0, (2pi - y) y sin(x)^3}.
inline double pde_data_function(double x, double y) {
  const double pi = 3.14159265358979323846264338327950288;
  if (x <= pi) {
    const double c = std::cos(x), s = std::sin(x);
    return -2.0 * ((10.0 * y * pi - 5.0 * y * y + 1.0) * c * c - 4.0 * y * pi + 2.0 * y * y - 1.0) * s;
  }
  const double c = std::cos(x), s = std::sin(x);
  return (2.0 * pi - y) * y * c * c * s * s * s;
}

inline PdeInstance gen_pde_instance(std::size_t nx, std::size_t ny) {
  if (nx != ny) throw std::invalid_argument("gen_pde_instance: square grid required");
  const double pi = 3.14159265358979323846264338327950288;
  PdeInstance inst;
  inst.nx = nx;
  inst.ny = ny;
  inst.h = 2.0 * pi / static_cast<double>(nx + 1);
  const Shape s = Shape::grid(nx, ny, inst.h);
  inst.f = Vector(s);
  inst.v_exact = Vector(s);
  inst.u_exact = Vector(s);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double x = static_cast<double>(i + 1) * inst.h;
      const double y = static_cast<double>(j + 1) * inst.h;
      inst.f[i * ny + j] = pde_data_function(x, y);
      // u^+ = (2pi - y) y sin^3 x on x <= pi; for x > pi the equation gives
      // u = f directly since the diffusion term is blinded there
      const double upos = (2.0 * pi - y) * y * std::pow(std::sin(x), 3);
      inst.v_exact[i * ny + j] = std::max(0.0, upos);
      inst.u_exact[i * ny + j] = (x <= pi) ? upos : inst.f[i * ny + j];
    }
  inst.has_exact = true;
  return inst;
}

struct PdeReport {
  std::size_t iterations = 0;
  bool converged = false;
  double rel_l2_error = -1.0;                // vs analytic obstacle solution
  std::size_t iters_to_threshold = 0;        // 0 when never reached
  std::vector<double> error_history;
  Vector v;  // obstacle solution J_{A+B}(f)
  Vector u;  // blinded-problem solution f - B(v)
};

/// Solves the discrete obstacle problem by the two-operator resolvent
/// splitting with A the nonnegativity cone and B the Dirichlet Laplacian
/// (theta = sigma_a + sigma_b so the target is J_{A+B}(f)), then recovers the
/// blinded-problem solution u = f - B(v). When `error_threshold` is set the
/// report records the first iteration whose relative L2 error against the
/// analytic solution falls below it; `stop_at_threshold` halts the run there.
inline PdeReport run_pde_bench(const PdeInstance& inst, double gamma, double sigma_a,
                               double sigma_b, double lambda = 2.0, std::size_t iters = 20000,
                               double stop_tol = 1e-11, double error_threshold = 0.0,
                               bool stop_at_threshold = false) {
  if (!(gamma > 0.0 && sigma_a > 0.0 && sigma_b > 0.0))
    throw std::invalid_argument("run_pde_bench: gamma, sigma_a, sigma_b must be > 0");
  auto lap = std::make_shared<const zoo::GridLaplacian>(inst.nx, inst.ny, inst.h);

  SumProblem pr;
  pr.operators = {zoo::make_nonneg_cone_operator(), zoo::make_laplacian_operator(lap)};
  pr.q = inst.f;
  pr.omega = 1.0;

  SolverConfig cfg;
  cfg.gamma = gamma;
  cfg.lambda = lambda;
  cfg.theta = sigma_a + sigma_b;
  cfg.sigma = {sigma_a, sigma_b};
  cfg.max_iters = iters;
  cfg.stop_tol = stop_tol;

  PdeReport rep;
  const double exact_norm = inst.has_exact ? norm(inst.v_exact) : 0.0;
  auto observer = [&](std::size_t k, const Vector&, const Vector& u, const Vector&) {
    if (!inst.has_exact) return;
    const double err = norm(u - inst.v_exact) / exact_norm;
    rep.error_history.push_back(err);
    if (error_threshold > 0.0 && rep.iters_to_threshold == 0 && err <= error_threshold)
      rep.iters_to_threshold = k + 1;
  };
  if (stop_at_threshold && error_threshold > 0.0 && inst.has_exact) {
    cfg.stop_criterion = [&](const Vector& u) {
      return norm(u - inst.v_exact) / exact_norm <= error_threshold;
    };
  }
  auto res = solve_sdr(pr, cfg, inst.f, observer);

  rep.iterations = res.trace.iterations;
  rep.converged = res.trace.converged;
  rep.v = res.point;
  rep.u = inst.f - lap->apply(rep.v);
  if (inst.has_exact) rep.rel_l2_error = norm(rep.v - inst.v_exact) / exact_norm;
  return rep;
}

// ---------------------------------------------------------------------------
// Fractional programming demo (outer proximal-gradient loop)
// ---------------------------------------------------------------------------

struct FpInstance {
  ProximableFunction f;  // numerator; value required
  MonotoneOperator constraint;  // normal cone to S (resolvent = projector)
  std::function<double(const Vector&)> g_value;
  std::function<Vector(const Vector&)> g_grad;
  Vector x0;
  double eta = 1.0;  // constant stepsize
};

struct FpReport {
  std::vector<double> theta_history;
  Vector x_final;
  bool inner_converged = true;
};

/// Constant-stepsize proximal-gradient loop for inf_S f/g; every subproblem
/// is the resolvent of eta (df + N_S) at x_{k-1} - theta_{k-1} eta grad g,
/// evaluated by the two-operator resolvent splitting.
inline FpReport run_fp_demo(const FpInstance& inst, std::size_t outer_iters = 30,
                            double inner_tol = 1e-12) {
  FpReport rep;
  Vector x = inst.x0;
  double theta = inst.f.value(x) / inst.g_value(x);
  rep.theta_history.push_back(theta);

  MonotoneOperator df;
  df.resolvent = inst.f.prox;
  df.alpha = inst.f.alpha;

  for (std::size_t k = 0; k < outer_iters; ++k) {
    Vector q = x - (theta * inst.eta) * inst.g_grad(x);
    SumProblem pr;
    pr.operators = {df, inst.constraint};
    pr.q = q;
    pr.omega = inst.eta;
    SolverConfig cfg;
    cfg.stop_tol = inner_tol;
    cfg.max_iters = 200000;
    auto res = resolvent_of_sum(pr, Method::SDR, cfg);
    if (!res.trace.converged) rep.inner_converged = false;
    x = res.point;
    theta = inst.f.value(x) / inst.g_value(x);
    rep.theta_history.push_back(theta);
  }
  rep.x_final = x;
  return rep;
}

}  // namespace resolvex::bench
