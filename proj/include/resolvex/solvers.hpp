#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "resolvex/operators.hpp"
#include "resolvex/vector.hpp"

namespace resolvex {

/// Per-run parameters shared by the splitting solvers. Fields not used by a
/// given method are ignored; each solver validates its own stepsize window and
/// the strengthening assumption at construction and fails fast.
struct SolverConfig {
  double gamma = 1.0;                  // resolvent / dual stepsize
  double lambda = 1.0;                 // relaxation
  std::vector<double> sigma;           // strengthening weights, one per operator
  double theta = 1.0;                  // strengthening scale
  double tau = 0.0;                    // primal stepsize (primal-dual only)
  double phi = 1.5;                    // golden-ratio parameter (adaptive method)
  double gamma_bar = 1e6;              // stepsize cap (adaptive method)
  std::size_t max_iters = 100000;
  double stop_tol = 1e-8;              // fixed-point residual tolerance; 0 disables

  // Optional hooks, both evaluated on the monitored (shadow) iterate.
  std::function<double(const Vector&)> objective;
  std::function<bool(const Vector&)> stop_criterion;
};

struct TraceEntry {
  std::size_t k = 0;
  double residual = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double elapsed_ms = 0.0;
};

/// Convergence record of one solver run.
struct Trace {
  std::vector<TraceEntry> entries;
  std::size_t iterations = 0;
  bool converged = false;
  std::string stop_reason;

  void write_csv(std::ostream& os) const {
    os << "k,residual,objective,elapsed_ms\n";
    char buf[96];
    for (const auto& e : entries) {
      os << e.k << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", e.residual);
      os << buf << ',';
      if (std::isfinite(e.objective)) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.objective);
        os << buf;
      }
      os << ',';
      std::snprintf(buf, sizeof(buf), "%.3f", e.elapsed_ms);
      os << buf << '\n';
    }
  }
};

/// A sum of 2 or 3 maximally monotone operators whose resolvent
/// J_{omega (A_1 + ... + A_n)}(q) is sought.
struct SumProblem {
  std::vector<MonotoneOperator> operators;
  Vector q;
  double omega = 1.0;
};

struct SolveResult {
  Vector point;
  Trace trace;
};

enum class Method { SFB, SFBF, SAGRAAL, SPD, SDR, SRYU };

namespace detail {

class RunMonitor {
 public:
  RunMonitor(const SolverConfig& cfg, std::string diverged_msg = "diverged")
      : cfg_(cfg), start_(std::chrono::steady_clock::now()),
        diverged_msg_(std::move(diverged_msg)) {}

  /// Records iteration k; returns true when the run should stop. Non-finite
  /// residuals abort without entering the trace.
  bool push(Trace& tr, std::size_t k, double residual, const Vector& monitored) {
    tr.iterations = k + 1;
    if (!std::isfinite(residual)) {
      tr.converged = false;
      tr.stop_reason = diverged_msg_;
      return true;
    }
    TraceEntry e;
    e.k = k;
    e.residual = residual;
    if (cfg_.objective) e.objective = cfg_.objective(monitored);
    e.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start_).count();
    tr.entries.push_back(e);
    if (first_residual_ < 0.0) first_residual_ = residual;
    if (residual > 1e6 * std::max(first_residual_, 1e-300)) {
      tr.converged = false;
      tr.stop_reason = diverged_msg_;
      return true;
    }
    if (cfg_.stop_criterion && cfg_.stop_criterion(monitored)) {
      tr.converged = true;
      tr.stop_reason = "stop_criterion";
      return true;
    }
    if (cfg_.stop_tol > 0.0 && residual <= cfg_.stop_tol) {
      tr.converged = true;
      tr.stop_reason = "stop_tol";
      return true;
    }
    if (k + 1 >= cfg_.max_iters) {
      tr.converged = false;
      tr.stop_reason = "max_iters";
      return true;
    }
    return false;
  }

 private:
  const SolverConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  std::string diverged_msg_;
  double first_residual_ = -1.0;
};

inline double rel_change(const Vector& next, const Vector& prev) {
  return norm(next - prev) / std::max(1.0, norm(prev));
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

inline void require_assumption(double theta, const std::vector<double>& alphas,
                               const std::vector<double>& sigmas) {
  require(check_assumption({theta, alphas, sigmas}),
          "assumption violated: need theta > 0 and theta*alpha_i + sigma_i > 0 for all i");
}

inline void require_two_sigmas(const SolverConfig& cfg) {
  require(cfg.sigma.size() == 2 && cfg.sigma[0] > 0.0 && cfg.sigma[1] > 0.0,
          "config: two positive sigma values required");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Forward-backward method
// ---------------------------------------------------------------------------

/// Computes J_{theta/(sigma_A+sigma_B) (A+B)}(q) for set-valued A and
/// single-valued B via
///
///   x_{k+1} = J_{g t/(1+g sA) A}( ((1-g sB) x_k - g t B(x_k) + g (sA+sB) q) / (1+g sA) )
///
/// with g = gamma, t = theta. Converges R-linearly inside the stepsize
/// window: gamma < 2(t aB + sB)/(t kappa + sB)^2 when B is kappa-Lipschitz, or
/// gamma < 2 beta / (t + beta sB) when B is beta-cocoercive.
inline SolveResult solve_sfb(const SumProblem& pr, const SolverConfig& cfg, const Vector& x0) {
  using detail::require;
  require(pr.operators.size() == 2, "solve_sfb: exactly two operators required");
  const MonotoneOperator& A = pr.operators[0];
  const MonotoneOperator& B = pr.operators[1];
  require(B.has_forward(), "solve_sfb: operator B needs a forward map");
  detail::require_two_sigmas(cfg);
  const double theta = cfg.theta, gamma = cfg.gamma;
  const double sA = cfg.sigma[0], sB = cfg.sigma[1];
  require(gamma > 0.0, "solve_sfb: gamma must be > 0");
  detail::require_assumption(theta, {A.alpha, B.alpha}, {sA, sB});

  bool ok_lip = B.kappa && gamma < 2.0 * (theta * B.alpha + sB) /
                               ((theta * *B.kappa + sB) * (theta * *B.kappa + sB));
  bool ok_coco = B.beta && gamma < 2.0 * *B.beta / (theta + *B.beta * sB);
  require(ok_lip || ok_coco,
          "solve_sfb: stepsize window violated (needs gamma < "
          "2(theta*alpha_B+sigma_B)/(theta*kappa+sigma_B)^2 with kappa known, or gamma < "
          "2beta/(theta+beta*sigma_B) with beta known)");

  const double s = 1.0 + gamma * sA;
  SolveResult out{x0, {}};
  detail::RunMonitor mon(cfg);
  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    Vector inner = (1.0 - gamma * sB) * x - (gamma * theta) * B.forward(x) +
                   (gamma * (sA + sB)) * pr.q;
    inner *= 1.0 / s;
    Vector x_next = A.resolvent(gamma * theta / s, inner);
    const double res = detail::rel_change(x_next, x);
    x = std::move(x_next);
    if (mon.push(out.trace, k, res, x)) break;
  }
  out.point = std::move(x);
  return out;
}

// ---------------------------------------------------------------------------
// Forward-backward-forward (Tseng-type) method
// ---------------------------------------------------------------------------

/// Two-stage variant requiring only Lipschitz continuity of B; window
/// gamma (theta*kappa + sigma_B) < 1. The observer, when given, receives
/// (k, x_k, y_k); the monitored iterate is y_k (the resolvent output).
inline SolveResult solve_sfbf(
    const SumProblem& pr, const SolverConfig& cfg, const Vector& x0,
    const std::function<void(std::size_t, const Vector&, const Vector&)>& observer = {}) {
  using detail::require;
  require(pr.operators.size() == 2, "solve_sfbf: exactly two operators required");
  const MonotoneOperator& A = pr.operators[0];
  const MonotoneOperator& B = pr.operators[1];
  require(B.has_forward(), "solve_sfbf: operator B needs a forward map");
  require(B.kappa.has_value(), "solve_sfbf: operator B needs a Lipschitz constant");
  detail::require_two_sigmas(cfg);
  const double theta = cfg.theta, gamma = cfg.gamma;
  const double sA = cfg.sigma[0], sB = cfg.sigma[1];
  require(gamma > 0.0 && gamma * (theta * *B.kappa + sB) < 1.0,
          "solve_sfbf: stepsize window gamma*(theta*kappa + sigma_B) < 1 violated");
  detail::require_assumption(theta, {A.alpha, B.alpha}, {sA, sB});

  const double s = 1.0 + gamma * sA;
  SolveResult out{x0, {}};
  detail::RunMonitor mon(cfg);
  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    Vector bx = B.forward(x);
    Vector inner = (1.0 - gamma * sB) * x - (gamma * theta) * bx + (gamma * (sA + sB)) * pr.q;
    inner *= 1.0 / s;
    Vector y = A.resolvent(gamma * theta / s, inner);
    Vector x_next = (1.0 - gamma * sB) * y + (gamma * sB) * x - (gamma * theta) * B.forward(y) +
                    (gamma * theta) * bx;
    if (observer) observer(k, x, y);
    const double res = detail::rel_change(x_next, x);
    x = std::move(x_next);
    if (mon.push(out.trace, k, res, y)) {
      out.point = std::move(x);
      return out;
    }
  }
}

// ---------------------------------------------------------------------------
// Adaptive golden-ratio method
// ---------------------------------------------------------------------------

/// Adaptive-stepsize method for J_{theta/(sigma_A+sigma_B)(dg + B)}(q) with g
/// known through its prox and B locally Lipschitz (finite dimension only).
/// cfg.gamma is the initial stepsize gamma_0 and cfg.gamma_bar the cap;
/// phi in (1, (1+sqrt 5)/2]. Stepsize rule per iteration:
///
///   gamma_k = min{ rho gamma_{k-1},
///                  phi^2 ||x_k - x_{k-1}||^2 /
///                    (4 gamma_{k-2} ||theta (B x_k - B x_{k-1}) + sigma_B (x_k - x_{k-1})||^2),
///                  gamma_bar },   rho = 1/phi + 1/phi^2.
///
/// A vanishing denominator (below 1e-30) makes the middle candidate +inf.
inline SolveResult solve_sagraal(
    const ProximableFunction& g, const MonotoneOperator& B, const Vector& q,
    const SolverConfig& cfg, const Vector& x0, const Vector& x1,
    const std::function<void(std::size_t, double, const Vector&)>& observer = {}) {
  using detail::require;
  require(B.has_forward(), "solve_sagraal: operator B needs a forward map");
  detail::require_two_sigmas(cfg);
  const double theta = cfg.theta;
  const double sA = cfg.sigma[0], sB = cfg.sigma[1];
  const double phi = cfg.phi;
  const double golden = 0.5 * (1.0 + std::sqrt(5.0));
  require(phi > 1.0 && phi <= golden + 1e-12, "solve_sagraal: phi must lie in (1,(1+sqrt5)/2]");
  require(cfg.gamma > 0.0 && cfg.gamma_bar > 0.0, "solve_sagraal: gamma_0, gamma_bar must be > 0");
  detail::require_assumption(theta, {g.alpha, B.alpha}, {sA, sB});

  const double rho = 1.0 / phi + 1.0 / (phi * phi);
  double gamma_km1 = cfg.gamma;        // gamma_{k-1}
  double gamma_km2 = phi * cfg.gamma;  // gamma_{k-2}, seeded as phi*gamma_0

  Vector x_prev = x0, x = x1, xbar = x1;
  Vector b_prev = B.forward(x_prev), b = B.forward(x);

  SolveResult out{x, {}};
  detail::RunMonitor mon(cfg);
  for (std::size_t k = 1;; ++k) {
    Vector dx = x - x_prev;
    Vector db = theta * (b - b_prev) + sB * dx;
    const double den = dot(db, db);
    const double num = dot(dx, dx);
    double cand = std::numeric_limits<double>::infinity();
    if (den > 1e-30) cand = (phi * phi / (4.0 * gamma_km2)) * num / den;
    const double gamma_k = std::min({rho * gamma_km1, cand, cfg.gamma_bar});

    xbar = (1.0 / phi) * ((phi - 1.0) * x + xbar);
    const double s = 1.0 + gamma_k * sA;
    Vector inner = xbar - (gamma_k * sB) * x - (gamma_k * theta) * b +
                   (gamma_k * (sA + sB)) * q;
    inner *= 1.0 / s;
    Vector x_next = g.prox(gamma_k * theta / s, inner);

    if (observer) observer(k, gamma_k, x_next);
    // includes the averaging gap: x alone can stall at a prox corner while
    // xbar is still in flight
    const double res =
        (norm(x_next - x) + norm(xbar - x_next)) / std::max(1.0, norm(x));
    x_prev = std::move(x);
    b_prev = std::move(b);
    x = std::move(x_next);
    b = B.forward(x);
    gamma_km2 = gamma_km1;
    gamma_km1 = gamma_k;
    if (mon.push(out.trace, k - 1, res, x)) break;
  }
  out.point = std::move(x);
  return out;
}

// ---------------------------------------------------------------------------
// Primal-dual method
// ---------------------------------------------------------------------------

/// Computes prox_{(1/sigma)(g + phi o K)}(q) for (-sigma)-convex g, convex phi
/// and linear K; requires gamma*tau*||K||^2 < 1 and lambda in [0,1]:
///
///   y_{k+1}    = prox_{gamma phi*}( y_k + gamma K xbar_k )
///   x_{k+1}    = prox_{tau/(1+tau sigma) g}( (x_k - tau K* y_{k+1} + tau sigma q) / (1+tau sigma) )
///   xbar_{k+1} = x_{k+1} + lambda (x_{k+1} - x_k).
inline SolveResult solve_spd(
    const ProximableFunction& g, const ProximableFunction& phi_star, const LinearOperator& K,
    const Vector& q, const SolverConfig& cfg, const Vector& x0, const Vector& y0,
    const std::function<void(std::size_t, const Vector&, const Vector&)>& observer = {}) {
  using detail::require;
  require(!cfg.sigma.empty() && cfg.sigma[0] > 0.0, "solve_spd: sigma[0] must be > 0");
  const double sigma = cfg.sigma[0];
  const double gamma = cfg.gamma, tau = cfg.tau, lambda = cfg.lambda;
  require(gamma > 0.0 && tau > 0.0, "solve_spd: gamma, tau must be > 0");
  require(K.norm_bound >= 0.0, "solve_spd: K.norm_bound must be set");
  require(gamma * tau * K.norm_bound * K.norm_bound < 1.0,
          "solve_spd: stepsize window gamma*tau*||K||^2 < 1 violated");
  require(lambda >= 0.0 && lambda <= 1.0, "solve_spd: lambda must lie in [0,1]");
  require(sigma + g.alpha >= 0.0, "solve_spd: g must be (-sigma)-convex");

  const double sp = 1.0 + tau * sigma;
  Vector x = x0, y = y0, xbar = x0;
  SolveResult out{x, {}};
  detail::RunMonitor mon(cfg);
  for (std::size_t k = 0;; ++k) {
    Vector y_next = phi_star.prox(gamma, y + gamma * K.apply(xbar));
    Vector inner = x - tau * K.adjoint(y_next) + (tau * sigma) * q;
    inner *= 1.0 / sp;
    Vector x_next = g.prox(tau / sp, inner);
    xbar = x_next + lambda * (x_next - x);

    if (observer) observer(k, x_next, y_next);
    const double res = (norm(x_next - x) + norm(y_next - y)) /
                       std::max(1.0, norm(x) + norm(y));
    x = std::move(x_next);
    y = std::move(y_next);
    if (mon.push(out.trace, k, res, x)) break;
  }
  out.point = std::move(x);
  return out;
}

// ---------------------------------------------------------------------------
// Douglas/Peaceman-Rachford method
// ---------------------------------------------------------------------------

/// Resolvent splitting for two set-valued operators, lambda in (0,2]
/// (lambda = 2 is the Peaceman-Rachford limit):
///
///   u_k     = J_{g t/(1+g sA) A}( (x_k + g sA q) / (1+g sA) )
///   v_k     = J_{g t/(1+g sB) B}( (2 u_k - x_k + g sB q) / (1+g sB) )
///   x_{k+1} = x_k + lambda (v_k - u_k).
///
/// The shadow sequence u_k converges strongly to
/// J_{theta/(sigma_A+sigma_B)(A+B)}(q); the trace follows the governing x_k.
inline SolveResult solve_sdr(
    const SumProblem& pr, const SolverConfig& cfg, const Vector& x0,
    const std::function<void(std::size_t, const Vector&, const Vector&, const Vector&)>&
        observer = {}) {
  using detail::require;
  require(pr.operators.size() == 2, "solve_sdr: exactly two operators required");
  const MonotoneOperator& A = pr.operators[0];
  const MonotoneOperator& B = pr.operators[1];
  detail::require_two_sigmas(cfg);
  const double theta = cfg.theta, gamma = cfg.gamma, lambda = cfg.lambda;
  const double sA = cfg.sigma[0], sB = cfg.sigma[1];
  require(gamma > 0.0, "solve_sdr: gamma must be > 0");
  require(lambda > 0.0 && lambda <= 2.0, "solve_sdr: lambda must lie in (0,2]");
  detail::require_assumption(theta, {A.alpha, B.alpha}, {sA, sB});

  const double cA = 1.0 + gamma * sA;
  const double cB = 1.0 + gamma * sB;
  Vector x = x0;
  Vector u = x0;
  SolveResult out{x0, {}};
  detail::RunMonitor mon(cfg);
  for (std::size_t k = 0;; ++k) {
    u = A.resolvent(gamma * theta / cA, (1.0 / cA) * (x + (gamma * sA) * pr.q));
    Vector v = B.resolvent(gamma * theta / cB,
                           (1.0 / cB) * (2.0 * u - x + (gamma * sB) * pr.q));
    if (observer) observer(k, x, u, v);
    Vector x_next = x;
    axpy(lambda, v - u, x_next);
    const double res = detail::rel_change(x_next, x);
    x = std::move(x_next);
    if (mon.push(out.trace, k, res, u)) break;
  }
  out.point = std::move(u);
  return out;
}

// ---------------------------------------------------------------------------
// Strengthened Ryu splitting (three operators)
// ---------------------------------------------------------------------------

/// Resolvent splitting for three operators, lambda in (0,1]:
///
///   u_k     = J_{g t/(1+g sA) A}( x_k/(1+g sA) + g sA q/(1+g sA) )
///   v_k     = J_{g t/(1+g sB) B}( (u_k + y_k)/(1+g sB) - (1-g sB) q/(1+g sB) )
///   w_k     = J_{g t/(1+g sC) C}( (u_k - x_k + v_k - y_k)/(1+g sC) + q )
///   x_{k+1} = x_k + lambda (w_k - u_k)
///   y_{k+1} = y_k + lambda (w_k - v_k).
///
/// The shadow u_k converges to J_{theta/(sA+sB+sC)(A+B+C)}(q). A slot with
/// sigma_i = 0 is accepted when its operator is monotone (alpha_i >= 0); with
/// the zero operator in slot B this reduces exactly to the two-operator
/// Douglas-Rachford iteration on (A, C).
inline SolveResult solve_sryu(
    const SumProblem& pr, const SolverConfig& cfg, const Vector& x0, const Vector& y0,
    const std::function<void(std::size_t, const Vector&, const Vector&, const Vector&,
                             const Vector&, const Vector&)>& observer = {}) {
  using detail::require;
  require(pr.operators.size() == 3, "solve_sryu: exactly three operators required");
  const MonotoneOperator& A = pr.operators[0];
  const MonotoneOperator& B = pr.operators[1];
  const MonotoneOperator& C = pr.operators[2];
  require(cfg.sigma.size() == 3, "solve_sryu: three sigma values required");
  const double theta = cfg.theta, gamma = cfg.gamma, lambda = cfg.lambda;
  const double sA = cfg.sigma[0], sB = cfg.sigma[1], sC = cfg.sigma[2];
  require(gamma > 0.0, "solve_sryu: gamma must be > 0");
  require(lambda > 0.0 && lambda <= 1.0, "solve_sryu: lambda must lie in (0,1]");
  require(theta > 0.0, "solve_sryu: theta must be > 0");
  const double alphas[3] = {A.alpha, B.alpha, C.alpha};
  const double sigmas[3] = {sA, sB, sC};
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    require(sigmas[i] >= 0.0, "solve_sryu: sigma values must be >= 0");
    const double m = theta * alphas[i] + sigmas[i];
    require(m > 0.0 || (sigmas[i] == 0.0 && alphas[i] >= 0.0),
            "solve_sryu: assumption violated (theta*alpha_i + sigma_i must be > 0)");
    total += m;
  }
  require(total > 0.0, "solve_sryu: strengthened sum must be strongly monotone");

  const double cA = 1.0 + gamma * sA;
  const double cB = 1.0 + gamma * sB;
  const double cC = 1.0 + gamma * sC;
  Vector x = x0, y = y0, u = x0;
  SolveResult out{x0, {}};
  detail::RunMonitor mon(cfg);
  for (std::size_t k = 0;; ++k) {
    u = A.resolvent(gamma * theta / cA, (1.0 / cA) * x + (gamma * sA / cA) * pr.q);
    Vector v = B.resolvent(gamma * theta / cB,
                           (1.0 / cB) * (u + y) - ((1.0 - gamma * sB) / cB) * pr.q);
    Vector w = C.resolvent(gamma * theta / cC, (1.0 / cC) * (u - x + v - y) + pr.q);
    if (observer) observer(k, x, y, u, v, w);
    Vector x_next = x;
    axpy(lambda, w - u, x_next);
    Vector y_next = y;
    axpy(lambda, w - v, y_next);
    const double res = (norm(x_next - x) + norm(y_next - y)) /
                       std::max(1.0, norm(x) + norm(y));
    x = std::move(x_next);
    y = std::move(y_next);
    if (mon.push(out.trace, k, res, u)) break;
  }
  out.point = std::move(u);
  return out;
}

// ---------------------------------------------------------------------------
// Base (unstrengthened) Ryu splitting, zer(A+B+C)
// ---------------------------------------------------------------------------

/// The plain three-operator splitting towards a zero of A+B+C:
///
///   u_k = J_{gamma A}(x_k),  v_k = J_{gamma B}(u_k + y_k),
///   w_k = J_{gamma C}(u_k - x_k + v_k - y_k),
///   x_{k+1} = x_k + lambda (w_k - u_k),  y_{k+1} = y_k + lambda (w_k - v_k).
///
/// For lambda in (0,1) the pair (x_k, y_k) is Fejer monotone with respect to
/// the fixed-point set. The trace residual is ||w-u|| + ||w-v|| (absolute).
inline SolveResult ryu_base(
    const MonotoneOperator& A, const MonotoneOperator& B, const MonotoneOperator& C,
    double gamma, double lambda, const Vector& x0, const Vector& y0,
    std::size_t max_iters = 100000, double stop_tol = 1e-10,
    const std::function<void(std::size_t, const Vector&, const Vector&, const Vector&,
                             const Vector&, const Vector&)>& observer = {}) {
  using detail::require;
  require(gamma > 0.0, "ryu_base: gamma must be > 0");
  require(lambda > 0.0 && lambda <= 1.0, "ryu_base: lambda must lie in (0,1]");

  SolverConfig cfg;
  cfg.max_iters = max_iters;
  cfg.stop_tol = stop_tol;
  Vector x = x0, y = y0, u = x0;
  SolveResult out{x0, {}};
  detail::RunMonitor mon(cfg, "diverged (residual growth)");
  for (std::size_t k = 0;; ++k) {
    u = A.resolvent(gamma, x);
    Vector v = B.resolvent(gamma, u + y);
    Vector w = C.resolvent(gamma, u - x + v - y);
    if (observer) observer(k, x, y, u, v, w);
    const double res = norm(w - u) + norm(w - v);
    axpy(lambda, w - u, x);
    axpy(lambda, w - v, y);
    if (mon.push(out.trace, k, res, u)) break;
  }
  out.point = std::move(u);
  return out;
}

// ---------------------------------------------------------------------------
// Resolvent-of-sum facade
// ---------------------------------------------------------------------------

/// Computes J_{omega (A_1 + ... + A_n)}(q) by the chosen splitting method.
/// When cfg.sigma is empty, the symmetric default theta = 1 and
/// sigma_i = 1/(n omega) is filled in, which satisfies omega = theta/sum sigma_i.
inline SolveResult resolvent_of_sum(const SumProblem& pr, Method method, SolverConfig cfg) {
  using detail::require;
  const std::size_t n = pr.operators.size();
  require(n == 2 || n == 3, "resolvent_of_sum: two or three operators required");
  require(pr.omega > 0.0, "resolvent_of_sum: omega must be > 0");

  if (cfg.sigma.empty()) {
    cfg.theta = 1.0;
    cfg.sigma.assign(n, 1.0 / (static_cast<double>(n) * pr.omega));
  } else {
    require(cfg.sigma.size() == n, "resolvent_of_sum: sigma size mismatch");
    double total = 0.0;
    for (double s : cfg.sigma) total += s;
    require(total > 0.0 && std::abs(cfg.theta / total - pr.omega) <=
                               1e-12 * std::max(1.0, pr.omega),
            "resolvent_of_sum: theta/sum(sigma) must equal omega");
  }

  switch (method) {
    case Method::SFB:
      require(n == 2, "resolvent_of_sum: SFB needs two operators");
      return solve_sfb(pr, cfg, pr.q);
    case Method::SFBF:
      require(n == 2, "resolvent_of_sum: SFBF needs two operators");
      return solve_sfbf(pr, cfg, pr.q);
    case Method::SAGRAAL: {
      require(n == 2, "resolvent_of_sum: SAGRAAL needs two operators");
      ProximableFunction g;
      const MonotoneOperator& A = pr.operators[0];
      g.prox = A.resolvent;
      g.alpha = A.alpha;
      return solve_sagraal(g, pr.operators[1], pr.q, cfg, pr.q, pr.q);
    }
    case Method::SDR:
      require(n == 2, "resolvent_of_sum: SDR needs two operators");
      return solve_sdr(pr, cfg, pr.q);
    case Method::SRYU:
      require(n == 3, "resolvent_of_sum: SRYU needs three operators");
      return solve_sryu(pr, cfg, pr.q, pr.q);
    case Method::SPD:
      throw std::invalid_argument(
          "resolvent_of_sum: SPD needs explicit (g, phi*, K) structure; call solve_spd");
  }
  throw std::invalid_argument("resolvent_of_sum: unknown method");
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

/// Cyclic Dykstra iteration towards P_{C_1 cap ... cap C_m}(q). The trace
/// residual is the feasibility gap sum_i ||x - P_i(x)|| evaluated once per
/// sweep; iterations count sweeps.
inline SolveResult dykstra(const std::vector<std::function<Vector(const Vector&)>>& projectors,
                           const Vector& q, const SolverConfig& cfg) {
  detail::require(projectors.size() >= 1, "dykstra: at least one projector required");
  Vector x = q;
  std::vector<Vector> increments(projectors.size(), Vector::zeros(q.shape()));
  SolveResult out{x, {}};
  detail::RunMonitor mon(cfg);
  for (std::size_t k = 0;; ++k) {
    for (std::size_t i = 0; i < projectors.size(); ++i) {
      Vector t = x + increments[i];
      Vector y = projectors[i](t);
      increments[i] = t - y;
      x = std::move(y);
    }
    double feas = 0.0;
    for (const auto& p : projectors) feas += norm(x - p(x));
    if (mon.push(out.trace, k, feas, x)) break;
  }
  out.point = std::move(x);
  return out;
}

/// Direct averaged-alternating-modified-reflections loop for
/// J_{gamma/(2(1-beta)) (A+B)}(q) with beta in (0,1), kappa in (0,1):
///
///   y_{k+1} = (1-kappa) y_k + kappa (2 beta JB' - Id)(2 beta JA' - Id)(y_k),
///   JX'(z) = J_{gamma X}(z + q) - q.
///
/// Equivalent to solve_sdr with theta = 1/beta, sigma = (1-beta)/(gamma beta)
/// and lambda = 2 kappa under the change of variables y_k = beta (x_k - q).
/// The monitored shadow is u_k = J_{gamma A}(y_k + q).
inline SolveResult aamr(
    const MonotoneOperator& A, const MonotoneOperator& B, const Vector& q, double gamma,
    double beta, double kappa, const SolverConfig& cfg, const Vector& y0,
    const std::function<void(std::size_t, const Vector&, const Vector&)>& observer = {}) {
  using detail::require;
  require(beta > 0.0 && beta < 1.0, "aamr: beta must lie in (0,1)");
  require(kappa > 0.0 && kappa <= 1.0, "aamr: kappa must lie in (0,1]");
  require(gamma > 0.0, "aamr: gamma must be > 0");

  Vector y = y0;
  Vector u = q;
  SolveResult out{q, {}};
  detail::RunMonitor mon(cfg);
  for (std::size_t k = 0;; ++k) {
    u = A.resolvent(gamma, y + q);
    Vector z = 2.0 * beta * (u - q) - y;
    Vector t = B.resolvent(gamma, z + q);
    Vector z2 = 2.0 * beta * (t - q) - z;
    Vector y_next = (1.0 - kappa) * y + kappa * z2;
    if (observer) observer(k, y, u);
    const double res = detail::rel_change(y_next, y);
    y = std::move(y_next);
    if (mon.push(out.trace, k, res, u)) break;
  }
  out.point = std::move(u);
  return out;
}

}  // namespace resolvex
