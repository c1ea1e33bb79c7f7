#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "resolvex/vector.hpp"

namespace resolvex {

/// Capability record for a maximally alpha-monotone operator A: H =) H.
/// `resolvent(gamma, x)` evaluates J_{gamma A}(x); it must be well defined for
/// every gamma > 0 with 1 + gamma*alpha > 0. `forward` is present whenever an
/// algorithm takes forward steps on the operator. `kappa` (Lipschitz constant
/// of the forward map) and `beta` (cocoercivity constant) are optional extra
/// regularity data used for stepsize validation.
struct MonotoneOperator {
  std::function<Vector(double, const Vector&)> resolvent;
  std::function<Vector(const Vector&)> forward;
  double alpha = 0.0;
  std::optional<double> kappa;
  std::optional<double> beta;

  bool has_forward() const { return static_cast<bool>(forward); }
};

/// A proper lsc alpha-convex function known through its proximity operator.
/// `value` is optional and only needed where objectives are reported.
struct ProximableFunction {
  std::function<Vector(double, const Vector&)> prox;
  std::function<double(const Vector&)> value;
  double alpha = 0.0;
};

/// Bounded linear operator K together with its exact adjoint and an upper
/// bound on ||K|| used by stepsize windows.
struct LinearOperator {
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> adjoint;
  double norm_bound = 0.0;
};

/// Parameters (theta, sigma) of the strengthening A o (theta Id) + sigma Id
/// combined with the inner perturbation by the anchor q, i.e. the operator
/// x |-> A(theta x + q) + sigma x.
struct StrengtheningParams {
  double theta = 1.0;
  double sigma = 0.0;
  Vector q;
};

/// Per-operator validity data: the construction requires
/// theta*alpha_i + sigma_i > 0 for every operator in the sum.
struct AssumptionCheck {
  double theta = 1.0;
  std::vector<double> alphas;
  std::vector<double> sigmas;
};

inline bool check_assumption(const AssumptionCheck& c) {
  if (!(c.theta > 0.0) || c.alphas.size() != c.sigmas.size()) return false;
  for (std::size_t i = 0; i < c.alphas.size(); ++i)
    if (!(c.theta * c.alphas[i] + c.sigmas[i] > 0.0)) return false;
  return true;
}

/// Forward evaluation of the strengthened inner-perturbed operator:
/// x |-> A(theta x + q) + sigma x.
inline Vector strengthened_forward(const MonotoneOperator& A, const StrengtheningParams& p,
                                   const Vector& x) {
  if (!(p.theta > 0.0)) throw std::invalid_argument("strengthened_forward: theta must be > 0");
  if (!A.has_forward())
    throw std::invalid_argument("strengthened_forward: operator has no forward map");
  Vector y = A.forward(p.theta * x + p.q);
  axpy(p.sigma, x, y);
  return y;
}

/// Resolvent of the strengthened inner-perturbed operator, computed from a
/// single resolvent evaluation of A:
///
///   J = (1/theta) ( J_{gamma theta/(1+gamma sigma) A}( theta/(1+gamma sigma) x + q ) - q ).
///
/// Requires 1 + gamma*sigma > 0 and 1 + gamma*(theta*alpha + sigma) > 0 so the
/// result is the unique y with x in y + gamma (A(theta y + q) + sigma y).
inline Vector strengthened_resolvent(const MonotoneOperator& A, const StrengtheningParams& p,
                                     double gamma, const Vector& x) {
  if (!(p.theta > 0.0)) throw std::invalid_argument("strengthened_resolvent: theta must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("strengthened_resolvent: gamma must be > 0");
  const double s = 1.0 + gamma * p.sigma;
  if (!(s > 0.0))
    throw std::invalid_argument("strengthened_resolvent: 1 + gamma*sigma must be > 0");
  if (!(1.0 + gamma * (p.theta * A.alpha + p.sigma) > 0.0))
    throw std::invalid_argument(
        "strengthened_resolvent: 1 + gamma*(theta*alpha + sigma) must be > 0 "
        "(assumption violated)");
  Vector inner = (p.theta / s) * x + p.q;
  Vector y = A.resolvent(gamma * p.theta / s, inner);
  y -= p.q;
  y *= 1.0 / p.theta;
  return y;
}

/// Builds the strengthened inner-perturbed operator as a first-class operator,
/// transporting the monotonicity modulus (theta*alpha + sigma), the Lipschitz
/// constant (kappa*theta + |sigma|) and, for sigma >= 0, the cocoercivity
/// constant (theta/beta + sigma)^{-1}.
inline MonotoneOperator strengthen(const MonotoneOperator& A, const StrengtheningParams& p) {
  if (!(p.theta > 0.0)) throw std::invalid_argument("strengthen: theta must be > 0");
  MonotoneOperator out;
  out.alpha = p.theta * A.alpha + p.sigma;
  out.resolvent = [A, p](double gamma, const Vector& x) {
    return strengthened_resolvent(A, p, gamma, x);
  };
  if (A.has_forward())
    out.forward = [A, p](const Vector& x) { return strengthened_forward(A, p, x); };
  if (A.kappa) out.kappa = *A.kappa * p.theta + std::abs(p.sigma);
  if (A.beta && p.sigma >= 0.0) out.beta = 1.0 / (p.theta / *A.beta + p.sigma);
  return out;
}

/// Change of variables between a zero of the strengthened sum and the
/// resolvent of the sum: a zero x maps to theta*x + q.
inline Vector zero_point_to_resolvent(const Vector& x, double theta, const Vector& q) {
  return theta * x + q;
}

/// Inverse change of variables: (x - q) / theta.
inline Vector resolvent_to_zero_point(const Vector& x, double theta, const Vector& q) {
  if (!(theta > 0.0)) throw std::invalid_argument("resolvent_to_zero_point: theta must be > 0");
  return (1.0 / theta) * (x - q);
}

}  // namespace resolvex
