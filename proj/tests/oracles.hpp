#pragma once

// Test-only oracles, kept independent of the library's resolvent formulas:
// scalar operator models expose their graphs as intervals and a bisection
// solver inverts monotone inclusions directly. Also holds a projected-SOR
// solver for the discrete obstacle problem used as a PDE reference.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "resolvex/rng.hpp"
#include "resolvex/vector.hpp"
#include "resolvex/zoo.hpp"

namespace oracles {

using resolvex::Rng;
using resolvex::Shape;
using resolvex::Vector;

constexpr double kInf = std::numeric_limits<double>::infinity();

// A separable scalar maximally monotone operator given by its graph.
struct ScalarOpModel {
  enum class Kind { affine, box_cone, l1, zero };
  Kind kind = Kind::zero;
  double a = 0.0, c = 0.0;  // affine a(x - c)
  double lo = 0.0, hi = 0.0;
  double w = 1.0;  // l1 weight

  double alpha() const { return kind == Kind::affine ? a : 0.0; }

  // Set value A(t) as [vlo, vhi]; box cone is empty outside [lo, hi], signalled
  // by domain_side = -1 (t below) / +1 (t above).
  void value(double t, double& vlo, double& vhi, int& domain_side) const {
    domain_side = 0;
    switch (kind) {
      case Kind::zero:
        vlo = vhi = 0.0;
        return;
      case Kind::affine:
        vlo = vhi = a * (t - c);
        return;
      case Kind::l1:
        if (t > 0.0)
          vlo = vhi = w;
        else if (t < 0.0)
          vlo = vhi = -w;
        else {
          vlo = -w;
          vhi = w;
        }
        return;
      case Kind::box_cone:
        if (t < lo) {
          domain_side = -1;
          return;
        }
        if (t > hi) {
          domain_side = +1;
          return;
        }
        vlo = (t == lo) ? -kInf : 0.0;
        vhi = (t == hi) ? kInf : 0.0;
        return;
    }
  }

  // Library-side view of the same operator (used as the object under test).
  resolvex::MonotoneOperator as_operator() const {
    switch (kind) {
      case Kind::zero:
        return resolvex::zoo::make_zero_operator();
      case Kind::affine:
        return resolvex::zoo::make_affine_operator(a, Vector::scalar(c));
      case Kind::l1:
        return resolvex::zoo::make_l1_operator(w);
      case Kind::box_cone:
        return resolvex::zoo::make_box_operator(lo, hi);
    }
    throw std::logic_error("unreachable");
  }
};

// Solves x in (1 + gamma*sigma) y + gamma A(theta y + q) for the unique y by
// bisection on the strongly monotone graph. Never touches any resolvent.
inline double solve_scalar_inclusion(const ScalarOpModel& A, double theta, double sigma,
                                     double q, double gamma, double x) {
  auto position = [&](double y) {
    // -1: y too small, +1: y too large, 0: inclusion holds at y
    const double t = theta * y + q;
    double vlo, vhi;
    int side;
    A.value(t, vlo, vhi, side);
    if (side < 0) return -1;
    if (side > 0) return +1;
    const double base = (1.0 + gamma * sigma) * y;
    const double slo = base + gamma * vlo;
    const double shi = base + gamma * vhi;
    if (x > shi) return -1;
    if (x < slo) return +1;
    return 0;
  };

  double loy = -1.0, hiy = 1.0;
  for (int grow = 0; grow < 200 && position(loy) > 0; ++grow) loy *= 2.0;
  for (int grow = 0; grow < 200 && position(hiy) < 0; ++grow) hiy *= 2.0;
  if (position(loy) > 0 || position(hiy) < 0)
    throw std::runtime_error("oracle bisection: failed to bracket");

  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (loy + hiy);
    const int p = position(mid);
    if (p < 0)
      loy = mid;
    else if (p > 0)
      hiy = mid;
    else {
      loy = hiy = mid;
      break;
    }
    if (hiy - loy < 1e-16 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (loy + hiy);
}

// Componentwise oracle for separable vector operators.
inline Vector solve_inclusion(const std::vector<ScalarOpModel>& comps, double theta, double sigma,
                              const Vector& q, double gamma, const Vector& x) {
  Vector y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = solve_scalar_inclusion(comps[i], theta, sigma, q[i], gamma, x[i]);
  return y;
}

inline ScalarOpModel random_model(Rng& rng) {
  ScalarOpModel m;
  const double pick = rng.uniform01();
  if (pick < 0.3) {
    m.kind = ScalarOpModel::Kind::affine;
    m.a = rng.uniform(0.0, 3.0);
    m.c = rng.uniform(-2.0, 2.0);
  } else if (pick < 0.6) {
    m.kind = ScalarOpModel::Kind::box_cone;
    m.lo = rng.uniform(-2.0, 0.0);
    m.hi = m.lo + rng.uniform(0.1, 3.0);
  } else if (pick < 0.9) {
    m.kind = ScalarOpModel::Kind::l1;
    m.w = rng.uniform(0.1, 2.0);
  } else {
    m.kind = ScalarOpModel::Kind::zero;
  }
  return m;
}

// Projected SOR for the discrete obstacle problem
//   0 <= v  perp  ((-Lap_h + I) v - f) >= 0,
// the complementarity form of v = J_{A+B}(f). Independent reference for the
// splitting solvers.
inline Vector psor_obstacle(const resolvex::zoo::GridLaplacian& lap, const Vector& f,
                            double relax = 1.8, std::size_t max_sweeps = 200000,
                            double tol = 1e-12) {
  const std::size_t nx = lap.nx, ny = lap.ny;
  const double ih2 = 1.0 / (lap.h * lap.h);
  const double diag = 1.0 + (ny == 1 ? 2.0 : 4.0) * ih2;
  Vector v = resolvex::zoo::proj_nonneg(f);

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        double nb = 0.0;
        nb += (i > 0) ? v[(i - 1) * ny + j] : 0.0;
        nb += (i + 1 < nx) ? v[(i + 1) * ny + j] : 0.0;
        if (ny > 1) {
          nb += (j > 0) ? v[i * ny + j - 1] : 0.0;
          nb += (j + 1 < ny) ? v[i * ny + j + 1] : 0.0;
        }
        const double unconstrained = (f[i * ny + j] + ih2 * nb) / diag;
        const double cur = v[i * ny + j];
        v[i * ny + j] = std::max(0.0, cur + relax * (unconstrained - cur));
      }
    // complementarity residual: || min(v, Mv - f) ||_inf
    Vector mv = lap.apply(v);
    mv += v;
    double r = 0.0;
    for (std::size_t idx = 0; idx < v.size(); ++idx)
      r = std::max(r, std::abs(std::min(v[idx], mv[idx] - f[idx])));
    if (r <= tol) return v;
  }
  throw std::runtime_error("psor_obstacle: did not converge");
}

}  // namespace oracles
