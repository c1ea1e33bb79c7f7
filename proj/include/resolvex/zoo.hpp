#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "resolvex/linalg.hpp"
#include "resolvex/operators.hpp"
#include "resolvex/vector.hpp"

namespace resolvex::zoo {

// ---------------------------------------------------------------------------
// Matrix projectors (best approximation application)
// ---------------------------------------------------------------------------

/// Projection onto {X : Xe = X^T e = e}: (I-J) X (I-J) + J with J = ee^T/n.
inline Vector proj_doubly_stochastic_affine(const Vector& X) {
  const Shape& s = X.shape();
  if (s.kind() != Shape::Kind::matrix || s.rows() != s.cols())
    throw std::invalid_argument("proj_doubly_stochastic_affine: square matrix required");
  const std::size_t n = s.rows();
  const double invn = 1.0 / static_cast<double>(n);

  std::vector<double> row_mean(n, 0.0), col_mean(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double v = X.at(i, j);
      row_mean[i] += v;
      col_mean[j] += v;
      total += v;
    }
  for (std::size_t i = 0; i < n; ++i) {
    row_mean[i] *= invn;
    col_mean[i] *= invn;
  }
  total *= invn * invn;

  // ((I-J)X(I-J))_{ij} = X_{ij} - rowmean_i - colmean_j + totalmean
  Vector Y(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      Y.at(i, j) = X.at(i, j) - row_mean[i] - col_mean[j] + total + invn;
  return Y;
}

/// Index set Omega with prescribed values; entries are 0-based.
struct PrescribedNonneg {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> omega;
  std::vector<double> values;  // aligned with omega
};

/// Entrywise projection: prescribed value on Omega, positive part elsewhere.
inline Vector proj_prescribed_nonneg(const Vector& X, const PrescribedNonneg& spec) {
  const Shape& s = X.shape();
  if (s.kind() != Shape::Kind::matrix)
    throw std::invalid_argument("proj_prescribed_nonneg: matrix required");
  Vector Y(s);
  for (std::size_t i = 0; i < X.size(); ++i) Y[i] = std::max(X[i], 0.0);
  for (std::size_t k = 0; k < spec.omega.size(); ++k) {
    const auto [i, j] = spec.omega[k];
    if (i >= s.rows() || j >= s.cols())
      throw std::invalid_argument("proj_prescribed_nonneg: index out of range");
    Y.at(i, j) = spec.values[k];
  }
  return Y;
}

/// Projection onto the PSD cone: symmetrise, then clip negative eigenvalues.
inline Vector proj_psd(const Vector& X) {
  const Shape& s = X.shape();
  if (s.kind() != Shape::Kind::matrix || s.rows() != s.cols())
    throw std::invalid_argument("proj_psd: square matrix required");
  if (!X.all_finite()) throw std::invalid_argument("proj_psd: non-finite input");
  const std::size_t n = s.rows();

  std::vector<double> sym(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sym[i * n + j] = 0.5 * (X.at(i, j) + X.at(j, i));

  auto eig = linalg::sym_eig(n, sym);
  for (auto& lam : eig.eigvals) lam = std::max(lam, 0.0);

  // Y = V diag(lam+) V^T
  Vector Y(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += eig.eigvecs[i * n + k] * eig.eigvals[k] * eig.eigvecs[j * n + k];
      Y.at(i, j) = acc;
      Y.at(j, i) = acc;
    }
  return Y;
}

// ---------------------------------------------------------------------------
// Imaging operators (ROF application)
// ---------------------------------------------------------------------------

/// Discrete gradient K of an n x n image by forward differences, zero at the
/// last column/row. Output is the pair (horizontal, vertical) difference
/// fields; ||K||^2 <= 8 for this stencil.
inline Vector discrete_gradient(const Vector& x) {
  const Shape& s = x.shape();
  if (s.kind() != Shape::Kind::matrix || s.rows() != s.cols())
    throw std::invalid_argument("discrete_gradient: square image required");
  const std::size_t n = s.rows();
  Vector gx(s), gy(s);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      gx.at(i, j) = (j + 1 < n) ? x.at(i, j + 1) - x.at(i, j) : 0.0;
      gy.at(i, j) = (i + 1 < n) ? x.at(i + 1, j) - x.at(i, j) : 0.0;
    }
  return Vector::concat(gx, gy);
}

/// Discrete divergence, the exact negative adjoint of discrete_gradient:
/// <K x, y> = <x, -div y> for all x, y.
inline Vector divergence(const Vector& y) {
  const Shape& s = y.shape();
  if (s.kind() != Shape::Kind::pair)
    throw std::invalid_argument("divergence: pair of fields required");
  Vector y1 = y.first();
  Vector y2 = y.second();
  const std::size_t n = y1.shape().rows();
  Vector d(y1.shape());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double v = 0.0;
      if (j + 1 < n) v += y1.at(i, j);
      if (j > 0) v -= y1.at(i, j - 1);
      if (i + 1 < n) v += y2.at(i, j);
      if (i > 0) v -= y2.at(i - 1, j);
      d.at(i, j) = v;
    }
  return d;
}

/// Adjoint K* = -div.
inline Vector gradient_adjoint(const Vector& y) {
  Vector d = divergence(y);
  d *= -1.0;
  return d;
}

/// Isotropic total variation sum_{ij} sqrt((K x)^1_{ij}^2 + (K x)^2_{ij}^2).
inline double tv_value(const Vector& x) {
  Vector g = discrete_gradient(x);
  Vector g1 = g.first();
  Vector g2 = g.second();
  double s = 0.0;
  for (std::size_t i = 0; i < g1.size(); ++i) s += std::hypot(g1[i], g2[i]);
  return s;
}

/// prox of the conjugate of the isotropic TV term: pixelwise projection of
/// each (y^1, y^2) onto the closed unit Euclidean ball. Independent of gamma.
inline Vector prox_tv_conjugate(const Vector& y, double /*gamma*/) {
  const Shape& s = y.shape();
  if (s.kind() != Shape::Kind::pair)
    throw std::invalid_argument("prox_tv_conjugate: pair of fields required");
  Vector y1 = y.first();
  Vector y2 = y.second();
  for (std::size_t i = 0; i < y1.size(); ++i) {
    const double r = std::hypot(y1[i], y2[i]);
    if (r > 1.0) {
      y1[i] /= r;
      y2[i] /= r;
    }
  }
  return Vector::concat(y1, y2);
}

/// Power-iteration estimate of ||K||^2 for the n x n discrete gradient.
inline double gradient_norm_sq_estimate(std::size_t n, std::size_t iters = 200) {
  const Shape s = Shape::matrix(n, n);
  return linalg::power_iteration(
      [](const Vector& x) { return gradient_adjoint(discrete_gradient(x)); }, s, iters);
}

// ---------------------------------------------------------------------------
// Grid operators (obstacle problem application)
// ---------------------------------------------------------------------------

/// Finite-difference Dirichlet Laplacian on a uniform rectangular grid of
/// interior points (5-point stencil in 2D, 3-point in 1D when ny == 1).
/// The resolvent solves (-Lap + I/gamma) w = g/gamma by conjugate gradients;
/// the system is SPD.
struct GridLaplacian {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double h = 0.0;

  GridLaplacian(std::size_t nx_, std::size_t ny_, double h_) : nx(nx_), ny(ny_), h(h_) {
    if (nx == 0 || ny == 0 || !(h > 0.0))
      throw std::invalid_argument("GridLaplacian: invalid grid");
  }

  Shape shape() const { return Shape::grid(nx, ny, h); }

  /// Applies -Lap_h with homogeneous Dirichlet boundary.
  Vector apply(const Vector& v) const {
    check(v);
    Vector out(v.shape());
    const double ih2 = 1.0 / (h * h);
    const bool one_d = (ny == 1);
    for (std::size_t i = 0; i < nx; ++i)
      for (std::size_t j = 0; j < ny; ++j) {
        const double c = v[i * ny + j];
        double acc = (one_d ? 2.0 : 4.0) * c;
        acc -= (i > 0) ? v[(i - 1) * ny + j] : 0.0;
        acc -= (i + 1 < nx) ? v[(i + 1) * ny + j] : 0.0;
        if (!one_d) {
          acc -= (j > 0) ? v[i * ny + j - 1] : 0.0;
          acc -= (j + 1 < ny) ? v[i * ny + j + 1] : 0.0;
        }
        out[i * ny + j] = acc * ih2;
      }
    return out;
  }

  /// J_{gamma B}(g) with B = -Lap_h: solves (-Lap_h + I/gamma) w = g/gamma by
  /// CG to linear residual <= cg_tol * ||g|| (the right-hand side is g/gamma,
  /// so the relative tolerance is rescaled for gamma < 1). `x0` is an optional
  /// warm start, useful inside outer splitting loops.
  Vector resolvent(const Vector& g, double gamma, const Vector* x0 = nullptr,
                   double cg_tol = 1e-10) const {
    check(g);
    if (!(gamma > 0.0)) throw std::invalid_argument("GridLaplacian: gamma must be > 0");
    Vector w = (x0 != nullptr) ? *x0 : Vector::zeros(g.shape());
    const double inv_gamma = 1.0 / gamma;
    auto op = [this, inv_gamma](const Vector& v) {
      Vector av = apply(v);
      axpy(inv_gamma, v, av);
      return av;
    };
    Vector rhs = inv_gamma * g;
    auto res = linalg::conjugate_gradient(op, rhs, w, cg_tol * std::min(1.0, gamma),
                                          10 * nx * ny);
    if (!res.converged)
      throw std::runtime_error("GridLaplacian: CG failed to converge (ill-conditioned grid)");
    return w;
  }

  /// Discrete L2 norm sqrt(h^d * sum v^2).
  double l2_norm(const Vector& v) const {
    const double d = (ny == 1) ? 1.0 : 2.0;
    return std::sqrt(std::pow(h, d) * dot(v, v));
  }

 private:
  void check(const Vector& v) const {
    if (v.shape() != shape())
      throw std::invalid_argument("GridLaplacian: grid shape mismatch");
  }
};

/// Pointwise positive part, the resolvent of the normal cone to {v >= 0}.
inline Vector proj_nonneg(const Vector& g) {
  Vector out = g;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], 0.0);
  return out;
}

// ---------------------------------------------------------------------------
// Elementary proximity operators
// ---------------------------------------------------------------------------

/// Soft thresholding: prox of gamma * ||.||_1.
inline Vector prox_l1(const Vector& x, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox_l1: gamma must be > 0");
  Vector y = x;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double v = y[i];
    y[i] = (v > gamma) ? v - gamma : (v < -gamma ? v + gamma : 0.0);
  }
  return y;
}

/// prox of gamma * (a/2)||. - c||^2: (x + gamma*a*c) / (1 + gamma*a).
inline Vector prox_quadratic(double a, const Vector& c, double gamma, const Vector& x) {
  const double denom = 1.0 + gamma * a;
  if (!(denom > 0.0)) throw std::invalid_argument("prox_quadratic: 1 + gamma*a must be > 0");
  return (1.0 / denom) * (x + (gamma * a) * c);
}

/// Componentwise clamp to [lo, hi].
inline Vector proj_box(double lo, double hi, const Vector& x) {
  if (!(lo <= hi)) throw std::invalid_argument("proj_box: lo must be <= hi");
  Vector y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], lo, hi);
  return y;
}

// ---------------------------------------------------------------------------
// Operator factories
// ---------------------------------------------------------------------------

/// A(x) = a (x - c). Maximally a-monotone, |a|-Lipschitz, (1/a)-cocoercive
/// for a > 0. Allows a < 0 (hypomonotone test operators).
inline MonotoneOperator make_affine_operator(double a, Vector c) {
  MonotoneOperator op;
  op.alpha = a;
  op.kappa = std::abs(a);
  if (a > 0.0) op.beta = 1.0 / a;
  op.forward = [a, c](const Vector& x) { return a * (x - c); };
  op.resolvent = [a, c](double gamma, const Vector& x) {
    const double denom = 1.0 + gamma * a;
    if (!(denom > 0.0))
      throw std::invalid_argument("affine resolvent: 1 + gamma*a must be > 0");
    return (1.0 / denom) * (x + (gamma * a) * c);
  };
  return op;
}

/// Subdifferential of (a/2)||. - c||^2 (same graph as the affine operator,
/// exposed as a prox-capable record as well).
inline MonotoneOperator make_quadratic_operator(double a, Vector c) {
  return make_affine_operator(a, std::move(c));
}

/// Normal cone to the box [lo, hi]^n; resolvent is the clamp.
inline MonotoneOperator make_box_operator(double lo, double hi) {
  MonotoneOperator op;
  op.alpha = 0.0;
  op.resolvent = [lo, hi](double, const Vector& x) { return proj_box(lo, hi, x); };
  return op;
}

/// Subdifferential of weight * ||.||_1; resolvent is soft thresholding.
inline MonotoneOperator make_l1_operator(double weight = 1.0) {
  if (!(weight > 0.0)) throw std::invalid_argument("make_l1_operator: weight must be > 0");
  MonotoneOperator op;
  op.alpha = 0.0;
  op.resolvent = [weight](double gamma, const Vector& x) { return prox_l1(x, gamma * weight); };
  return op;
}

/// The zero operator (resolvent = identity, forward = 0).
inline MonotoneOperator make_zero_operator() {
  MonotoneOperator op;
  op.alpha = 0.0;
  op.kappa = 0.0;
  op.forward = [](const Vector& x) { return Vector::zeros(x.shape()); };
  op.resolvent = [](double, const Vector& x) { return x; };
  return op;
}

/// Normal cone to the doubly stochastic affine subspace.
inline MonotoneOperator make_doubly_stochastic_operator() {
  MonotoneOperator op;
  op.resolvent = [](double, const Vector& x) { return proj_doubly_stochastic_affine(x); };
  return op;
}

/// Normal cone to the prescribed-entries nonnegativity set.
inline MonotoneOperator make_prescribed_nonneg_operator(PrescribedNonneg spec) {
  MonotoneOperator op;
  op.resolvent = [spec = std::move(spec)](double, const Vector& x) {
    return proj_prescribed_nonneg(x, spec);
  };
  return op;
}

/// Normal cone to the PSD cone.
inline MonotoneOperator make_psd_operator() {
  MonotoneOperator op;
  op.resolvent = [](double, const Vector& x) { return proj_psd(x); };
  return op;
}

/// Normal cone to the pointwise-nonnegative cone on a grid.
inline MonotoneOperator make_nonneg_cone_operator() {
  MonotoneOperator op;
  op.resolvent = [](double, const Vector& x) { return proj_nonneg(x); };
  return op;
}

/// -Lap_h as a monotone operator; each call solves the shifted linear system.
/// A per-instance warm-start buffer speeds up outer splitting loops, so build
/// one operator per solver run rather than sharing across runs.
inline MonotoneOperator make_laplacian_operator(std::shared_ptr<const GridLaplacian> lap,
                                                bool warm_start = true) {
  MonotoneOperator op;
  op.alpha = 0.0;
  op.forward = [lap](const Vector& x) { return lap->apply(x); };
  if (warm_start) {
    auto buffer = std::make_shared<Vector>();
    op.resolvent = [lap, buffer](double gamma, const Vector& g) {
      const Vector* guess = (buffer->size() == g.size()) ? buffer.get() : nullptr;
      Vector w = lap->resolvent(g, gamma, guess);
      *buffer = w;
      return w;
    };
  } else {
    op.resolvent = [lap](double gamma, const Vector& g) { return lap->resolvent(g, gamma); };
  }
  return op;
}

/// The doubly stochastic / prescribed / PSD feasibility witness
/// M = ((n/4 - 1) I + (3/4) ee^T) / (n - 1); positive definite for n >= 5.
inline Vector feasibility_witness(std::size_t n) {
  if (n < 2) throw std::invalid_argument("feasibility_witness: n >= 2 required");
  const double nd = static_cast<double>(n);
  const double diag = (0.25 * nd - 1.0) / (nd - 1.0);
  const double off = 0.75 / (nd - 1.0);
  Vector M(Shape::matrix(n, n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M.at(i, j) = (i == j) ? diag + off : off;
  return M;
}

}  // namespace resolvex::zoo
