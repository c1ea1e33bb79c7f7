#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "resolvex/vector.hpp"

namespace resolvex::linalg {

/// Eigendecomposition of a dense symmetric matrix (row-major, n*n entries) by
/// cyclic Jacobi rotations. On return `a` holds a diagonalised copy,
/// `eigvals[k]` the k-th eigenvalue and column k of `eigvecs` the matching
/// unit eigenvector. Adequate for the moderate sizes used here (n <= a few
/// hundred).
struct SymEig {
  std::vector<double> eigvals;
  std::vector<double> eigvecs;  // row-major n*n, columns are eigenvectors
};

inline SymEig sym_eig(std::size_t n, std::vector<double> a) {
  if (a.size() != n * n) throw std::invalid_argument("sym_eig: bad size");
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double tol = 1e-15 * std::max(scale, 1.0) * static_cast<double>(n);

  for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) <= 1e-300) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : 1.0 / (tau - std::sqrt(1.0 + tau * tau)));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  SymEig out;
  out.eigvals.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.eigvals[i] = a[i * n + i];
  out.eigvecs = std::move(v);
  return out;
}

struct CgResult {
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

/// Conjugate gradients for SPD systems given as a matrix-free apply. Stops at
/// relative residual `tol` against ||b||; x holds the starting guess on entry.
inline CgResult conjugate_gradient(const std::function<Vector(const Vector&)>& apply,
                                   const Vector& b, Vector& x, double tol,
                                   std::size_t max_iters) {
  CgResult res;
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    x = Vector::zeros(b.shape());
    res.converged = true;
    return res;
  }
  Vector r = b - apply(x);
  Vector p = r;
  double rs = dot(r, r);
  const double stop = tol * bnorm;
  for (std::size_t k = 0; k < max_iters; ++k) {
    if (std::sqrt(rs) <= stop) {
      res.converged = true;
      break;
    }
    Vector ap = apply(p);
    const double alpha = rs / dot(p, ap);
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rs_new = dot(r, r);
    p *= rs_new / rs;
    p += r;
    rs = rs_new;
    res.iterations = k + 1;
  }
  if (std::sqrt(rs) <= stop) res.converged = true;
  res.residual = std::sqrt(rs);
  return res;
}

/// Largest eigenvalue estimate of an SPD/PSD map by power iteration.
inline double power_iteration(const std::function<Vector(const Vector&)>& apply,
                              const Shape& shape, std::size_t iters,
                              std::uint64_t seed = 1234) {
  Vector x(shape);
  // fixed pseudo-random start so the estimate is deterministic
  std::uint64_t s = seed;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    x[i] = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
  }
  double lambda = 0.0;
  for (std::size_t k = 0; k < iters; ++k) {
    const double nx = norm(x);
    if (nx == 0.0) break;
    x *= 1.0 / nx;
    Vector y = apply(x);
    lambda = dot(x, y);
    x = std::move(y);
  }
  return lambda;
}

}  // namespace resolvex::linalg
