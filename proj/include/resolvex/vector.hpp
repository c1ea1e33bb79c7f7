#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace resolvex {

/// Shape metadata for elements of the working Hilbert space: plain vectors,
/// matrices, grid functions (with mesh width), and two-component products.
class Shape {
 public:
  enum class Kind { vector, matrix, grid, pair };

  static Shape vector(std::size_t n) { return Shape(Kind::vector, n, 1, 0.0); }
  static Shape matrix(std::size_t rows, std::size_t cols) {
    return Shape(Kind::matrix, rows, cols, 0.0);
  }
  static Shape grid(std::size_t nx, std::size_t ny, double h) {
    return Shape(Kind::grid, nx, ny, h);
  }
  static Shape pair(const Shape& a, const Shape& b) {
    Shape s(Kind::pair, 0, 0, 0.0);
    s.a_ = std::make_shared<Shape>(a);
    s.b_ = std::make_shared<Shape>(b);
    return s;
  }

  Kind kind() const { return kind_; }
  std::size_t rows() const { return d0_; }
  std::size_t cols() const { return d1_; }
  std::size_t nx() const { return d0_; }
  std::size_t ny() const { return d1_; }
  double h() const { return h_; }
  const Shape& first() const { return *a_; }
  const Shape& second() const { return *b_; }

  std::size_t size() const {
    if (kind_ == Kind::pair) return a_->size() + b_->size();
    return d0_ * d1_;
  }

  bool operator==(const Shape& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::pair) return *a_ == *o.a_ && *b_ == *o.b_;
    if (kind_ == Kind::grid) return d0_ == o.d0_ && d1_ == o.d1_ && h_ == o.h_;
    return d0_ == o.d0_ && d1_ == o.d1_;
  }
  bool operator!=(const Shape& o) const { return !(*this == o); }

  std::string str() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::vector: os << "vector(" << d0_ << ")"; break;
      case Kind::matrix: os << "matrix(" << d0_ << "x" << d1_ << ")"; break;
      case Kind::grid: os << "grid(" << d0_ << "x" << d1_ << ",h=" << h_ << ")"; break;
      case Kind::pair: os << "pair(" << a_->str() << "," << b_->str() << ")"; break;
    }
    return os.str();
  }

 private:
  Shape(Kind k, std::size_t d0, std::size_t d1, double h)
      : kind_(k), d0_(d0), d1_(d1), h_(h) {}

  Kind kind_;
  std::size_t d0_, d1_;
  double h_;
  std::shared_ptr<const Shape> a_, b_;
};

/// Flat element of the Hilbert space carrying its shape. Arithmetic is only
/// defined between identically shaped values; pair shapes flatten to a single
/// inner product (sum of component inner products).
class Vector {
 public:
  Vector() : shape_(Shape::vector(0)) {}
  explicit Vector(const Shape& s) : shape_(s), data_(s.size(), 0.0) {}
  Vector(const Shape& s, std::vector<double> data)
      : shape_(s), data_(std::move(data)) {
    if (data_.size() != shape_.size())
      throw std::invalid_argument("Vector: data size does not match shape " + s.str());
    for (double v : data_)
      if (!std::isfinite(v))
        throw std::invalid_argument("Vector: non-finite entry");
  }

  static Vector zeros(const Shape& s) { return Vector(s); }
  static Vector constant(const Shape& s, double v) {
    Vector r(s);
    for (auto& x : r.data_) x = v;
    return r;
  }
  static Vector of(std::initializer_list<double> xs) {
    return Vector(Shape::vector(xs.size()), std::vector<double>(xs));
  }
  static Vector scalar(double v) { return of({v}); }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Row-major access for matrix/grid shapes.
  double& at(std::size_t i, std::size_t j) { return data_[i * shape_.cols() + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * shape_.cols() + j]; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  // Pair composition and projection.
  static Vector concat(const Vector& a, const Vector& b) {
    Vector r(Shape::pair(a.shape(), b.shape()));
    std::copy(a.data_.begin(), a.data_.end(), r.data_.begin());
    std::copy(b.data_.begin(), b.data_.end(), r.data_.begin() + static_cast<long>(a.size()));
    return r;
  }
  Vector first() const {
    require_pair();
    const Shape& s = shape_.first();
    return Vector(s, std::vector<double>(data_.begin(),
                                         data_.begin() + static_cast<long>(s.size())));
  }
  Vector second() const {
    require_pair();
    const Shape& s = shape_.second();
    return Vector(s, std::vector<double>(data_.end() - static_cast<long>(s.size()),
                                         data_.end()));
  }

  Vector& operator+=(const Vector& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Vector& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator-(Vector a) { return a *= -1.0; }

  friend double dot(const Vector& a, const Vector& b) {
    a.require_same(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i) s += a.data_[i] * b.data_[i];
    return s;
  }
  friend double norm(const Vector& a) { return std::sqrt(dot(a, a)); }
  friend double norm_inf(const Vector& a) {
    double m = 0.0;
    for (double v : a.data_) m = std::max(m, std::abs(v));
    return m;
  }

  /// y += s*x without temporaries.
  friend void axpy(double s, const Vector& x, Vector& y) {
    y.require_same(x);
    for (std::size_t i = 0; i < y.data_.size(); ++i) y.data_[i] += s * x.data_[i];
  }

 private:
  void require_same(const Vector& o) const {
    if (shape_ != o.shape_)
      throw std::invalid_argument("Vector: shape mismatch " + shape_.str() + " vs " +
                                  o.shape_.str());
  }
  void require_pair() const {
    if (shape_.kind() != Shape::Kind::pair)
      throw std::invalid_argument("Vector: not a pair shape");
  }

  Shape shape_;
  std::vector<double> data_;
};

}  // namespace resolvex
