#pragma once

// Shared scalar/vector types for the normalized p-Laplacian toolkit:
// the exponent p in [1,inf], second-order jets, and a minimal
// fixed-capacity linear algebra layer for dimensions 2 and 3.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nplap {

class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Thrown by eval_normalized at a critical point; callers that need a
// value there must switch to eval_upper / eval_lower.
class critical_point_error : public error {
public:
  using error::error;
};

class geometry_error : public error {
public:
  using error::error;
};

class profile_error : public error {
public:
  using error::error;
};

class resolution_error : public error {
public:
  using error::error;
};

class unsupported_exponent_error : public error {
public:
  using error::error;
};

class hypothesis_error : public error {
public:
  using error::error;
};

// The exponent p in [1, inf]. Infinity is a tag, not a large float.
class PValue {
public:
  static PValue finite(double p) {
    if (!std::isfinite(p) || p < 1.0)
      throw error("PValue: finite exponent must satisfy p >= 1, got " +
                  std::to_string(p));
    return PValue(p, false);
  }
  static PValue infinity() { return PValue(0.0, true); }

  bool is_infinity() const { return inf_; }
  double value() const {
    if (inf_) throw error("PValue: value() called on p = infinity");
    return p_;
  }

  bool operator==(const PValue& o) const {
    return inf_ == o.inf_ && (inf_ || p_ == o.p_);
  }

  std::string str() const { return inf_ ? "inf" : std::to_string(p_); }

private:
  PValue(double p, bool inf) : p_(p), inf_(inf) {}
  double p_;
  bool inf_;
};

// Small vector, dimension 2 or 3.
struct Vec {
  int dim = 2;
  std::array<double, 3> c{0.0, 0.0, 0.0};

  Vec() = default;
  Vec(double x, double y) : dim(2), c{x, y, 0.0} {}
  Vec(double x, double y, double z) : dim(3), c{x, y, z} {}

  static Vec zero(int n) {
    Vec v;
    v.dim = check_dim(n);
    return v;
  }

  double operator[](int i) const { return c[static_cast<size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<size_t>(i)]; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += c[i] * o.c[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  Vec operator+(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] += o.c[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] -= o.c[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r = *this;
    for (int i = 0; i < dim; ++i) r.c[i] *= s;
    return r;
  }
  Vec operator-() const { return *this * -1.0; }

  static int check_dim(int n) {
    if (n != 2 && n != 3) throw error("Vec: dimension must be 2 or 3");
    return n;
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

// Symmetric matrix, dimension 2 or 3, stored as the upper triangle.
// Layout: dim 2 -> [a00, a01, a11]; dim 3 -> [a00, a01, a02, a11, a12, a22].
struct SymMat {
  int dim = 2;
  std::array<double, 6> a{};

  SymMat() = default;
  SymMat(double a00, double a01, double a11) : dim(2), a{a00, a01, a11, 0, 0, 0} {}
  SymMat(double a00, double a01, double a02, double a11, double a12, double a22)
      : dim(3), a{a00, a01, a02, a11, a12, a22} {}

  static SymMat identity(int n, double scale = 1.0) {
    SymMat m;
    m.dim = Vec::check_dim(n);
    if (n == 2) {
      m.a = {scale, 0, scale, 0, 0, 0};
    } else {
      m.a = {scale, 0, 0, scale, 0, scale};
    }
    return m;
  }
  static SymMat diag(double d0, double d1) { return SymMat(d0, 0.0, d1); }
  static SymMat diag(double d0, double d1, double d2) {
    return SymMat(d0, 0.0, 0.0, d1, 0.0, d2);
  }

  double at(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (dim == 2) return a[static_cast<size_t>(i + j)];   // (0,0)->0 (0,1)->1 (1,1)->2
    static constexpr int idx3[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return a[static_cast<size_t>(idx3[i][j])];
  }
  void set(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    if (dim == 2) {
      a[static_cast<size_t>(i + j)] = v;
    } else {
      static constexpr int idx3[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
      a[static_cast<size_t>(idx3[i][j])] = v;
    }
  }

  double trace() const {
    return dim == 2 ? a[0] + a[2] : a[0] + a[3] + a[5];
  }

  Vec apply(const Vec& v) const {
    Vec r = Vec::zero(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r[i] += at(i, j) * v[j];
    return r;
  }

  // gᵀ H g
  double quad(const Vec& g) const { return g.dot(apply(g)); }

  double frobenius() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) s += at(i, j) * at(i, j);
    return std::sqrt(s);
  }

  SymMat operator*(double s) const {
    SymMat r = *this;
    for (auto& x : r.a) x *= s;
    return r;
  }
};

// Second-order local description of a function: gradient and Hessian.
struct Jet {
  Vec gradient;
  SymMat hessian;

  Jet() = default;
  Jet(const Vec& g, const SymMat& h) : gradient(g), hessian(h) {
    if (g.dim != h.dim) throw error("Jet: gradient/hessian dimension mismatch");
  }
  int dim() const { return gradient.dim; }
};

}  // namespace nplap
