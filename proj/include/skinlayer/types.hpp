#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

namespace skinlayer {

using cdouble = std::complex<double>;

// sqrt(i) with positive real part, the decay exponent of every layer profile.
inline constexpr cdouble sqrt_i{0.70710678118654752440, 0.70710678118654752440};

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Small fixed-size real/complex linear algebra. Enough for surface tensors,
// chart metrics and the per-mode transmission solves; no external dependency.
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return v / n;
}

struct Mat3 {
  // row-major
  std::array<double, 9> a{};

  static Mat3 zero() { return {}; }
  static Mat3 identity() {
    Mat3 m;
    m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return m;
  }
  static Mat3 outer(const Vec3& u, const Vec3& v) {
    Mat3 m;
    m.a = {u.x * v.x, u.x * v.y, u.x * v.z,
           u.y * v.x, u.y * v.y, u.y * v.z,
           u.z * v.x, u.z * v.y, u.z * v.z};
    return m;
  }

  double operator()(int i, int j) const { return a[std::size_t(3 * i + j)]; }
  double& operator()(int i, int j) { return a[std::size_t(3 * i + j)]; }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[std::size_t(i)] = a[std::size_t(i)] + o.a[std::size_t(i)];
    return r;
  }
  Mat3 operator-(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[std::size_t(i)] = a[std::size_t(i)] - o.a[std::size_t(i)];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[std::size_t(i)] = a[std::size_t(i)] * s;
    return r;
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  Vec3 operator*(const Vec3& v) const {
    return {(*this)(0, 0) * v.x + (*this)(0, 1) * v.y + (*this)(0, 2) * v.z,
            (*this)(1, 0) * v.x + (*this)(1, 1) * v.y + (*this)(1, 2) * v.z,
            (*this)(2, 0) * v.x + (*this)(2, 1) * v.y + (*this)(2, 2) * v.z};
  }
};

inline Mat3 operator*(double s, const Mat3& m) { return m * s; }

inline double det(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline double max_abs(const Mat3& m) {
  double r = 0;
  for (double v : m.a) r = std::max(r, std::abs(v));
  return r;
}

// Complex 3-vectors/matrices used by the surface-symbol algebra.

struct CVec3 {
  std::array<cdouble, 3> a{};

  cdouble operator[](int i) const { return a[std::size_t(i)]; }
  cdouble& operator[](int i) { return a[std::size_t(i)]; }

  CVec3 operator+(const CVec3& o) const {
    return {{a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2]}};
  }
  CVec3 operator-(const CVec3& o) const {
    return {{a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2]}};
  }
  CVec3 operator*(cdouble s) const { return {{a[0] * s, a[1] * s, a[2] * s}}; }
};

inline CVec3 operator*(cdouble s, const CVec3& v) { return v * s; }

inline double max_abs(const CVec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

struct CMat3 {
  std::array<cdouble, 9> a{};

  static CMat3 zero() { return {}; }
  static CMat3 identity() {
    CMat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
  }
  // projector on the tangential slots (g, c)
  static CMat3 tangential_identity() {
    CMat3 m;
    m(0, 0) = m(1, 1) = 1.0;
    return m;
  }
  static CMat3 diag(cdouble d0, cdouble d1, cdouble d2) {
    CMat3 m;
    m(0, 0) = d0;
    m(1, 1) = d1;
    m(2, 2) = d2;
    return m;
  }
  static CMat3 outer(const CVec3& u, const CVec3& v) {
    CMat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
    return m;
  }

  cdouble operator()(int i, int j) const { return a[std::size_t(3 * i + j)]; }
  cdouble& operator()(int i, int j) { return a[std::size_t(3 * i + j)]; }

  CMat3 operator+(const CMat3& o) const {
    CMat3 r;
    for (int i = 0; i < 9; ++i) r.a[std::size_t(i)] = a[std::size_t(i)] + o.a[std::size_t(i)];
    return r;
  }
  CMat3 operator-(const CMat3& o) const {
    CMat3 r;
    for (int i = 0; i < 9; ++i) r.a[std::size_t(i)] = a[std::size_t(i)] - o.a[std::size_t(i)];
    return r;
  }
  CMat3 operator*(cdouble s) const {
    CMat3 r;
    for (int i = 0; i < 9; ++i) r.a[std::size_t(i)] = a[std::size_t(i)] * s;
    return r;
  }
  CMat3 operator*(const CMat3& o) const {
    CMat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        cdouble s = 0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }
  CVec3 operator*(const CVec3& v) const {
    CVec3 r;
    for (int i = 0; i < 3; ++i) {
      cdouble s = 0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * v[k];
      r[i] = s;
    }
    return r;
  }
};

inline CMat3 operator*(cdouble s, const CMat3& m) { return m * s; }

inline double max_abs(const CMat3& m) {
  double r = 0;
  for (const cdouble& v : m.a) r = std::max(r, std::abs(v));
  return r;
}

// Dense complex solve by Gaussian elimination with partial pivoting.
// Used for the 2x2 / 3x3 per-mode systems; N stays tiny.
template <std::size_t N>
std::array<cdouble, N> solve_dense(std::array<std::array<cdouble, N>, N> A,
                                   std::array<cdouble, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) == 0.0) throw std::runtime_error("solve_dense: singular system");
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < N; ++r) {
      cdouble f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < N; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<cdouble, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    cdouble s = b[i];
    for (std::size_t c = i + 1; c < N; ++c) s -= A[i][c] * x[c];
    x[i] = s / A[i][i];
  }
  return x;
}

// 1-norm condition number of a tiny dense matrix (explicit inverse).
template <std::size_t N>
double condition_1norm(const std::array<std::array<cdouble, N>, N>& A) {
  auto colnorm = [](const std::array<std::array<cdouble, N>, N>& M) {
    double best = 0;
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < N; ++i) s += std::abs(M[i][j]);
      best = std::max(best, s);
    }
    return best;
  };
  std::array<std::array<cdouble, N>, N> inv{};
  for (std::size_t j = 0; j < N; ++j) {
    std::array<cdouble, N> e{};
    e[j] = 1.0;
    std::array<cdouble, N> x = solve_dense<N>(A, e);
    for (std::size_t i = 0; i < N; ++i) inv[i][j] = x[i];
  }
  return colnorm(A) * colnorm(inv);
}

}  // namespace skinlayer
