#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace pfspec {

using Complex = std::complex<double>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Complex 3-vector, used by the resolvent formulas.
struct Vec3c {
  Complex x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};

  Vec3c() = default;
  Vec3c(Complex a, Complex b, Complex c) : x(a), y(b), z(c) {}
  explicit Vec3c(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

  Vec3c operator+(const Vec3c& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3c operator-(const Vec3c& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3c operator*(Complex s) const { return {x * s, y * s, z * s}; }
  Complex operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3c operator*(Complex s, const Vec3c& v) { return v * s; }
inline Vec3c operator*(Complex s, const Vec3& v) { return Vec3c(v) * s; }

// dot(real, complex) without conjugation: the formulas pair real vectors
// (p, G) with complex ones (Q, N), so plain bilinear products suffice.
inline Complex dot(const Vec3& a, const Vec3c& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Complex dot(const Vec3c& a, const Vec3c& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

using Mat3c = std::array<std::array<Complex, 3>, 3>;

}  // namespace pfspec
