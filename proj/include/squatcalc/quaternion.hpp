#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace squatcalc {

// Element of the real division algebra H = span{1, i, j, k} with
// i^2 = j^2 = k^2 = ijk = -1.  Multiplication is noncommutative (ij = -ji = k).
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0, double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion zero() { return {}; }
  static constexpr Quaternion one() { return {1.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr double real() const { return w; }
  constexpr Quaternion imag() const { return {0.0, x, y, z}; }
  double imag_norm() const { return std::sqrt(x * x + y * y + z * z); }

  constexpr double norm_sq() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }

  Quaternion inverse() const {
    const double n2 = norm_sq();
    if (n2 == 0.0) throw std::domain_error("Quaternion::inverse: zero quaternion");
    return {w / n2, -x / n2, -y / n2, -z / n2};
  }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w;
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w;
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }

  friend constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }

  // Hamilton product.
  friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend constexpr Quaternion operator*(double a, const Quaternion& b) {
    return {a * b.w, a * b.x, a * b.y, a * b.z};
  }
  friend constexpr Quaternion operator*(const Quaternion& a, double b) {
    return {a.w * b, a.x * b, a.y * b, a.z * b};
  }
  friend constexpr Quaternion operator/(const Quaternion& a, double b) {
    return {a.w / b, a.x / b, a.y / b, a.z / b};
  }

  friend constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
  }
};

// Unit purely imaginary quaternion: a point of the 2-sphere of square roots
// of -1.  Each unit I defines a complex slice R + I*R inside H.
struct ImaginaryUnit {
  double x = 1.0;  // defaults to the canonical unit i
  double y = 0.0;
  double z = 0.0;

  ImaginaryUnit() = default;
  ImaginaryUnit(double x_, double y_, double z_) {
    const double n = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
    if (!(n > 0.0)) throw std::domain_error("ImaginaryUnit: zero direction");
    x = x_ / n;
    y = y_ / n;
    z = z_ / n;
  }

  static ImaginaryUnit canonical() { return {}; }

  Quaternion q() const { return {0.0, x, y, z}; }
};

// Point a + b*I of the slice through I, stored with b >= 0.
struct SlicePoint {
  double a = 0.0;
  double b = 0.0;
  ImaginaryUnit unit;

  Quaternion q() const { return {a, b * unit.x, b * unit.y, b * unit.z}; }
};

inline Quaternion slice_value(double a, double b, const ImaginaryUnit& unit) {
  return {a, b * unit.x, b * unit.y, b * unit.z};
}

// Splits q = a + b*I with b >= 0.  On the real axis (imaginary part exactly
// zero) the unit is not determined by q; the canonical choice is I = i.
inline SlicePoint decompose(const Quaternion& q) {
  SlicePoint sp;
  sp.a = q.w;
  sp.b = q.imag_norm();
  if (sp.b == 0.0) {
    sp.unit = ImaginaryUnit::canonical();
  } else {
    sp.unit = ImaginaryUnit(q.x / sp.b, q.y / sp.b, q.z / sp.b);
  }
  return sp;
}

// Deterministic counter-based random stream (splitmix64 finalizer).  Draw i of
// seed s is mix64(s + (i+1)*GOLDEN): a pure function of (seed, index), so any
// fixture or property suite is reproducible independent of evaluation order.
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t v) {
  v ^= v >> 30;
  v *= 0xBF58476D1CE4E5B9ull;
  v ^= v >> 27;
  v *= 0x94D049BB133111EBull;
  v ^= v >> 31;
  return v;
}

constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * kGolden);
}

// uniform in [0, 1)
constexpr double u01(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(at(seed, index) >> 11) * 0x1.0p-53;
}

// uniform in [-1, 1]
constexpr double usym(std::uint64_t seed, std::uint64_t index) {
  return 2.0 * u01(seed, index) - 1.0;
}

}  // namespace rng

// Uniform point on the unit 2-sphere (area measure); consumes stream indices
// 2*index and 2*index + 1 of the seed.
inline ImaginaryUnit sample_unit_imaginary(std::uint64_t seed, std::uint64_t index) {
  const double c = rng::usym(seed, 2 * index);  // cos of polar angle
  const double t = 2.0 * std::numbers::pi * rng::u01(seed, 2 * index + 1);
  const double r = std::sqrt(std::max(0.0, 1.0 - c * c));
  return {r * std::cos(t), r * std::sin(t), c};
}

// Quaternion with components uniform in [-1,1]; consumes stream indices
// 4*index .. 4*index + 3.
inline Quaternion random_quaternion(std::uint64_t seed, std::uint64_t index) {
  return {rng::usym(seed, 4 * index), rng::usym(seed, 4 * index + 1),
          rng::usym(seed, 4 * index + 2), rng::usym(seed, 4 * index + 3)};
}

}  // namespace squatcalc
