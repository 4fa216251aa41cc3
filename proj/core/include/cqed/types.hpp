#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace cqed {

using Complex = std::complex<double>;
using AtomId = std::uint64_t;

struct Vec3 {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double boltzmann = 1.380649e-23;          // J/K, exact (SI 2019)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg, CODATA 2018
inline constexpr double mass_cs133 = 132.905451933 * atomic_mass_unit;
inline constexpr double mass_rb_natural = 85.4678 * atomic_mass_unit;
}  // namespace constants

// Complex product without the NaN/Inf recovery path of operator*.
inline Complex cmul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline double conj_if_complex(double g) { return g; }
inline Complex conj_if_complex(Complex g) { return std::conj(g); }

inline Complex times(double g, Complex c) { return {g * c.real(), g * c.imag()}; }
inline Complex times(Complex g, Complex c) { return cmul(g, c); }

}  // namespace cqed
