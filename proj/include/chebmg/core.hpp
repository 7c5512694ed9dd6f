#ifndef CHEBMG_CORE_HPP
#define CHEBMG_CORE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace chebmg {

using Vec = std::vector<double>;

/// Deterministic uniform draw in [0, 1) from raw mt19937_64 bits.
/// Bypasses std::uniform_real_distribution, whose output is not pinned
/// across standard library implementations.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [-1/2, 1/2).
inline double uniform_pm_half(std::mt19937_64& gen) {
  return uniform01(gen) - 0.5;
}

inline Vec random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Vec v(n);
  for (auto& x : v) x = uniform_pm_half(gen);
  return v;
}

// Sequential kernels. Summation order is part of the reproducibility
// contract, so none of these may be reordered or parallelized.

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scal(double alpha, Vec& x) {
  for (auto& v : x) v *= alpha;
}

inline void set_zero(Vec& x) {
  for (auto& v : x) v = 0.0;
}

/// First-order dual number; carries a value and its derivative with
/// respect to one seed variable through arithmetic. Seeding d = 1
/// evaluates a function and its derivative in one pass.
struct Dual {
  double v = 0.0;
  double d = 0.0;
  Dual() = default;
  Dual(double value) : v(value) {}
  Dual(double value, double deriv) : v(value), d(deriv) {}
};

inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator*(double c, Dual a) { return {c * a.v, c * a.d}; }
inline Dual operator+(double c, Dual a) { return {c + a.v, a.d}; }
inline Dual operator-(double c, Dual a) { return {c - a.v, -a.d}; }
inline Dual& operator+=(Dual& a, Dual b) { a = a + b; return a; }
inline Dual& operator-=(Dual& a, Dual b) { a = a - b; return a; }

}  // namespace chebmg

#endif
