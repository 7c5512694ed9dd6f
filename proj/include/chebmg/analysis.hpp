#ifndef CHEBMG_ANALYSIS_HPP
#define CHEBMG_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "beta_table.hpp"
#include "core.hpp"
#include "smoothers.hpp"

namespace chebmg {

namespace detail {

/// Scalar mirror of the 1st-kind smoothing recurrence on the model
/// problem SA = lam, b = 0, e_0 = 1; the final iterate is p_k(lam).
/// Templated so a Dual argument yields the derivative as well.
template <typename T>
T first_kind_poly(std::size_t k, T lam, double lmin, double lmax) {
  const double theta = 0.5 * (lmax + lmin);
  const double delta = 0.5 * (lmax - lmin);
  const double sigma = theta / delta;
  double rho_prev = 1.0 / sigma;
  T x(1.0);
  T z = -lam;
  T d = (1.0 / theta) * z;
  for (std::size_t it = 1; it < k; ++it) {
    x += d;
    z -= lam * d;
    const double rho = 1.0 / (2.0 * sigma - rho_prev);
    d = (rho * rho_prev) * d + (2.0 * rho / delta) * z;
    rho_prev = rho;
  }
  x += d;
  return x;
}

/// Scalar mirror of the 4th-kind recurrence; beta == nullptr means
/// all-ones weights. lambda_max is 1 in the normalized theory setting.
template <typename T>
T fourth_kind_poly(std::size_t k, T lam, const double* beta, double lmax = 1.0) {
  const double inv_lmax = 1.0 / lmax;
  T x(1.0);
  T r = -lam;
  T d = (4.0 / 3.0 * inv_lmax) * r;
  for (std::size_t it = 1; it < k; ++it) {
    const double bi = beta ? beta[it - 1] : 1.0;
    x += bi * d;
    r -= lam * d;
    const double fi = static_cast<double>(it);
    d = ((2.0 * fi - 1.0) / (2.0 * fi + 3.0)) * d +
        ((8.0 * fi + 4.0) / (2.0 * fi + 3.0) * inv_lmax) * r;
  }
  x += (beta ? beta[k - 1] : 1.0) * d;
  return x;
}

}  // namespace detail

/// p_k for one smoother family in the normalized setting rho(SA) = 1,
/// lambda_max = 1. Evaluation unrolls the same recurrence the matrix
/// smoother runs, so p_k(0) = 1 holds exactly.
class ResidualPolynomial {
 public:
  ResidualPolynomial(Family family, std::size_t k, double lambda_min = 0.1)
      : family_(family), k_(k), lmin_(lambda_min) {
    if (k < 1) throw std::invalid_argument("ResidualPolynomial: order must be >= 1");
    if (!is_fourth_kind(family) && !(0.0 < lambda_min && lambda_min < 1.0))
      throw std::invalid_argument("ResidualPolynomial: 1st-kind needs lambda_min in (0,1)");
    if (family == Family::fourth_opt) beta_ = beta_coefficients(k);
  }

  Family family() const { return family_; }
  std::size_t order() const { return k_; }

  double operator()(double lam) const { return eval(lam); }

  double eval(double lam) const {
    if (is_fourth_kind(family_))
      return detail::fourth_kind_poly<double>(k_, lam, beta_.empty() ? nullptr : beta_.data());
    return detail::first_kind_poly<double>(k_, lam, lmin_, 1.0);
  }

  Dual eval_dual(Dual lam) const {
    if (is_fourth_kind(family_))
      return detail::fourth_kind_poly<Dual>(k_, lam, beta_.empty() ? nullptr : beta_.data());
    return detail::first_kind_poly<Dual>(k_, lam, lmin_, 1.0);
  }

  double derivative_at_zero() const { return eval_dual(Dual(0.0, 1.0)).d; }

 private:
  Family family_;
  std::size_t k_;
  double lmin_;
  std::span<const double> beta_;
};

inline ResidualPolynomial residual_polynomial(Family family, std::size_t k,
                                              double lambda_min = 0.1) {
  return ResidualPolynomial(family, k, lambda_min);
}

/// gamma^{-1} = 1 / sup over (0, 1] of lambda p^2 / (1 - p^2). The
/// sup comes from a mixed log/linear grid of 1e4 points, golden-section
/// refinement around the best sample, and the analytic limit at
/// lambda -> 0, which equals -1/(2 p'(0)) and can strictly dominate
/// every positive sample.
inline double numeric_gamma_inverse(const ResidualPolynomial& p) {
  auto f = [&p](double lam) -> double {
    const double v = p.eval(lam);
    const double den = 1.0 - v * v;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return lam * v * v / den;
  };

  std::vector<double> grid;
  grid.reserve(10000);
  const double lo = 1e-8;
  for (std::size_t i = 0; i < 5000; ++i)
    grid.push_back(lo * std::pow(0.1 / lo, static_cast<double>(i) / 4999.0));
  for (std::size_t i = 1; i <= 5000; ++i)
    grid.push_back(0.1 + 0.9 * static_cast<double>(i) / 5000.0);

  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  if (std::isinf(best))
    throw std::runtime_error("numeric_gamma_inverse: |p| reaches 1 inside (0,1], degenerate polynomial");

  double a = best_i > 0 ? grid[best_i - 1] : lo;
  double b = best_i + 1 < grid.size() ? grid[best_i + 1] : 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  best = std::max(best, std::max(f1, f2));

  const double dp0 = p.derivative_at_zero();
  if (dp0 < 0.0) best = std::max(best, -1.0 / (2.0 * dp0));
  return 1.0 / best;
}

/// Reference asymptote for the optimized 4th-kind smoother.
inline double fourth_opt_gamma_inverse_asymptote(std::size_t k) {
  const double q = static_cast<double>(2 * k + 1);
  return 4.0 / (std::numbers::pi * std::numbers::pi) * q * q - 2.0 / 3.0;
}

/// Smoothing quality gamma^{-1}: closed form for `fourth`, numeric
/// sup otherwise. Larger is better (the contraction bound
/// C/(C + gamma^{-1}) decreases in it).
inline double gamma_inverse(Family family, std::size_t k, double lambda_min = 0.1) {
  if (k < 1) throw std::invalid_argument("gamma_inverse: order must be >= 1");
  if (family == Family::fourth)
    return 4.0 * static_cast<double>(k) * static_cast<double>(k + 1) / 3.0;
  return numeric_gamma_inverse(residual_polynomial(family, k, lambda_min));
}

/// Two-level contraction bound V(C,k) = C / (C + gamma^{-1}).
inline double v_bound(double C, Family family, std::size_t k, double lambda_min = 0.1) {
  if (C < 1.0) throw std::invalid_argument("v_bound: C must be >= 1");
  const double g = gamma_inverse(family, k, lambda_min);
  return C / (C + g);
}

/// Crossover constant C*: the root of V(C,k) = sqrt(V(C,2k)). Above
/// C* the bound favors the one-sided (2k, 0) cycle; below it the full
/// (k, k) cycle. Bisection on [1, 1e12], driven to machine precision.
inline double critical_C(Family family, std::size_t k, double lambda_min = 0.1) {
  if (k < 1) throw std::invalid_argument("critical_C: order must be >= 1");
  const double gk = gamma_inverse(family, k, lambda_min);
  const double g2k = gamma_inverse(family, 2 * k, lambda_min);
  auto diff = [gk, g2k](double C) {
    return C / (C + gk) - std::sqrt(C / (C + g2k));
  };
  double a = 1.0, b = 1e12;
  double fa = diff(a), fb = diff(b);
  if (fa == 0.0) return a;
  if (fa * fb > 0.0)
    throw std::runtime_error(fa > 0.0
                                 ? "critical_C: no sign change, one-sided cycle better for all C"
                                 : "critical_C: no sign change, full cycle better for all C");
  for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = diff(mid);
    if (fm == 0.0) return mid;
    if (fa * fm < 0.0) {
      b = mid;
    } else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

/// V(C,k) / sqrt(V(C,2k)): the full cycle contracts by V(C,k)^2 per
/// iteration against V(C,2k) for the one-sided cycle at equal matvec
/// cost, so values above 1 favor the one-sided cycle.
inline double bound_ratio(double C, Family family, std::size_t k, double lambda_min = 0.1) {
  if (C < 1.0) throw std::invalid_argument("bound_ratio: C must be >= 1");
  return v_bound(C, family, k, lambda_min) / std::sqrt(v_bound(C, family, 2 * k, lambda_min));
}

/// Bound-optimal lambda_min for the 1st-kind smoother: maximizes
/// gamma^{-1}(first, k, lambda_min) over (0.001, 0.5) with a 256-point
/// grid and golden-section refinement to 1e-6.
inline double lambda_min_opt_bound(std::size_t k) {
  if (k < 1) throw std::invalid_argument("lambda_min_opt_bound: order must be >= 1");
  auto g = [k](double lmin) {
    return numeric_gamma_inverse(residual_polynomial(Family::first, k, lmin));
  };
  const double lo = 0.001, hi = 0.5;
  double best = -1.0, best_x = lo;
  for (std::size_t i = 0; i < 256; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / 255.0;
    const double v = g(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double a = std::max(lo, best_x - (hi - lo) / 255.0);
  double b = std::min(hi, best_x + (hi - lo) / 255.0);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace chebmg

#endif
