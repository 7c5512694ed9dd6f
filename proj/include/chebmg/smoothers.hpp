#ifndef CHEBMG_SMOOTHERS_HPP
#define CHEBMG_SMOOTHERS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "beta_table.hpp"
#include "core.hpp"
#include "operators.hpp"

namespace chebmg {

enum class Family { first, first_opt_lambda, fourth, fourth_opt };

inline Family family_from_string(const std::string& s) {
  if (s == "first") return Family::first;
  if (s == "first_opt_lambda") return Family::first_opt_lambda;
  if (s == "fourth") return Family::fourth;
  if (s == "fourth_opt") return Family::fourth_opt;
  throw std::invalid_argument("unknown smoother family: " + s);
}

inline std::string to_string(Family f) {
  switch (f) {
    case Family::first: return "first";
    case Family::first_opt_lambda: return "first_opt_lambda";
    case Family::fourth: return "fourth";
    case Family::fourth_opt: return "fourth_opt";
  }
  return "?";
}

inline bool is_fourth_kind(Family f) {
  return f == Family::fourth || f == Family::fourth_opt;
}

/// Target-interval parameters for a Chebyshev smoother. The interval
/// endpoints come from the estimated top eigenvalue of SA scaled by
/// the two multipliers; 4th-kind families ignore lambda_min.
struct ChebyshevConfig {
  Family family = Family::fourth;
  std::size_t order = 1;
  double lambda_tilde = 1.0;
  double lambda_max_multiplier = 1.03;
  double lambda_min_multiplier = 0.1;

  double lambda_max() const { return lambda_max_multiplier * lambda_tilde; }
  double lambda_min() const { return lambda_min_multiplier * lambda_tilde; }

  void validate() const {
    if (lambda_tilde <= 0.0) throw std::invalid_argument("ChebyshevConfig: lambda_tilde must be positive");
    if (lambda_max() <= 0.0) throw std::invalid_argument("ChebyshevConfig: lambda_max must be positive");
    if (!is_fourth_kind(family) && !(0.0 < lambda_min() && lambda_min() < lambda_max()))
      throw std::invalid_argument("ChebyshevConfig: need 0 < lambda_min < lambda_max");
  }
};

/// Power iteration on S*A with a seeded start vector and a Rayleigh
/// quotient readout. All applications here are setup cost.
template <LinearOperatorLike Op>
double estimate_lambda_max(const Op& A, const Vec& inv_diag, std::size_t iterations,
                           std::uint64_t seed) {
  if (iterations < 1) throw std::invalid_argument("estimate_lambda_max: iterations must be >= 1");
  for (double d : inv_diag)
    if (d == 0.0) throw std::invalid_argument("estimate_lambda_max: zero diagonal entry");
  const std::size_t n = A.rows();
  Vec v = random_vector(n, seed);
  Vec w(n);
  for (std::size_t it = 0; it < iterations; ++it) {
    A.apply(v, w);
    for (std::size_t i = 0; i < n; ++i) w[i] *= inv_diag[i];
    const double nrm = norm2(w);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nrm;
  }
  A.apply(v, w);
  for (std::size_t i = 0; i < n; ++i) w[i] *= inv_diag[i];
  return dot(v, w) / dot(v, v);
}

namespace detail {

template <LinearOperatorLike Op>
void residual_into(const Op& A, const Vec& b, const Vec& x, bool x_is_zero, Vec& r) {
  if (x_is_zero) {
    r = b;
    return;
  }
  A.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

/// 1st-kind Chebyshev smoothing on the interval [lambda_min, lambda_max],
/// three-term recurrence in the preconditioned residual z = S(b - Ax).
template <LinearOperatorLike Op>
void smooth_first(const Op& A, const Vec& inv_diag, const Vec& b, Vec& x, bool x_is_zero,
                  std::size_t k, double lmin, double lmax) {
  const std::size_t n = x.size();
  const double theta = 0.5 * (lmax + lmin);
  const double delta = 0.5 * (lmax - lmin);
  const double sigma = theta / delta;
  double rho_prev = 1.0 / sigma;

  Vec z(n), d(n), t(n);
  residual_into(A, b, x, x_is_zero, z);
  for (std::size_t i = 0; i < n; ++i) z[i] *= inv_diag[i];
  for (std::size_t i = 0; i < n; ++i) d[i] = z[i] / theta;

  for (std::size_t it = 1; it < k; ++it) {
    axpy(1.0, d, x);
    A.apply(d, t);
    for (std::size_t i = 0; i < n; ++i) z[i] -= inv_diag[i] * t[i];
    const double rho = 1.0 / (2.0 * sigma - rho_prev);
    const double c1 = rho * rho_prev;
    const double c2 = 2.0 * rho / delta;
    for (std::size_t i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * z[i];
    rho_prev = rho;
  }
  axpy(1.0, d, x);
}

/// 4th-kind Chebyshev smoothing on (0, lambda_max]. The recurrence
/// tracks the residual of the unweighted iterate, so the optimized
/// weights beta scale only the solution updates. beta == nullptr means
/// all-ones weights (the plain 4th-kind smoother).
template <LinearOperatorLike Op>
void smooth_fourth(const Op& A, const Vec& inv_diag, const Vec& b, Vec& x, bool x_is_zero,
                   std::size_t k, double lmax, const double* beta) {
  const std::size_t n = x.size();
  const double inv_lmax = 1.0 / lmax;

  Vec r(n), d(n), t(n);
  residual_into(A, b, x, x_is_zero, r);
  for (std::size_t i = 0; i < n; ++i) d[i] = (4.0 / 3.0) * inv_lmax * inv_diag[i] * r[i];

  for (std::size_t it = 1; it < k; ++it) {
    const double bi = beta ? beta[it - 1] : 1.0;
    axpy(bi, d, x);
    A.apply(d, t);
    axpy(-1.0, t, r);
    const double fi = static_cast<double>(it);
    const double c1 = (2.0 * fi - 1.0) / (2.0 * fi + 3.0);
    const double c2 = (8.0 * fi + 4.0) / (2.0 * fi + 3.0) * inv_lmax;
    for (std::size_t i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * inv_diag[i] * r[i];
  }
  const double bk = beta ? beta[k - 1] : 1.0;
  axpy(bk, d, x);
}

}  // namespace detail

/// Runs `order` smoothing steps on A x = b in place. `x_is_zero`
/// declares that x holds zeros, skipping the initial residual matvec;
/// with that shortcut a (k,k) cycle and a (2k,0) cycle cost the same
/// 2k fine matvecs per application.
template <LinearOperatorLike Op>
void chebyshev_smooth(const Op& A, const Vec& inv_diag, const ChebyshevConfig& cfg,
                      std::size_t order, const Vec& b, Vec& x, bool x_is_zero) {
  if (order == 0) return;
  cfg.validate();
  if (is_fourth_kind(cfg.family)) {
    const double* beta = nullptr;
    std::span<const double> row;
    if (cfg.family == Family::fourth_opt) {
      row = beta_coefficients(order);
      beta = row.data();
    }
    detail::smooth_fourth(A, inv_diag, b, x, x_is_zero, order, cfg.lambda_max(), beta);
  } else {
    detail::smooth_first(A, inv_diag, b, x, x_is_zero, order, cfg.lambda_min(), cfg.lambda_max());
  }
}

inline Vec jacobi_inverse_diagonal(const Vec& diag) {
  Vec inv(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (diag[i] == 0.0) throw std::invalid_argument("jacobi_inverse_diagonal: zero diagonal entry");
    inv[i] = 1.0 / diag[i];
  }
  return inv;
}

}  // namespace chebmg

#endif
