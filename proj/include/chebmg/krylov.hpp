#ifndef CHEBMG_KRYLOV_HPP
#define CHEBMG_KRYLOV_HPP

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "operators.hpp"
#include "smoothers.hpp"

namespace chebmg {

struct SolveReport {
  std::size_t iterations = 0;
  std::size_t fine_matvecs = 0;
  std::vector<double> residual_history;
  double rho = 1.0;
  bool converged = false;
  std::string status;
  double wall_time_sec = 0.0;
};

/// rho = (||r_N|| / ||r_0||)^(1/N), the observed average convergence
/// rate over the recorded history.
inline double convergence_rate(const SolveReport& rep) {
  if (rep.residual_history.empty() || rep.iterations == 0)
    throw std::invalid_argument("convergence_rate: no iterations recorded");
  const double r0 = rep.residual_history.front();
  const double rN = rep.residual_history.back();
  if (r0 == 0.0) throw std::invalid_argument("convergence_rate: zero initial residual");
  return std::exp(std::log(rN / r0) / static_cast<double>(rep.iterations));
}

using Preconditioner = std::function<Vec(const Vec&)>;

struct SolveOptions {
  double tol = 1e-6;
  std::size_t maxit = 500;
  std::size_t restart = 30;
  bool reorthogonalize = true;
  /// When set, pcg probes the preconditioner for symmetry on random
  /// vectors before iterating and rejects an asymmetric one.
  bool enforce_spd_preconditioner = false;
};

namespace detail {

inline bool all_zero(const Vec& v) {
  for (double x : v)
    if (x != 0.0) return false;
  return true;
}

inline void probe_preconditioner_symmetry(const Preconditioner& M, std::size_t n) {
  const Vec u = random_vector(n, 0x5eedu);
  const Vec v = random_vector(n, 0xfeedu);
  const double a = dot(u, M(v));
  const double b = dot(v, M(u));
  const double scale = std::abs(a) + std::abs(b) + 1.0;
  if (std::abs(a - b) > 1e-10 * scale)
    throw std::invalid_argument("pcg: preconditioner failed the symmetry probe");
}

}  // namespace detail

/// Preconditioned conjugate gradients on SPD A. The recurrence keeps
/// the usual recursive residual; the stopping test evaluates the true
/// residual b - A x each iteration, which adds one fine matvec per
/// iteration to the reported cost.
template <LinearOperatorLike Op>
std::pair<Vec, SolveReport> pcg(const Op& A, const Preconditioner& M, const Vec& b,
                                const Vec& x0, const SolveOptions& opts = {}) {
  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n = b.size();
  const std::size_t mv0 = A.applications();
  if (opts.enforce_spd_preconditioner) detail::probe_preconditioner_symmetry(M, n);

  SolveReport rep;
  Vec x = x0;
  Vec r(n);
  detail::residual_into(A, b, x, detail::all_zero(x0), r);
  const double r0_norm = norm2(r);
  rep.residual_history.push_back(r0_norm);
  if (r0_norm == 0.0) {
    rep.converged = true;
    rep.status = "zero initial residual";
    rep.fine_matvecs = A.applications() - mv0;
    return {std::move(x), std::move(rep)};
  }

  Vec z = M(r);
  Vec p = z;
  double rz = dot(r, z);
  Vec Ap(n), rt(n);
  for (std::size_t it = 1; it <= opts.maxit; ++it) {
    if (rz <= 0.0) {
      rep.status = "indefinite preconditioner: <r, Mr> <= 0";
      break;
    }
    A.apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) {
      rep.status = "breakdown: <p, Ap> <= 0";
      break;
    }
    const double alpha = rz / pAp;
    axpy(alpha, p, x);
    axpy(-alpha, Ap, r);
    detail::residual_into(A, b, x, false, rt);
    const double rt_norm = norm2(rt);
    rep.iterations = it;
    rep.residual_history.push_back(rt_norm);
    if (rt_norm / r0_norm <= opts.tol) {
      rep.converged = true;
      break;
    }
    z = M(r);
    const double rz_new = dot(r, z);
    if (rz_new <= 0.0) {
      rep.status = "indefinite preconditioner: <r, Mr> <= 0";
      break;
    }
    const double beta = rz_new / rz;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_new;
  }
  if (!rep.converged && rep.status.empty()) rep.status = "maxit reached";
  if (rep.iterations > 0) rep.rho = convergence_rate(rep);
  rep.fine_matvecs = A.applications() - mv0;
  rep.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {std::move(x), std::move(rep)};
}

/// Restarted GMRES, right-preconditioned so residual norms are those
/// of the original system. Arnoldi uses classical Gram-Schmidt with an
/// optional second pass (on by default). Z caches the preconditioned
/// basis vectors, so forming the iterate costs no extra M apply; the
/// stopping test evaluates the true residual each inner iteration.
template <LinearOperatorLike Op>
std::pair<Vec, SolveReport> pgmres(const Op& A, const Preconditioner& M, const Vec& b,
                                   const Vec& x0, const SolveOptions& opts = {}) {
  const auto t_start = std::chrono::steady_clock::now();
  if (opts.restart < 1) throw std::invalid_argument("pgmres: restart must be >= 1");
  const std::size_t n = b.size();
  const std::size_t m = opts.restart;
  const std::size_t mv0 = A.applications();

  SolveReport rep;
  Vec x = x0;
  Vec r(n);
  detail::residual_into(A, b, x, detail::all_zero(x0), r);
  const double r0_norm = norm2(r);
  rep.residual_history.push_back(r0_norm);
  if (r0_norm == 0.0) {
    rep.converged = true;
    rep.status = "zero initial residual";
    rep.fine_matvecs = A.applications() - mv0;
    return {std::move(x), std::move(rep)};
  }

  std::vector<Vec> V, Z;
  std::vector<double> H((m + 1) * m, 0.0);
  auto h = [&H, m](std::size_t i, std::size_t j) -> double& { return H[i * m + j]; };
  Vec y(m), g(m + 1);
  Vec w(n), rt(n);
  bool done = false;

  while (!done && rep.iterations < opts.maxit) {
    const double beta = norm2(r);
    V.assign(1, r);
    scal(1.0 / beta, V[0]);
    Z.clear();
    std::fill(H.begin(), H.end(), 0.0);
    const double window_start_res = rep.residual_history.back();

    std::size_t j = 0;
    for (; j < m && rep.iterations < opts.maxit; ++j) {
      Z.push_back(M(V[j]));
      A.apply(Z[j], w);
      // classical Gram-Schmidt, optionally repeated
      for (std::size_t i = 0; i <= j; ++i) h(i, j) = 0.0;
      const int passes = opts.reorthogonalize ? 2 : 1;
      for (int pass = 0; pass < passes; ++pass) {
        Vec coef(j + 1);
        for (std::size_t i = 0; i <= j; ++i) coef[i] = dot(V[i], w);
        for (std::size_t i = 0; i <= j; ++i) {
          axpy(-coef[i], V[i], w);
          h(i, j) += coef[i];
        }
      }
      h(j + 1, j) = norm2(w);
      if (h(j + 1, j) > 0.0) {
        V.push_back(w);
        scal(1.0 / h(j + 1, j), V.back());
      }

      // small least-squares solve for the inner iterate
      std::vector<double> Hs(H);
      auto hs = [&Hs, m](std::size_t i, std::size_t jj) -> double& { return Hs[i * m + jj]; };
      std::fill(g.begin(), g.end(), 0.0);
      g[0] = beta;
      for (std::size_t c = 0; c <= j; ++c) {
        for (std::size_t rrow = c + 1; rrow <= j + 1; ++rrow) {
          const double a11 = hs(c, c), a21 = hs(rrow, c);
          if (a21 == 0.0) continue;
          const double den = std::sqrt(a11 * a11 + a21 * a21);
          const double cs = a11 / den, sn = a21 / den;
          for (std::size_t cc = c; cc <= j; ++cc) {
            const double t1 = hs(c, cc), t2 = hs(rrow, cc);
            hs(c, cc) = cs * t1 + sn * t2;
            hs(rrow, cc) = -sn * t1 + cs * t2;
          }
          const double t1 = g[c], t2 = g[rrow];
          g[c] = cs * t1 + sn * t2;
          g[rrow] = -sn * t1 + cs * t2;
        }
      }
      for (std::size_t bi = j + 1; bi-- > 0;) {
        double s = g[bi];
        for (std::size_t cc = bi + 1; cc <= j; ++cc) s -= hs(bi, cc) * y[cc];
        y[bi] = s / hs(bi, bi);
      }
      Vec xj = x;
      for (std::size_t i = 0; i <= j; ++i) axpy(y[i], Z[i], xj);

      detail::residual_into(A, b, xj, false, rt);
      const double rt_norm = norm2(rt);
      ++rep.iterations;
      rep.residual_history.push_back(rt_norm);
      if (rt_norm / r0_norm <= opts.tol) {
        x = std::move(xj);
        rep.converged = true;
        done = true;
        ++j;
        break;
      }
      if (j + 1 == m || rep.iterations == opts.maxit) {
        x = std::move(xj);
        r = rt;
      }
      if (h(j + 1, j) == 0.0) {
        x = xj.empty() ? x : std::move(xj);
        rep.status = "breakdown: Arnoldi produced a zero vector";
        done = true;
        break;
      }
    }
    if (done) break;
    if (rep.residual_history.back() >= window_start_res && rep.iterations < opts.maxit) {
      rep.status = "stagnation: no residual decrease over a restart cycle";
      break;
    }
  }
  if (!rep.converged && rep.status.empty()) rep.status = "maxit reached";
  if (rep.iterations > 0) rep.rho = convergence_rate(rep);
  rep.fine_matvecs = A.applications() - mv0;
  rep.wall_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {std::move(x), std::move(rep)};
}

}  // namespace chebmg

#endif
