#ifndef CHEBMG_LANCZOS_HPP
#define CHEBMG_LANCZOS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cholesky.hpp"
#include "core.hpp"
#include "multigrid.hpp"
#include "operators.hpp"
#include "smoothers.hpp"
#include "transfer.hpp"

namespace chebmg {

/// The 5-point operator as an explicit sparse matrix, for exact fine
/// solves. Must agree with StencilOperator::apply.
inline CsrMatrix fine_csr(const Domain& dom) {
  const std::size_t m = dom.interior_per_dim();
  const double cx = 1.0 / (dom.hx() * dom.hx());
  const double cy = 1.0 / (dom.hy() * dom.hy());
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  trip.reserve(5 * m * m);
  for (std::size_t iy = 0; iy < m; ++iy)
    for (std::size_t ix = 0; ix < m; ++ix) {
      const std::size_t id = iy * m + ix;
      trip.emplace_back(id, id, 2.0 * (cx + cy));
      if (ix > 0) trip.emplace_back(id, id - 1, -cx);
      if (ix + 1 < m) trip.emplace_back(id, id + 1, -cx);
      if (iy > 0) trip.emplace_back(id, id - m, -cy);
      if (iy + 1 < m) trip.emplace_back(id, id + m, -cy);
    }
  return CsrMatrix::from_triplets(m * m, m * m, std::move(trip));
}

struct CEstimate {
  double C = 0.0;
  std::size_t m = 0;
  std::vector<double> alpha;
  std::vector<double> beta;
};

namespace detail {

/// Largest-magnitude eigenvalue of a symmetric tridiagonal matrix by
/// Sturm-count bisection at both spectrum ends.
inline double tridiag_spectral_radius(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("tridiag_spectral_radius: empty matrix");
  double lo = a[0], hi = a[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i < n - 1 ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - off);
    hi = std::max(hi, a[i] + off);
  }
  auto count_less = [&](double x) {
    std::size_t cnt = 0;
    double d = a[0] - x;
    if (d < 0.0) ++cnt;
    for (std::size_t i = 1; i < n; ++i) {
      if (d == 0.0) d = 1e-300;
      d = a[i] - x - b[i - 1] * b[i - 1] / d;
      if (d < 0.0) ++cnt;
    }
    return cnt;
  };
  const double scale = std::max(std::abs(lo), std::abs(hi)) + 1e-300;
  auto extreme = [&](bool largest) {
    double l = lo, h = hi;
    for (int it = 0; it < 200 && (h - l) > 1e-15 * scale; ++it) {
      const double mid = 0.5 * (l + h);
      const std::size_t c = count_less(mid);
      if (largest ? (c == n) : (c == 0)) {
        (largest ? h : l) = mid;
      } else {
        (largest ? l : h) = mid;
      }
    }
    return 0.5 * (l + h);
  };
  return std::max(std::abs(extreme(true)), std::abs(extreme(false)));
}

}  // namespace detail

/// Lanczos estimate of the approximation-property constant C: the
/// spectral radius of the m-step tridiagonal restriction of
/// pi_f (SA)^{-1} on the A-orthogonal complement of the coarse space,
/// with S scaled so rho(SA) = 1 (200 power-iteration steps) and
/// (SA)^{-1} q = lambda * A^{-1}(D q) through an exact fine solve.
/// The three-term recurrence subtracts the alpha_k q_k component;
/// full reorthogonalization (default on) re-projects against the
/// whole basis each step.
inline CEstimate estimate_C(const Hierarchy& h, std::size_t m = 20, std::uint64_t seed = 99,
                            bool reorthogonalize = true) {
  if (m < 1) throw std::invalid_argument("estimate_C: need at least one iteration");
  const std::size_t n = h.fine_dim();
  const BandedCholesky fine_solver(fine_csr(h.domain));
  const Vec diag = h.A.diagonal();
  const double lambda_hat =
      estimate_lambda_max(h.A, h.inv_diag, 200, seed ^ 0x9e3779b97f4a7c15ull);

  Vec t1(n), t2(n);
  Vec rc(h.P.coarse_dim()), ec(h.P.coarse_dim());
  auto project_f = [&](Vec& u) {
    h.A.apply(u, t1);
    h.P.apply_transpose(t1, rc);
    h.coarse->solve(rc, ec);
    h.P.apply(ec, t2);
    axpy(-1.0, t2, u);
  };
  auto op_inv = [&](const Vec& q, Vec& out) {
    for (std::size_t i = 0; i < n; ++i) t1[i] = diag[i] * q[i];
    fine_solver.solve(t1, out);
    scal(lambda_hat, out);
  };

  std::vector<Vec> Q;
  Q.reserve(m);
  Vec q = random_vector(n, seed);
  project_f(q);
  scal(1.0 / norm2(q), q);
  Q.push_back(q);

  CEstimate est;
  est.m = m;
  Vec r(n);
  op_inv(Q[0], r);
  project_f(r);
  est.alpha.push_back(dot(Q[0], r));
  axpy(-est.alpha[0], Q[0], r);
  if (reorthogonalize)
    for (const Vec& qi : Q) axpy(-dot(qi, r), qi, r);
  double beta = norm2(r);

  for (std::size_t k = 2; k <= m && beta != 0.0; ++k) {
    est.beta.push_back(beta);
    Vec qk = r;
    scal(1.0 / beta, qk);
    Q.push_back(qk);
    op_inv(qk, r);
    project_f(r);
    axpy(-beta, Q[k - 2], r);
    est.alpha.push_back(dot(qk, r));
    axpy(-est.alpha.back(), qk, r);
    if (reorthogonalize)
      for (const Vec& qi : Q) axpy(-dot(qi, r), qi, r);
    beta = norm2(r);
  }
  est.C = detail::tridiag_spectral_radius(est.alpha, est.beta);
  return est;
}

}  // namespace chebmg

#endif
