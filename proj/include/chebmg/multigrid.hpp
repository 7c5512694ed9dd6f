#ifndef CHEBMG_MULTIGRID_HPP
#define CHEBMG_MULTIGRID_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>

#include "cholesky.hpp"
#include "domain.hpp"
#include "operators.hpp"
#include "problem.hpp"
#include "smoothers.hpp"
#include "transfer.hpp"

namespace chebmg {

/// Two-level hierarchy: fine 5-point operator, bilinear transfer,
/// Galerkin coarse matrix and its exact factorization. Shared
/// read-only between concurrent cycle executions.
struct Hierarchy {
  Domain domain;
  StencilOperator A;
  Vec inv_diag;
  Prolongation P;
  CsrMatrix Ac;
  std::unique_ptr<BandedCholesky> coarse;
  double lambda_tilde = 0.0;

  std::size_t fine_dim() const { return A.rows(); }
};

/// Builds the hierarchy for coarsening n -> n/factor and estimates
/// the top eigenvalue of SA. Setup matvecs are cleared from the
/// counter; reported costs start at the first solver application.
inline Hierarchy build_hierarchy(const Domain& dom, std::size_t factor,
                                 std::size_t eigen_iterations = 30,
                                 std::uint64_t eigen_seed = 7) {
  if (factor < 2 || dom.n % factor != 0)
    throw std::invalid_argument("build_hierarchy: factor must divide n");
  Hierarchy h{dom, StencilOperator(dom), {}, Prolongation(dom.n, dom.n / factor), {}, nullptr};
  h.inv_diag = jacobi_inverse_diagonal(h.A.diagonal());
  h.Ac = galerkin_coarse(h.A, h.P);
  h.coarse = std::make_unique<BandedCholesky>(h.Ac);
  h.lambda_tilde = estimate_lambda_max(h.A, h.inv_diag, eigen_iterations, eigen_seed);
  h.A.reset_applications();
  return h;
}

/// Pre/post smoothing orders plus the smoother parameters. A full
/// cycle runs (k, k); a one-sided cycle runs (2k, 0) at the same
/// per-application cost.
struct CycleConfig {
  ChebyshevConfig smoother;
  std::size_t k_pre = 1;
  std::size_t k_post = 1;
};

inline CycleConfig full_cycle(ChebyshevConfig s, std::size_t k) {
  return CycleConfig{s, k, k};
}

inline CycleConfig one_sided_cycle(ChebyshevConfig s, std::size_t k) {
  return CycleConfig{s, 2 * k, 0};
}

/// One V-cycle for A x = b, updating x in place. `x_is_zero` marks x
/// as all zeros so the first residual evaluation is free.
inline void v_cycle(const Hierarchy& h, const CycleConfig& cfg, const Vec& b, Vec& x,
                    bool x_is_zero = false) {
  const std::size_t nf = h.fine_dim();
  Vec r(nf);
  if (cfg.k_pre > 0) {
    chebyshev_smooth(h.A, h.inv_diag, cfg.smoother, cfg.k_pre, b, x, x_is_zero);
    x_is_zero = false;
  }
  detail::residual_into(h.A, b, x, x_is_zero, r);
  Vec rc(h.P.coarse_dim()), ec(h.P.coarse_dim());
  h.P.apply_transpose(r, rc);
  h.coarse->solve(rc, ec);
  Vec corr(nf);
  h.P.apply(ec, corr);
  if (x_is_zero) {
    x = corr;
  } else {
    axpy(1.0, corr, x);
  }
  if (cfg.k_post > 0)
    chebyshev_smooth(h.A, h.inv_diag, cfg.smoother, cfg.k_post, b, x, false);
}

/// Preconditioner application M v: one V-cycle from a zero initial
/// guess. Costs exactly k_pre + k_post fine matvecs.
inline Vec preconditioner_apply(const Hierarchy& h, const CycleConfig& cfg, const Vec& v) {
  Vec x(v.size(), 0.0);
  v_cycle(h, cfg, v, x, true);
  return x;
}

/// Dense error propagator of one V-cycle, assembled column by column
/// through the live cycle: with b = 0 the iterate maps as e -> E e.
/// Row-major dense output; guarded to small problems.
inline std::vector<double> assemble_error_propagator(const Hierarchy& h, const CycleConfig& cfg) {
  const std::size_t n = h.fine_dim();
  if (n > 1024)
    throw std::invalid_argument("assemble_error_propagator: fine dimension capped at 1024");
  std::vector<double> E(n * n);
  const Vec b(n, 0.0);
  Vec x(n);
  for (std::size_t j = 0; j < n; ++j) {
    set_zero(x);
    x[j] = 1.0;
    v_cycle(h, cfg, b, x, false);
    for (std::size_t i = 0; i < n; ++i) E[i * n + j] = x[i];
  }
  return E;
}

/// Dense propagator of the smoothing sweep alone (`order` steps from
/// a nonzero iterate), for polynomial cross-checks.
inline std::vector<double> assemble_smoother_propagator(const Hierarchy& h,
                                                        const ChebyshevConfig& cfg,
                                                        std::size_t order) {
  const std::size_t n = h.fine_dim();
  if (n > 1024)
    throw std::invalid_argument("assemble_smoother_propagator: fine dimension capped at 1024");
  std::vector<double> E(n * n);
  const Vec b(n, 0.0);
  Vec x(n);
  for (std::size_t j = 0; j < n; ++j) {
    set_zero(x);
    x[j] = 1.0;
    chebyshev_smooth(h.A, h.inv_diag, cfg, order, b, x, false);
    for (std::size_t i = 0; i < n; ++i) E[i * n + j] = x[i];
  }
  return E;
}

}  // namespace chebmg

#endif
