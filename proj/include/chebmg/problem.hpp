#ifndef CHEBMG_PROBLEM_HPP
#define CHEBMG_PROBLEM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

#include "core.hpp"
#include "domain.hpp"
#include "operators.hpp"

namespace chebmg {

/// Manufactured test problem. The target solution is a smooth
/// sine product plus a seeded uniform perturbation in [-1/2, 1/2),
/// and the right-hand side is its exact image under A, so the
/// discrete solve has a known answer:
///
///   u(x,y) = sin(3 pi x / Lx) sin(4 pi y / Ly) + g,   b = A u
struct Problem {
  Domain domain;
  StencilOperator A;
  Vec u_exact;
  Vec b;
};

inline Problem build_problem(const Domain& dom, std::uint64_t rhs_seed) {
  StencilOperator A(dom);
  const std::size_t m = dom.interior_per_dim();
  Vec u(m * m);
  const double pi = std::numbers::pi;
  std::mt19937_64 gen(rhs_seed);
  for (std::size_t iy = 0; iy < m; ++iy) {
    const double y = static_cast<double>(iy + 1) * dom.hy();
    for (std::size_t ix = 0; ix < m; ++ix) {
      const double x = static_cast<double>(ix + 1) * dom.hx();
      u[iy * m + ix] = std::sin(3.0 * pi * x / dom.Lx) * std::sin(4.0 * pi * y / dom.Ly)
                       + uniform_pm_half(gen);
    }
  }
  Vec b(m * m);
  A.apply(u, b);
  A.reset_applications();
  return Problem{dom, std::move(A), std::move(u), std::move(b)};
}

}  // namespace chebmg

#endif
