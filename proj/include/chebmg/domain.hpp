#ifndef CHEBMG_DOMAIN_HPP
#define CHEBMG_DOMAIN_HPP

#include <cstddef>
#include <stdexcept>

namespace chebmg {

/// Rectangular domain (0,Lx) x (0,Ly) with an (n+1) x (n+1) uniform
/// grid. Dirichlet boundary values are eliminated, leaving (n-1)^2
/// interior unknowns ordered row-major: idx = iy*(n-1) + ix.
struct Domain {
  double Lx = 1.0;
  double Ly = 1.0;
  std::size_t n = 0;

  Domain(double Lx_, double Ly_, std::size_t n_) : Lx(Lx_), Ly(Ly_), n(n_) {
    if (n < 2) throw std::invalid_argument("Domain: n must be at least 2");
    if (Lx <= 0.0 || Ly <= 0.0) throw std::invalid_argument("Domain: side lengths must be positive");
  }

  std::size_t interior_per_dim() const { return n - 1; }
  std::size_t unknowns() const { return (n - 1) * (n - 1); }
  double hx() const { return Lx / static_cast<double>(n); }
  double hy() const { return Ly / static_cast<double>(n); }
};

}  // namespace chebmg

#endif
