#ifndef CHEBMG_TRANSFER_HPP
#define CHEBMG_TRANSFER_HPP

#include <array>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "operators.hpp"

namespace chebmg {

namespace detail {

/// One fine point's footprint in a 1D linear interpolation table:
/// at most two coarse interior neighbors. Boundary coarse nodes carry
/// zero Dirichlet values and are dropped.
struct InterpRow {
  std::array<std::size_t, 2> idx{};
  std::array<double, 2> w{};
  int nnz = 0;
};

inline std::vector<InterpRow> interp_1d(std::size_t n, std::size_t nc) {
  if (nc < 2 || n % nc != 0)
    throw std::invalid_argument("interp_1d: coarse resolution must divide n and leave interior points");
  const std::size_t ratio = n / nc;
  std::vector<InterpRow> rows(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j0 = i / ratio;
    const double t = static_cast<double>(i % ratio) / static_cast<double>(ratio);
    InterpRow row;
    auto push = [&row](std::size_t cj, double w) {
      if (w == 0.0) return;
      row.idx[static_cast<std::size_t>(row.nnz)] = cj - 1;
      row.w[static_cast<std::size_t>(row.nnz)] = w;
      ++row.nnz;
    };
    if (j0 >= 1 && j0 <= nc - 1) push(j0, 1.0 - t);
    if (j0 + 1 <= nc - 1 && t > 0.0) push(j0 + 1, t);
    rows[i - 1] = row;
  }
  return rows;
}

}  // namespace detail

/// Tensor-product bilinear prolongation from the coarse interior grid
/// (nc-1)^2 to the fine interior grid (n-1)^2, both row-major.
class Prolongation {
 public:
  Prolongation(std::size_t n, std::size_t nc)
      : mf_(n - 1), mc_(nc - 1), tab_(detail::interp_1d(n, nc)) {}

  std::size_t fine_dim() const { return mf_ * mf_; }
  std::size_t coarse_dim() const { return mc_ * mc_; }

  /// y = P x
  void apply(const Vec& x, Vec& y) const {
    for (std::size_t iy = 0; iy < mf_; ++iy) {
      const auto& ry = tab_[iy];
      for (std::size_t ix = 0; ix < mf_; ++ix) {
        const auto& rx = tab_[ix];
        double s = 0.0;
        for (int a = 0; a < ry.nnz; ++a)
          for (int b = 0; b < rx.nnz; ++b)
            s += ry.w[a] * rx.w[b] * x[ry.idx[a] * mc_ + rx.idx[b]];
        y[iy * mf_ + ix] = s;
      }
    }
  }

  /// y = P^T x
  void apply_transpose(const Vec& x, Vec& y) const {
    set_zero(y);
    for (std::size_t iy = 0; iy < mf_; ++iy) {
      const auto& ry = tab_[iy];
      for (std::size_t ix = 0; ix < mf_; ++ix) {
        const auto& rx = tab_[ix];
        const double v = x[iy * mf_ + ix];
        for (int a = 0; a < ry.nnz; ++a)
          for (int b = 0; b < rx.nnz; ++b)
            y[ry.idx[a] * mc_ + rx.idx[b]] += ry.w[a] * rx.w[b] * v;
      }
    }
  }

 private:
  std::size_t mf_, mc_;
  std::vector<detail::InterpRow> tab_;
};

/// Assembles A_c = P^T A P column by column through the live apply
/// path. Fine matvecs performed here land on the operator's counter;
/// callers reset counters after setup.
template <LinearOperatorLike Op>
CsrMatrix galerkin_coarse(const Op& A, const Prolongation& P) {
  const std::size_t nc = P.coarse_dim();
  const std::size_t nf = P.fine_dim();
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  Vec ej(nc, 0.0), pf(nf, 0.0), apf(nf, 0.0), col(nc, 0.0);
  for (std::size_t j = 0; j < nc; ++j) {
    ej[j] = 1.0;
    P.apply(ej, pf);
    A.apply(pf, apf);
    P.apply_transpose(apf, col);
    ej[j] = 0.0;
    for (std::size_t i = 0; i < nc; ++i)
      if (col[i] != 0.0) trip.emplace_back(i, j, col[i]);
  }
  return CsrMatrix::from_triplets(nc, nc, std::move(trip));
}

}  // namespace chebmg

#endif
