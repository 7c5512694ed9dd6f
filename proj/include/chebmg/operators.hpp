#ifndef CHEBMG_OPERATORS_HPP
#define CHEBMG_OPERATORS_HPP

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "domain.hpp"

namespace chebmg {

/// Anything that can act as a square SPD operator in the solver stack.
/// Implementations count their own applications; the counter is the
/// basis for every matvec-cost statement made by the harness.
template <typename Op>
concept LinearOperatorLike = requires(const Op op, const Vec& x, Vec& y) {
  { op.rows() } -> std::convertible_to<std::size_t>;
  { op.cols() } -> std::convertible_to<std::size_t>;
  { op.apply(x, y) };
  { op.diagonal() } -> std::convertible_to<Vec>;
  { op.applications() } -> std::convertible_to<std::size_t>;
};

/// Matrix-free 5-point finite difference Laplacian on the interior
/// unknowns of a Domain:
///
///   (A u)_ij = (2/hx^2 + 2/hy^2) u_ij - (u_(i-1)j + u_(i+1)j)/hx^2
///                                     - (u_i(j-1) + u_i(j+1))/hy^2
class StencilOperator {
 public:
  explicit StencilOperator(const Domain& dom)
      : m_(dom.interior_per_dim()),
        inv_hx2_(1.0 / (dom.hx() * dom.hx())),
        inv_hy2_(1.0 / (dom.hy() * dom.hy())) {}

  std::size_t rows() const { return m_ * m_; }
  std::size_t cols() const { return m_ * m_; }

  void apply(const Vec& x, Vec& y) const {
    const double c = 2.0 * (inv_hx2_ + inv_hy2_);
    for (std::size_t iy = 0; iy < m_; ++iy) {
      for (std::size_t ix = 0; ix < m_; ++ix) {
        const std::size_t id = iy * m_ + ix;
        double v = c * x[id];
        if (ix > 0) v -= inv_hx2_ * x[id - 1];
        if (ix + 1 < m_) v -= inv_hx2_ * x[id + 1];
        if (iy > 0) v -= inv_hy2_ * x[id - m_];
        if (iy + 1 < m_) v -= inv_hy2_ * x[id + m_];
        y[id] = v;
      }
    }
    ++count_;
  }

  Vec diagonal() const {
    return Vec(rows(), 2.0 * (inv_hx2_ + inv_hy2_));
  }

  std::size_t applications() const { return count_; }
  void reset_applications() const { count_ = 0; }

  std::size_t points_per_dim() const { return m_; }

 private:
  std::size_t m_;
  double inv_hx2_, inv_hy2_;
  mutable std::size_t count_ = 0;
};

/// Compressed sparse row matrix, used for Galerkin coarse operators.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Builds from (row, col, value) triplets; duplicates are summed.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                 std::vector<std::tuple<std::size_t, std::size_t, double>> trip) {
    std::sort(trip.begin(), trip.end());
    CsrMatrix A;
    A.rows_ = rows;
    A.cols_ = cols;
    A.row_ptr_.assign(rows + 1, 0);
    for (std::size_t t = 0; t < trip.size();) {
      const auto [r, c, v0] = trip[t];
      double v = v0;
      std::size_t u = t + 1;
      while (u < trip.size() && std::get<0>(trip[u]) == r && std::get<1>(trip[u]) == c) {
        v += std::get<2>(trip[u]);
        ++u;
      }
      if (v != 0.0) {
        A.col_.push_back(c);
        A.val_.push_back(v);
        ++A.row_ptr_[r + 1];
      }
      t = u;
    }
    for (std::size_t r = 0; r < rows; ++r) A.row_ptr_[r + 1] += A.row_ptr_[r];
    return A;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void apply(const Vec& x, Vec& y) const {
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = 0.0;
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += val_[p] * x[col_[p]];
      y[r] = s;
    }
    ++count_;
  }

  Vec diagonal() const {
    Vec d(rows_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        if (col_[p] == r) d[r] = val_[p];
    return d;
  }

  std::size_t applications() const { return count_; }
  void reset_applications() const { count_ = 0; }

  double coeff(std::size_t r, std::size_t c) const {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      if (col_[p] == c) return val_[p];
    return 0.0;
  }

  std::size_t nonzeros() const { return val_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_indices() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_;
  std::vector<double> val_;
  mutable std::size_t count_ = 0;
};

static_assert(LinearOperatorLike<StencilOperator>);
static_assert(LinearOperatorLike<CsrMatrix>);

inline StencilOperator build_fine_operator(const Domain& dom) {
  return StencilOperator(dom);
}

/// Dense row-major copy of an operator, for small cross-checks only.
template <LinearOperatorLike Op>
std::vector<double> to_dense(const Op& op) {
  const std::size_t n = op.rows();
  std::vector<double> dense(n * n, 0.0);
  Vec e(n, 0.0), col(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    for (std::size_t i = 0; i < n; ++i) dense[i * n + j] = col[i];
    e[j] = 0.0;
  }
  return dense;
}

}  // namespace chebmg

#endif
