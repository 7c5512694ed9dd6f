#ifndef CHEBMG_CHOLESKY_HPP
#define CHEBMG_CHOLESKY_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "operators.hpp"

namespace chebmg {

/// Banded Cholesky factorization A = L L^T for SPD matrices stored in
/// CSR form. Bandwidth is taken from the sparsity pattern. Used for
/// exact coarse-level solves; fill stays inside the band.
class BandedCholesky {
 public:
  explicit BandedCholesky(const CsrMatrix& A) : n_(A.rows()) {
    if (A.rows() != A.cols()) throw std::invalid_argument("BandedCholesky: matrix must be square");
    bw_ = 0;
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t p = A.row_ptr()[r]; p < A.row_ptr()[r + 1]; ++p) {
        const std::size_t c = A.col_indices()[p];
        const std::size_t d = r > c ? r - c : c - r;
        if (d > bw_) bw_ = d;
      }
    // Packed lower band: band_[i*(bw_+1) + (j - i + bw_)] holds L(i,j)
    // for j in [i-bw_, i].
    band_.assign(n_ * (bw_ + 1), 0.0);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t p = A.row_ptr()[r]; p < A.row_ptr()[r + 1]; ++p) {
        const std::size_t c = A.col_indices()[p];
        if (c <= r) at(r, c) = A.values()[p];
      }
    factor();
  }

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  /// x = A^{-1} b
  void solve(const Vec& b, Vec& x) const {
    x = b;
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i > bw_ ? i - bw_ : 0;
      double s = x[i];
      for (std::size_t j = j0; j < i; ++j) s -= at(i, j) * x[j];
      x[i] = s / at(i, i);
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      const std::size_t jmax = std::min(n_ - 1, ii + bw_);
      double s = x[ii];
      for (std::size_t j = ii + 1; j <= jmax; ++j) s -= at(j, ii) * x[j];
      x[ii] = s / at(ii, ii);
    }
  }

  Vec solve(const Vec& b) const {
    Vec x(n_);
    solve(b, x);
    return x;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return band_[i * (bw_ + 1) + (j + bw_ - i)]; }
  double at(std::size_t i, std::size_t j) const { return band_[i * (bw_ + 1) + (j + bw_ - i)]; }

  void factor() {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i > bw_ ? i - bw_ : 0;
      for (std::size_t j = j0; j <= i; ++j) {
        double s = at(i, j);
        const std::size_t k0 = std::max(j0, j > bw_ ? j - bw_ : 0);
        for (std::size_t k = k0; k < j; ++k) s -= at(i, k) * at(j, k);
        if (j < i) {
          at(i, j) = s / at(j, j);
        } else {
          if (s <= 0.0)
            throw std::runtime_error("BandedCholesky: nonpositive pivot at index " + std::to_string(i));
          at(i, i) = std::sqrt(s);
        }
      }
    }
  }

  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> band_;
};

}  // namespace chebmg

#endif
