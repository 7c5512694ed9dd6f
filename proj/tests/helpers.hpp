#ifndef CHEBMG_TESTS_HELPERS_HPP
#define CHEBMG_TESTS_HELPERS_HPP

#include <Eigen/Dense>

#include "chebmg/chebmg.hpp"

namespace testutil {

using Mat = Eigen::MatrixXd;
using EVec = Eigen::VectorXd;

inline EVec to_eigen(const chebmg::Vec& v) {
  return Eigen::Map<const EVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline chebmg::Vec from_eigen(const EVec& v) {
  return chebmg::Vec(v.data(), v.data() + v.size());
}

/// Materializes any linear map given as vector->vector.
template <typename Apply>
Mat dense_from_apply(std::size_t rows, std::size_t cols, Apply&& apply) {
  Mat M(rows, cols);
  chebmg::Vec e(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    e[j] = 1.0;
    const chebmg::Vec col = apply(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < rows; ++i) M(static_cast<Eigen::Index>(i),
                                             static_cast<Eigen::Index>(j)) = col[i];
  }
  return M;
}

template <chebmg::LinearOperatorLike Op>
Mat dense_operator(const Op& A) {
  return dense_from_apply(A.rows(), A.cols(), [&A](const chebmg::Vec& e) {
    chebmg::Vec y(A.rows());
    A.apply(e, y);
    return y;
  });
}

inline Mat dense_prolongation(const chebmg::Prolongation& P) {
  return dense_from_apply(P.fine_dim(), P.coarse_dim(), [&P](const chebmg::Vec& e) {
    chebmg::Vec y(P.fine_dim());
    P.apply(e, y);
    return y;
  });
}

inline Mat row_major_to_eigen(const std::vector<double>& flat, std::size_t n) {
  Mat M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * n + j];
  return M;
}

/// Operator norm induced by the A inner product: with A = L L^T,
/// ||M||_A = ||L^T M L^{-T}||_2.
inline double a_norm(const Mat& M, const Mat& A) {
  const Eigen::LLT<Mat> llt(A);
  const Mat Lt = llt.matrixL().transpose();
  const Mat S = Lt * M * Lt.triangularView<Eigen::Upper>().solve(Mat::Identity(A.rows(), A.cols()));
  return S.jacobiSvd().singularValues()(0);
}

inline double spectral_norm(const Mat& M) { return M.jacobiSvd().singularValues()(0); }

/// Applies the scalar residual polynomial of the configured smoother
/// to SA = D^{-1} A through the symmetric similarity transform.
inline Mat polynomial_propagator(const Mat& A, const chebmg::ChebyshevConfig& cfg,
                                 std::size_t order) {
  const EVec d = A.diagonal();
  const EVec dh = d.array().sqrt();
  const Mat W = dh.cwiseInverse().asDiagonal() * A * dh.cwiseInverse().asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Mat> es(W);
  EVec p(es.eigenvalues().size());
  const double* beta = nullptr;
  std::span<const double> beta_row;
  if (cfg.family == chebmg::Family::fourth_opt) {
    beta_row = chebmg::beta_coefficients(order);
    beta = beta_row.data();
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (chebmg::is_fourth_kind(cfg.family))
      p(i) = chebmg::detail::fourth_kind_poly<double>(order, lam, beta, cfg.lambda_max());
    else
      p(i) = chebmg::detail::first_kind_poly<double>(order, lam, cfg.lambda_min(),
                                                     cfg.lambda_max());
  }
  const Mat Pw = es.eigenvectors() * p.asDiagonal() * es.eigenvectors().transpose();
  return dh.cwiseInverse().asDiagonal() * Pw * dh.asDiagonal();
}

}  // namespace testutil

#endif
