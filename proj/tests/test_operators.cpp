#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "helpers.hpp"

using namespace chebmg;
using testutil::Mat;

TEST_CASE("stencil applies the 5-point operator exactly on analytic eigenvectors",
          "[operators]") {
  // v_(ix,iy) = sin(p pi x) sin(q pi y) sampled on the interior grid is
  // an exact eigenvector of the discrete operator with eigenvalue
  // (4/hx^2) sin^2(p pi/(2n)) + (4/hy^2) sin^2(q pi/(2n)).
  const Domain dom(2.0, 1.0, 8);
  const StencilOperator A(dom);
  const std::size_t m = dom.interior_per_dim();
  const double pi = std::numbers::pi;
  for (std::size_t p : {1, 3}) {
    for (std::size_t q : {2, 5}) {
      Vec v(m * m), Av(m * m);
      for (std::size_t iy = 0; iy < m; ++iy)
        for (std::size_t ix = 0; ix < m; ++ix)
          v[iy * m + ix] = std::sin(static_cast<double>(p) * pi * static_cast<double>(ix + 1) /
                                    static_cast<double>(dom.n)) *
                           std::sin(static_cast<double>(q) * pi * static_cast<double>(iy + 1) /
                                    static_cast<double>(dom.n));
      A.apply(v, Av);
      const double sx = std::sin(static_cast<double>(p) * pi / (2.0 * static_cast<double>(dom.n)));
      const double sy = std::sin(static_cast<double>(q) * pi / (2.0 * static_cast<double>(dom.n)));
      const double lam = 4.0 / (dom.hx() * dom.hx()) * sx * sx +
                         4.0 / (dom.hy() * dom.hy()) * sy * sy;
      for (std::size_t i = 0; i < m * m; ++i)
        REQUIRE_THAT(Av[i], Catch::Matchers::WithinAbs(lam * v[i], 1e-10 * lam));
    }
  }
}

TEST_CASE("stencil operator is symmetric with constant diagonal", "[operators]") {
  const Domain dom(8.0, 1.0, 8);
  const StencilOperator A(dom);
  const Mat D = testutil::dense_operator(A);
  REQUIRE((D - D.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Vec diag = A.diagonal();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    REQUIRE(diag[i] == 2.0 / (dom.hx() * dom.hx()) + 2.0 / (dom.hy() * dom.hy()));
    REQUIRE(D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) == diag[i]);
  }
}

TEST_CASE("stencil counts applications", "[operators]") {
  const Domain dom(1.0, 1.0, 4);
  const StencilOperator A(dom);
  Vec x(A.rows(), 1.0), y(A.rows());
  REQUIRE(A.applications() == 0);
  A.apply(x, y);
  A.apply(x, y);
  REQUIRE(A.applications() == 2);
  A.reset_applications();
  REQUIRE(A.applications() == 0);
}

TEST_CASE("csr from triplets sums duplicates and drops zeros", "[operators]") {
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip{
      {1, 1, 4.0}, {0, 0, 2.0}, {0, 1, -1.0}, {1, 1, -1.0}, {1, 0, 3.0},
      {0, 1, 1.0},  // cancels the -1 above to exactly zero
  };
  const CsrMatrix A = CsrMatrix::from_triplets(2, 2, trip);
  REQUIRE(A.rows() == 2);
  REQUIRE(A.nonzeros() == 3);
  REQUIRE(A.coeff(0, 0) == 2.0);
  REQUIRE(A.coeff(0, 1) == 0.0);
  REQUIRE(A.coeff(1, 0) == 3.0);
  REQUIRE(A.coeff(1, 1) == 3.0);
  const Vec d = A.diagonal();
  REQUIRE(d == Vec{2.0, 3.0});
  Vec y(2);
  A.apply(Vec{1.0, 2.0}, y);
  REQUIRE(y == Vec{2.0, 9.0});
  REQUIRE(A.applications() == 1);
}

TEST_CASE("fine csr assembly matches the matrix-free stencil", "[operators]") {
  for (double Lx : {1.0, 64.0}) {
    const Domain dom(Lx, 1.0, 8);
    const StencilOperator A(dom);
    const CsrMatrix C = fine_csr(dom);
    const Mat Da = testutil::dense_operator(A);
    const Mat Dc = testutil::dense_operator(C);
    REQUIRE((Da - Dc).cwiseAbs().maxCoeff() == 0.0);
  }
}
