#include <doctest.h>

#include <cmath>

#include "gcca/baselines.hpp"
#include "gcca/decomp.hpp"
#include "gcca/kernels.hpp"
#include "gcca/solver.hpp"
#include "gcca/synth.hpp"
#include "test_helpers.hpp"

using namespace gcca;
using namespace gcca::test;

namespace {

ViewCollection identity_view(index_t n) {
  std::vector<CsrMatrix::Triplet> trips;
  for (index_t j = 0; j < n; ++j) trips.push_back({j, j, 1.0});
  ViewCollection vc;
  vc.views.push_back({CsrMatrix::from_triplets(n, n, std::move(trips)), std::nullopt, 0});
  return vc;
}

SynthDataset small_dataset(std::uint64_t seed, index_t l = 60, index_t m = 15, index_t n = 10,
                           int i = 3, double sigma = 0.3) {
  SynthConfig sc;
  sc.l = l;
  sc.m = m;
  sc.n = n;
  sc.i = i;
  sc.sigma = sigma;
  sc.seed = seed;
  return gen(sc);
}

}  // namespace

TEST_CASE("eigen_maxvar: identity view gives unit eigenvalues and zero objective") {
  auto views = identity_view(6);
  auto oracle = eigen_maxvar(views, {}, 2);
  CHECK(oracle.eigvals[0] == doctest::Approx(1.0));
  CHECK(oracle.eigvals[1] == doctest::Approx(1.0));
  CHECK(oracle.f_opt == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("eigen_maxvar: F_opt equals (I*K - sum eigvals)/2 when mu = 0") {
  auto ds = small_dataset(1);
  auto oracle = eigen_maxvar(ds.views, {}, 4);
  double sum_top = 0.0;
  for (index_t k = 0; k < 4; ++k) sum_top += oracle.eigvals[static_cast<size_t>(k)];
  const double identity_value = 0.5 * (3 * 4 - sum_top);
  CHECK(std::abs(oracle.f_opt - identity_value) <= 1e-8);
}

TEST_CASE("eigen_maxvar is a lower bound for alternating-solver runs") {
  auto ds = small_dataset(2, 80, 16, 8, 3, 0.4);
  std::vector<RegularizerSpec> regs = {parse_regularizer("ridge:0.1")};
  auto oracle = eigen_maxvar(ds.views, regs, 4);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SolverConfig cfg;
    cfg.k = 4;
    cfg.t_inner = 3;
    cfg.regs = regs;
    cfg.max_outer = 120;
    cfg.tol_objective = 1e-10;
    cfg.seed = seed;
    auto res = solve(ds.views, cfg);
    CHECK(oracle.f_opt <= res.diagnostics.back().objective + 1e-8);
  }
}

TEST_CASE("eigen_maxvar rejects oversize and singular problems") {
  auto ds = small_dataset(3);
  CHECK_THROWS_AS(eigen_maxvar(ds.views, {}, 4, /*dense_cap=*/10), OversizeError);

  // rank-deficient view with mu = 0: sigma = 0 makes rank(X) = N < M
  SynthConfig sc;
  sc.l = 30;
  sc.m = 10;
  sc.n = 4;
  sc.i = 2;
  sc.sigma = 0.0;
  sc.seed = 5;
  auto flat = gen(sc);
  CHECK_THROWS_AS(eigen_maxvar(flat.views, {}, 3), ConditioningError);
}

TEST_CASE("mvlsa: full rank with mu = 0 matches the eigen oracle subspace") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    auto ds = small_dataset(seed + 10, 50, 12, 8, 3, 0.4);
    const index_t k = 8;  // = N, where the spectral gap lives
    auto oracle = eigen_maxvar(ds.views, {}, k);
    auto g = mvlsa(ds.views, {/*p=*/12, /*mu=*/0.0}, k);
    CHECK(subspace_distance(g, oracle.u1) <= 1e-6);
  }
}

TEST_CASE("mvlsa: single view with K = P spans the top left-singular subspace") {
  auto ds = small_dataset(20, 40, 10, 6, 1, 0.5);
  const index_t k = 4;
  auto g = mvlsa(ds.views, {/*p=*/4, /*mu=*/0.0}, k);
  DenseMatrix x = ds.views.views[0].matrix.to_dense();
  auto svd = econ_svd(x);
  DenseMatrix u_top(40, k);
  for (index_t i = 0; i < 40; ++i)
    for (index_t j = 0; j < k; ++j) u_top(i, j) = svd.u(i, j);
  CHECK(subspace_distance(g, u_top) <= 1e-8);
}

TEST_CASE("mvlsa parameter validation") {
  auto ds = small_dataset(30);
  CHECK_THROWS_AS(mvlsa(ds.views, {/*p=*/2, 0.0}, 4), ParameterError);    // P < K
  CHECK_THROWS_AS(mvlsa(ds.views, {/*p=*/200, 0.0}, 4), ParameterError);  // P > min(L, M)
}

TEST_CASE("mvlsa randomized path matches the dense path on the same view") {
  auto ds = small_dataset(31, 90, 20, 10, 2, 0.4);
  const index_t k = 6;
  auto dense_g = mvlsa(ds.views, {/*p=*/10, /*mu=*/0.1}, k, /*dense_cap=*/4000);
  auto randomized_g = mvlsa(ds.views, {/*p=*/10, /*mu=*/0.1}, k, /*dense_cap=*/50);
  CHECK(subspace_distance(randomized_g, dense_g) <= 1e-6);
}

TEST_CASE("subspace_distance: aligned, orthogonal, and rotated inputs") {
  auto u = random_orthonormal(30, 4, 7);
  CHECK(subspace_distance(u, u) <= 1e-12);

  // complement columns: extend to an 8-column orthonormal frame and split
  auto frame = random_orthonormal(30, 8, 8);
  DenseMatrix a(30, 4), b(30, 4);
  for (index_t i = 0; i < 30; ++i)
    for (index_t j = 0; j < 4; ++j) {
      a(i, j) = frame(i, j);
      b(i, j) = frame(i, j + 4);
    }
  CHECK(subspace_distance(a, b) == doctest::Approx(1.0));

  // right rotation leaves the span unchanged
  auto rot = random_orthonormal(4, 4, 9);
  CHECK(subspace_distance(mat_mul(a, rot), a) <= 1e-10);
}

TEST_CASE("rate_fit: exact geometric series and planted floor") {
  EigenOracleResult dummy;
  std::vector<double> series;
  for (int r = 0; r < 60; ++r) series.push_back(std::pow(0.9, r));
  auto fit = rate_fit(series, dummy);
  CHECK(std::abs(fit.slope - std::log(0.9)) <= 1e-6);
  CHECK(fit.floor == doctest::Approx(0.0));

  std::vector<double> floored;
  for (int r = 0; r < 60; ++r) floored.push_back(std::pow(0.5, r) + 1e-8);
  auto fit2 = rate_fit(floored, dummy);
  CHECK(fit2.floor >= 1e-9);
  CHECK(fit2.floor <= 1e-7);
  CHECK(std::abs(fit2.slope - std::log(0.5)) <= 0.2 * std::abs(std::log(0.5)));

  std::vector<double> tiny(5, 1.0);
  CHECK_THROWS_AS(rate_fit(tiny, dummy), InsufficientDataError);
}
