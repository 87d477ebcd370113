#pragma once

#include <cstdint>
#include <vector>

#include "gcca/dense_matrix.hpp"

namespace gcca {

inline constexpr index_t kDefaultDenseCap = 4000;

struct EconSvd {
  DenseMatrix u;          // L x K, orthonormal columns
  std::vector<double> s;  // descending, nonnegative
  DenseMatrix v;          // K x K, orthonormal columns
};

// Thin SVD of an L x K matrix, L >= K. Reconstruction error is bounded by
// 1e-10 * ||A||_F; trailing zero singular values are fine.
EconSvd econ_svd(const DenseMatrix& a);

struct TopkEig {
  DenseMatrix u;                 // L x K, orthonormal columns
  std::vector<double> eigvals;   // descending
};

// Top-K eigenpairs of a symmetric matrix (symmetrized as (M+M^T)/2).
// Dense work; refuses matrices above the cap so the solver path can never
// fall into O(L^2) territory by accident.
TopkEig sym_eig_topk(const DenseMatrix& m, index_t k, index_t dense_cap = kDefaultDenseCap);

// Largest singular value, relative accuracy 1e-8.
double spectral_norm(const DenseMatrix& a);

// Orthonormalizes an i.i.d. standard-normal L x K draw; deterministic per seed.
DenseMatrix random_orthonormal(index_t rows, index_t cols, std::uint64_t seed);

struct Polar {
  DenseMatrix q;          // L x K with Q^T Q = I, the closest orthonormal factor
  std::vector<double> s;  // singular values of the input, descending
};

// Orthonormal polar factor U V^T from the thin SVD of A.
Polar polar_factor(const DenseMatrix& a);

}  // namespace gcca
