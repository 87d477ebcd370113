#pragma once

#include <cstdint>
#include <vector>

#include "gcca/dense_matrix.hpp"
#include "gcca/sparse_matrix.hpp"

namespace gcca {

// ---- sparse kernels -------------------------------------------------------
//
// The two hot products of the solver. Both stream the row-compressed
// structure once, cost O(nnz * K), and never materialize a transposed copy
// or an M x M / L x L intermediate. The *_serial variants are the reference
// implementations the parallel ones are tested (and benchmarked) against.

// X * D, with D of shape (cols(X), K) -> (rows(X), K)
DenseMatrix spmm(const ViewMatrix& view, const DenseMatrix& d);
DenseMatrix spmm_serial(const ViewMatrix& view, const DenseMatrix& d);

// X^T * D, with D of shape (rows(X), K) -> (cols(X), K), by scatter
DenseMatrix spmm_t(const ViewMatrix& view, const DenseMatrix& d);
DenseMatrix spmm_t_serial(const ViewMatrix& view, const DenseMatrix& d);

// X(:, S) * D(S, :) for the column subset S given as a 0/1 mask over
// columns of X; rows of D outside S are ignored.
DenseMatrix spmm_cols(const ViewMatrix& view, const DenseMatrix& d,
                      const std::vector<std::uint8_t>& col_mask);

// ---- dense helpers --------------------------------------------------------

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b);    // A * B
DenseMatrix mat_mul_at_b(const DenseMatrix& a, const DenseMatrix& b);  // A^T * B

void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y);  // y += alpha*x
void scale(DenseMatrix& a, double s);

double frob_norm_sq(const DenseMatrix& a);
double frob_norm(const DenseMatrix& a);
double frob_norm_diff_sq(const DenseMatrix& a, const DenseMatrix& b);
double inner_product(const DenseMatrix& a, const DenseMatrix& b);  // <A, B>

// || A^T A - I ||_F, the orthonormality defect of A's columns
double orthonormality_defect(const DenseMatrix& a);

bool all_finite(const DenseMatrix& a);

// Largest eigenvalue of X^T X by power iteration on v -> X^T (X v).
// Stops when the relative Rayleigh-quotient change drops below tol.
// A zero matrix yields 0. Deterministic given the seed.
double estimate_lipschitz(const ViewMatrix& view, double tol = 1e-6,
                          int max_iters = 500, std::uint64_t seed = 0);

}  // namespace gcca
