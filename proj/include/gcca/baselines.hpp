#pragma once

#include <vector>

#include "gcca/decomp.hpp"
#include "gcca/dense_matrix.hpp"
#include "gcca/regularizers.hpp"
#include "gcca/sparse_matrix.hpp"

namespace gcca {

struct EigenOracleResult {
  DenseMatrix g_opt;            // L x K (= U1)
  DenseMatrix u1;               // L x K
  std::vector<double> eigvals;  // lambda_1 .. lambda_{K+1} (descending)
  std::vector<DenseMatrix> q;   // per view, (X^T X + mu I)^{-1} X^T G
  double f_opt = 0.0;
  double ratio = 0.0;           // lambda_{K+1} / lambda_K
};

// Exact MAX-VAR solution at desk scale: forms M = sum X (X^T X + mu I)^{-1} X^T
// densely and takes its top-K eigenvectors. Ridge or none regularizers only.
EigenOracleResult eigen_maxvar(const ViewCollection& views,
                               const std::vector<RegularizerSpec>& regs, index_t k,
                               index_t dense_cap = kDefaultDenseCap);

struct MvlsaConfig {
  index_t p = 0;   // per-view truncation rank, >= K
  double mu = 0.0; // ridge weight in the singular-value reweighting
};

// Rank-truncated baseline: per view, rank-P truncated SVD; aggregate the
// weighted left factors [U_1 D_1^{1/2}, ..., U_I D_I^{1/2}] with
// (D_i)_p = s_p^2/(s_p^2 + mu) and return its top-K left singular vectors.
// Algebraically the top-K eigenvectors of sum_i U_i D_i U_i^T without ever
// forming that L x L matrix. Views above the dense cap use randomized block
// power iteration (20 iterations, oversampling 10) for the truncated SVD.
DenseMatrix mvlsa(const ViewCollection& views, const MvlsaConfig& config, index_t k,
                  index_t dense_cap = kDefaultDenseCap);

// ||(I - U1 U1^T) G||_2 = ||U2^T G||_2 without forming U2.
double subspace_distance(const DenseMatrix& g, const DenseMatrix& u1);

struct RateFit {
  double slope = 0.0;  // fitted d log(dist - floor) / dr over the pre-floor segment
  double floor = 0.0;  // terminal plateau median, 0 when the series still decays
  int pre_floor_points = 0;
};

// Least-squares fit of log(dist - floor) vs r; the floor is the terminal
// plateau median when the tail has flattened, zero otherwise. Errors out with
// fewer than 10 pre-floor points.
RateFit rate_fit(const std::vector<double>& dist_series, const EigenOracleResult& oracle);

// Per-view ridge-optimal weights (X^T X + mu I)^{-1} X^T G for a given G;
// the dense solve is cap-guarded. Used to evaluate baselines' objectives.
std::vector<DenseMatrix> ridge_q_for_g(const ViewCollection& views,
                                       const std::vector<RegularizerSpec>& regs,
                                       const DenseMatrix& g,
                                       index_t dense_cap = kDefaultDenseCap);

}  // namespace gcca
