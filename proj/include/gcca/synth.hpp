#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gcca/dense_matrix.hpp"
#include "gcca/sparse_matrix.hpp"

namespace gcca {

struct OutlierConfig {
  index_t count = 0;
  bool matched_power = false;  // rescale O so its mean-square matches Z*A's
};

struct SynthConfig {
  index_t l = 0;  // entities
  index_t m = 0;  // clean features per view
  index_t n = 0;  // latent dimension
  int i = 1;      // number of views
  double sigma = 0.0;
  std::optional<double> rho;  // target density; factors are mask-sparsified
  std::optional<OutlierConfig> outliers;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthDataset {
  ViewCollection views;
  std::vector<std::vector<index_t>> clean_cols;    // S_i^c per view
  std::vector<std::vector<index_t>> outlier_cols;  // S_i per view
  CsrMatrix ground_truth_z;                        // L x N, kept for audits
  std::vector<std::uint64_t> view_seeds;
  std::vector<double> realized_density;
};

// X_i = Z A_i + sigma N_i (factors Bernoulli-masked to hit rho when asked);
// with outliers, X_i = [Z A_i, O_i] + sigma N_i.
SynthDataset gen(const SynthConfig& config);

// Bernoulli mask rate p such that the modeled density of Z A + sigma N
// approximates the target rho.
double solve_mask_density(double rho, index_t n, double sigma);

struct FeatureMetrics {
  double metric1 = 0.0;  // (1/I) sum_i ||X_i(:,S_i^c) Q_i(S_i^c,:) - G||_F^2
  double metric2 = 0.0;  // (1/I) sum_i ||X_i(:,S_i) Q_i(S_i,:)||_F^2
};

FeatureMetrics feature_metrics(const SynthDataset& dataset,
                               const std::vector<DenseMatrix>& q, const DenseMatrix& g);

// Same metrics for data loaded from files: index sets supplied explicitly.
FeatureMetrics feature_metrics(const ViewCollection& views,
                               const std::vector<std::vector<index_t>>& clean_cols,
                               const std::vector<std::vector<index_t>>& outlier_cols,
                               const std::vector<DenseMatrix>& q, const DenseMatrix& g);

}  // namespace gcca
