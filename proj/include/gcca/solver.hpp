#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gcca/dense_matrix.hpp"
#include "gcca/regularizers.hpp"
#include "gcca/sparse_matrix.hpp"

namespace gcca {

struct SolverConfig {
  index_t k = 1;              // embedding dimension
  int t_inner = 1;            // prox-gradient steps per outer iteration, >= 1
  double gamma = 1.0;         // (0, 1]; < 1 adds the proximal pull toward G^(r)
  std::vector<RegularizerSpec> regs;  // one per view, or a single shared spec
  double step_scale = 0.99;   // alpha_i = step_scale / L_i, in (0, 1)
  int max_outer = 1000;
  double tol_objective = 1e-4;  // stop on |F^(r) - F^(r+1)| below this
  std::uint64_t seed = 0;

  enum class Init { kRandom, kWarm };
  Init init = Init::kRandom;
  DenseMatrix warm_g;  // used when init == kWarm

  std::optional<DenseMatrix> track_oracle;  // U1 for subspace-distance logging

  double inner_exit_tol = 1e-10;  // ||dQ|| <= tol*(1+||Q||) ends the inner loop

  void validate(int view_count) const;
  RegularizerSpec reg_for_view(int i) const;
};

struct SolverState {
  DenseMatrix g;               // L x K, orthonormal columns
  std::vector<DenseMatrix> q;  // per view, M_i x K
  int r = 0;                   // outer iteration counter
};

struct IterateDiagnostics {
  int r = 0;
  double objective = 0.0;
  double z_potential = 0.0;
  std::vector<double> q_step_norms;  // per view: sum_t ||Q^(r,t+1)-Q^(r,t)||_F^2
  double g_step_norm = 0.0;          // ||G^(r+1)-G^(r)||_F^2
  std::optional<double> subspace_dist;
  double wall_ms = 0.0;
};

// Runtime counterpart of the sublinear-rate statement: c scales the
// per-iteration potential, v bounds min Z after J iterations by v/J.
struct RateCertificate {
  bool active = false;  // only meaningful when gamma < 1 and step_scale < 1
  double c = 0.0;       // min{ omega*gamma^2, min_i (1/(2a_i) - L_i/2) a_i^2 }
  double v = 0.0;       // (F(init) - 0) / c
  double f_initial = 0.0;
  std::vector<bool> cumulative_ok;  // per iteration: sum c*Z <= F0 - F + 1e-6

  bool all_ok() const {
    for (bool b : cumulative_ok)
      if (!b) return false;
    return true;
  }
};

enum class SolveStatus { kConverged, kMaxIterations };

struct SolveResult {
  SolverState state;
  std::vector<IterateDiagnostics> diagnostics;
  RateCertificate certificate;
  SolveStatus status = SolveStatus::kConverged;
};

// Full objective: sum_i 0.5*||X_i Q_i - G||_F^2 + sum_i g_i(Q_i)
double objective(const ViewCollection& views, const SolverState& state,
                 const std::vector<RegularizerSpec>& regs);

struct InnerLoopResult {
  DenseMatrix q;
  double step_norm_sq_sum = 0.0;  // sum_t ||dQ^(t)||_F^2
  int steps = 0;
};

// T inexact prox-gradient steps on the Q-block for one view:
//   Q <- prox_{alpha*g}( Q - alpha * X^T (X Q - G) )
// The surrogate 0.5*||XQ-G||^2 + g(Q) must not increase; an increase beyond
// 1e-9 signals a bad Lipschitz estimate and raises InvariantError.
InnerLoopResult q_inner_loop(const ViewMatrix& view, const DenseMatrix& q0,
                             const DenseMatrix& g, const RegularizerSpec& reg,
                             double alpha, int t_max, double exit_tol = 1e-10);

// Proximal Procrustes step: R = gamma * sum_i X_i Q_i / I + (1-gamma) * G_prev,
// G = U_R V_R^T from the thin SVD of R. Verifies G^T G = I and the optimality
// certificate tr(G^T R) = sum sigma(R); raises RankDeficiencyError when
// sigma_K(R) < 1e-12 * sigma_1(R).
DenseMatrix g_update(const ViewCollection& views, const std::vector<DenseMatrix>& q_next,
                     const DenseMatrix& g_prev, double gamma);

// Z^(r+1) = (1/gamma^2)*||dG||_F^2 + sum_i (1/alpha_i^2) * sum_t ||dQ_i^(t)||_F^2
double z_potential(double gamma, const std::vector<double>& alphas,
                   double g_step_norm_sq, const std::vector<double>& q_step_norm_sqs);

// State with G = G0 (re-orthonormalized with a warning if needed) and Q_i = 0.
SolverState warm_start_from(const DenseMatrix& g0, const ViewCollection& views);

SolveResult solve(ViewCollection& views, const SolverConfig& config);

}  // namespace gcca
