#include "gcca/solver.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include "gcca/baselines.hpp"
#include "gcca/decomp.hpp"
#include "gcca/kernels.hpp"
#include "gcca/rng.hpp"

namespace gcca {

void SolverConfig::validate(int view_count) const {
  if (k < 1) throw ParameterError("solver: K must be at least 1");
  if (t_inner < 1) throw ParameterError("solver: T must be at least 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("solver: gamma must be in (0, 1]");
  if (!(step_scale > 0.0 && step_scale < 1.0))
    throw ParameterError("solver: step_scale must be in (0, 1)");
  if (max_outer < 1) throw ParameterError("solver: max_outer must be at least 1");
  if (tol_objective < 0.0) throw ParameterError("solver: tol_objective must be nonnegative");
  if (!(regs.size() <= 1 || regs.size() == static_cast<size_t>(view_count)))
    throw ParameterError("solver: give one regularizer or one per view");
  for (const auto& r : regs) r.validate();
}

RegularizerSpec SolverConfig::reg_for_view(int i) const {
  if (regs.empty()) return {};
  if (regs.size() == 1) return regs.front();
  return regs[static_cast<size_t>(i)];
}

double objective(const ViewCollection& views, const SolverState& state,
                 const std::vector<RegularizerSpec>& regs) {
  double f = 0.0;
  for (int i = 0; i < views.view_count(); ++i) {
    const auto& view = views.views[static_cast<size_t>(i)];
    DenseMatrix fit = spmm(view, state.q[static_cast<size_t>(i)]);
    f += 0.5 * frob_norm_diff_sq(fit, state.g);
    const RegularizerSpec reg =
        regs.empty() ? RegularizerSpec{} : (regs.size() == 1 ? regs.front() : regs[static_cast<size_t>(i)]);
    f += reg_value(reg, state.q[static_cast<size_t>(i)]);
  }
  return f;
}

InnerLoopResult q_inner_loop(const ViewMatrix& view, const DenseMatrix& q0,
                             const DenseMatrix& g, const RegularizerSpec& reg,
                             double alpha, int t_max, double exit_tol) {
  if (alpha <= 0.0) throw ParameterError("q_inner_loop: alpha must be positive");
  if (q0.rows() != view.cols() || q0.cols() != g.cols())
    throw ShapeError("q_inner_loop: Q has the wrong shape");

  InnerLoopResult res;
  res.q = q0;
  DenseMatrix fit = spmm(view, res.q);  // X Q, maintained across steps
  double surrogate = 0.5 * frob_norm_diff_sq(fit, g) + reg_value(reg, res.q);

  for (int t = 0; t < t_max; ++t) {
    DenseMatrix resid = fit;
    axpy(-1.0, g, resid);                       // X Q - G
    DenseMatrix grad = spmm_t(view, resid);     // X^T (X Q - G)
    DenseMatrix h = res.q;
    axpy(-alpha, grad, h);
    DenseMatrix q_next = prox(reg, h, alpha);

    const double dn2 = frob_norm_diff_sq(q_next, res.q);
    res.step_norm_sq_sum += dn2;
    res.q = std::move(q_next);
    res.steps = t + 1;

    fit = spmm(view, res.q);
    const double next_surrogate = 0.5 * frob_norm_diff_sq(fit, g) + reg_value(reg, res.q);
    if (next_surrogate > surrogate + 1e-9)
      throw InvariantError("q_inner_loop: surrogate objective increased by " +
                           std::to_string(next_surrogate - surrogate) +
                           "; the step size violates the Lipschitz bound");
    surrogate = next_surrogate;

    if (std::sqrt(dn2) <= exit_tol * (1.0 + frob_norm(res.q))) break;
  }
  return res;
}

DenseMatrix g_update(const ViewCollection& views, const std::vector<DenseMatrix>& q_next,
                     const DenseMatrix& g_prev, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("g_update: gamma must be in (0, 1]");
  const int view_count = views.view_count();
  DenseMatrix r(g_prev.rows(), g_prev.cols());
  for (int i = 0; i < view_count; ++i)
    axpy(gamma / view_count, spmm(views.views[static_cast<size_t>(i)], q_next[static_cast<size_t>(i)]), r);
  if (gamma < 1.0) axpy(1.0 - gamma, g_prev, r);

  Polar polar = polar_factor(r);
  const double s1 = polar.s.front();
  const double sk = polar.s.back();
  if (s1 == 0.0 || sk < 1e-12 * s1)
    throw RankDeficiencyError(
        "g_update: R is rank-deficient (sigma_K/sigma_1 = " +
        std::to_string(s1 == 0.0 ? 0.0 : sk / s1) +
        "); the Procrustes solution is not unique. Use gamma < 1 so the "
        "(1-gamma)*G term keeps R full-rank.");

  double sum_sigma = 0.0;
  for (double s : polar.s) sum_sigma += s;
  const double tr = inner_product(polar.q, r);
  if (std::abs(tr - sum_sigma) > 1e-8 * (1.0 + sum_sigma))
    throw InvariantError("g_update: Procrustes optimality certificate failed");
  if (orthonormality_defect(polar.q) > 1e-10 * std::sqrt(static_cast<double>(g_prev.cols())) + 1e-10)
    throw InvariantError("g_update: G^T G deviates from identity");
  return polar.q;
}

double z_potential(double gamma, const std::vector<double>& alphas,
                   double g_step_norm_sq, const std::vector<double>& q_step_norm_sqs) {
  if (alphas.size() != q_step_norm_sqs.size())
    throw ShapeError("z_potential: one alpha per view required");
  double z = g_step_norm_sq / (gamma * gamma);
  for (size_t i = 0; i < alphas.size(); ++i)
    z += q_step_norm_sqs[i] / (alphas[i] * alphas[i]);
  return z;
}

SolverState warm_start_from(const DenseMatrix& g0, const ViewCollection& views) {
  views.validate();
  if (g0.rows() != views.entity_count())
    throw ShapeError("warm_start_from: G0 has the wrong row count");
  SolverState state;
  state.g = g0;
  if (orthonormality_defect(g0) > 1e-8) {
    std::cerr << "[gcca] warning: warm-start G is not orthonormal; re-orthonormalizing\n";
    state.g = polar_factor(g0).q;
  }
  for (const auto& v : views.views) state.q.emplace_back(v.cols(), g0.cols());
  return state;
}

SolveResult solve(ViewCollection& views, const SolverConfig& config) {
  views.validate();
  const int view_count = views.view_count();
  config.validate(view_count);
  const index_t entities = views.entity_count();
  if (config.k > entities) throw ParameterError("solver: K exceeds the entity count");

  std::vector<RegularizerSpec> regs(static_cast<size_t>(view_count));
  for (int i = 0; i < view_count; ++i) regs[static_cast<size_t>(i)] = config.reg_for_view(i);

  std::vector<double> alphas(static_cast<size_t>(view_count));
  std::vector<double> lipschitz(static_cast<size_t>(view_count));
  for (int i = 0; i < view_count; ++i) {
    double li = views.views[static_cast<size_t>(i)].ensure_lipschitz();
    if (li <= 0.0) throw ParameterError("solver: view " + std::to_string(i) + " is zero");
    lipschitz[static_cast<size_t>(i)] = li;
    alphas[static_cast<size_t>(i)] = config.step_scale / li;
  }

  SolveResult result;
  if (config.init == SolverConfig::Init::kWarm) {
    result.state = warm_start_from(config.warm_g, views);
    if (config.warm_g.cols() != config.k)
      throw ShapeError("solver: warm-start G has the wrong column count");
  } else {
    result.state.g = random_orthonormal(entities, config.k, config.seed);
    for (const auto& v : views.views) result.state.q.emplace_back(v.cols(), config.k);
  }

  const double f_initial = objective(views, result.state, regs);
  if (!std::isfinite(f_initial)) throw InvariantError("solver: initial objective not finite");

  RateCertificate cert;
  cert.f_initial = f_initial;
  if (config.gamma < 1.0) {
    cert.active = true;
    const double omega = (1.0 - config.gamma) * view_count / (2.0 * config.gamma);
    double c = omega * config.gamma * config.gamma;
    for (int i = 0; i < view_count; ++i) {
      const double a = alphas[static_cast<size_t>(i)];
      const double ci = (0.5 / a - 0.5 * lipschitz[static_cast<size_t>(i)]) * a * a;
      c = std::min(c, ci);
    }
    cert.c = c;
    cert.v = f_initial / c;  // lower bound of the objective is 0
  }

  double f_prev = f_initial;
  double cz_sum = 0.0;
  for (int r = 0; r < config.max_outer; ++r) {
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<double> q_step_norms(static_cast<size_t>(view_count), 0.0);
    for (int i = 0; i < view_count; ++i) {
      InnerLoopResult inner =
          q_inner_loop(views.views[static_cast<size_t>(i)], result.state.q[static_cast<size_t>(i)],
                       result.state.g, regs[static_cast<size_t>(i)], alphas[static_cast<size_t>(i)],
                       config.t_inner, config.inner_exit_tol);
      result.state.q[static_cast<size_t>(i)] = std::move(inner.q);
      q_step_norms[static_cast<size_t>(i)] = inner.step_norm_sq_sum;
    }

    DenseMatrix g_next = g_update(views, result.state.q, result.state.g, config.gamma);
    const double g_step = frob_norm_diff_sq(g_next, result.state.g);
    result.state.g = std::move(g_next);
    result.state.r = r + 1;

    const double f = objective(views, result.state, regs);
    if (!std::isfinite(f)) throw InvariantError("solver: objective not finite at iteration " + std::to_string(r));
    if (f > f_prev + 1e-9)
      throw InvariantError("solver: objective increased from " + std::to_string(f_prev) +
                           " to " + std::to_string(f) + " at iteration " + std::to_string(r));

    IterateDiagnostics diag;
    diag.r = r;
    diag.objective = f;
    diag.q_step_norms = q_step_norms;
    diag.g_step_norm = g_step;
    diag.z_potential = z_potential(config.gamma, alphas, g_step, q_step_norms);
    if (config.track_oracle)
      diag.subspace_dist = subspace_distance(result.state.g, *config.track_oracle);
    diag.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (cert.active) {
      cz_sum += cert.c * diag.z_potential;
      cert.cumulative_ok.push_back(cz_sum <= f_initial - f + 1e-6);
    }
    result.diagnostics.push_back(std::move(diag));

    const double delta = std::abs(f_prev - f);
    f_prev = f;
    if (delta < config.tol_objective) {
      result.certificate = std::move(cert);
      result.status = SolveStatus::kConverged;
      return result;
    }
  }
  result.certificate = std::move(cert);
  result.status = SolveStatus::kMaxIterations;
  return result;
}

}  // namespace gcca
