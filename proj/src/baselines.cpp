#include "gcca/baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gcca/kernels.hpp"
#include "gcca/rng.hpp"
#include "gcca/solver.hpp"

namespace gcca {

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (index_t i = 0; i < a.rows(); ++i)
    for (index_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  return out;
}

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(m.rows(), m.cols());
  for (index_t i = 0; i < out.rows(); ++i)
    for (index_t j = 0; j < out.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

double ridge_mu(const std::vector<RegularizerSpec>& regs, int i) {
  if (regs.empty()) return 0.0;
  const RegularizerSpec& spec = regs.size() == 1 ? regs.front() : regs[static_cast<size_t>(i)];
  if (spec.kind == RegKind::kNone) return 0.0;
  if (spec.kind == RegKind::kRidge) return spec.mu;
  throw ParameterError("eigen oracle handles only ridge or none regularizers");
}

// (X^T X + mu I)^{-1} applied to the columns of B, dense, with a conditioning
// check when mu = 0
Eigen::MatrixXd whitened_solve(const Eigen::MatrixXd& x, double mu, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd s = x.transpose() * x;
  s.diagonal().array() += mu;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (lmax <= 0.0 || lmin <= 1e-12 * lmax)
    throw ConditioningError(
        "X^T X + mu I is numerically singular (mu = " + std::to_string(mu) +
        "); use mu > 0 or full-column-rank views");
  return es.eigenvectors() *
         (es.eigenvalues().cwiseInverse().asDiagonal() * (es.eigenvectors().transpose() * b));
}

}  // namespace

EigenOracleResult eigen_maxvar(const ViewCollection& views,
                               const std::vector<RegularizerSpec>& regs, index_t k,
                               index_t dense_cap) {
  views.validate();
  const index_t entities = views.entity_count();
  if (entities > dense_cap)
    throw OversizeError("eigen_maxvar: L = " + std::to_string(entities) +
                        " exceeds the dense cap " + std::to_string(dense_cap));
  if (k < 1 || k > entities) throw ParameterError("eigen_maxvar: bad K");

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(entities, entities);
  for (int i = 0; i < views.view_count(); ++i) {
    const auto& view = views.views[static_cast<size_t>(i)];
    Eigen::MatrixXd x = to_eigen(view.matrix.to_dense());
    m.noalias() += x * whitened_solve(x, ridge_mu(regs, i), x.transpose());
  }

  const index_t k_ext = std::min<index_t>(k + 1, entities);
  TopkEig eig = sym_eig_topk(from_eigen(m), k_ext, dense_cap);

  EigenOracleResult out;
  out.eigvals = eig.eigvals;
  out.u1 = DenseMatrix(entities, k);
  for (index_t i = 0; i < entities; ++i)
    for (index_t j = 0; j < k; ++j) out.u1(i, j) = eig.u(i, j);
  out.g_opt = out.u1;
  out.q = ridge_q_for_g(views, regs, out.g_opt, dense_cap);

  SolverState state;
  state.g = out.g_opt;
  state.q = out.q;
  out.f_opt = objective(views, state, regs);
  out.ratio = k_ext > k ? eig.eigvals[static_cast<size_t>(k)] / eig.eigvals[static_cast<size_t>(k - 1)]
                        : 0.0;
  return out;
}

std::vector<DenseMatrix> ridge_q_for_g(const ViewCollection& views,
                                       const std::vector<RegularizerSpec>& regs,
                                       const DenseMatrix& g, index_t dense_cap) {
  std::vector<DenseMatrix> q;
  for (int i = 0; i < views.view_count(); ++i) {
    const auto& view = views.views[static_cast<size_t>(i)];
    if (view.cols() > dense_cap)
      throw OversizeError("ridge_q_for_g: M_i exceeds the dense cap");
    Eigen::MatrixXd x = to_eigen(view.matrix.to_dense());
    Eigen::MatrixXd xtg = x.transpose() * to_eigen(g);
    q.push_back(from_eigen(whitened_solve(x, ridge_mu(regs, i), xtg)));
  }
  return q;
}

namespace {

// Thin orthonormal basis of the columns of A (dense QR).
Eigen::MatrixXd orth(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

struct TruncatedSvd {
  Eigen::MatrixXd u;       // L x P
  Eigen::VectorXd s;       // P
};

TruncatedSvd truncated_svd(const ViewMatrix& view, index_t p, index_t dense_cap,
                           std::uint64_t seed) {
  const index_t rows = view.rows();
  const index_t cols = view.cols();
  if (std::max(rows, cols) <= dense_cap) {
    Eigen::MatrixXd x = to_eigen(view.matrix.to_dense());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU);
    return {svd.matrixU().leftCols(p), svd.singularValues().head(p)};
  }
  // randomized block power iteration: 20 iterations, oversampling 10
  const index_t block = std::min<index_t>(p + 10, std::min(rows, cols));
  Rng rng(seed);
  DenseMatrix omega(cols, block);
  for (index_t i = 0; i < cols; ++i)
    for (index_t j = 0; j < block; ++j) omega(i, j) = rng.next_gaussian();
  Eigen::MatrixXd y = to_eigen(spmm(view, omega));
  for (int it = 0; it < 20; ++it) {
    Eigen::MatrixXd q = orth(y);
    DenseMatrix w = from_eigen(q);
    y = to_eigen(spmm(view, spmm_t(view, w)));
  }
  Eigen::MatrixXd q = orth(y);
  DenseMatrix qd = from_eigen(q);
  Eigen::MatrixXd w = to_eigen(spmm_t(view, qd));  // X^T Q, cols x block
  Eigen::BDCSVD<Eigen::MatrixXd> svd(w.transpose(), Eigen::ComputeThinU);
  Eigen::MatrixXd u = q * svd.matrixU();
  return {u.leftCols(p), svd.singularValues().head(p)};
}

}  // namespace

DenseMatrix mvlsa(const ViewCollection& views, const MvlsaConfig& config, index_t k,
                  index_t dense_cap) {
  views.validate();
  if (config.p < k) throw ParameterError("mvlsa: P must be at least K");
  if (config.mu < 0.0) throw ParameterError("mvlsa: mu must be nonnegative");
  const index_t entities = views.entity_count();
  for (const auto& v : views.views)
    if (config.p > std::min(entities, v.cols()))
      throw ParameterError("mvlsa: P exceeds min(L, M_i) for view " + std::to_string(v.id));

  const int view_count = views.view_count();
  DenseMatrix stacked(entities, config.p * view_count);
  for (int i = 0; i < view_count; ++i) {
    const auto& view = views.views[static_cast<size_t>(i)];
    TruncatedSvd svd = truncated_svd(view, config.p, dense_cap,
                                     derive_seed(0x6d766c7361ULL, static_cast<std::uint64_t>(i)));
    for (index_t jp = 0; jp < config.p; ++jp) {
      const double s2 = svd.s(jp) * svd.s(jp);
      const double d = config.mu > 0.0 ? s2 / (s2 + config.mu) : 1.0;
      const double w = std::sqrt(d);
      for (index_t row = 0; row < entities; ++row)
        stacked(row, static_cast<index_t>(i) * config.p + jp) = w * svd.u(row, jp);
    }
  }
  EconSvd svd = econ_svd(stacked);
  DenseMatrix g(entities, k);
  for (index_t i = 0; i < entities; ++i)
    for (index_t j = 0; j < k; ++j) g(i, j) = svd.u(i, j);
  return g;
}

double subspace_distance(const DenseMatrix& g, const DenseMatrix& u1) {
  if (g.rows() != u1.rows() || g.cols() != u1.cols())
    throw ShapeError("subspace_distance: shapes differ");
  DenseMatrix proj = mat_mul(u1, mat_mul_at_b(u1, g));  // U1 (U1^T G)
  DenseMatrix resid = g;
  axpy(-1.0, proj, resid);
  return spectral_norm(resid);
}

RateFit rate_fit(const std::vector<double>& dist_series, const EigenOracleResult& oracle) {
  (void)oracle;
  const size_t n = dist_series.size();
  if (n < 10) throw InsufficientDataError("rate_fit: need at least 10 points");

  // terminal plateau: compare the median of the last five points against the
  // median of the five before them; if the tail stopped decaying, its median
  // is the floor
  auto median_of = [&](size_t lo, size_t hi) {
    std::vector<double> w(dist_series.begin() + static_cast<long>(lo),
                          dist_series.begin() + static_cast<long>(hi));
    std::sort(w.begin(), w.end());
    return w[w.size() / 2];
  };
  double floor = 0.0;
  if (n >= 10) {
    const double tail = median_of(n - 5, n);
    const double before = median_of(n - 10, n - 5);
    if (tail >= 0.8 * before) floor = tail;
  }

  size_t pre = 0;
  while (pre < n && dist_series[pre] > std::max(10.0 * floor, 0.0) &&
         dist_series[pre] - floor > 0.0)
    ++pre;
  if (pre < 10)
    throw InsufficientDataError("rate_fit: only " + std::to_string(pre) +
                                " pre-floor points; need at least 10");

  // least squares of log(dist - floor) against the iteration index
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t r = 0; r < pre; ++r) {
    const double x = static_cast<double>(r);
    const double y = std::log(dist_series[r] - floor);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pre);
  RateFit out;
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.floor = floor;
  out.pre_floor_points = static_cast<int>(pre);
  return out;
}

}  // namespace gcca
