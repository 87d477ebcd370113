#include "gcca/synth.hpp"

#include <algorithm>
#include <cmath>

#include "gcca/kernels.hpp"
#include "gcca/rng.hpp"

namespace gcca {

void SynthConfig::validate() const {
  if (l < 1 || m < 1 || n < 1 || i < 1) throw ParameterError("synth: dimensions must be positive");
  if (n > std::min(l, m)) throw ParameterError("synth: need N <= min(L, M)");
  if (sigma < 0.0) throw ParameterError("synth: sigma must be nonnegative");
  if (rho && !(*rho > 0.0 && *rho <= 1.0)) throw ParameterError("synth: rho must be in (0, 1]");
  if (outliers && outliers->count < 0) throw ParameterError("synth: negative outlier count");
}

double solve_mask_density(double rho, index_t n, double sigma) {
  if (!(rho > 0.0 && rho <= 1.0)) throw ParameterError("solve_mask_density: rho in (0,1] required");
  // modeled entry density of Z*A + sigma*N with all factors masked at rate p:
  // 1 - (1-p^2)^N * (1 - [sigma>0] p)
  auto density = [&](double p) {
    const double prod_zero = std::pow(1.0 - p * p, static_cast<double>(n));
    const double noise_zero = sigma > 0.0 ? 1.0 - p : 1.0;
    return 1.0 - prod_zero * noise_zero;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (density(mid) < rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

DenseMatrix dense_gaussian(index_t rows, index_t cols, Rng& rng) {
  DenseMatrix out(rows, cols);
  double* p = out.data();
  const size_t n = static_cast<size_t>(rows * cols);
  for (size_t i = 0; i < n; ++i) p[i] = rng.next_gaussian();
  return out;
}

// Bernoulli(p)-masked gaussian in CSR form; columns visited via geometric
// gaps so the cost is O(nnz), not O(rows*cols).
CsrMatrix sparse_gaussian(index_t rows, index_t cols, double p, Rng& rng) {
  std::vector<CsrMatrix::Triplet> trips;
  trips.reserve(static_cast<size_t>(p * static_cast<double>(rows) * static_cast<double>(cols) * 1.2) + 16);
  if (p >= 1.0) {
    for (index_t i = 0; i < rows; ++i)
      for (index_t j = 0; j < cols; ++j) trips.push_back({i, j, rng.next_gaussian()});
    return CsrMatrix::from_triplets(rows, cols, std::move(trips));
  }
  const double log1mp = std::log1p(-p);
  for (index_t i = 0; i < rows; ++i) {
    index_t col = -1;
    for (;;) {
      const double u = rng.next_uniform();
      const double gap = std::floor(std::log(u) / log1mp) + 1.0;
      if (gap > static_cast<double>(cols)) break;
      col += static_cast<index_t>(gap);
      if (col >= cols) break;
      trips.push_back({i, col, rng.next_gaussian()});
    }
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(trips));
}

// C = A * B for CSR operands, row-wise with a dense accumulator of length cols(B)
CsrMatrix spgemm(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("spgemm: inner dimensions differ");
  std::vector<double> acc(static_cast<size_t>(b.cols()), 0.0);
  std::vector<index_t> touched;
  std::vector<CsrMatrix::Triplet> trips;
  for (index_t i = 0; i < a.rows(); ++i) {
    touched.clear();
    for (index_t pa = a.row_ptr()[i]; pa < a.row_ptr()[i + 1]; ++pa) {
      const index_t kk = a.col_idx()[static_cast<size_t>(pa)];
      const double va = a.values()[static_cast<size_t>(pa)];
      for (index_t pb = b.row_ptr()[kk]; pb < b.row_ptr()[kk + 1]; ++pb) {
        const index_t j = b.col_idx()[static_cast<size_t>(pb)];
        if (acc[static_cast<size_t>(j)] == 0.0) touched.push_back(j);
        acc[static_cast<size_t>(j)] += va * b.values()[static_cast<size_t>(pb)];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (index_t j : touched) {
      if (acc[static_cast<size_t>(j)] != 0.0)
        trips.push_back({i, j, acc[static_cast<size_t>(j)]});
      acc[static_cast<size_t>(j)] = 0.0;
    }
  }
  return CsrMatrix::from_triplets(a.rows(), b.cols(), std::move(trips));
}

double frob_sq_csr(const CsrMatrix& m) {
  double s = 0.0;
  for (double v : m.values()) s += v * v;
  return s;
}

CsrMatrix scale_csr(const CsrMatrix& m, double f) {
  std::vector<CsrMatrix::Triplet> trips;
  trips.reserve(static_cast<size_t>(m.nnz()));
  for (index_t i = 0; i < m.rows(); ++i)
    for (index_t p = m.row_ptr()[i]; p < m.row_ptr()[i + 1]; ++p)
      trips.push_back({i, m.col_idx()[static_cast<size_t>(p)],
                       f * m.values()[static_cast<size_t>(p)]});
  return CsrMatrix::from_triplets(m.rows(), m.cols(), std::move(trips));
}

// [A, B] column concatenation
CsrMatrix hcat(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("hcat: row counts differ");
  std::vector<CsrMatrix::Triplet> trips;
  trips.reserve(static_cast<size_t>(a.nnz() + b.nnz()));
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      trips.push_back({i, a.col_idx()[static_cast<size_t>(p)], a.values()[static_cast<size_t>(p)]});
    for (index_t p = b.row_ptr()[i]; p < b.row_ptr()[i + 1]; ++p)
      trips.push_back({i, a.cols() + b.col_idx()[static_cast<size_t>(p)],
                       b.values()[static_cast<size_t>(p)]});
  }
  return CsrMatrix::from_triplets(a.rows(), a.cols() + b.cols(), std::move(trips));
}

CsrMatrix add_scaled(const CsrMatrix& a, double f, const CsrMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("add: shape mismatch");
  std::vector<CsrMatrix::Triplet> trips;
  trips.reserve(static_cast<size_t>(a.nnz() + b.nnz()));
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p)
      trips.push_back({i, a.col_idx()[static_cast<size_t>(p)], a.values()[static_cast<size_t>(p)]});
    for (index_t p = b.row_ptr()[i]; p < b.row_ptr()[i + 1]; ++p)
      trips.push_back({i, b.col_idx()[static_cast<size_t>(p)], f * b.values()[static_cast<size_t>(p)]});
  }
  return CsrMatrix::from_triplets(a.rows(), a.cols(), std::move(trips));
}

}  // namespace

SynthDataset gen(const SynthConfig& config) {
  config.validate();
  const index_t out_count = config.outliers ? config.outliers->count : 0;
  const bool matched = config.outliers && config.outliers->matched_power;
  const double p = config.rho ? solve_mask_density(*config.rho, config.n, config.sigma) : 1.0;

  SynthDataset ds;
  Rng z_rng(derive_seed(config.seed, 0));
  CsrMatrix z = config.rho ? sparse_gaussian(config.l, config.n, p, z_rng)
                           : CsrMatrix::from_dense(dense_gaussian(config.l, config.n, z_rng));
  ds.ground_truth_z = z;

  for (int i = 0; i < config.i; ++i) {
    const std::uint64_t vseed = derive_seed(config.seed, static_cast<std::uint64_t>(i) + 1);
    ds.view_seeds.push_back(vseed);
    Rng rng(vseed);

    CsrMatrix a = config.rho ? sparse_gaussian(config.n, config.m, p, rng)
                             : CsrMatrix::from_dense(dense_gaussian(config.n, config.m, rng));
    CsrMatrix y = spgemm(z, a);

    if (out_count > 0) {
      CsrMatrix o = config.rho ? sparse_gaussian(config.l, out_count, p, rng)
                               : CsrMatrix::from_dense(dense_gaussian(config.l, out_count, rng));
      if (matched && o.nnz() > 0) {
        const double clean_power = frob_sq_csr(y) / (static_cast<double>(config.l) * static_cast<double>(config.m));
        const double out_power = frob_sq_csr(o) / (static_cast<double>(config.l) * static_cast<double>(out_count));
        if (out_power > 0.0) o = scale_csr(o, std::sqrt(clean_power / out_power));
      }
      y = hcat(y, o);
    }

    CsrMatrix x = y;
    if (config.sigma > 0.0) {
      CsrMatrix noise = config.rho
                            ? sparse_gaussian(config.l, y.cols(), p, rng)
                            : CsrMatrix::from_dense(dense_gaussian(config.l, y.cols(), rng));
      x = add_scaled(y, config.sigma, noise);
    }

    ds.realized_density.push_back(x.density());
    ds.views.views.push_back(ViewMatrix{std::move(x), std::nullopt, i});

    std::vector<index_t> clean(static_cast<size_t>(config.m));
    for (index_t c = 0; c < config.m; ++c) clean[static_cast<size_t>(c)] = c;
    std::vector<index_t> outl(static_cast<size_t>(out_count));
    for (index_t c = 0; c < out_count; ++c) outl[static_cast<size_t>(c)] = config.m + c;
    ds.clean_cols.push_back(std::move(clean));
    ds.outlier_cols.push_back(std::move(outl));
  }
  return ds;
}

FeatureMetrics feature_metrics(const ViewCollection& views,
                               const std::vector<std::vector<index_t>>& clean_cols,
                               const std::vector<std::vector<index_t>>& outlier_cols,
                               const std::vector<DenseMatrix>& q, const DenseMatrix& g) {
  views.validate();
  const int view_count = views.view_count();
  if (q.size() != static_cast<size_t>(view_count) ||
      clean_cols.size() != static_cast<size_t>(view_count) ||
      outlier_cols.size() != static_cast<size_t>(view_count))
    throw ShapeError("feature_metrics: per-view inputs disagree with the view count");

  FeatureMetrics out;
  for (int i = 0; i < view_count; ++i) {
    const auto& view = views.views[static_cast<size_t>(i)];
    std::vector<std::uint8_t> clean_mask(static_cast<size_t>(view.cols()), 0);
    std::vector<std::uint8_t> out_mask(static_cast<size_t>(view.cols()), 0);
    for (index_t c : clean_cols[static_cast<size_t>(i)]) clean_mask.at(static_cast<size_t>(c)) = 1;
    for (index_t c : outlier_cols[static_cast<size_t>(i)]) out_mask.at(static_cast<size_t>(c)) = 1;

    DenseMatrix clean_fit = spmm_cols(view, q[static_cast<size_t>(i)], clean_mask);
    out.metric1 += frob_norm_diff_sq(clean_fit, g);
    DenseMatrix outlier_fit = spmm_cols(view, q[static_cast<size_t>(i)], out_mask);
    out.metric2 += frob_norm_sq(outlier_fit);
  }
  out.metric1 /= view_count;
  out.metric2 /= view_count;
  return out;
}

FeatureMetrics feature_metrics(const SynthDataset& dataset, const std::vector<DenseMatrix>& q,
                               const DenseMatrix& g) {
  return feature_metrics(dataset.views, dataset.clean_cols, dataset.outlier_cols, q, g);
}

}  // namespace gcca
