#include "gcca/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gcca/rng.hpp"

namespace gcca {

namespace {

void check_spmm_shapes(const ViewMatrix& view, const DenseMatrix& d, bool transposed) {
  index_t need = transposed ? view.rows() : view.cols();
  if (d.rows() != need)
    throw ShapeError("spmm: operand has " + std::to_string(d.rows()) +
                     " rows, expected " + std::to_string(need));
}

}  // namespace

DenseMatrix spmm_serial(const ViewMatrix& view, const DenseMatrix& d) {
  check_spmm_shapes(view, d, false);
  const CsrMatrix& x = view.matrix;
  const index_t k = d.cols();
  DenseMatrix out(x.rows(), k);
  const auto& rp = x.row_ptr();
  const auto& ci = x.col_idx();
  const auto& vals = x.values();
  for (index_t i = 0; i < x.rows(); ++i) {
    double* out_row = out.row_ptr(i);
    for (index_t p = rp[i]; p < rp[i + 1]; ++p) {
      const double v = vals[static_cast<size_t>(p)];
      const double* d_row = d.row_ptr(ci[static_cast<size_t>(p)]);
      for (index_t c = 0; c < k; ++c) out_row[c] += v * d_row[c];
    }
  }
  return out;
}

DenseMatrix spmm(const ViewMatrix& view, const DenseMatrix& d) {
  check_spmm_shapes(view, d, false);
  const CsrMatrix& x = view.matrix;
  const index_t k = d.cols();
  DenseMatrix out(x.rows(), k);
  const auto& rp = x.row_ptr();
  const auto& ci = x.col_idx();
  const auto& vals = x.values();
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < x.rows(); ++i) {
    double* out_row = out.row_ptr(i);
    for (index_t p = rp[i]; p < rp[i + 1]; ++p) {
      const double v = vals[static_cast<size_t>(p)];
      const double* d_row = d.row_ptr(ci[static_cast<size_t>(p)]);
      for (index_t c = 0; c < k; ++c) out_row[c] += v * d_row[c];
    }
  }
  return out;
}

DenseMatrix spmm_t_serial(const ViewMatrix& view, const DenseMatrix& d) {
  check_spmm_shapes(view, d, true);
  const CsrMatrix& x = view.matrix;
  const index_t k = d.cols();
  DenseMatrix out(x.cols(), k);
  const auto& rp = x.row_ptr();
  const auto& ci = x.col_idx();
  const auto& vals = x.values();
  for (index_t i = 0; i < x.rows(); ++i) {
    const double* d_row = d.row_ptr(i);
    for (index_t p = rp[i]; p < rp[i + 1]; ++p) {
      double* out_row = out.row_ptr(ci[static_cast<size_t>(p)]);
      const double v = vals[static_cast<size_t>(p)];
      for (index_t c = 0; c < k; ++c) out_row[c] += v * d_row[c];
    }
  }
  return out;
}

// Scatter over rows writes to arbitrary output rows, so the parallel variant
// splits the K columns across threads: every thread owns a column slice and
// accumulates it in the same row order as the serial loop, which keeps the
// result bitwise identical for any thread count.
DenseMatrix spmm_t(const ViewMatrix& view, const DenseMatrix& d) {
  check_spmm_shapes(view, d, true);
  const CsrMatrix& x = view.matrix;
  const index_t k = d.cols();
  DenseMatrix out(x.cols(), k);
  const auto& rp = x.row_ptr();
  const auto& ci = x.col_idx();
  const auto& vals = x.values();
#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
#else
  int max_threads = 1;
#endif
  if (max_threads <= 1 || k < 2) return spmm_t_serial(view, d);
#pragma omp parallel
  {
#ifdef _OPENMP
    const int nt = omp_get_num_threads();
    const int tid = omp_get_thread_num();
#else
    const int nt = 1, tid = 0;
#endif
    const index_t c0 = k * tid / nt;
    const index_t c1 = k * (tid + 1) / nt;
    if (c0 < c1) {
      for (index_t i = 0; i < x.rows(); ++i) {
        const double* d_row = d.row_ptr(i);
        for (index_t p = rp[i]; p < rp[i + 1]; ++p) {
          double* out_row = out.row_ptr(ci[static_cast<size_t>(p)]);
          const double v = vals[static_cast<size_t>(p)];
          for (index_t c = c0; c < c1; ++c) out_row[c] += v * d_row[c];
        }
      }
    }
  }
  return out;
}

DenseMatrix spmm_cols(const ViewMatrix& view, const DenseMatrix& d,
                      const std::vector<std::uint8_t>& col_mask) {
  check_spmm_shapes(view, d, false);
  if (static_cast<index_t>(col_mask.size()) != view.cols())
    throw ShapeError("spmm_cols: mask length must equal the view's column count");
  const CsrMatrix& x = view.matrix;
  const index_t k = d.cols();
  DenseMatrix out(x.rows(), k);
  const auto& rp = x.row_ptr();
  const auto& ci = x.col_idx();
  const auto& vals = x.values();
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < x.rows(); ++i) {
    double* out_row = out.row_ptr(i);
    for (index_t p = rp[i]; p < rp[i + 1]; ++p) {
      const index_t j = ci[static_cast<size_t>(p)];
      if (!col_mask[static_cast<size_t>(j)]) continue;
      const double v = vals[static_cast<size_t>(p)];
      const double* d_row = d.row_ptr(j);
      for (index_t c = 0; c < k; ++c) out_row[c] += v * d_row[c];
    }
  }
  return out;
}

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("mat_mul: inner dimensions differ");
  DenseMatrix out(a.rows(), b.cols());
  const index_t n = b.cols();
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < a.rows(); ++i) {
    double* out_row = out.row_ptr(i);
    const double* a_row = a.row_ptr(i);
    for (index_t p = 0; p < a.cols(); ++p) {
      const double v = a_row[p];
      const double* b_row = b.row_ptr(p);
      for (index_t c = 0; c < n; ++c) out_row[c] += v * b_row[c];
    }
  }
  return out;
}

DenseMatrix mat_mul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("mat_mul_at_b: row counts differ");
  DenseMatrix out(a.cols(), b.cols());
  const index_t n = b.cols();
  for (index_t i = 0; i < a.rows(); ++i) {
    const double* a_row = a.row_ptr(i);
    const double* b_row = b.row_ptr(i);
    for (index_t p = 0; p < a.cols(); ++p) {
      double* out_row = out.row_ptr(p);
      const double v = a_row[p];
      for (index_t c = 0; c < n; ++c) out_row[c] += v * b_row[c];
    }
  }
  return out;
}

void axpy(double alpha, const DenseMatrix& x, DenseMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ShapeError("axpy: shape mismatch");
  const double* xs = x.data();
  double* ys = y.data();
  const size_t n = static_cast<size_t>(x.rows() * x.cols());
  for (size_t i = 0; i < n; ++i) ys[i] += alpha * xs[i];
}

void scale(DenseMatrix& a, double s) {
  double* p = a.data();
  const size_t n = static_cast<size_t>(a.rows() * a.cols());
  for (size_t i = 0; i < n; ++i) p[i] *= s;
}

double frob_norm_sq(const DenseMatrix& a) {
  const double* p = a.data();
  const size_t n = static_cast<size_t>(a.rows() * a.cols());
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += p[i] * p[i];
  return s;
}

double frob_norm(const DenseMatrix& a) { return std::sqrt(frob_norm_sq(a)); }

double frob_norm_diff_sq(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("frob_norm_diff_sq: shape mismatch");
  const double* pa = a.data();
  const double* pb = b.data();
  const size_t n = static_cast<size_t>(a.rows() * a.cols());
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double d = pa[i] - pb[i];
    s += d * d;
  }
  return s;
}

double inner_product(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("inner_product: shape mismatch");
  const double* pa = a.data();
  const double* pb = b.data();
  const size_t n = static_cast<size_t>(a.rows() * a.cols());
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += pa[i] * pb[i];
  return s;
}

double orthonormality_defect(const DenseMatrix& a) {
  DenseMatrix gram = mat_mul_at_b(a, a);
  for (index_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  return frob_norm(gram);
}

bool all_finite(const DenseMatrix& a) {
  const double* p = a.data();
  const size_t n = static_cast<size_t>(a.rows() * a.cols());
  for (size_t i = 0; i < n; ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

double estimate_lipschitz(const ViewMatrix& view, double tol, int max_iters,
                          std::uint64_t seed) {
  if (tol <= 0.0) throw ParameterError("estimate_lipschitz: tol must be positive");
  const index_t m = view.cols();
  if (m == 0 || view.rows() == 0 || view.matrix.nnz() == 0) return 0.0;

  Rng rng(seed);
  DenseMatrix v(m, 1);
  for (index_t i = 0; i < m; ++i) v(i, 0) = rng.next_gaussian();
  double nv = frob_norm(v);
  if (nv == 0.0) v(0, 0) = nv = 1.0;
  scale(v, 1.0 / nv);

  double rayleigh = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    DenseMatrix w = spmm(view, v);       // X v
    DenseMatrix u = spmm_t(view, w);     // X^T X v
    double next = inner_product(v, u);   // v unit-norm
    double nu = frob_norm(u);
    if (nu == 0.0) return 0.0;           // v in the null space; matrix acts as zero on it
    scale(u, 1.0 / nu);
    v = std::move(u);
    if (it > 0 && std::abs(next - rayleigh) <= tol * std::max(next, 1e-300)) {
      rayleigh = next;
      break;
    }
    rayleigh = next;
  }
  return rayleigh;
}

}  // namespace gcca
