#include "gcca/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcca {

namespace {

double parse_mu(const std::string& text, size_t colon) {
  if (colon == std::string::npos || colon + 1 >= text.size())
    throw ParameterError("regularizer '" + text + "' needs a weight, e.g. ridge:0.1");
  size_t used = 0;
  double mu = std::stod(text.substr(colon + 1), &used);
  if (used != text.size() - colon - 1 || mu < 0.0 || !std::isfinite(mu))
    throw ParameterError("regularizer '" + text + "': bad weight");
  return mu;
}

double row_norm(const DenseMatrix& q, index_t m) {
  double s = 0.0;
  const double* row = q.row_ptr(m);
  for (index_t k = 0; k < q.cols(); ++k) s += row[k] * row[k];
  return std::sqrt(s);
}

}  // namespace

RegularizerSpec parse_regularizer(const std::string& text) {
  if (text == "none") return {RegKind::kNone, 0.0};
  if (text == "nonneg") return {RegKind::kNonneg, 0.0};
  const size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "ridge") return {RegKind::kRidge, parse_mu(text, colon)};
  if (head == "l21") return {RegKind::kRowSparse, parse_mu(text, colon)};
  if (head == "l11") return {RegKind::kEntrySparse, parse_mu(text, colon)};
  if (head == "nonneg+l11") return {RegKind::kNonnegEntrySparse, parse_mu(text, colon)};
  throw ParameterError("unknown regularizer '" + text +
                       "' (expected none|ridge:w|l21:w|l11:w|nonneg|nonneg+l11:w)");
}

std::string format_regularizer(const RegularizerSpec& spec) {
  auto with_mu = [&](const char* head) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s:%.17g", head, spec.mu);
    return std::string(buf);
  };
  switch (spec.kind) {
    case RegKind::kNone: return "none";
    case RegKind::kRidge: return with_mu("ridge");
    case RegKind::kRowSparse: return with_mu("l21");
    case RegKind::kEntrySparse: return with_mu("l11");
    case RegKind::kNonneg: return "nonneg";
    case RegKind::kNonnegEntrySparse: return with_mu("nonneg+l11");
  }
  return "none";
}

double reg_value(const RegularizerSpec& spec, const DenseMatrix& q) {
  const double inf = std::numeric_limits<double>::infinity();
  const double* p = q.data();
  const size_t n = static_cast<size_t>(q.rows() * q.cols());
  switch (spec.kind) {
    case RegKind::kNone:
      return 0.0;
    case RegKind::kRidge: {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += p[i] * p[i];
      return 0.5 * spec.mu * s;
    }
    case RegKind::kRowSparse: {
      double s = 0.0;
      for (index_t m = 0; m < q.rows(); ++m) s += row_norm(q, m);
      return spec.mu * s;
    }
    case RegKind::kEntrySparse: {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += std::abs(p[i]);
      return spec.mu * s;
    }
    case RegKind::kNonneg: {
      for (size_t i = 0; i < n; ++i)
        if (p[i] < 0.0) return inf;
      return 0.0;
    }
    case RegKind::kNonnegEntrySparse: {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (p[i] < 0.0) return inf;
        s += p[i];  // |q| = q on the feasible set
      }
      return spec.mu * s;
    }
  }
  return 0.0;
}

DenseMatrix prox(const RegularizerSpec& spec, const DenseMatrix& h, double alpha) {
  if (alpha <= 0.0) throw ParameterError("prox: alpha must be positive");
  const double thr = alpha * spec.mu;
  DenseMatrix out = h;
  double* p = out.data();
  const size_t n = static_cast<size_t>(h.rows() * h.cols());
  switch (spec.kind) {
    case RegKind::kNone:
      break;
    case RegKind::kRidge: {
      const double f = 1.0 / (1.0 + thr);
      for (size_t i = 0; i < n; ++i) p[i] *= f;
      break;
    }
    case RegKind::kRowSparse: {
      for (index_t m = 0; m < h.rows(); ++m) {
        const double nr = row_norm(h, m);
        double* row = out.row_ptr(m);
        if (nr <= thr) {
          for (index_t k = 0; k < h.cols(); ++k) row[k] = 0.0;
        } else {
          const double f = 1.0 - thr / nr;
          for (index_t k = 0; k < h.cols(); ++k) row[k] *= f;
        }
      }
      break;
    }
    case RegKind::kEntrySparse: {
      for (size_t i = 0; i < n; ++i) {
        const double v = p[i];
        p[i] = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
      }
      break;
    }
    case RegKind::kNonneg: {
      for (size_t i = 0; i < n; ++i) p[i] = std::max(p[i], 0.0);
      break;
    }
    case RegKind::kNonnegEntrySparse: {
      for (size_t i = 0; i < n; ++i) p[i] = std::max(p[i] - thr, 0.0);
      break;
    }
  }
  return out;
}

std::set<index_t> row_support(const DenseMatrix& q, double tol) {
  if (tol < 0.0) throw ParameterError("row_support: tol must be nonnegative");
  std::set<index_t> out;
  for (index_t m = 0; m < q.rows(); ++m)
    if (row_norm(q, m) > tol) out.insert(m);
  return out;
}

double default_support_tol(const DenseMatrix& q) {
  double mx = 0.0;
  for (index_t m = 0; m < q.rows(); ++m) mx = std::max(mx, row_norm(q, m));
  return 1e-6 * mx;
}

}  // namespace gcca
