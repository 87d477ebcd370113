#pragma once

#include <set>
#include <string>

#include "gcca/dense_matrix.hpp"

namespace gcca {

enum class RegKind {
  kNone,
  kRidge,            // (mu/2) * ||Q||_F^2
  kRowSparse,        // mu * sum_m ||Q(m,:)||_2
  kEntrySparse,      // mu * sum |Q(m,k)|
  kNonneg,           // indicator of Q >= 0
  kNonnegEntrySparse // indicator + mu * sum |Q(m,k)|
};

struct RegularizerSpec {
  RegKind kind = RegKind::kNone;
  double mu = 0.0;

  void validate() const {
    if (mu < 0.0) throw ParameterError("regularizer: mu must be nonnegative");
  }
};

// CLI/config syntax: none | ridge:0.1 | l21:0.05 | l11:0.05 | nonneg | nonneg+l11:0.05
RegularizerSpec parse_regularizer(const std::string& text);
std::string format_regularizer(const RegularizerSpec& spec);

// g(Q); +infinity for indicator kinds with infeasible Q
double reg_value(const RegularizerSpec& spec, const DenseMatrix& q);

// argmin_Q 0.5*||Q - H||_F^2 + alpha * g(Q), in closed form
DenseMatrix prox(const RegularizerSpec& spec, const DenseMatrix& h, double alpha);

// indices m with ||Q(m,:)||_2 > tol
std::set<index_t> row_support(const DenseMatrix& q, double tol);

// scale-free default threshold for row_support: 1e-6 * (max row norm)
double default_support_tol(const DenseMatrix& q);

}  // namespace gcca
