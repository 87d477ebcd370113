#include "gcca/decomp.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "gcca/kernels.hpp"
#include "gcca/rng.hpp"

namespace gcca {

namespace {

using EigenRowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMajor>;

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
  DenseMatrix out(m.rows(), m.cols());
  for (index_t i = 0; i < out.rows(); ++i)
    for (index_t j = 0; j < out.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

EconSvd econ_svd(const DenseMatrix& a) {
  if (a.rows() < a.cols())
    throw ShapeError("econ_svd: expected a tall matrix (rows >= cols)");
  if (a.cols() == 0) return {DenseMatrix(a.rows(), 0), {}, DenseMatrix(0, 0)};
  ConstMap m(a.data(), a.rows(), a.cols());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  EconSvd out;
  out.u = from_eigen(svd.matrixU());
  out.v = from_eigen(svd.matrixV());
  out.s.assign(svd.singularValues().data(),
               svd.singularValues().data() + svd.singularValues().size());
  return out;
}

TopkEig sym_eig_topk(const DenseMatrix& m, index_t k, index_t dense_cap) {
  if (m.rows() != m.cols()) throw ShapeError("sym_eig_topk: matrix must be square");
  if (m.rows() > dense_cap)
    throw OversizeError("sym_eig_topk: size " + std::to_string(m.rows()) +
                        " exceeds the dense cap " + std::to_string(dense_cap));
  if (k < 1 || k > m.rows()) throw ParameterError("sym_eig_topk: bad K");

  ConstMap mm(m.data(), m.rows(), m.cols());
  Eigen::MatrixXd sym = 0.5 * (mm + mm.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw ConditioningError("sym_eig_topk: eigensolver failed to converge");

  const index_t n = m.rows();
  TopkEig out;
  out.u = DenseMatrix(n, k);
  out.eigvals.resize(static_cast<size_t>(k));
  for (index_t j = 0; j < k; ++j) {
    const index_t src = n - 1 - j;  // Eigen sorts ascending
    out.eigvals[static_cast<size_t>(j)] = es.eigenvalues()(src);
    for (index_t i = 0; i < n; ++i) out.u(i, j) = es.eigenvectors()(i, src);
  }
  return out;
}

double spectral_norm(const DenseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  ConstMap m(a.data(), a.rows(), a.cols());
  if (a.rows() >= a.cols()) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m.transpose());
  return svd.singularValues()(0);
}

DenseMatrix random_orthonormal(index_t rows, index_t cols, std::uint64_t seed) {
  if (rows < cols) throw ShapeError("random_orthonormal: need rows >= cols");
  Rng rng(seed);
  DenseMatrix a(rows, cols);
  for (index_t i = 0; i < rows; ++i)
    for (index_t j = 0; j < cols; ++j) a(i, j) = rng.next_gaussian();
  return econ_svd(a).u;
}

Polar polar_factor(const DenseMatrix& a) {
  EconSvd svd = econ_svd(a);
  Polar out;
  out.s = svd.s;
  // U * V^T; V is K x K
  DenseMatrix vt(svd.v.cols(), svd.v.rows());
  for (index_t i = 0; i < svd.v.rows(); ++i)
    for (index_t j = 0; j < svd.v.cols(); ++j) vt(j, i) = svd.v(i, j);
  out.q = mat_mul(svd.u, vt);
  return out;
}

}  // namespace gcca
