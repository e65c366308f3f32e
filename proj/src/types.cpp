#include "nchardy/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace nchardy {

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  // sqrt of the largest eigenvalue of the smaller Gram matrix; cheaper and
  // accurate enough compared to a full SVD at these sizes.
  Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.adjoint())
                                     : Matrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, top));
}

double min_eig_herm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Matrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix psd_sqrt(const Matrix& a, double clip) {
  Matrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -clip)
      throw ContractViolation("psd_sqrt: matrix is not positive semidefinite");
    ev(i) = std::sqrt(std::max(0.0, ev(i)));
  }
  return es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<cx>() *
         es.eigenvectors().adjoint();
}

Matrix null_space(const Matrix& a, double rel_tol) {
  if (a.rows() == 0)  // no constraints: everything is in the kernel
    return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() ? sv(0) * rel_tol : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

Matrix column_space(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return Matrix::Zero(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = sv.size() ? sv(0) * rel_tol : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace nchardy
