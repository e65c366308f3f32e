#include "nchardy/random.hpp"

#include <Eigen/QR>

namespace nchardy {

cx random_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double re = n(rng);
  double im = n(rng);
  return cx(re, im) / std::sqrt(2.0);
}

AlgebraElement random_algebra_element(GraphPtr g, Rng& rng) {
  AlgebraElement a(g);
  for (int v = 0; v < g->n_vertices(); ++v) a.set(v, random_complex(rng));
  return a;
}

CorrTensor random_tensor(GraphPtr g, int degree, Rng& rng) {
  CorrTensor t(g, degree);
  for (const Path& p : paths_of_length(*g, degree))
    t.set_coeff(p, random_complex(rng));
  return t;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
  return m;
}

Matrix random_unitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  Matrix q = qr.householderQ();
  // Fix the phase so the factorization is unique-ish; keeps tests stable.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    cx d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

Matrix random_psd(Eigen::Index n, Rng& rng) {
  Matrix m = random_matrix(n, n, rng);
  return m * m.adjoint();
}

}  // namespace nchardy
