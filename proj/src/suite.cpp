#include "nchardy/suite.hpp"

#include <cmath>

#include "nchardy/fock.hpp"

namespace nchardy {

SuiteResult suite_corr_axioms(GraphPtr g, int trials, unsigned long seed,
                              double eps) {
  SuiteResult out{"correspondence axioms"};
  Rng rng(seed);
  AlgebraElement one = AlgebraElement::one(g);
  for (int trial = 0; trial < trials; ++trial) {
    int deg = 1 + static_cast<int>(rng() % 3);
    CorrTensor xi = random_tensor(g, deg, rng);
    CorrTensor eta = random_tensor(g, deg, rng);
    CorrTensor zeta = random_tensor(g, deg, rng);
    AlgebraElement a = random_algebra_element(g, rng);
    cx c = random_complex(rng);

    out.check(approx_equal(inner_product(xi, (c * eta) + zeta),
                           c * inner_product(xi, eta) + inner_product(xi, zeta),
                           eps),
              "linearity");
    out.check(approx_equal(inner_product(xi, module_action(one, eta, a)),
                           inner_product(xi, eta) * a, eps),
              "a-covariance");
    out.check(approx_equal(inner_product(xi, eta),
                           inner_product(eta, xi).conj(), eps),
              "conjugate symmetry");
    out.check(inner_product(xi, xi).is_positive(eps) &&
                  inner_product(xi, xi).sup_norm() > 0.0,
              "positivity");
    out.check(std::abs(corr_norm(xi) -
                       std::sqrt(inner_product(xi, xi).sup_norm())) <= eps,
              "norm consistency");
    out.check(inner_product(xi, eta).sup_norm() <=
                  corr_norm(xi) * corr_norm(eta) + eps,
              "Cauchy-Schwarz");
    if (deg >= 2) {
      CorrTensor left = random_tensor(g, 1, rng);
      out.check(approx_equal(tensor(tensor(left, xi), eta),
                             tensor(left, tensor(xi, eta)), eps),
                "tensor associativity");
      out.check(approx_equal(module_action(a, tensor(left, xi), one),
                             tensor(module_action(a, left, one), xi), eps),
                "left action respects tensor");
    }
  }
  return out;
}

SuiteResult suite_cuntz_toeplitz(GraphPtr g, int level_cap, double eps) {
  SuiteResult out{"Cuntz-Toeplitz relations"};
  auto fb = std::make_shared<FockBasis>(g, level_cap);
  int interior_cols = fb->level_offset(level_cap);
  std::vector<FockOperator> s;
  for (int e = 0; e < g->n_edges(); ++e)
    s.push_back(creation_operator(CorrTensor::delta(g, Path(*g, {e})), fb));
  std::vector<FockOperator> p;
  for (int v = 0; v < g->n_vertices(); ++v)
    p.push_back(phi_inf(AlgebraElement::indicator(g, v), fb));

  for (int v = 0; v < g->n_vertices(); ++v)
    for (int u = 0; u < g->n_vertices(); ++u)
      if (u != v)
        out.check((p[v] * p[u]).mat.cwiseAbs().maxCoeff() <= eps,
                  "(i) vertex projections are orthogonal");
  for (int e = 0; e < g->n_edges(); ++e)
    for (int f = 0; f < g->n_edges(); ++f) {
      Matrix prod = s[e].mat.adjoint() * s[f].mat;
      if (e != f) {
        out.check(prod.cwiseAbs().maxCoeff() <= eps,
                  "(ii) S_e* S_f = 0 for distinct edges");
      } else {
        Matrix gap = prod - p[g->src(e)].mat;
        out.check(gap.leftCols(interior_cols).cwiseAbs().maxCoeff() <= eps,
                  "(iii) S_e* S_e = P_{s(e)} on interior levels");
      }
    }
  for (int v = 0; v < g->n_vertices(); ++v) {
    Matrix sum = Matrix::Zero(fb->size(), fb->size());
    for (int e : g->edges_with_rng(v)) sum += s[e].mat * s[e].mat.adjoint();
    out.check(min_eig_herm(p[v].mat - sum) >= -eps,
              "(iv) sum of ranges stays under P_v");
  }
  return out;
}

SuiteResult suite_norm_identity(GraphPtr g, int trials, unsigned long seed,
                                int level_cap, double eps) {
  SuiteResult out{"creation operator norms"};
  Rng rng(seed);
  auto fb = std::make_shared<FockBasis>(g, level_cap);
  for (int trial = 0; trial < trials; ++trial) {
    int deg = 1 + static_cast<int>(rng() % 3);
    CorrTensor xi = random_tensor(g, deg, rng);
    out.check(std::abs(creation_operator(xi, fb).norm() - corr_norm(xi)) <= eps,
              "||T_xi|| = ||xi||");
  }
  return out;
}

SuiteResult suite_gauge(GraphPtr g, int level_cap, unsigned long seed) {
  SuiteResult out{"gauge Fourier analysis"};
  Rng rng(seed);
  auto fb = std::make_shared<FockBasis>(g, level_cap);
  Matrix m = random_matrix(fb->size(), fb->size(), rng);
  FockOperator x(fb, m);

  Matrix sum = Matrix::Zero(fb->size(), fb->size());
  for (int j = -level_cap; j <= level_cap; ++j) {
    FockOperator pj = gauge_fourier(x, j);
    out.check((gauge_fourier(pj, j).mat - pj.mat).cwiseAbs().maxCoeff() == 0.0,
              "Phi_j idempotent");
    for (int i = -level_cap; i <= level_cap; ++i)
      if (i != j)
        out.check(gauge_fourier(pj, i).mat.cwiseAbs().maxCoeff() == 0.0,
                  "Phi_i Phi_j = 0");
    sum += pj.mat;
  }
  out.check((sum - x.mat).cwiseAbs().maxCoeff() == 0.0,
            "X = sum_j Phi_j(X) exactly");

  // Cesaro on a random polynomial: error equals the exact weighted formula
  // and vanishes once k >> degree.
  int deg = std::min(2, level_cap);
  std::vector<CorrTensor> ts;
  for (int k = 1; k <= deg; ++k) ts.push_back(random_tensor(g, k, rng));
  HardyElement poly(random_algebra_element(g, rng), ts);
  FockOperator pm = truncate(poly, fb);
  for (int k = deg + 1; k <= deg + 3; ++k) {
    FockOperator ces = cesaro(pm, k);
    Matrix expect = Matrix::Zero(fb->size(), fb->size());
    for (int j = 0; j <= deg; ++j)
      expect += (1.0 - static_cast<double>(j) / k) * gauge_fourier(pm, j).mat;
    out.check((ces.mat - expect).cwiseAbs().maxCoeff() <= 1e-14,
              "Cesaro weights match the exact formula");
    out.check(op_norm(ces.mat - pm.mat) <=
                  (static_cast<double>(deg) / k) * op_norm(pm.mat) * (deg + 1),
              "Cesaro error bounded by degree/k");
  }
  return out;
}

}  // namespace nchardy
