#ifndef NCHARDY_CORR_HPP
#define NCHARDY_CORR_HPP

#include <map>
#include <memory>
#include <string>

#include "nchardy/graph.hpp"
#include "nchardy/types.hpp"

namespace nchardy {

// An element of M = l^inf(G0): one complex value per vertex.
class AlgebraElement {
 public:
  explicit AlgebraElement(GraphPtr g) : graph_(std::move(g)) {
    values_ = Vector::Zero(graph_->n_vertices());
  }
  AlgebraElement(GraphPtr g, Vector values);

  static AlgebraElement one(GraphPtr g);
  static AlgebraElement indicator(GraphPtr g, int vertex);

  const GraphPtr& graph() const { return graph_; }
  const Vector& values() const { return values_; }
  cx value(int v) const { return values_(v); }
  void set(int v, cx c) { values_(v) = c; }

  AlgebraElement conj() const;                         // the adjoint a*
  bool is_selfadjoint(double eps = tol::kEq) const;
  bool is_positive(double eps = tol::kEq) const;       // coordinatewise
  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(cx c, const AlgebraElement& a);

 private:
  GraphPtr graph_;
  Vector values_;
};

bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double eps = tol::kEq);

// An element of E^{tensor k}: a complex coefficient per composable length-k
// path. Degree 0 is the M summand (coefficients on vertices). Storage is
// sparse; absent paths carry coefficient zero.
class CorrTensor {
 public:
  CorrTensor(GraphPtr g, int degree);
  CorrTensor(GraphPtr g, const AlgebraElement& a);  // degree 0

  static CorrTensor delta(GraphPtr g, const Path& p);

  const GraphPtr& graph() const { return graph_; }
  int degree() const { return degree_; }
  const std::map<Path, cx>& coeffs() const { return coeffs_; }

  cx coeff(const Path& p) const;
  // Drops the entry when c == 0; rejects paths of the wrong length.
  void set_coeff(const Path& p, cx c);

  AlgebraElement as_algebra_element() const;  // degree 0 only

  bool is_zero(double eps = 0.0) const;

  friend CorrTensor operator+(const CorrTensor& a, const CorrTensor& b);
  friend CorrTensor operator-(const CorrTensor& a, const CorrTensor& b);
  friend CorrTensor operator*(cx c, const CorrTensor& a);

 private:
  GraphPtr graph_;
  int degree_;
  std::map<Path, cx> coeffs_;
};

// <xi, eta>(v) = sum over paths with source v of conj(xi(alpha)) eta(alpha).
// Conjugate-linear in xi, linear in eta. Degrees must match.
AlgebraElement inner_product(const CorrTensor& xi, const CorrTensor& eta);

// (phi(a) xi b)(alpha) = a(r(alpha)) xi(alpha) b(s(alpha)).
CorrTensor module_action(const AlgebraElement& a, const CorrTensor& xi,
                         const AlgebraElement& b);

// (xi (x) eta)(alpha beta) = xi(alpha) eta(beta) on composable concatenations.
CorrTensor tensor(const CorrTensor& xi, const CorrTensor& eta);

// ||xi|| = max_v sqrt(<xi,xi>(v)).
double corr_norm(const CorrTensor& xi);

bool approx_equal(const CorrTensor& a, const CorrTensor& b, double eps = tol::kEq);

}  // namespace nchardy

#endif
