#include "nchardy/corr.hpp"

#include <cmath>

namespace nchardy {

namespace {
void check_same_graph(const GraphPtr& a, const GraphPtr& b) {
  require(a.get() == b.get(), "operands live over different graphs");
}
}  // namespace

AlgebraElement::AlgebraElement(GraphPtr g, Vector values)
    : graph_(std::move(g)), values_(std::move(values)) {
  require(values_.size() == graph_->n_vertices(),
          "algebra element needs one value per vertex");
}

AlgebraElement AlgebraElement::one(GraphPtr g) {
  AlgebraElement a(std::move(g));
  a.values_.setOnes();
  return a;
}

AlgebraElement AlgebraElement::indicator(GraphPtr g, int vertex) {
  AlgebraElement a(std::move(g));
  a.values_(vertex) = 1.0;
  return a;
}

AlgebraElement AlgebraElement::conj() const {
  return AlgebraElement(graph_, values_.conjugate());
}

bool AlgebraElement::is_selfadjoint(double eps) const {
  return values_.imag().cwiseAbs().maxCoeff() <= eps;
}

bool AlgebraElement::is_positive(double eps) const {
  return is_selfadjoint(eps) && values_.real().minCoeff() >= -eps;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  check_same_graph(a.graph_, b.graph_);
  return AlgebraElement(a.graph_, a.values_ + b.values_);
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  check_same_graph(a.graph_, b.graph_);
  return AlgebraElement(a.graph_, a.values_ - b.values_);
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  check_same_graph(a.graph_, b.graph_);
  return AlgebraElement(a.graph_, a.values_.cwiseProduct(b.values_));
}

AlgebraElement operator*(cx c, const AlgebraElement& a) {
  return AlgebraElement(a.graph_, c * a.values_);
}

bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double eps) {
  return a.graph().get() == b.graph().get() &&
         (a.values() - b.values()).cwiseAbs().maxCoeff() <= eps;
}

CorrTensor::CorrTensor(GraphPtr g, int degree)
    : graph_(std::move(g)), degree_(degree) {
  require(degree >= 0, "tensor degree must be nonnegative");
}

CorrTensor::CorrTensor(GraphPtr g, const AlgebraElement& a)
    : graph_(std::move(g)), degree_(0) {
  for (int v = 0; v < graph_->n_vertices(); ++v)
    set_coeff(Path(v), a.value(v));
}

CorrTensor CorrTensor::delta(GraphPtr g, const Path& p) {
  CorrTensor t(std::move(g), p.length());
  t.set_coeff(p, 1.0);
  return t;
}

cx CorrTensor::coeff(const Path& p) const {
  auto it = coeffs_.find(p);
  return it == coeffs_.end() ? cx(0.0) : it->second;
}

void CorrTensor::set_coeff(const Path& p, cx c) {
  require(p.length() == degree_, "path length does not match tensor degree");
  if (c == cx(0.0))
    coeffs_.erase(p);
  else
    coeffs_[p] = c;
}

AlgebraElement CorrTensor::as_algebra_element() const {
  require(degree_ == 0, "only degree-0 tensors are algebra elements");
  AlgebraElement a(graph_);
  for (const auto& [p, c] : coeffs_) a.set(p.src(*graph_), c);
  return a;
}

bool CorrTensor::is_zero(double eps) const {
  for (const auto& [p, c] : coeffs_)
    if (std::abs(c) > eps) return false;
  return true;
}

CorrTensor operator+(const CorrTensor& a, const CorrTensor& b) {
  check_same_graph(a.graph_, b.graph_);
  require(a.degree_ == b.degree_, "degree mismatch");
  CorrTensor out = a;
  for (const auto& [p, c] : b.coeffs_) out.set_coeff(p, out.coeff(p) + c);
  return out;
}

CorrTensor operator-(const CorrTensor& a, const CorrTensor& b) {
  return a + (cx(-1.0) * b);
}

CorrTensor operator*(cx c, const CorrTensor& a) {
  CorrTensor out(a.graph_, a.degree_);
  if (c == cx(0.0)) return out;
  for (const auto& [p, v] : a.coeffs_) out.set_coeff(p, c * v);
  return out;
}

AlgebraElement inner_product(const CorrTensor& xi, const CorrTensor& eta) {
  check_same_graph(xi.graph(), eta.graph());
  require(xi.degree() == eta.degree(), "inner_product: degree mismatch");
  const DirectedGraph& g = *xi.graph();
  AlgebraElement a(xi.graph());
  for (const auto& [p, c] : xi.coeffs()) {
    cx other = eta.coeff(p);
    if (other == cx(0.0)) continue;
    int v = p.src(g);
    a.set(v, a.value(v) + std::conj(c) * other);
  }
  return a;
}

CorrTensor module_action(const AlgebraElement& a, const CorrTensor& xi,
                         const AlgebraElement& b) {
  check_same_graph(a.graph(), xi.graph());
  check_same_graph(xi.graph(), b.graph());
  const DirectedGraph& g = *xi.graph();
  CorrTensor out(xi.graph(), xi.degree());
  for (const auto& [p, c] : xi.coeffs())
    out.set_coeff(p, a.value(p.rng(g)) * c * b.value(p.src(g)));
  return out;
}

CorrTensor tensor(const CorrTensor& xi, const CorrTensor& eta) {
  check_same_graph(xi.graph(), eta.graph());
  const DirectedGraph& g = *xi.graph();
  CorrTensor out(xi.graph(), xi.degree() + eta.degree());
  for (const auto& [p, c] : xi.coeffs()) {
    for (const auto& [q, d] : eta.coeffs()) {
      if (!p.composable_with(g, q)) continue;
      Path pq = p.concat(g, q);
      out.set_coeff(pq, out.coeff(pq) + c * d);
    }
  }
  return out;
}

double corr_norm(const CorrTensor& xi) {
  AlgebraElement gram = inner_product(xi, xi);
  double m = 0.0;
  for (int v = 0; v < xi.graph()->n_vertices(); ++v)
    m = std::max(m, gram.value(v).real());
  return std::sqrt(m);
}

bool approx_equal(const CorrTensor& a, const CorrTensor& b, double eps) {
  if (a.graph().get() != b.graph().get() || a.degree() != b.degree())
    return false;
  return (a - b).is_zero(eps);
}

}  // namespace nchardy
