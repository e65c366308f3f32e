#include "nchardy/fock.hpp"

#include <algorithm>
#include <cmath>

#include "nchardy/kernels.hpp"

namespace nchardy {

FockBasis::FockBasis(GraphPtr g, int level_cap)
    : graph_(std::move(g)), cap_(level_cap) {
  require(cap_ >= 0, "level cap must be nonnegative");
  offsets_.push_back(0);
  for (int l = 0; l <= cap_; ++l) {
    for (Path& p : paths_of_length(*graph_, l)) paths_.push_back(std::move(p));
    offsets_.push_back(static_cast<int>(paths_.size()));
  }
  for (int i = 0; i < size(); ++i) index_.emplace(paths_[i], i);
}

int FockBasis::index(const Path& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

int FockBasis::level_of(int i) const { return paths_.at(i).length(); }

Matrix FockBasis::level_projection(int level) const {
  Matrix p = Matrix::Zero(size(), size());
  if (level < 0 || level > cap_) return p;
  for (int i = level_offset(level); i < level_offset(level) + level_size(level); ++i)
    p(i, i) = 1.0;
  return p;
}

FockOperator::FockOperator(FockBasisPtr b, Matrix m, std::string lab)
    : basis(std::move(b)), mat(std::move(m)), label(std::move(lab)) {
  require(mat.rows() == basis->size() && mat.cols() == basis->size(),
          "operator dimensions do not match the basis");
}

FockOperator FockOperator::zero(FockBasisPtr b, std::string lab) {
  int n = b->size();
  return FockOperator(std::move(b), Matrix::Zero(n, n), std::move(lab));
}

FockOperator FockOperator::identity(FockBasisPtr b, std::string lab) {
  int n = b->size();
  return FockOperator(std::move(b), Matrix::Identity(n, n), std::move(lab));
}

FockOperator FockOperator::adjoint() const {
  return FockOperator(basis, mat.adjoint(), label.empty() ? "" : label + "*");
}

namespace {
void check_same_basis(const FockOperator& a, const FockOperator& b) {
  require(a.basis.get() == b.basis.get(), "operators live on different bases");
}
}  // namespace

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  check_same_basis(a, b);
  return FockOperator(a.basis, a.mat + b.mat);
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  check_same_basis(a, b);
  return FockOperator(a.basis, a.mat - b.mat);
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  check_same_basis(a, b);
  return FockOperator(a.basis, a.mat * b.mat);
}

FockOperator operator*(cx c, const FockOperator& a) {
  return FockOperator(a.basis, c * a.mat);
}

HardyElement::HardyElement(AlgebraElement a0, std::vector<CorrTensor> tensors)
    : a0_(std::move(a0)), tensors_(std::move(tensors)) {
  for (std::size_t i = 0; i < tensors_.size(); ++i)
    require(tensors_[i].degree() == static_cast<int>(i) + 1,
            "tensor list must hold degrees 1..n in order");
}

HardyElement::HardyElement(AlgebraElement a0, std::function<CorrTensor(int)> rule)
    : a0_(std::move(a0)), rule_(std::move(rule)) {}

HardyElement HardyElement::polynomial(GraphPtr g, std::vector<CorrTensor> tensors) {
  return HardyElement(AlgebraElement(std::move(g)), std::move(tensors));
}

HardyElement HardyElement::from_tensor(const CorrTensor& t) {
  if (t.degree() == 0)
    return HardyElement(t.as_algebra_element(), std::vector<CorrTensor>{});
  std::vector<CorrTensor> ts;
  for (int k = 1; k < t.degree(); ++k) ts.emplace_back(t.graph(), k);
  ts.push_back(t);
  return HardyElement(AlgebraElement(t.graph()), std::move(ts));
}

CorrTensor HardyElement::tensor(int k) const {
  require(k >= 1, "series terms start at degree 1");
  if (k <= static_cast<int>(tensors_.size())) return tensors_[k - 1];
  if (rule_) {
    CorrTensor t = rule_(k);
    require(t.degree() == k, "generator rule produced the wrong degree");
    return t;
  }
  return CorrTensor(a0_.graph(), k);
}

HardyElement HardyElement::scaled(cx c) const {
  HardyElement out = *this;
  out.a0_ = c * out.a0_;
  for (auto& t : out.tensors_) t = c * t;
  if (out.rule_) {
    auto inner = rule_;
    out.rule_ = [inner, c](int k) { return c * inner(k); };
  }
  return out;
}

FockOperator creation_operator(const CorrTensor& xi, FockBasisPtr basis) {
  require(xi.graph().get() == basis->graph().get(),
          "tensor and basis live over different graphs");
  const int k = xi.degree();
  const int cap = basis->level_cap();
  require(k <= cap, "tensor degree exceeds the level cap");
  if (k == 0) return phi_inf(xi.as_algebra_element(), basis);

  const DirectedGraph& g = *basis->graph();
  const FockBasis& fb = *basis;
  Matrix mat = kernels::assemble_columns(
      fb.size(), fb.size(), [&](Eigen::Index col, Eigen::Ref<Vector> out) {
        const Path& beta = fb.path(static_cast<int>(col));
        if (beta.length() + k > cap) return;
        for (const auto& [alpha, c] : xi.coeffs()) {
          if (!alpha.composable_with(g, beta)) continue;
          out(fb.index(alpha.concat(g, beta))) += c;
        }
      });
  return FockOperator(std::move(basis), std::move(mat), "T_xi");
}

FockOperator phi_inf(const AlgebraElement& a, FockBasisPtr basis) {
  require(a.graph().get() == basis->graph().get(),
          "algebra element and basis live over different graphs");
  const DirectedGraph& g = *basis->graph();
  Vector diag(basis->size());
  for (int i = 0; i < basis->size(); ++i)
    diag(i) = a.value(basis->path(i).rng(g));
  return FockOperator(std::move(basis), diag.asDiagonal(), "phi_inf(a)");
}

FockOperator gauge_fourier(const FockOperator& x, int j) {
  const FockBasis& fb = *x.basis;
  Matrix out = Matrix::Zero(fb.size(), fb.size());
  for (int k = 0; k <= fb.level_cap(); ++k) {
    int kj = k + j;
    if (kj < 0 || kj > fb.level_cap()) continue;
    out.block(fb.level_offset(kj), fb.level_offset(k), fb.level_size(kj),
              fb.level_size(k)) =
        x.mat.block(fb.level_offset(kj), fb.level_offset(k),
                    fb.level_size(kj), fb.level_size(k));
  }
  return FockOperator(x.basis, std::move(out));
}

FockOperator cesaro(const FockOperator& x, int k) {
  require(k >= 1, "Cesaro index must be positive");
  FockOperator out = FockOperator::zero(x.basis);
  for (int j = -(k - 1); j <= k - 1; ++j) {
    double w = 1.0 - std::abs(j) / static_cast<double>(k);
    out = out + cx(w) * gauge_fourier(x, j);
  }
  return out;
}

CorrTensor fourier_tensor(const FockOperator& x, int k, double tolerance) {
  require(k >= 1, "fourier_tensor needs degree k >= 1");
  const FockBasis& fb = *x.basis;
  const DirectedGraph& g = *fb.graph();
  require(k <= fb.level_cap(), "degree exceeds the level cap");
  CorrTensor xi(fb.graph(), k);
  for (int i = fb.level_offset(k); i < fb.level_offset(k) + fb.level_size(k); ++i) {
    const Path& alpha = fb.path(i);
    int col = fb.index(Path(alpha.src(g)));
    xi.set_coeff(alpha, x.mat(i, col));
  }
  // Roundtrip check on the levels that survive truncation.
  FockOperator rebuilt = creation_operator(xi, x.basis);
  FockOperator graded = gauge_fourier(x, k);
  int last_col = fb.level_offset(fb.level_cap() - k + 1);
  double resid =
      (rebuilt.mat.leftCols(last_col) - graded.mat.leftCols(last_col))
          .cwiseAbs()
          .maxCoeff();
  if (resid > tolerance)
    throw NotFourierGraded("not a Fourier-graded element (residual " +
                           std::to_string(resid) + " at degree " +
                           std::to_string(k) + ")");
  return xi;
}

FockOperator truncate(const HardyElement& theta, FockBasisPtr basis) {
  FockOperator out = phi_inf(theta.a0(), basis);
  for (int k = 1; k <= basis->level_cap(); ++k) {
    CorrTensor t = theta.tensor(k);
    if (t.is_zero()) continue;
    out = out + creation_operator(t, basis);
  }
  out.label = "X";
  return out;
}

double hardy_norm_lower(const HardyElement& theta, FockBasisPtr basis) {
  return truncate(theta, std::move(basis)).norm();
}

HardyElement hardy_product(const HardyElement& a, const HardyElement& b) {
  require(a.is_polynomial() && b.is_polynomial(),
          "hardy_product needs polynomial factors");
  require(a.graph().get() == b.graph().get(),
          "factors live over different graphs");
  GraphPtr g = a.graph();
  AlgebraElement one = AlgebraElement::one(g);
  int da = a.poly_degree(), db = b.poly_degree();
  AlgebraElement a0 = a.a0() * b.a0();
  std::vector<CorrTensor> out;
  for (int n = 1; n <= da + db; ++n) {
    CorrTensor t(g, n);
    // phi_inf(a0) T_{b_n} = T_{phi(a0) b_n} and T_{a_n} phi_inf(b0) = T_{a_n . b0}.
    if (n <= db) t = t + module_action(a.a0(), b.tensor(n), one);
    if (n <= da) t = t + module_action(one, a.tensor(n), b.a0());
    for (int i = std::max(1, n - db); i <= std::min(da, n - 1); ++i)
      t = t + tensor(a.tensor(i), b.tensor(n - i));
    out.push_back(std::move(t));
  }
  return HardyElement(a0, std::move(out));
}

IdealCompression ideal_compression(const std::vector<HardyElement>& generators,
                                   FockBasisPtr basis) {
  const FockBasis& fb = *basis;
  const int n = fb.size();
  IdealCompression out{FockOperator::identity(basis, "P"), Matrix::Zero(n, 0), {}};
  if (!generators.empty()) {
    std::vector<Matrix> gens;
    for (const auto& gen : generators) {
      require(gen.is_polynomial(), "ideal generators must be polynomials");
      gens.push_back(truncate(gen, basis).mat);
    }
    // Columns S_mu (G delta_nu) over all generators and truncated paths mu, nu.
    // Prepending mu maps the basis index of beta to that of mu.beta.
    const DirectedGraph& g = *fb.graph();
    Eigen::Index ncols =
        static_cast<Eigen::Index>(gens.size()) * n * n;
    Matrix span = kernels::assemble_columns(
        n, ncols, [&](Eigen::Index col, Eigen::Ref<Vector> outv) {
          int nu = static_cast<int>(col % n);
          int mu_i = static_cast<int>((col / n) % n);
          const Matrix& gen = gens[static_cast<std::size_t>(col / (static_cast<Eigen::Index>(n) * n))];
          const Path& mu = fb.path(mu_i);
          for (int i = 0; i < n; ++i) {
            if (gen(i, nu) == cx(0.0)) continue;
            const Path& beta = fb.path(i);
            if (!mu.composable_with(g, beta)) continue;
            if (mu.length() + beta.length() > fb.level_cap()) continue;
            outv(fb.index(mu.concat(g, beta))) += gen(i, nu);
          }
        });
    Matrix range = column_space(span);
    Matrix p = Matrix::Identity(n, n) - range * range.adjoint();
    out.projection = FockOperator(basis, std::move(p), "P");
    out.ideal_range = std::move(range);
  }
  FockOperator proj = out.projection;
  out.compress = [proj](const FockOperator& x) {
    return FockOperator(x.basis, proj.mat * x.mat * proj.mat, "PXP");
  };
  return out;
}

}  // namespace nchardy
