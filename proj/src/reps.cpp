#include "nchardy/reps.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "nchardy/kernels.hpp"

namespace nchardy {

Representation::Representation(GraphPtr g, std::vector<int> multiplicities)
    : graph_(std::move(g)), mult_(std::move(multiplicities)) {
  require(static_cast<int>(mult_.size()) == graph_->n_vertices(),
          "one multiplicity per vertex required");
  offset_.push_back(0);
  comm_offset_.push_back(0);
  for (int m : mult_) {
    require(m >= 0, "multiplicities must be nonnegative");
    offset_.push_back(offset_.back() + m);
    comm_offset_.push_back(comm_offset_.back() + m * m);
  }
}

Representation Representation::scalar(GraphPtr g) {
  std::vector<int> m(g->n_vertices(), 1);
  return Representation(std::move(g), std::move(m));
}

bool Representation::faithful() const {
  return std::all_of(mult_.begin(), mult_.end(), [](int m) { return m >= 1; });
}

Matrix Representation::sigma(const AlgebraElement& a) const {
  require(a.graph().get() == graph_.get(), "algebra element over wrong graph");
  Vector diag(dim());
  for (int v = 0; v < graph_->n_vertices(); ++v)
    diag.segment(offset(v), mult(v)).setConstant(a.value(v));
  return diag.asDiagonal();
}

Matrix Representation::vertex_projection(int v) const {
  return sigma(AlgebraElement::indicator(graph_, v));
}

bool same_rep(const RepPtr& a, const RepPtr& b) {
  return a.get() == b.get() ||
         (a->graph().get() == b->graph().get() &&
          a->multiplicities() == b->multiplicities());
}

CommutantElement::CommutantElement(RepPtr rep) : rep_(std::move(rep)) {
  for (int v = 0; v < rep_->graph()->n_vertices(); ++v)
    blocks_.push_back(Matrix::Zero(rep_->mult(v), rep_->mult(v)));
}

CommutantElement::CommutantElement(RepPtr rep, std::vector<Matrix> blocks)
    : rep_(std::move(rep)), blocks_(std::move(blocks)) {
  require(static_cast<int>(blocks_.size()) == rep_->graph()->n_vertices(),
          "one block per vertex required");
  for (int v = 0; v < rep_->graph()->n_vertices(); ++v)
    require(blocks_[v].rows() == rep_->mult(v) &&
                blocks_[v].cols() == rep_->mult(v),
            "commutant block has the wrong shape");
}

CommutantElement CommutantElement::identity(RepPtr rep) {
  CommutantElement c(rep);
  for (int v = 0; v < rep->graph()->n_vertices(); ++v)
    c.blocks_[v].setIdentity();
  return c;
}

CommutantElement CommutantElement::from_vec(RepPtr rep, const Vector& x) {
  require(x.size() == rep->comm_dim(), "vectorization has the wrong length");
  CommutantElement c(rep);
  for (int v = 0; v < rep->graph()->n_vertices(); ++v) {
    int m = rep->mult(v);
    c.blocks_[v] = Eigen::Map<const Matrix>(x.data() + rep->comm_offset(v), m, m);
  }
  return c;
}

CommutantElement CommutantElement::compress(RepPtr rep, const Matrix& full) {
  require(full.rows() == rep->dim() && full.cols() == rep->dim(),
          "matrix does not act on H");
  CommutantElement c(rep);
  for (int v = 0; v < rep->graph()->n_vertices(); ++v)
    c.blocks_[v] = full.block(rep->offset(v), rep->offset(v), rep->mult(v),
                              rep->mult(v));
  return c;
}

Vector CommutantElement::vec() const {
  Vector x(rep_->comm_dim());
  for (int v = 0; v < rep_->graph()->n_vertices(); ++v) {
    int m = rep_->mult(v);
    Eigen::Map<Matrix>(x.data() + rep_->comm_offset(v), m, m) = blocks_[v];
  }
  return x;
}

Matrix CommutantElement::to_operator() const {
  Matrix out = Matrix::Zero(rep_->dim(), rep_->dim());
  for (int v = 0; v < rep_->graph()->n_vertices(); ++v)
    out.block(rep_->offset(v), rep_->offset(v), rep_->mult(v), rep_->mult(v)) =
        blocks_[v];
  return out;
}

CommutantElement CommutantElement::adjoint() const {
  CommutantElement c(rep_);
  for (std::size_t v = 0; v < blocks_.size(); ++v)
    c.blocks_[v] = blocks_[v].adjoint();
  return c;
}

double CommutantElement::norm() const {
  double n = 0.0;
  for (const Matrix& b : blocks_) n = std::max(n, op_norm(b));
  return n;
}

double CommutantElement::min_eig() const {
  double m = std::numeric_limits<double>::infinity();
  bool any = false;
  for (const Matrix& b : blocks_)
    if (b.rows() > 0) {
      m = std::min(m, min_eig_herm(b));
      any = true;
    }
  return any ? m : 0.0;
}

bool CommutantElement::is_unitary(double eps) const {
  for (const Matrix& b : blocks_) {
    if ((b * b.adjoint() - Matrix::Identity(b.rows(), b.rows())).cwiseAbs().maxCoeff() > eps)
      return false;
    if ((b.adjoint() * b - Matrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() > eps)
      return false;
  }
  return true;
}

namespace {
void check_same(const RepPtr& a, const RepPtr& b) {
  require(same_rep(a, b), "operands live on different representations");
}
}  // namespace

CommutantElement operator+(const CommutantElement& a, const CommutantElement& b) {
  check_same(a.rep(), b.rep());
  CommutantElement c = a;
  for (int v = 0; v < a.rep()->graph()->n_vertices(); ++v) c.block(v) += b.block(v);
  return c;
}

CommutantElement operator-(const CommutantElement& a, const CommutantElement& b) {
  check_same(a.rep(), b.rep());
  CommutantElement c = a;
  for (int v = 0; v < a.rep()->graph()->n_vertices(); ++v) c.block(v) -= b.block(v);
  return c;
}

CommutantElement operator*(const CommutantElement& a, const CommutantElement& b) {
  check_same(a.rep(), b.rep());
  CommutantElement c(a.rep());
  for (int v = 0; v < a.rep()->graph()->n_vertices(); ++v)
    c.block(v) = a.block(v) * b.block(v);
  return c;
}

CommutantElement operator*(cx c, const CommutantElement& a) {
  CommutantElement out = a;
  for (int v = 0; v < a.rep()->graph()->n_vertices(); ++v) out.block(v) *= c;
  return out;
}

PathSpace::PathSpace(RepPtr rep, int degree)
    : rep_(std::move(rep)), degree_(degree) {
  require(degree >= 0, "path space degree must be nonnegative");
  paths_ = paths_of_length(*rep_->graph(), degree);
  offsets_.push_back(0);
  for (const Path& p : paths_)
    offsets_.push_back(offsets_.back() + rep_->mult(p.src(*rep_->graph())));
}

Matrix PathSpace::ampliation(const CommutantElement& b) const {
  Matrix out = Matrix::Zero(dim(), dim());
  const DirectedGraph& g = *rep_->graph();
  for (int i = 0; i < n_paths(); ++i)
    out.block(offset(i), offset(i), block_size(i), block_size(i)) =
        b.block(paths_[i].src(g));
  return out;
}

Matrix PathSpace::left_action(const AlgebraElement& a) const {
  Vector diag(dim());
  const DirectedGraph& g = *rep_->graph();
  for (int i = 0; i < n_paths(); ++i)
    diag.segment(offset(i), block_size(i)).setConstant(a.value(paths_[i].rng(g)));
  return diag.asDiagonal();
}

struct CovariantRep::NormCache {
  std::once_flag flag;
  double value = 0.0;
};

CovariantRep::CovariantRep(RepPtr rep, std::vector<Matrix> edge_blocks)
    : rep_(std::move(rep)),
      blocks_(std::move(edge_blocks)),
      norm_cache_(std::make_shared<NormCache>()) {
  const DirectedGraph& g = *rep_->graph();
  require(static_cast<int>(blocks_.size()) == g.n_edges(),
          "one block per edge required");
  for (int e = 0; e < g.n_edges(); ++e)
    require(blocks_[e].rows() == rep_->mult(g.rng(e)) &&
                blocks_[e].cols() == rep_->mult(g.src(e)),
            "edge block " + g.edge(e).name + " has the wrong shape");
  PathSpace es(rep_, 1);
  t_tilde_ = Matrix::Zero(rep_->dim(), es.dim());
  for (int e = 0; e < g.n_edges(); ++e)
    t_tilde_.block(rep_->offset(g.rng(e)), es.offset(e),
                   rep_->mult(g.rng(e)), rep_->mult(g.src(e))) = blocks_[e];
}

double CovariantRep::norm() const {
  std::call_once(norm_cache_->flag,
                 [&] { norm_cache_->value = op_norm(t_tilde_); });
  return norm_cache_->value;
}

Matrix CovariantRep::full_block(int e) const {
  const DirectedGraph& g = *rep_->graph();
  Matrix out = Matrix::Zero(rep_->dim(), rep_->dim());
  out.block(rep_->offset(g.rng(e)), rep_->offset(g.src(e)),
            rep_->mult(g.rng(e)), rep_->mult(g.src(e))) = blocks_[e];
  return out;
}

CovariantRep make_covariant(RepPtr rep, const std::vector<Matrix>& edge_blocks) {
  const DirectedGraph& g = *rep->graph();
  require(static_cast<int>(edge_blocks.size()) == g.n_edges(),
          "one block per edge required");
  std::vector<Matrix> blocks;
  for (int e = 0; e < g.n_edges(); ++e) {
    const Matrix& b = edge_blocks[e];
    int mr = rep->mult(g.rng(e));
    int ms = rep->mult(g.src(e));
    if (b.rows() == mr && b.cols() == ms) {
      blocks.push_back(b);
    } else if (b.rows() == rep->dim() && b.cols() == rep->dim()) {
      Matrix cropped = b.block(rep->offset(g.rng(e)), rep->offset(g.src(e)), mr, ms);
      Matrix back = Matrix::Zero(rep->dim(), rep->dim());
      back.block(rep->offset(g.rng(e)), rep->offset(g.src(e)), mr, ms) = cropped;
      double resid = (b - back).cwiseAbs().maxCoeff();
      if (resid > tol::kEq)
        throw ContractViolation("edge block " + g.edge(e).name +
                                " violates covariance (residual " +
                                std::to_string(resid) + ")");
      blocks.push_back(std::move(cropped));
    } else {
      throw ContractViolation("edge block " + g.edge(e).name +
                              " has the wrong shape");
    }
  }
  return CovariantRep(std::move(rep), std::move(blocks));
}

DualPoint::DualPoint(RepPtr rep, std::vector<Matrix> blocks)
    : rep_(std::move(rep)), blocks_(std::move(blocks)) {
  const DirectedGraph& g = *rep_->graph();
  require(static_cast<int>(blocks_.size()) == g.n_edges(),
          "one block per edge required");
  for (int e = 0; e < g.n_edges(); ++e)
    require(blocks_[e].rows() == rep_->mult(g.src(e)) &&
                blocks_[e].cols() == rep_->mult(g.rng(e)),
            "dual block " + g.edge(e).name + " has the wrong shape");
}

DualPoint DualPoint::zero(RepPtr rep) {
  const DirectedGraph& g = *rep->graph();
  std::vector<Matrix> blocks;
  for (int e = 0; e < g.n_edges(); ++e)
    blocks.push_back(Matrix::Zero(rep->mult(g.src(e)), rep->mult(g.rng(e))));
  return DualPoint(std::move(rep), std::move(blocks));
}

DualPoint DualPoint::from_covariant(const CovariantRep& t) {
  std::vector<Matrix> blocks;
  for (int e = 0; e < t.rep()->graph()->n_edges(); ++e)
    blocks.push_back(t.block(e).adjoint());
  return DualPoint(t.rep(), std::move(blocks));
}

Matrix DualPoint::as_matrix() const {
  const DirectedGraph& g = *rep_->graph();
  PathSpace es(rep_, 1);
  Matrix out = Matrix::Zero(es.dim(), rep_->dim());
  for (int e = 0; e < g.n_edges(); ++e)
    out.block(es.offset(e), rep_->offset(g.rng(e)), rep_->mult(g.src(e)),
              rep_->mult(g.rng(e))) = blocks_[e];
  return out;
}

double DualPoint::norm() const { return op_norm(as_matrix()); }

CovariantRep DualPoint::to_covariant() const {
  std::vector<Matrix> blocks;
  for (const Matrix& b : blocks_) blocks.push_back(b.adjoint());
  return CovariantRep(rep_, std::move(blocks));
}

Superoperator::Superoperator(RepPtr rep, Matrix mat)
    : rep_(std::move(rep)), mat_(std::move(mat)) {
  require(mat_.rows() == rep_->comm_dim() && mat_.cols() == rep_->comm_dim(),
          "superoperator matrix does not match the commutant dimension");
}

Superoperator Superoperator::identity(RepPtr rep) {
  int n = rep->comm_dim();
  return Superoperator(std::move(rep), Matrix::Identity(n, n));
}

Superoperator Superoperator::zero(RepPtr rep) {
  int n = rep->comm_dim();
  return Superoperator(std::move(rep), Matrix::Zero(n, n));
}

Superoperator Superoperator::from_action(
    RepPtr rep,
    const std::function<CommutantElement(const CommutantElement&)>& action) {
  int n = rep->comm_dim();
  Matrix mat = kernels::assemble_columns(
      n, n, [&](Eigen::Index j, Eigen::Ref<Vector> out) {
        Vector unit = Vector::Zero(n);
        unit(j) = 1.0;
        out = action(CommutantElement::from_vec(rep, unit)).vec();
      });
  return Superoperator(std::move(rep), std::move(mat));
}

CommutantElement Superoperator::apply(const CommutantElement& b) const {
  check_same(rep_, b.rep());
  return CommutantElement::from_vec(rep_, mat_ * b.vec());
}

Superoperator Superoperator::compose(const Superoperator& inner) const {
  check_same(rep_, inner.rep_);
  return Superoperator(rep_, mat_ * inner.mat_);
}

Superoperator Superoperator::dual() const {
  return Superoperator(rep_, mat_.adjoint());
}

double Superoperator::spectral_radius() const {
  if (mat_.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Matrix> es(mat_, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
  check_same(a.rep(), b.rep());
  return Superoperator(a.rep(), a.matrix() + b.matrix());
}

Superoperator operator-(const Superoperator& a, const Superoperator& b) {
  check_same(a.rep(), b.rep());
  return Superoperator(a.rep(), a.matrix() - b.matrix());
}

Superoperator operator*(cx c, const Superoperator& a) {
  return Superoperator(a.rep(), c * a.matrix());
}

Matrix generalized_power(const CovariantRep& t, int n) {
  require(n >= 0, "power must be nonnegative");
  const RepPtr& rep = t.rep();
  const DirectedGraph& g = *rep->graph();
  PathSpace ps(rep, n);
  Matrix out = Matrix::Zero(rep->dim(), ps.dim());
  for (int i = 0; i < ps.n_paths(); ++i) {
    const Path& alpha = ps.path(i);
    Matrix prod = Matrix::Identity(rep->mult(alpha.src(g)), rep->mult(alpha.src(g)));
    for (auto it = alpha.edges().rbegin(); it != alpha.edges().rend(); ++it)
      prod = t.block(*it) * prod;
    out.block(rep->offset(alpha.rng(g)), ps.offset(i), prod.rows(), prod.cols()) =
        prod;
  }
  return out;
}

Matrix tensor_identity_left(const RepPtr& rep, int m, int n, const Matrix& y) {
  const DirectedGraph& g = *rep->graph();
  PathSpace pm(rep, m), pn(rep, n), pmn(rep, m + n);
  require(y.rows() == rep->dim() && y.cols() == pn.dim(),
          "Y must map E^n (x) H into H");
  Matrix out = Matrix::Zero(pm.dim(), pmn.dim());
  std::map<Path, int> pm_index, pn_index;
  for (int j = 0; j < pm.n_paths(); ++j) pm_index.emplace(pm.path(j), j);
  for (int j = 0; j < pn.n_paths(); ++j) pn_index.emplace(pn.path(j), j);
  for (int k = 0; k < pmn.n_paths(); ++k) {
    const Path& full = pmn.path(k);
    std::vector<int> pre(full.edges().begin(), full.edges().begin() + m);
    std::vector<int> suf(full.edges().begin() + m, full.edges().end());
    Path alpha = m == 0 ? Path(full.rng(g)) : Path(g, pre);
    Path beta = n == 0 ? Path(full.src(g)) : Path(g, suf);
    int ia = pm_index.at(alpha);
    int jb = pn_index.at(beta);
    out.block(pm.offset(ia), pmn.offset(k), pm.block_size(ia),
              pmn.block_size(k)) =
        y.block(rep->offset(alpha.src(g)), pn.offset(jb),
                rep->mult(alpha.src(g)), pn.block_size(jb));
  }
  return out;
}

Superoperator cp_map(const CovariantRep& t) {
  const RepPtr& rep = t.rep();
  const DirectedGraph& g = *rep->graph();
  Matrix mat = Matrix::Zero(rep->comm_dim(), rep->comm_dim());
  for (int e = 0; e < g.n_edges(); ++e) {
    int vs = g.src(e), vr = g.rng(e);
    // vec(T_e b T_e*) = kron(conj(T_e), T_e) vec(b).
    mat.block(rep->comm_offset(vr), rep->comm_offset(vs),
              rep->mult(vr) * rep->mult(vr), rep->mult(vs) * rep->mult(vs)) +=
        kron(t.block(e).conjugate(), t.block(e));
  }
  return Superoperator(rep, std::move(mat));
}

Classification classify(const CovariantRep& t, int purity_cap,
                        double purity_threshold) {
  Classification c;
  c.contractive = t.is_contractive();
  const Matrix& tt = t.t_tilde();
  c.isometric = op_norm(tt.adjoint() * tt -
                        Matrix::Identity(tt.cols(), tt.cols())) <= tol::kResidual;
  c.fully_coisometric =
      op_norm(tt * tt.adjoint() - Matrix::Identity(tt.rows(), tt.rows())) <=
      tol::kResidual;
  Superoperator phi = cp_map(t);
  CommutantElement q = CommutantElement::identity(t.rep());
  for (int n = 1; n <= purity_cap; ++n) {
    q = phi.apply(q);
    double norm = q.norm();
    c.purity_trace.push_back(norm);
    if (norm <= purity_threshold) {
      c.pure = true;
      break;
    }
  }
  return c;
}

std::pair<int, int> DualCorrespondence::block_shape(int e) const {
  const DirectedGraph& g = *rep->graph();
  return {rep->mult(g.src(e)), rep->mult(g.rng(e))};
}

CommutantElement DualCorrespondence::inner_product(const DualPoint& eta,
                                                   const DualPoint& zeta) const {
  check_same(rep, eta.rep());
  check_same(rep, zeta.rep());
  const DirectedGraph& g = *rep->graph();
  CommutantElement out(rep);
  for (int e = 0; e < g.n_edges(); ++e)
    out.block(g.rng(e)) += eta.block(e).adjoint() * zeta.block(e);
  return out;
}

DualPoint DualCorrespondence::act(const CommutantElement& x, const DualPoint& eta,
                                  const CommutantElement& y) const {
  check_same(rep, eta.rep());
  const DirectedGraph& g = *rep->graph();
  std::vector<Matrix> blocks;
  for (int e = 0; e < g.n_edges(); ++e)
    blocks.push_back(x.block(g.src(e)) * eta.block(e) * y.block(g.rng(e)));
  return DualPoint(rep, std::move(blocks));
}

DualCorrespondence dual_correspondence(RepPtr rep) {
  const DirectedGraph& g = *rep->graph();
  std::vector<std::string> vs;
  for (int v = 0; v < g.n_vertices(); ++v) vs.push_back(g.vertex_name(v));
  std::vector<DirectedGraph::Edge> es;
  for (int e = 0; e < g.n_edges(); ++e)
    es.push_back({g.edge(e).name + "^-1", g.rng(e), g.src(e)});
  auto opposite = std::make_shared<DirectedGraph>(std::move(vs), std::move(es));
  return DualCorrespondence{std::move(rep), std::move(opposite)};
}

namespace {
CovariantRep build_induced_cov(const Representation& pi0,
                               const FockBasisPtr& basis,
                               const std::vector<int>& coord,
                               const std::vector<int>& coord_off,
                               RepPtr big) {
  const DirectedGraph& g = *basis->graph();
  const FockBasis& fb = *basis;
  std::vector<Matrix> blocks;
  for (int e = 0; e < g.n_edges(); ++e) {
    Matrix b = Matrix::Zero(big->mult(g.rng(e)), big->mult(g.src(e)));
    for (int i = 0; i < fb.size(); ++i) {
      const Path& beta = fb.path(i);
      if (beta.rng(g) != g.src(e)) continue;
      if (beta.length() + 1 > fb.level_cap()) continue;  // truncation kills it
      Path ebeta = Path(g, {e}).concat(g, beta);
      int j = fb.index(ebeta);
      int copies = pi0.mult(beta.src(g));
      for (int t = 0; t < copies; ++t) {
        int row = coord[coord_off[j] + t] - big->offset(g.rng(e));
        int col = coord[coord_off[i] + t] - big->offset(g.src(e));
        b(row, col) = 1.0;
      }
    }
    blocks.push_back(std::move(b));
  }
  return CovariantRep(std::move(big), std::move(blocks));
}

CovariantRep make_induced(const Representation& pi0, const FockBasisPtr& basis,
                          std::vector<int>& coord, std::vector<int>& coord_off,
                          std::vector<int>& level) {
  require(pi0.graph().get() == basis->graph().get(),
          "pi0 and basis live over different graphs");
  const DirectedGraph& g = *basis->graph();
  const FockBasis& fb = *basis;

  // Group coordinates (path, copy) by the range vertex of the path so that the
  // vertex blocks of the induced representation are contiguous.
  coord_off.assign(fb.size() + 1, 0);
  for (int i = 0; i < fb.size(); ++i)
    coord_off[i + 1] = coord_off[i] + pi0.mult(fb.path(i).src(g));
  coord.assign(coord_off.back(), -1);

  std::vector<int> mult(g.n_vertices(), 0);
  for (int i = 0; i < fb.size(); ++i)
    mult[fb.path(i).rng(g)] += pi0.mult(fb.path(i).src(g));
  auto big = std::make_shared<Representation>(basis->graph(), mult);

  std::vector<int> next(g.n_vertices());
  for (int v = 0; v < g.n_vertices(); ++v) next[v] = big->offset(v);
  level.assign(big->dim(), 0);
  for (int i = 0; i < fb.size(); ++i) {
    const Path& p = fb.path(i);
    for (int t = 0; t < pi0.mult(p.src(g)); ++t) {
      int idx = next[p.rng(g)]++;
      coord[coord_off[i] + t] = idx;
      level[idx] = p.length();
    }
  }
  return build_induced_cov(pi0, basis, coord, coord_off, big);
}
}  // namespace

InducedRep::InducedRep(const Representation& pi0, FockBasisPtr basis)
    : basis_(std::move(basis)),
      pi0_mult_(pi0.multiplicities()),
      cov_(make_induced(pi0, basis_, coord_, coord_off_, level_)) {}

InducedRep induced_rep(const Representation& pi0, FockBasisPtr basis) {
  return InducedRep(pi0, std::move(basis));
}

int InducedRep::coord(int path_index, int t) const {
  return coord_.at(coord_off_.at(path_index) + t);
}

int InducedRep::level_of_coord(int i) const { return level_.at(i); }

Matrix InducedRep::level_projection(int lvl) const {
  int n = cov_.rep()->dim();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (level_[i] == lvl) p(i, i) = 1.0;
  return p;
}

std::vector<int> InducedRep::interior_edge_columns(int lvl) const {
  const RepPtr& rep = cov_.rep();
  const DirectedGraph& g = *rep->graph();
  PathSpace es(rep, 1);
  std::vector<int> cols;
  for (int e = 0; e < g.n_edges(); ++e) {
    int base = es.offset(e);
    int voff = rep->offset(g.src(e));
    for (int j = 0; j < rep->mult(g.src(e)); ++j)
      if (level_[voff + j] <= lvl) cols.push_back(base + j);
  }
  return cols;
}

Dilation isometric_dilation(const CovariantRep& t, FockBasisPtr basis) {
  const RepPtr& rep = t.rep();
  const DirectedGraph& g = *rep->graph();
  require(t.norm() <= 1.0 + 1e-12,
          "isometric_dilation needs a contractive representation");

  PathSpace es(rep, 1);
  const Matrix& tt = t.t_tilde();
  Matrix defect2 = Matrix::Identity(es.dim(), es.dim()) - tt.adjoint() * tt;
  Matrix defect = psd_sqrt(defect2);

  // The defect commutes with the left action, so it is supported on groups of
  // edges sharing a range vertex; the defect space D decomposes accordingly.
  std::vector<int> defect_mult(g.n_vertices(), 0);
  std::vector<Matrix> defect_basis(g.n_vertices());  // rows: stacked edge group
  for (int v = 0; v < g.n_vertices(); ++v) {
    const std::vector<int>& group = g.edges_with_rng(v);
    int rows = 0;
    for (int e : group) rows += rep->mult(g.src(e));
    Matrix sub(rows, defect.cols());
    int r0 = 0;
    for (int e : group) {
      sub.middleRows(r0, rep->mult(g.src(e))) =
          defect.middleRows(es.offset(e), rep->mult(g.src(e)));
      r0 += rep->mult(g.src(e));
    }
    defect_basis[v] = column_space(sub, 1e-12);
    defect_mult[v] = static_cast<int>(defect_basis[v].cols());
  }

  Representation pi0(rep->graph(), defect_mult);
  InducedRep tail(pi0, basis);
  const RepPtr& trep = tail.cov().rep();

  std::vector<int> big_mult(g.n_vertices());
  for (int v = 0; v < g.n_vertices(); ++v)
    big_mult[v] = rep->mult(v) + trep->mult(v);
  auto big = std::make_shared<Representation>(rep->graph(), big_mult);

  // Defect component of V(e): D-coordinates of Delta(delta_e (x) .), embedded
  // at the tail's level-0 copies of D_{r(e)}.
  const FockBasis& fb = *basis;
  std::vector<Matrix> blocks;
  for (int e = 0; e < g.n_edges(); ++e) {
    int vs = g.src(e), vr = g.rng(e);
    Matrix b = Matrix::Zero(big->mult(vr), big->mult(vs));
    b.topLeftCorner(rep->mult(vr), rep->mult(vs)) = t.block(e);

    const std::vector<int>& group = g.edges_with_rng(vr);
    int rows = 0;
    for (int f : group) rows += rep->mult(g.src(f));
    Matrix cols(rows, rep->mult(vs));
    int r0 = 0;
    for (int f : group) {
      cols.middleRows(r0, rep->mult(g.src(f))) =
          defect.block(es.offset(f), es.offset(e), rep->mult(g.src(f)),
                       rep->mult(vs));
      r0 += rep->mult(g.src(f));
    }
    Matrix dcoords = defect_basis[vr].adjoint() * cols;  // d_{r(e)} x m_{s(e)}
    int level0 = fb.index(Path(vr));
    for (int d = 0; d < defect_mult[vr]; ++d) {
      int row = rep->mult(vr) + (tail.coord(level0, d) - trep->offset(vr));
      b.row(row).head(rep->mult(vs)) = dcoords.row(d);
    }

    b.bottomRightCorner(trep->mult(vr), trep->mult(vs)) = tail.cov().block(e);
    blocks.push_back(std::move(b));
  }
  CovariantRep big_cov(big, std::move(blocks));

  Matrix embed = Matrix::Zero(big->dim(), rep->dim());
  for (int v = 0; v < g.n_vertices(); ++v)
    embed.block(big->offset(v), rep->offset(v), rep->mult(v), rep->mult(v))
        .setIdentity();

  Dilation out{std::move(big_cov), std::move(embed), std::move(tail),
               std::move(defect_mult)};

  // Dilation properties, verified before handing the object back.
  const Matrix p = out.h_projection();
  for (int e = 0; e < g.n_edges(); ++e) {
    Matrix ve = out.big.full_block(e);
    Matrix te = out.embedding * t.full_block(e) * out.embedding.adjoint();
    require(op_norm(p * ve * p - te * p) <= tol::kResidual,
            "dilation property P V(e) P = T(e) P failed");
    require(op_norm(p * ve * (Matrix::Identity(p.rows(), p.cols()) - p)) <=
                tol::kResidual,
            "dilation property V(e)* H subset H failed");
  }
  return out;
}

}  // namespace nchardy
