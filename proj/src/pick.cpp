#include "nchardy/pick.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nchardy/kernels.hpp"
#include "nchardy/random.hpp"

namespace nchardy {

namespace {

// 0/1 matrix taking the commutant vectorization into the full vec(B(H)).
Matrix commutant_embedding(const Representation& rep) {
  int dim = rep.dim();
  Matrix e = Matrix::Zero(dim * dim, rep.comm_dim());
  for (int v = 0; v < rep.graph()->n_vertices(); ++v) {
    int m = rep.mult(v), off = rep.offset(v);
    for (int q = 0; q < m; ++q)
      for (int p = 0; p < m; ++p)
        e((off + q) * dim + (off + p), rep.comm_offset(v) + q * m + p) = 1.0;
  }
  return e;
}

}  // namespace

Superoperator theta_map(const DualPoint& eta, const DualPoint& zeta) {
  require(same_rep(eta.rep(), zeta.rep()),
          "theta_map points live on different representations");
  const RepPtr& rep = eta.rep();
  const DirectedGraph& g = *rep->graph();
  Matrix mat = Matrix::Zero(rep->comm_dim(), rep->comm_dim());
  for (int e = 0; e < g.n_edges(); ++e) {
    int vs = g.src(e), vr = g.rng(e);
    // out_{r(e)} += eta_e* a_{s(e)} zeta_e; vec: kron(zeta_e^T, eta_e*).
    mat.block(rep->comm_offset(vr), rep->comm_offset(vs),
              rep->mult(vr) * rep->mult(vr), rep->mult(vs) * rep->mult(vs)) +=
        kron(zeta.block(e).transpose(), eta.block(e).adjoint());
  }
  return Superoperator(rep, std::move(mat));
}

Superoperator resolvent(const Superoperator& theta) {
  // Cheap norm bounds before the general eigensolver: the spectral radius is
  // dominated by the operator norm, which the Frobenius norm dominates.
  double sr = theta.matrix().norm();
  if (sr >= 1.0 - 1e-9) sr = op_norm(theta.matrix());
  if (sr >= 1.0 - 1e-9) sr = theta.spectral_radius();
  if (sr >= 1.0 - 1e-9)
    throw BoundaryPointError(
        "boundary point; use boundary_np_check (spectral radius " +
        std::to_string(sr) + ")");
  int n = theta.rep()->comm_dim();
  Matrix gap = Matrix::Identity(n, n) - theta.matrix();
  Matrix inv = gap.partialPivLu().solve(Matrix::Identity(n, n));
  double resid = (gap * inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  require(resid <= tol::kResidual, "resolvent residual too large");
  return Superoperator(theta.rep(), std::move(inv));
}

KernelBlockMap::KernelBlockMap(RepPtr rep, int k, Matrix stacked)
    : rep_(std::move(rep)), k_(k), stacked_(std::move(stacked)) {
  int d2 = rep_->dim() * rep_->dim();
  require(stacked_.rows() == static_cast<Eigen::Index>(k_) * d2 &&
              stacked_.cols() == static_cast<Eigen::Index>(k_) * rep_->comm_dim(),
          "kernel block matrix has the wrong shape");
}

Matrix KernelBlockMap::block(int i, int j) const {
  int d2 = rep_->dim() * rep_->dim();
  return stacked_.block(static_cast<Eigen::Index>(i) * d2,
                        static_cast<Eigen::Index>(j) * rep_->comm_dim(), d2,
                        rep_->comm_dim());
}

Matrix KernelBlockMap::apply(int i, int j, const CommutantElement& a) const {
  Vector out = block(i, j) * a.vec();
  return Eigen::Map<const Matrix>(out.data(), rep_->dim(), rep_->dim());
}

double KernelBlockMap::hermitian_residual() const {
  double worst = 0.0;
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j)
      for (int idx = 0; idx < rep_->comm_dim(); ++idx) {
        Vector unit = Vector::Zero(rep_->comm_dim());
        unit(idx) = 1.0;
        CommutantElement a = CommutantElement::from_vec(rep_, unit);
        Matrix lhs = apply(j, i, a);
        Matrix rhs = apply(i, j, a.adjoint()).adjoint();
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
      }
  return worst;
}

KernelBlockMap pick_matrix(const InterpolationProblem& problem) {
  int k = static_cast<int>(problem.points.size());
  require(k >= 1, "pick_matrix needs at least one point");
  require(problem.left.size() == problem.points.size() &&
              problem.right.size() == problem.points.size(),
          "pick_matrix needs matching data lists");
  const RepPtr& rep = problem.points.front().rep();
  for (const DualPoint& p : problem.points)
    require(same_rep(p.rep(), rep), "points live on different representations");
  int dim = rep->dim();
  for (int i = 0; i < k; ++i)
    require(problem.left[i].rows() == dim && problem.left[i].cols() == dim &&
                problem.right[i].rows() == dim && problem.right[i].cols() == dim,
            "interpolation data must act on H");

  Matrix emb = commutant_embedding(*rep);
  // Resolvents first; they throw BoundaryPointError for boundary pairs.
  std::vector<Matrix> res(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      res[i * k + j] =
          resolvent(theta_map(problem.points[i], problem.points[j])).matrix();

  int d2 = dim * dim;
  std::vector<Eigen::Index> rows(k, d2), cols(k, rep->comm_dim());
  Matrix stacked = kernels::assemble_blocks(rows, cols, [&](int i, int j) {
    Matrix ad = kron(problem.left[j].conjugate(), problem.left[i]) -
                kron(problem.right[j].conjugate(), problem.right[i]);
    return Matrix(ad * emb * res[i * k + j]);
  });
  return KernelBlockMap(rep, k, std::move(stacked));
}

namespace {

CpVerdict choi_verdict(const Matrix& choi) {
  CpVerdict v;
  Matrix herm = (choi + choi.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  v.spectrum = es.eigenvalues();
  v.min_eig = v.spectrum.minCoeff();
  v.choi_norm = v.spectrum.size() ? v.spectrum.cwiseAbs().maxCoeff() : 0.0;
  double floor = tol::kPsdRel * std::max(v.choi_norm, 1e-300);
  v.cp = v.min_eig >= -floor;
  v.marginal = std::abs(v.min_eig) <= 10.0 * floor;
  if (!v.cp) {
    // Witness only on failure; the vector solve costs most of the time.
    Eigen::SelfAdjointEigenSolver<Matrix> full(herm);
    v.witness = full.eigenvectors().col(0);
  }
  return v;
}

}  // namespace

CpVerdict is_completely_positive(const KernelBlockMap& k) {
  const RepPtr& rep = k.rep();
  int dim = rep->dim();
  int kk = k.size();
  int big = kk * dim;  // D = dimension of M_k(B(H))'s underlying space

  // Choi = sum_{p,q} e_pq (x) Lambda(e_pq) with Lambda = Psi_K o E. The
  // conditional expectation keeps only units e_uv inside one vertex block,
  // and the entries of Lambda(e_pq) are entries of the kernel panels, so the
  // Choi matrix is an index reshuffle of the panel data.
  Matrix choi = Matrix::Zero(static_cast<Eigen::Index>(big) * big,
                             static_cast<Eigen::Index>(big) * big);
  const DirectedGraph& g = *rep->graph();
  for (int i = 0; i < kk; ++i)
    for (int j = 0; j < kk; ++j) {
      Matrix panel = k.block(i, j);
      for (int v0 = 0; v0 < g.n_vertices(); ++v0) {
        int m = rep->mult(v0), off = rep->offset(v0);
        for (int vq = 0; vq < m; ++vq)
          for (int up = 0; up < m; ++up) {
            auto col = panel.col(rep->comm_offset(v0) + vq * m + up);
            Eigen::Index row0 =
                static_cast<Eigen::Index>(i * dim + off + up) * big + i * dim;
            Eigen::Index col0 =
                static_cast<Eigen::Index>(j * dim + off + vq) * big + j * dim;
            for (int b = 0; b < dim; ++b)
              for (int a = 0; a < dim; ++a)
                choi(row0 + a, col0 + b) = col(b * dim + a);
          }
      }
    }
  return choi_verdict(choi);
}

CpVerdict is_completely_positive(const Superoperator& phi) {
  const RepPtr& rep = phi.rep();
  Matrix panel = commutant_embedding(*rep) * phi.matrix();
  return is_completely_positive(KernelBlockMap(rep, 1, std::move(panel)));
}

NpResult np_feasible(const InterpolationProblem& problem) {
  NpResult out;
  out.faithful = problem.points.front().rep()->faithful();
  out.choi = is_completely_positive(pick_matrix(problem));
  out.feasible = out.choi.cp;
  return out;
}

CpVerdict schur_kernel_test(const std::vector<Matrix>& z_values,
                            const std::vector<DualPoint>& sample) {
  require(z_values.size() == sample.size(),
          "one sampled value per point required");
  InterpolationProblem problem;
  problem.points = sample;
  int dim = sample.front().rep()->dim();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    problem.left.push_back(Matrix::Identity(dim, dim));
    problem.right.push_back(z_values[i]);
  }
  return is_completely_positive(pick_matrix(problem));
}

Realization::Realization(RepPtr rep, std::vector<int> aux_mult, Matrix a,
                         Matrix b, Matrix c, Matrix d)
    : rep_(std::move(rep)), aux_mult_(std::move(aux_mult)) {
  const DirectedGraph& g = *rep_->graph();
  require(static_cast<int>(aux_mult_.size()) == g.n_vertices(),
          "one aux multiplicity per vertex required");
  aux_off_.push_back(0);
  for (int v = 0; v < g.n_vertices(); ++v) {
    require(aux_mult_[v] >= 0, "aux multiplicities must be nonnegative");
    aux_off_.push_back(aux_off_.back() + rep_->mult(v) * aux_mult_[v]);
  }
  tgt_off_.push_back(0);
  for (int e = 0; e < g.n_edges(); ++e)
    tgt_off_.push_back(tgt_off_.back() +
                       rep_->mult(g.src(e)) * aux_mult_[g.rng(e)]);
  int dim = rep_->dim();
  require(a.rows() == target_dim() && a.cols() == aux_dim(), "A shape");
  require(b.rows() == target_dim() && b.cols() == dim, "B shape");
  require(c.rows() == dim && c.cols() == aux_dim(), "C shape");
  require(d.rows() == dim && d.cols() == dim, "D shape");
  a_ = std::move(a);
  b_ = std::move(b);
  c_ = std::move(c);
  d_ = std::move(d);
}

double Realization::coisometry_residual() const {
  Matrix u(target_dim() + rep_->dim(), aux_dim() + rep_->dim());
  u << a_, b_, c_, d_;
  return op_norm(u * u.adjoint() -
                 Matrix::Identity(u.rows(), u.rows()));
}

double Realization::module_residual() const {
  const DirectedGraph& g = *rep_->graph();
  double worst = 0.0;
  for (int v = 0; v < g.n_vertices(); ++v) {
    int m = rep_->mult(v);
    for (int q = 0; q < m; ++q)
      for (int p = 0; p < m; ++p) {
        // Basis element of the commutant: unit e_pq in block v.
        CommutantElement b(rep_);
        b.block(v)(p, q) = 1.0;
        // tau(b) on aux, psi(b) on target, b itself on H.
        Matrix tau = Matrix::Zero(aux_dim(), aux_dim());
        for (int w = 0; w < g.n_vertices(); ++w)
          if (w == v)
            for (int t = 0; t < aux_mult_[w]; ++t)
              tau.block(aux_off_[w] + t * m, aux_off_[w] + t * m, m, m) =
                  b.block(v);
        Matrix psi = Matrix::Zero(target_dim(), target_dim());
        for (int e = 0; e < g.n_edges(); ++e)
          if (g.src(e) == v)
            for (int t = 0; t < aux_mult_[g.rng(e)]; ++t)
              psi.block(tgt_off_[e] + t * m, tgt_off_[e] + t * m, m, m) =
                  b.block(v);
        Matrix bh = b.to_operator();
        worst = std::max(worst, (a_ * tau - psi * a_).cwiseAbs().maxCoeff());
        worst = std::max(worst, (b_ * bh - psi * b_).cwiseAbs().maxCoeff());
        worst = std::max(worst, (c_ * tau - bh * c_).cwiseAbs().maxCoeff());
        worst = std::max(worst, (d_ * bh - bh * d_).cwiseAbs().maxCoeff());
      }
  }
  return worst;
}

Matrix Realization::point_map(const DualPoint& eta) const {
  require(same_rep(eta.rep(), rep_), "point lives on a different representation");
  const DirectedGraph& g = *rep_->graph();
  Matrix l = Matrix::Zero(target_dim(), aux_dim());
  for (int e = 0; e < g.n_edges(); ++e) {
    int vr = g.rng(e);
    int p = aux_mult_[vr];
    if (p == 0) continue;
    l.block(tgt_off_[e], aux_off_[vr], rep_->mult(g.src(e)) * p,
            rep_->mult(vr) * p) = kron(Matrix::Identity(p, p), eta.block(e));
  }
  return l;
}

Matrix realization_evaluate(const Realization& r, const DualPoint& eta) {
  double co = r.coisometry_residual();
  if (co > tol::kResidual)
    throw ContractViolation("realization rejected: coisometry residual " +
                            std::to_string(co));
  Matrix l = r.point_map(eta);
  Matrix f = l.adjoint() * r.a();
  if (f.size() > 0) {
    Eigen::ComplexEigenSolver<Matrix> es(f, false);
    double sr = es.eigenvalues().cwiseAbs().maxCoeff();
    if (sr >= 1.0 - 1e-9)
      throw BoundaryPointError("realization evaluation: spectral radius " +
                               std::to_string(sr));
  }
  Matrix inv = (Matrix::Identity(r.aux_dim(), r.aux_dim()) - f)
                   .partialPivLu()
                   .solve(Matrix::Identity(r.aux_dim(), r.aux_dim()));
  return r.d() + r.c() * inv * l.adjoint() * r.b();
}

Realization random_coisometric_realization(RepPtr rep, std::vector<int> aux_mult,
                                           Rng& rng) {
  const DirectedGraph& g = *rep->graph();
  int nv = g.n_vertices();
  std::vector<int> aux_off{0}, tgt_off{0};
  for (int v = 0; v < nv; ++v)
    aux_off.push_back(aux_off.back() + rep->mult(v) * aux_mult[v]);
  for (int e = 0; e < g.n_edges(); ++e)
    tgt_off.push_back(tgt_off.back() +
                      rep->mult(g.src(e)) * aux_mult[g.rng(e)]);
  int aux_dim = aux_off.back();
  int tgt_dim = tgt_off.back();
  int dim = rep->dim();
  // Blockwise feasibility: the module structure confines each vertex's rows
  // to its own columns, so a coisometry needs sum_{s(e)=v} p_{r(e)} <= p_v.
  for (int v = 0; v < nv; ++v) {
    if (rep->mult(v) == 0) continue;
    int rows = 0;
    for (int e : g.edges_with_src(v)) rows += aux_mult[g.rng(e)];
    require(rows <= aux_mult[v],
            "no finite coisometry exists for these aux multiplicities: vertex " +
                g.vertex_name(v) + " needs " + std::to_string(rows) +
                " target copies but has " + std::to_string(aux_mult[v]));
  }

  Matrix a = Matrix::Zero(tgt_dim, aux_dim);
  Matrix b = Matrix::Zero(tgt_dim, dim);
  Matrix c = Matrix::Zero(dim, aux_dim);
  Matrix d = Matrix::Zero(dim, dim);

  // Free parameters per vertex v: a Gaussian G_v of shape
  // (sum_{s(e)=v} p_{r(e)} + 1) x (p_v + 1); every U block is an entry of
  // G_v tensored with I_{m_v}.
  for (int v = 0; v < nv; ++v) {
    int m = rep->mult(v);
    if (m == 0) continue;
    std::vector<std::pair<int, int>> row_slots;  // (edge, copy)
    for (int e = 0; e < g.n_edges(); ++e)
      if (g.src(e) == v)
        for (int t = 0; t < aux_mult[g.rng(e)]; ++t) row_slots.emplace_back(e, t);
    int rows = static_cast<int>(row_slots.size()) + 1;
    int cols = aux_mult[v] + 1;
    Matrix gm = random_matrix(rows, cols, rng);
    Matrix eye = Matrix::Identity(m, m);
    for (int ri = 0; ri < static_cast<int>(row_slots.size()); ++ri) {
      auto [e, t] = row_slots[ri];
      for (int tc = 0; tc < aux_mult[v]; ++tc)
        a.block(tgt_off[e] + t * m, aux_off[v] + tc * m, m, m) = gm(ri, tc) * eye;
      b.block(tgt_off[e] + t * m, rep->offset(v), m, m) =
          gm(ri, aux_mult[v]) * eye;
    }
    for (int tc = 0; tc < aux_mult[v]; ++tc)
      c.block(rep->offset(v), aux_off[v] + tc * m, m, m) =
          gm(rows - 1, tc) * eye;
    d.block(rep->offset(v), rep->offset(v), m, m) =
        gm(rows - 1, aux_mult[v]) * eye;
  }

  // Whiten the rows: U <- (U U*)^{-1/2} U. The Gram matrix commutes with the
  // module action, so the structure survives.
  Matrix u(tgt_dim + dim, aux_dim + dim);
  u << a, b, c, d;
  Eigen::SelfAdjointEigenSolver<Matrix> es(u * u.adjoint());
  require(es.eigenvalues().minCoeff() > 1e-10,
          "degenerate random draw; use another seed");
  Matrix w = es.eigenvectors() *
             es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<cx>() *
             es.eigenvectors().adjoint();
  u = w * u;
  return Realization(std::move(rep), std::move(aux_mult),
                     u.topLeftCorner(tgt_dim, aux_dim),
                     u.topRightCorner(tgt_dim, dim),
                     u.bottomLeftCorner(dim, aux_dim),
                     u.bottomRightCorner(dim, dim));
}

SchwartzResult schwartz_check(const HardyElement& theta, const DualPoint& eta,
                              FockBasisPtr basis) {
  if (theta.a0().sup_norm() > tol::kEq)
    throw ContractViolation("schwartz_check: element does not vanish at 0");
  double lower = hardy_norm_lower(theta, basis);
  if (lower > 1.0 + 1e-12)
    throw ContractViolation("schwartz_check: element is not normalized (lower bound " +
                            std::to_string(lower) + ")");
  EvalResult value = evaluate(theta, eta, 1e-12);
  Matrix lhs = value.value * value.value.adjoint();
  Matrix rhs = dual_correspondence(eta.rep())
                   .inner_product(eta, eta)
                   .to_operator();
  SchwartzResult out;
  out.tail_bound = value.tail_bound;
  out.slack = 1e-8 + 2.0 * op_norm(value.value) * value.tail_bound +
              value.tail_bound * value.tail_bound;
  out.min_eig = min_eig_herm(rhs - lhs);
  out.pass = out.min_eig >= -out.slack;
  return out;
}

LyapunovVerdict lyapunov_preorder(const Superoperator& phi,
                                  const Superoperator& psi, Rng& rng,
                                  int samples) {
  require(same_rep(phi.rep(), psi.rep()),
          "maps live on different representations");
  const RepPtr& rep = phi.rep();
  int n = rep->comm_dim();
  Matrix gap = Matrix::Identity(n, n) - phi.matrix();
  Eigen::JacobiSVD<Matrix> svd(gap);
  bool invertible =
      svd.singularValues().size() &&
      svd.singularValues().minCoeff() > 1e-9 * svd.singularValues().maxCoeff();

  LyapunovVerdict out;
  if (invertible) {
    Matrix inv = gap.partialPivLu().solve(Matrix::Identity(n, n));
    Superoperator composite(rep, (Matrix::Identity(n, n) - psi.matrix()) * inv);
    CpVerdict cv = is_completely_positive(composite);
    out.method = "choi";
    out.holds = cv.cp;
    out.min_eig = cv.min_eig;
    return out;
  }

  out.method = "sampled";
  out.holds = true;
  out.min_eig = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    // Cesaro-project a random PSD element onto the fixed cone of Phi.
    CommutantElement p(rep);
    for (int v = 0; v < rep->graph()->n_vertices(); ++v)
      if (rep->mult(v) > 0) p.block(v) = random_psd(rep->mult(v), rng);
    CommutantElement iter = p;
    CommutantElement acc(rep);
    int horizon = defaults::kIterationCap;
    for (int m = 1; m <= horizon; ++m) {
      acc = acc + iter;
      iter = phi.apply(iter);
    }
    CommutantElement a = cx(1.0 / horizon, 0.0) * acc;
    // Keep only near-fixed samples; otherwise the cone membership is unclear.
    if ((phi.apply(a) - a).norm() > 1e-6 * std::max(1.0, a.norm())) continue;
    double margin = (a - psi.apply(a)).min_eig();
    out.min_eig = std::min(out.min_eig, margin);
    if (margin < -1e-8) {
      out.holds = false;
      return out;
    }
  }
  return out;
}

BoundaryVerdict boundary_np_check(const std::vector<DualPoint>& points,
                                  const std::vector<Matrix>& d_values,
                                  const std::vector<BoundarySample>& samples,
                                  const InducedRep& s0, double pre_tol) {
  require(points.size() == d_values.size(), "one D per point required");
  require(!samples.empty(), "at least one intertwiner sample required");
  const RepPtr& rep = points.front().rep();
  const RepPtr& ind_rep = s0.cov().rep();
  const DirectedGraph& g = *rep->graph();
  int dim = rep->dim();

  BoundaryVerdict out;
  // Precondition: each C intertwines the truncated S0 with the point's
  // covariant pair, on the interior columns the truncation preserves.
  int cap = s0.basis()->level_cap();
  for (const BoundarySample& smp : samples) {
    require(smp.point_index >= 0 &&
                smp.point_index < static_cast<int>(points.size()),
            "sample references a missing point");
    const Matrix& c = smp.c;
    require(c.rows() == dim && c.cols() == ind_rep->dim(),
            "intertwiner has the wrong shape");
    CovariantRep t = points[smp.point_index].to_covariant();
    double resid = 0.0;
    for (int v = 0; v < g.n_vertices(); ++v) {
      Matrix lhs = c * ind_rep->vertex_projection(v);
      Matrix rhs = rep->vertex_projection(v) * c;
      resid = std::max(resid, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    for (int e = 0; e < g.n_edges(); ++e) {
      Matrix gap = c * s0.cov().full_block(e) - t.full_block(e) * c;
      for (int col = 0; col < ind_rep->dim(); ++col)
        if (s0.level_of_coord(col) <= cap - 1)
          resid = std::max(resid, gap.col(col).cwiseAbs().maxCoeff());
    }
    out.precondition_residual = std::max(out.precondition_residual, resid);
    if (resid > pre_tol)
      throw ContractViolation(
          "boundary_np_check: sample is not a truncated intertwiner (residual " +
          std::to_string(resid) + ")");
  }

  int m = static_cast<int>(samples.size());
  Matrix gram = Matrix::Zero(m * dim, m * dim);
  Matrix damped = Matrix::Zero(m * dim, m * dim);
  for (int l = 0; l < m; ++l)
    for (int j = 0; j < m; ++j) {
      Matrix cc = samples[l].c * samples[j].c.adjoint();
      gram.block(l * dim, j * dim, dim, dim) = cc;
      damped.block(l * dim, j * dim, dim, dim) =
          d_values[samples[l].point_index] * cc *
          d_values[samples[j].point_index].adjoint();
    }
  out.min_eig = min_eig_herm(gram - damped);
  out.consistent = out.min_eig >= -1e-9 * std::max(1.0, op_norm(gram));
  return out;
}

}  // namespace nchardy
