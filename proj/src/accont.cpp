#include "nchardy/accont.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nchardy {

IntertwinerSpace induced_intertwiners(const InducedRep& s0, const CovariantRep& t) {
  const RepPtr& ind = s0.cov().rep();
  const RepPtr& rep = t.rep();
  const DirectedGraph& g = *rep->graph();
  require(ind->graph().get() == rep->graph().get(),
          "induced space and target live over different graphs");
  int cap = s0.basis()->level_cap();

  // C sigma0 = sigma C forces vertex blocks C_v: Ind_v -> H_v.
  std::vector<int> var_off(g.n_vertices() + 1, 0);
  for (int v = 0; v < g.n_vertices(); ++v)
    var_off[v + 1] = var_off[v] + rep->mult(v) * ind->mult(v);

  // Interior columns of each vertex block of the induced space.
  std::vector<std::vector<int>> interior(g.n_vertices());
  for (int v = 0; v < g.n_vertices(); ++v)
    for (int j = 0; j < ind->mult(v); ++j)
      if (s0.level_of_coord(ind->offset(v) + j) <= cap - 1)
        interior[v].push_back(j);

  int rows = 0;
  for (int e = 0; e < g.n_edges(); ++e)
    rows += rep->mult(g.rng(e)) * static_cast<int>(interior[g.src(e)].size());

  Matrix sys = Matrix::Zero(rows, var_off.back());
  int r0 = 0;
  for (int e = 0; e < g.n_edges(); ++e) {
    int vs = g.src(e), vr = g.rng(e);
    const std::vector<int>& cols = interior[vs];
    int nj = static_cast<int>(cols.size());
    if (nj == 0) continue;
    // S block with interior columns only, and the matching column selector.
    Matrix s_block(ind->mult(vr), nj);
    Matrix selector = Matrix::Zero(ind->mult(vs), nj);
    for (int jj = 0; jj < nj; ++jj) {
      s_block.col(jj) = s0.cov().block(e).col(cols[jj]);
      selector(cols[jj], jj) = 1.0;
    }
    int nrow = rep->mult(vr) * nj;
    // vec(C_r S) - vec(T(e) C_s Sel) = 0
    sys.block(r0, var_off[vr], nrow, rep->mult(vr) * ind->mult(vr)) =
        kron(s_block.transpose(), Matrix::Identity(rep->mult(vr), rep->mult(vr)));
    sys.block(r0, var_off[vs], nrow, rep->mult(vs) * ind->mult(vs)) -=
        kron(selector.transpose(), t.block(e));
    r0 += nrow;
  }

  Matrix null = null_space(sys);
  IntertwinerSpace out;
  for (Eigen::Index k = 0; k < null.cols(); ++k) {
    Matrix c = Matrix::Zero(rep->dim(), ind->dim());
    for (int v = 0; v < g.n_vertices(); ++v)
      c.block(rep->offset(v), ind->offset(v), rep->mult(v), ind->mult(v)) =
          Eigen::Map<const Matrix>(null.col(k).data() + var_off[v],
                                   rep->mult(v), ind->mult(v));
    out.basis.push_back(std::move(c));
  }
  return out;
}

SuperharmonicFlags is_superharmonic(const CommutantElement& q,
                                    const Superoperator& phi, int cap,
                                    double threshold) {
  SuperharmonicFlags out;
  double scale = std::max(1.0, q.norm());
  bool psd = q.min_eig() >= -tol::kResidual * scale;
  bool decreasing = (q - phi.apply(q)).min_eig() >= -tol::kResidual * scale;
  out.superharmonic = psd && decreasing;
  CommutantElement iter = q;
  for (int n = 1; n <= cap; ++n) {
    iter = phi.apply(iter);
    double norm = iter.norm();
    out.decay.push_back(norm);
    if (norm <= threshold) {
      out.pure = out.superharmonic;
      break;
    }
  }
  return out;
}

SuperharmonicCertificate superharmonic_certificate(const CommutantElement& q,
                                                   const CovariantRep& t,
                                                   FockBasisPtr basis) {
  const RepPtr& rep = t.rep();
  Superoperator phi = cp_map(t);
  SuperharmonicFlags flags = is_superharmonic(q, phi);
  require(flags.superharmonic && flags.pure,
          "superharmonic_certificate needs a pure superharmonic Q");

  CommutantElement gap = q - phi.apply(q);
  CommutantElement r(rep);
  for (int v = 0; v < rep->graph()->n_vertices(); ++v)
    r.block(v) = psd_sqrt(gap.block(v));
  CommutantElement r2 = r * r;

  int cap = basis->level_cap();
  SuperharmonicCertificate cert{q, r, {}, 0.0, Matrix(), 0.0, 0.0};
  CommutantElement term = r2;
  CommutantElement acc(rep);
  for (int n = 0; n <= cap; ++n) {
    acc = acc + term;
    cert.partial_sums.push_back(acc);
    term = phi.apply(term);
  }
  CommutantElement qtail = q;
  for (int n = 0; n < cap + 1; ++n) qtail = phi.apply(qtail);
  cert.tail = qtail.norm();  // ||Phi^{N+1}(Q)||

  // C* = sum_{n<=N} (I_{E^n} (x) r) T~_n*, written in the coordinates of the
  // induced representation with pi0 = sigma (the inclusion isometry).
  InducedRep tail(*rep, basis);
  const RepPtr& ind = tail.cov().rep();
  const DirectedGraph& g = *rep->graph();
  const FockBasis& fb = *basis;
  Matrix cstar = Matrix::Zero(ind->dim(), rep->dim());
  for (int n = 0; n <= cap; ++n) {
    PathSpace ps(rep, n);
    Matrix layer = ps.ampliation(r) * generalized_power(t, n).adjoint();
    for (int i = 0; i < ps.n_paths(); ++i) {
      int bi = fb.index(ps.path(i));
      for (int x = 0; x < ps.block_size(i); ++x)
        cstar.row(tail.coord(bi, x)) = layer.row(ps.offset(i) + x);
    }
  }
  cert.c = cstar.adjoint();

  Matrix ccs = cert.c * cert.c.adjoint();
  cert.cc_star_residual = op_norm(ccs - q.to_operator());

  // Interior-column intertwining residual of C S0(e) = T(e) C.
  double resid = 0.0;
  for (int e = 0; e < g.n_edges(); ++e) {
    Matrix gap_e = cert.c * tail.cov().full_block(e) - t.full_block(e) * cert.c;
    for (int col = 0; col < ind->dim(); ++col)
      if (tail.level_of_coord(col) <= cap - 1)
        resid = std::max(resid, gap_e.col(col).cwiseAbs().maxCoeff());
  }
  cert.intertwining_residual = resid;
  return cert;
}

CncResult completely_non_coisometric(const CovariantRep& t) {
  require(t.norm() <= 1.0 + 1e-12,
          "completely_non_coisometric needs a contractive representation");
  const RepPtr& rep = t.rep();
  const DirectedGraph& g = *rep->graph();
  const Matrix& tt = t.t_tilde();
  Matrix prod = tt * tt.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(prod);
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i) - 1.0) <= tol::kResidual)
      keep.push_back(static_cast<int>(i));
  Matrix w(rep->dim(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    w.col(i) = es.eigenvectors().col(keep[i]);

  std::vector<Matrix> generators;
  for (int e = 0; e < g.n_edges(); ++e)
    generators.push_back(t.full_block(e).adjoint());
  for (int v = 0; v < g.n_vertices(); ++v)
    generators.push_back(rep->vertex_projection(v));

  while (w.cols() > 0) {
    Matrix comp = Matrix::Identity(rep->dim(), rep->dim()) - w * w.adjoint();
    Matrix stacked(static_cast<Eigen::Index>(generators.size()) * rep->dim(),
                   w.cols());
    for (std::size_t i = 0; i < generators.size(); ++i)
      stacked.middleRows(static_cast<Eigen::Index>(i) * rep->dim(), rep->dim()) =
          comp * generators[i] * w;
    Matrix coeffs = null_space(stacked, 1e-10);
    if (coeffs.cols() == w.cols()) break;  // stable
    w = (w * coeffs).eval();
  }
  return CncResult{w.cols() == 0, std::move(w)};
}

std::optional<PeriodicState> periodic_state_search(const Superoperator& phi,
                                                   int k_max, int horizon,
                                                   double trace_floor) {
  const RepPtr& rep = phi.rep();
  double phi_one_gap =
      (CommutantElement::identity(rep) - phi.apply(CommutantElement::identity(rep)))
          .min_eig();
  require(phi_one_gap >= -tol::kResidual, "periodic_state_search needs Phi(I) <= I");

  Superoperator dual = phi.dual();
  auto trace_of = [&](const CommutantElement& a) {
    cx tr = 0.0;
    for (int v = 0; v < rep->graph()->n_vertices(); ++v)
      tr += a.block(v).trace();
    return tr.real();
  };

  CommutantElement mixed = cx(1.0 / rep->dim(), 0.0) *
                           CommutantElement::identity(rep);
  for (int k = 1; k <= k_max; ++k) {
    // Cesaro averages of (Phi^k)^dual applied to the maximally mixed state.
    CommutantElement iter = mixed;
    CommutantElement acc(rep);
    CommutantElement prev_avg(rep);
    int m = 0;
    bool converged = false;
    bool dead = false;
    while (m < horizon) {
      ++m;
      acc = acc + iter;
      if (trace_of(iter) < trace_floor * 1e-3) {
        // Trace decay kills every period at once.
        if (trace_of(cx(1.0 / m, 0.0) * acc) < trace_floor) return std::nullopt;
        dead = true;
      }
      for (int step = 0; step < k; ++step) iter = dual.apply(iter);
      if (m % 32 == 0) {
        CommutantElement avg = cx(1.0 / m, 0.0) * acc;
        if ((avg - prev_avg).norm() < 1e-12) {
          converged = true;
          acc = avg;
          break;
        }
        prev_avg = avg;
      }
      if (dead) break;
    }
    CommutantElement limit = converged ? acc : cx(1.0 / m, 0.0) * acc;
    double tr = trace_of(limit);
    if (tr <= trace_floor) continue;
    CommutantElement state = cx(1.0 / tr, 0.0) * limit;
    CommutantElement image = state;
    for (int step = 0; step < k; ++step) image = dual.apply(image);
    if ((image - state).norm() <= tol::kPurity)
      return PeriodicState{k, state};
  }
  return std::nullopt;
}

ACReport ac_membership(const CovariantRep& t, FockBasisPtr basis,
                       int periodic_k_max) {
  require(t.norm() <= 1.0 + 1e-12, "ac_membership needs a contractive representation");
  ACReport report;
  CncResult cnc = completely_non_coisometric(t);
  report.w = cnc.w;

  // Marginal spectrum near 1 makes the kernel detection unreliable.
  const Matrix& tt = t.t_tilde();
  Matrix prod = tt * tt.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(prod, Eigen::EigenvaluesOnly);
  bool marginal = false;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double gap = std::abs(es.eigenvalues()(i) - 1.0);
    if (gap > tol::kResidual && gap <= 10.0 * tol::kResidual) marginal = true;
  }

  if (cnc.completely_non_coisometric && marginal) {
    report.verdict = AcVerdict::undecided;
  } else if (cnc.completely_non_coisometric) {
    report.verdict = AcVerdict::absolutely_continuous;
  } else {
    report.verdict = AcVerdict::not_ac;
  }

  Superoperator phi = cp_map(t);
  if (report.verdict == AcVerdict::not_ac) {
    report.periodic_state = periodic_state_search(phi, periodic_k_max);
  } else if (report.verdict == AcVerdict::absolutely_continuous) {
    Classification cls = classify(t);
    if (cls.pure)
      report.certificates.push_back(superharmonic_certificate(
          CommutantElement::identity(t.rep()), t, basis));
  }

  // Consistency of the two detectors: a periodic state forces not_ac.
  if (report.periodic_state && report.verdict != AcVerdict::not_ac)
    report.verdict = AcVerdict::undecided;
  return report;
}

bool is_wandering(const Vector& h, const CovariantRep& t, int level_cap,
                  double eps) {
  const Matrix& tt = t.t_tilde();
  Matrix gram = tt.adjoint() * tt;
  require(op_norm(gram - gram * gram) <= tol::kResidual,
          "is_wandering needs an isometric representation (T~ must be a "
          "partial isometry)");
  const RepPtr& rep = t.rep();
  require(h.size() == rep->dim(), "vector does not live on H");

  std::vector<Matrix> frames;
  for (int n = 0; n <= level_cap; ++n) {
    PathSpace ps(rep, n);
    Matrix power = generalized_power(t, n);
    Matrix frame(rep->dim(), ps.n_paths());
    for (int i = 0; i < ps.n_paths(); ++i)
      frame.col(i) = power.middleCols(ps.offset(i), ps.block_size(i)) *
                     h.segment(rep->offset(ps.path(i).src(*rep->graph())),
                               ps.block_size(i));
    frames.push_back(std::move(frame));
  }
  for (int n = 0; n <= level_cap; ++n)
    for (int m = n + 1; m <= level_cap; ++m)
      if (frames[n].cols() > 0 && frames[m].cols() > 0 &&
          (frames[n].adjoint() * frames[m]).cwiseAbs().maxCoeff() > eps)
        return false;
  return true;
}

}  // namespace nchardy
