#include "nchardy/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace nchardy {

// eta_k* L_{theta_k} = sum_alpha theta_k(alpha) T(e_1)...T(e_k) embedded in H,
// where T(e) = eta_e*.
Matrix series_term_matrix(const CorrTensor& t, const DualPoint& eta) {
  const RepPtr& rep = eta.rep();
  const DirectedGraph& g = *rep->graph();
  Matrix out = Matrix::Zero(rep->dim(), rep->dim());
  for (const auto& [alpha, c] : t.coeffs()) {
    int vs = alpha.src(g);
    Matrix prod = Matrix::Identity(rep->mult(vs), rep->mult(vs));
    for (auto it = alpha.edges().rbegin(); it != alpha.edges().rend(); ++it)
      prod = eta.block(*it).adjoint() * prod;
    out.block(rep->offset(alpha.rng(g)), rep->offset(vs), prod.rows(),
              prod.cols()) += c * prod;
  }
  return out;
}

namespace {
constexpr int kZeroRun = 16;
}  // namespace

EvalResult evaluate(const HardyElement& theta, const DualPoint& eta,
                    double tolerance, int term_cap) {
  require(theta.graph().get() == eta.rep()->graph().get(),
          "element and point live over different graphs");
  const RepPtr& rep = eta.rep();
  EvalResult res;
  res.value = rep->sigma(theta.a0());

  if (theta.is_polynomial()) {
    for (int k = 1; k <= theta.poly_degree(); ++k)
      res.value += series_term_matrix(theta.tensor(k), eta);
    res.terms_used = theta.poly_degree();
    res.tail_bound = 0.0;
    return res;
  }

  double prev_norm = -1.0;
  double ratio = 0.0;
  double tail = std::numeric_limits<double>::infinity();
  bool have_tail = false;
  int zero_run = 0;
  bool any_nonzero = false;

  for (int k = 1; k <= term_cap; ++k) {
    Matrix term = series_term_matrix(theta.tensor(k), eta);
    double n = op_norm(term);
    res.value += term;
    res.terms_used = k;

    if (n > 0.0) {
      any_nonzero = true;
      zero_run = 0;
      if (prev_norm > 0.0) {
        ratio = std::min(n / prev_norm, 0.99);
        tail = n * ratio / (1.0 - ratio);
        have_tail = true;
      }
      prev_norm = n;
    } else {
      ++zero_run;
      if (have_tail) tail *= ratio;  // the majorant still decays over the gap
    }

    if (have_tail && tail < tolerance) {
      res.tail_bound = tail;
      return res;
    }
    if (zero_run >= kZeroRun) {
      if (!any_nonzero) {
        res.tail_bound = 0.0;
        return res;
      }
      res.tail_bound = have_tail ? tail : prev_norm;
      return res;
    }
  }
  res.tail_bound = have_tail ? tail : std::numeric_limits<double>::infinity();
  throw RadiusExceeded("radius exceeded: series did not converge within " +
                           std::to_string(term_cap) + " terms",
                       res);
}

RadiusEstimate radius_of_convergence(const HardyElement& theta, int k_max) {
  require(k_max >= 1, "k_max must be positive");
  RadiusEstimate est;
  est.root_seq.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    double n = corr_norm(theta.tensor(k));
    est.root_seq.push_back(std::pow(n, 1.0 / k));
  }
  int window = std::max(3, k_max / 4);
  window = std::min(window, k_max);
  double top = 0.0;
  for (int k = k_max - window; k < k_max; ++k) top = std::max(top, est.root_seq[k]);
  est.radius = top == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / top;

  est.eventually_geometric = true;
  double base = -1.0;
  for (int k = k_max - window; k + 1 < k_max; ++k) {
    double a = est.root_seq[k] == 0.0 ? 0.0
                                      : std::pow(est.root_seq[k + 1], k + 2) /
                                            std::pow(est.root_seq[k], k + 1);
    if (est.root_seq[k] == 0.0 && est.root_seq[k + 1] == 0.0) continue;
    if (base < 0.0)
      base = a;
    else if (std::abs(a - base) > 1e-9 * std::max(1.0, std::abs(base)))
      est.eventually_geometric = false;
  }
  return est;
}

DirectSum direct_sum(const DualPoint& eta, const DualPoint& zeta) {
  require(eta.rep()->graph().get() == zeta.rep()->graph().get(),
          "points live over different graphs");
  const GraphPtr& g = eta.rep()->graph();
  const Representation& r1 = *eta.rep();
  const Representation& r2 = *zeta.rep();
  std::vector<int> mult(g->n_vertices());
  for (int v = 0; v < g->n_vertices(); ++v) mult[v] = r1.mult(v) + r2.mult(v);
  auto rep = std::make_shared<Representation>(g, mult);

  Matrix e1 = Matrix::Zero(rep->dim(), r1.dim());
  Matrix e2 = Matrix::Zero(rep->dim(), r2.dim());
  for (int v = 0; v < g->n_vertices(); ++v) {
    e1.block(rep->offset(v), r1.offset(v), r1.mult(v), r1.mult(v)).setIdentity();
    e2.block(rep->offset(v) + r1.mult(v), r2.offset(v), r2.mult(v), r2.mult(v))
        .setIdentity();
  }

  std::vector<Matrix> blocks;
  for (int e = 0; e < g->n_edges(); ++e) {
    int vs = g->src(e), vr = g->rng(e);
    Matrix b = Matrix::Zero(mult[vs], mult[vr]);
    b.topLeftCorner(r1.mult(vs), r1.mult(vr)) = eta.block(e);
    b.bottomRightCorner(r2.mult(vs), r2.mult(vr)) = zeta.block(e);
    blocks.push_back(std::move(b));
  }
  DualPoint point(rep, std::move(blocks));
  return DirectSum{std::move(rep), std::move(e1), std::move(e2), std::move(point)};
}

DualPoint unitary_conjugate(const CommutantElement& u, const DualPoint& eta) {
  require(same_rep(u.rep(), eta.rep()), "unitary acts on a different representation");
  require(u.is_unitary(1e-12), "conjugator is not unitary");
  return dual_correspondence(eta.rep()).act(u, eta, u.adjoint());
}

namespace {

// I_{E^(x)k} (x) C for C: H_sigma -> H_tau given by vertex blocks.
Matrix ampliate_between(const PathSpace& src_ps, const PathSpace& dst_ps,
                        const std::vector<Matrix>& c_blocks) {
  const DirectedGraph& g = *src_ps.rep()->graph();
  Matrix out = Matrix::Zero(dst_ps.dim(), src_ps.dim());
  for (int i = 0; i < src_ps.n_paths(); ++i) {
    int v = src_ps.path(i).src(g);
    out.block(dst_ps.offset(i), src_ps.offset(i), dst_ps.block_size(i),
              src_ps.block_size(i)) = c_blocks[v];
  }
  return out;
}

Matrix assemble_c(const Representation& rs, const Representation& rt,
                  const std::vector<Matrix>& blocks) {
  Matrix c = Matrix::Zero(rt.dim(), rs.dim());
  for (int v = 0; v < rs.graph()->n_vertices(); ++v)
    c.block(rt.offset(v), rs.offset(v), rt.mult(v), rs.mult(v)) = blocks[v];
  return c;
}

}  // namespace

IntertwinerBasis intertwiner_space(const DualPoint& eta, const DualPoint& zeta,
                                   int check_powers) {
  require(eta.rep()->graph().get() == zeta.rep()->graph().get(),
          "points live over different graphs");
  const GraphPtr& graph = eta.rep()->graph();
  const Representation& rs = *eta.rep();   // sigma on H_sigma
  const Representation& rt = *zeta.rep();  // tau on H_tau
  const DirectedGraph& g = *graph;

  // Unknowns: blocks C_v (mt_v x ms_v), stacked in vertex order.
  std::vector<int> var_off(g.n_vertices() + 1, 0);
  for (int v = 0; v < g.n_vertices(); ++v)
    var_off[v + 1] = var_off[v] + rt.mult(v) * rs.mult(v);

  int rows = 0;
  for (int e = 0; e < g.n_edges(); ++e)
    rows += rt.mult(g.rng(e)) * rs.mult(g.src(e));

  Matrix sys = Matrix::Zero(rows, var_off.back());
  int r0 = 0;
  for (int e = 0; e < g.n_edges(); ++e) {
    int vs = g.src(e), vr = g.rng(e);
    int nrow = rt.mult(vr) * rs.mult(vs);
    // vec(C_r eta_e*) = kron(conj(eta_e), I) vec(C_r)
    sys.block(r0, var_off[vr], nrow, rt.mult(vr) * rs.mult(vr)) =
        kron(eta.block(e).conjugate(), Matrix::Identity(rt.mult(vr), rt.mult(vr)));
    // vec(zeta_e* C_s) = kron(I, zeta_e*) vec(C_s)
    sys.block(r0, var_off[vs], nrow, rt.mult(vs) * rs.mult(vs)) -=
        kron(Matrix::Identity(rs.mult(vs), rs.mult(vs)), zeta.block(e).adjoint());
    r0 += nrow;
  }

  Matrix null = null_space(sys);
  IntertwinerBasis out{eta, zeta, {}, 0.0};
  for (Eigen::Index j = 0; j < null.cols(); ++j) {
    std::vector<Matrix> blocks;
    for (int v = 0; v < g.n_vertices(); ++v)
      blocks.push_back(Eigen::Map<const Matrix>(
          null.col(j).data() + var_off[v], rt.mult(v), rs.mult(v)));
    out.basis.push_back(assemble_c(rs, rt, blocks));

    // Consequence check: C eta_k* = zeta_k* (I (x) C) for k <= check_powers.
    CovariantRep ts = eta.to_covariant();
    CovariantRep tt = zeta.to_covariant();
    std::vector<Matrix> cb = blocks;
    for (int k = 1; k <= check_powers; ++k) {
      PathSpace ps_s(eta.rep(), k), ps_t(zeta.rep(), k);
      Matrix lhs = out.basis.back() * generalized_power(ts, k);
      Matrix rhs = generalized_power(tt, k) * ampliate_between(ps_s, ps_t, cb);
      out.power_residual = std::max(out.power_residual, op_norm(lhs - rhs));
    }
  }
  return out;
}

Section section_of(const HardyElement& theta, double tolerance) {
  return [theta, tolerance](const DualPoint& eta) {
    return evaluate(theta, eta, tolerance);
  };
}

std::string format_table(const PreservationReport& report) {
  std::ostringstream out;
  out << "pair  dim I  residual      budget        verdict\n";
  for (const PreservationRow& row : report.rows) {
    char line[96];
    std::snprintf(line, sizeof(line), "%4d  %5d  %.6e  %.6e  %s\n",
                  row.pair_index, row.intertwiner_dim, row.residual, row.budget,
                  row.pass ? "pass" : "FAIL");
    out << line;
  }
  out << (report.all_pass ? "all pairs preserve intertwiners\n"
                          : "intertwiner preservation VIOLATED\n");
  return out.str();
}

PreservationReport check_intertwiner_preservation(
    const Section& f, const std::vector<std::pair<DualPoint, DualPoint>>& samples,
    double tolerance) {
  PreservationReport report;
  int idx = 0;
  for (const auto& [eta, zeta] : samples) {
    IntertwinerBasis space = intertwiner_space(eta, zeta);
    EvalResult fe = f(eta);
    EvalResult fz = f(zeta);
    double resid = 0.0;
    for (const Matrix& c : space.basis)
      resid = std::max(resid, op_norm(c * fe.value - fz.value * c));
    PreservationRow row;
    row.pair_index = idx++;
    row.intertwiner_dim = static_cast<int>(space.basis.size());
    row.residual = resid;
    row.budget = tolerance + fe.tail_bound + fz.tail_bound;
    row.pass = resid <= row.budget;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace nchardy
