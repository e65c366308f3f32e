// Acceptance runner: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Everything is seeded and runs at desk scale.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nchardy/accont.hpp"
#include "nchardy/eval.hpp"
#include "nchardy/pick.hpp"
#include "nchardy/suite.hpp"

using namespace nchardy;

namespace {

GraphPtr c2_graph() {
  return std::make_shared<DirectedGraph>(
      std::vector<std::string>{"1", "2"},
      std::vector<DirectedGraph::Edge>{{"f", 0, 1}, {"g", 1, 0}});
}

RepPtr scalar_rep(GraphPtr g) {
  return std::make_shared<Representation>(Representation::scalar(std::move(g)));
}

Matrix m1x1(cx v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

DualPoint random_interior_point(const RepPtr& rep, double radius, Rng& rng) {
  const DirectedGraph& g = *rep->graph();
  std::vector<Matrix> blocks;
  for (int e = 0; e < g.n_edges(); ++e)
    blocks.push_back(random_matrix(rep->mult(g.rng(e)), rep->mult(g.src(e)), rng));
  CovariantRep t = make_covariant(rep, blocks);
  double scale = radius / std::max(radius, t.norm());
  for (Matrix& b : blocks) b *= scale;
  return DualPoint::from_covariant(make_covariant(rep, blocks));
}

HardyElement random_polynomial(GraphPtr g, int degree, Rng& rng) {
  std::vector<CorrTensor> ts;
  for (int k = 1; k <= degree; ++k) ts.push_back(random_tensor(g, k, rng));
  return HardyElement(random_algebra_element(g, rng), std::move(ts));
}

// A failure message, or empty on success.
using Body = std::function<std::string()>;

struct Criterion {
  int id;
  std::string name;
  Body body;
};

std::string check_suites(std::initializer_list<SuiteResult> results) {
  std::ostringstream fail;
  int total = 0;
  for (const SuiteResult& r : results) {
    total += r.passed;
    if (!r.ok()) fail << r.name << ": " << r.failures.front() << "; ";
  }
  if (!fail.str().empty()) return fail.str();
  return "";
}

// --- criterion bodies ------------------------------------------------------

std::string c1_axioms() {
  return check_suites({suite_corr_axioms(c2_graph(), 350, 1),
                       suite_corr_axioms(DirectedGraph::free_loops(3), 350, 2)});
}

std::string c2_cuntz_toeplitz() {
  return check_suites({suite_cuntz_toeplitz(c2_graph(), 6, 1e-12),
                       suite_cuntz_toeplitz(DirectedGraph::free_loops(2), 6, 1e-12)});
}

std::string c3_norm_identity() {
  return check_suites(
      {suite_norm_identity(c2_graph(), 50, 3, 4, 1e-10),
       suite_norm_identity(DirectedGraph::free_loops(2), 50, 4, 4, 1e-10)});
}

std::string c4_gauge() {
  return check_suites({suite_gauge(c2_graph(), 5, 5),
                       suite_gauge(DirectedGraph::free_loops(2), 5, 6)});
}

std::string c5_classical_pick() {
  auto loop = DirectedGraph::free_loops(1);
  auto rep = scalar_rep(loop);
  auto classical = [](const std::vector<cx>& z, const std::vector<cx>& w) {
    int k = static_cast<int>(z.size());
    Matrix p(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        p(i, j) = (1.0 - w[i] * std::conj(w[j])) / (1.0 - std::conj(z[i]) * z[j]);
    return p;
  };
  auto solve = [&](const std::vector<cx>& z, const std::vector<cx>& w) {
    InterpolationProblem prob;
    for (std::size_t i = 0; i < z.size(); ++i) {
      prob.points.emplace_back(rep, std::vector<Matrix>{m1x1(z[i])});
      prob.left.push_back(Matrix::Identity(1, 1));
      prob.right.push_back(m1x1(w[i]));
    }
    return np_feasible(prob).feasible;
  };

  // Hand-computed instances.
  if (!solve({0.0, 0.5}, {0.0, 0.5})) return "all-ones instance not feasible";
  if (solve({0.0, 0.5}, {0.0, 0.9})) return "Schwarz-violating instance feasible";

  Rng rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int done = 0;
  while (done < 100) {
    int k = 2 + static_cast<int>(rng() % 4);  // up to 5 points
    std::vector<cx> z, w;
    for (int i = 0; i < k; ++i) {
      z.push_back(0.85 * unif(rng) * std::polar(1.0, 6.283185307 * unif(rng)));
      w.push_back(1.2 * unif(rng) * std::polar(1.0, 6.283185307 * unif(rng)));
    }
    Matrix cp = classical(z, w);
    double eig = min_eig_herm(cp);
    if (std::abs(eig) <= 10 * tol::kPsdRel * op_norm(cp)) continue;  // marginal
    if (solve(z, w) != (eig >= 0.0)) {
      std::ostringstream msg;
      msg << "disagreement at instance " << done << " (classical min eig " << eig
          << ")";
      return msg.str();
    }
    ++done;
  }
  return "";
}

std::string c6_roundtrip_interpolation() {
  Rng rng(11);
  for (GraphPtr g : {c2_graph(), DirectedGraph::free_loops(2)}) {
    auto fb = std::make_shared<FockBasis>(g, 8);
    auto rep = scalar_rep(g);
    for (int trial = 0; trial < 25; ++trial) {
      HardyElement theta = random_polynomial(g, 1 + static_cast<int>(rng() % 3), rng);
      double lower = hardy_norm_lower(theta, fb);
      theta = theta.scaled(cx(1.0 / lower, 0.0));
      int k = 1 + static_cast<int>(rng() % 4);
      // The truncated norm undershoots the true norm, so the certificate
      // element is marginally larger than 1. Points well inside the ball and
      // pairwise separated keep the Pick matrix away from the degeneracies
      // that gap could tip negative.
      InterpolationProblem prob;
      while (static_cast<int>(prob.points.size()) < k) {
        DualPoint eta = random_interior_point(rep, 0.35, rng);
        bool separated = true;
        for (const DualPoint& other : prob.points)
          separated = separated &&
                      op_norm(eta.as_matrix() - other.as_matrix()) >= 0.2;
        if (!separated) continue;
        prob.points.push_back(eta);
        prob.left.push_back(Matrix::Identity(rep->dim(), rep->dim()));
        prob.right.push_back(evaluate(theta, eta).value);
      }
      NpResult r = np_feasible(prob);
      if (!r.feasible) {
        std::ostringstream msg;
        msg << "roundtrip instance infeasible (min Choi eig " << r.choi.min_eig
            << ")";
        return msg.str();
      }
    }
  }
  return "";
}

std::string c7_realization_forward() {
  Rng rng(13);
  auto loop = DirectedGraph::free_loops(1);
  auto lrep = scalar_rep(loop);
  auto c2 = c2_graph();
  auto crep = scalar_rep(c2);
  for (int trial = 0; trial < 50; ++trial) {
    bool on_loop = trial < 30;
    RepPtr rep = on_loop ? lrep : crep;
    std::vector<int> aux = on_loop
                               ? std::vector<int>{1 + static_cast<int>(rng() % 4)}
                               : std::vector<int>{2, 2};
    Realization r = random_coisometric_realization(rep, aux, rng);
    std::vector<DualPoint> sample;
    std::vector<Matrix> values;
    for (int i = 0; i < 4; ++i) {
      DualPoint p = random_interior_point(rep, 0.65, rng);
      sample.push_back(p);
      values.push_back(realization_evaluate(r, p));
    }
    CpVerdict v = schur_kernel_test(values, sample);
    if (v.min_eig < -1e-8) {
      std::ostringstream msg;
      msg << "realization " << trial << " fails the kernel test (min eig "
          << v.min_eig << ")";
      return msg.str();
    }
  }
  return "";
}

std::string c8_schwartz() {
  Rng rng(17);
  for (GraphPtr g : {c2_graph(), DirectedGraph::free_loops(2)}) {
    auto fb = std::make_shared<FockBasis>(g, 8);
    auto rep = scalar_rep(g);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<CorrTensor> ts;
      int deg = 1 + static_cast<int>(rng() % 3);
      for (int k = 1; k <= deg; ++k) ts.push_back(random_tensor(g, k, rng));
      HardyElement theta(AlgebraElement(g), std::move(ts));
      double lower = hardy_norm_lower(theta, fb);
      theta = theta.scaled(cx((1.0 - 1e-13) / lower, 0.0));
      DualPoint eta = random_interior_point(rep, 0.75, rng);
      SchwartzResult res = schwartz_check(theta, eta, fb);
      if (!res.pass) {
        std::ostringstream msg;
        msg << "Schwartz violation by " << -res.min_eig << " (slack " << res.slack
            << ")";
        return msg.str();
      }
    }
  }
  return "";
}

std::string c9_intertwiner_preservation() {
  Rng rng(19);
  for (GraphPtr g : {c2_graph(), DirectedGraph::free_loops(2)}) {
    auto rep = scalar_rep(g);
    for (int trial = 0; trial < 25; ++trial) {
      // Half polynomials, half geometric series of radius 2 (coefficient 2^-k
      // on the first path of each level).
      HardyElement theta =
          (trial % 2 == 0)
              ? random_polynomial(g, 1 + static_cast<int>(rng() % 3), rng)
              : HardyElement(AlgebraElement::one(g), [g](int k) {
                  CorrTensor t(g, k);
                  t.set_coeff(paths_of_length(*g, k).front(), std::pow(0.5, k));
                  return t;
                });
      DualPoint eta = random_interior_point(rep, 0.55, rng);
      DualPoint etap = random_interior_point(rep, 0.55, rng);
      DirectSum ds = direct_sum(eta, etap);
      std::vector<Matrix> ublocks;
      for (int v = 0; v < g->n_vertices(); ++v)
        ublocks.push_back(random_unitary(ds.rep->mult(v), rng));
      DualPoint zeta =
          unitary_conjugate(CommutantElement(ds.rep, ublocks), ds.point);
      PreservationReport rep_out = check_intertwiner_preservation(
          section_of(theta, 1e-11), {{eta, zeta}}, 1e-10);
      if (rep_out.rows[0].intertwiner_dim < 1)
        return "constructed pair has a trivial intertwiner space";
      if (!rep_out.all_pass) {
        std::ostringstream msg;
        msg << "preservation residual " << rep_out.rows[0].residual
            << " exceeds budget " << rep_out.rows[0].budget;
        return msg.str();
      }
    }
  }

  // The entrywise-conjugation counterexample must be flagged.
  auto loop = DirectedGraph::free_loops(1);
  auto lrep1 = scalar_rep(loop);
  auto lrep2 = std::make_shared<Representation>(loop, std::vector<int>{2});
  HardyElement gen =
      HardyElement::from_tensor(CorrTensor::delta(loop, Path(*loop, {0})));
  Section conj_section = [gen](const DualPoint& p) {
    EvalResult r = evaluate(gen, p);
    r.value = r.value.conjugate();
    return r;
  };
  DualPoint z(lrep1, {m1x1(cx(0, 0.8))});
  Matrix u(2, 2);
  u << cx(1, 0), cx(0, 1), cx(0, 1), cx(1, 0);
  u /= std::sqrt(2.0);
  Matrix block =
      u * (Matrix(2, 2) << cx(0, 0.8), 0, 0, cx(0, -0.8)).finished() * u.adjoint();
  DualPoint zeta2(lrep2, {block});
  PreservationReport counter =
      check_intertwiner_preservation(conj_section, {{z, zeta2}}, 1e-10);
  if (counter.rows[0].pass || counter.rows[0].residual <= 1e-3)
    return "conjugation counterexample was not flagged";
  return "";
}

std::string c10_functoriality() {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    GraphPtr g = (trial % 2 == 0) ? c2_graph() : DirectedGraph::free_loops(2);
    auto rep = scalar_rep(g);
    HardyElement theta = random_polynomial(g, 2, rng);
    DualPoint eta = random_interior_point(rep, 0.6, rng);
    auto rep2 = std::make_shared<Representation>(
        g, std::vector<int>(g->n_vertices(), 2));
    DualPoint zeta = random_interior_point(rep2, 0.6, rng);

    DirectSum ds = direct_sum(eta, zeta);
    EvalResult sum = evaluate(theta, ds.point);
    Matrix split = ds.embed1 * evaluate(theta, eta).value * ds.embed1.adjoint() +
                   ds.embed2 * evaluate(theta, zeta).value * ds.embed2.adjoint();
    double budget = sum.tail_bound + 1e-12;
    if (op_norm(sum.value - split) > budget)
      return "direct-sum functoriality residual exceeds the tail budget";

    std::vector<Matrix> ublocks;
    for (int v = 0; v < g->n_vertices(); ++v)
      ublocks.push_back(random_unitary(2, rng));
    CommutantElement uu(rep2, ublocks);
    Matrix ufull = uu.to_operator();
    EvalResult conj = evaluate(theta, unitary_conjugate(uu, zeta));
    Matrix expect = ufull * evaluate(theta, zeta).value * ufull.adjoint();
    if (op_norm(conj.value - expect) > conj.tail_bound + 1e-12)
      return "unitary-similarity functoriality residual exceeds the tail budget";
  }
  return "";
}

std::string c11_superharmonic() {
  // Scalar T = 1/2 geometric identity at N = 20, to 1e-10.
  auto loop = DirectedGraph::free_loops(1);
  auto lrep = scalar_rep(loop);
  CovariantRep half = make_covariant(lrep, {m1x1(0.5)});
  auto fb20 = std::make_shared<FockBasis>(loop, 20);
  SuperharmonicCertificate cert =
      superharmonic_certificate(CommutantElement::identity(lrep), half, fb20);
  if (std::abs(cert.partial_sums.back().block(0)(0, 0) - cx(1.0)) > 1e-10)
    return "scalar geometric identity misses 1";

  // Telescoping bound for 20 random pure covreps with Q = I at every N <= 30.
  Rng rng(29);
  auto g = c2_graph();
  auto rep = std::make_shared<Representation>(g, std::vector<int>{2, 2});
  for (int trial = 0; trial < 20; ++trial) {
    Matrix b0 = random_matrix(2, 2, rng);
    Matrix b1 = random_matrix(2, 2, rng);
    CovariantRep raw = make_covariant(rep, {b0, b1});
    std::uniform_real_distribution<double> unif(0.7, 0.9);
    double target = unif(rng);
    double s = target / raw.norm();
    CovariantRep t = make_covariant(rep, {s * b0, s * b1});
    Superoperator phi = cp_map(t);
    CommutantElement q = CommutantElement::identity(rep);
    CommutantElement r2 = q - phi.apply(q);
    CommutantElement acc(rep);
    CommutantElement term = r2;
    CommutantElement tail_el = phi.apply(q);
    for (int n = 0; n <= 30; ++n) {
      acc = acc + term;
      // || sum_{j<=n} Phi^j(r^2) - Q || <= || Phi^{n+1}(Q) ||, up to roundoff.
      if ((acc - q).norm() > tail_el.norm() + 1e-12) {
        std::ostringstream msg;
        msg << "telescoping bound fails at trial " << trial << ", N = " << n;
        return msg.str();
      }
      term = phi.apply(term);
      tail_el = phi.apply(tail_el);
    }
  }
  return "";
}

std::string c12_ac_classification() {
  auto loop = DirectedGraph::free_loops(1);
  auto lrep = scalar_rep(loop);
  auto fb = std::make_shared<FockBasis>(loop, 6);
  Rng rng(31);

  for (int trial = 0; trial < 20; ++trial) {
    cx z = random_complex(rng);
    ACReport r = ac_membership(
        make_covariant(lrep, {m1x1(0.8 * z / std::max(1.0, std::abs(z)))}), fb);
    if (r.verdict != AcVerdict::absolutely_continuous)
      return "strict contraction not classified AC";
  }

  ACReport unit = ac_membership(make_covariant(lrep, {m1x1(1.0)}), fb);
  if (unit.verdict != AcVerdict::not_ac || !unit.periodic_state)
    return "scalar unitary missing the not-AC verdict or periodic witness";
  if (unit.w.cols() != 1) return "scalar unitary missing the W witness";

  auto free2 = DirectedGraph::free_loops(2);
  auto frep = scalar_rep(free2);
  auto ffb = std::make_shared<FockBasis>(free2, 5);
  ACReport onezero =
      ac_membership(make_covariant(frep, {m1x1(1.0), m1x1(0.0)}), ffb);
  if (onezero.verdict != AcVerdict::not_ac || onezero.w.cols() != 1)
    return "free (1,0) point missing the not-AC verdict with W witness";

  for (GraphPtr g : {c2_graph(), DirectedGraph::free_loops(2)}) {
    auto basis = std::make_shared<FockBasis>(g, 3);
    InducedRep ind(Representation::scalar(g), basis);
    ACReport r = ac_membership(ind.cov(), basis);
    if (r.verdict != AcVerdict::absolutely_continuous)
      return "induced representation not classified AC";
  }

  // Detector agreement on 100 random instances.
  auto g = c2_graph();
  auto rep = std::make_shared<Representation>(g, std::vector<int>{2, 2});
  auto cfb = std::make_shared<FockBasis>(g, 4);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix b0 = random_matrix(2, 2, rng);
    Matrix b1 = random_matrix(2, 2, rng);
    CovariantRep raw = make_covariant(rep, {b0, b1});
    double s = (trial % 2 == 0 ? 1.0 : 0.75) / raw.norm();
    CovariantRep t = make_covariant(rep, {s * b0, s * b1});
    CncResult cnc = completely_non_coisometric(t);
    auto periodic = periodic_state_search(cp_map(t), 4);
    if (periodic && cnc.completely_non_coisometric) {
      std::ostringstream msg;
      msg << "detectors disagree at instance " << trial;
      return msg.str();
    }
  }
  return "";
}

std::string c13_commutator_ideal() {
  auto g = DirectedGraph::free_loops(2);
  auto rep = scalar_rep(g);
  CorrTensor e1 = CorrTensor::delta(g, Path(*g, {0}));
  CorrTensor e2 = CorrTensor::delta(g, Path(*g, {1}));
  CorrTensor comm = tensor(e1, e2) - tensor(e2, e1);
  HardyElement gen = HardyElement::from_tensor(comm);

  Rng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    DualPoint p = random_interior_point(rep, 0.8, rng);
    EvalResult r = evaluate(gen, p);
    if (op_norm(r.value) > 1e-12)
      return "commutator evaluates to a nonzero scalar value";
  }

  auto fb = std::make_shared<FockBasis>(g, 6);
  IdealCompression ic = ideal_compression({gen}, fb);
  if (ic.compress(truncate(gen, fb)).mat.cwiseAbs().maxCoeff() > 1e-12)
    return "P g P is not zero";
  int interior = fb->level_offset(4 + 1);
  for (int trial = 0; trial < 10; ++trial) {
    HardyElement x = random_polynomial(g, 1, rng);
    HardyElement y = random_polynomial(g, 1, rng);
    FockOperator xm = truncate(x, fb);
    FockOperator ym = truncate(y, fb);
    Matrix lhs = ic.compress(xm).mat * ic.compress(ym).mat;
    Matrix rhs = ic.compress(xm * ym).mat;
    if ((lhs - rhs).leftCols(interior).cwiseAbs().maxCoeff() > 1e-10)
      return "interior compression is not multiplicative";
  }
  return "";
}

std::string c14_cauchy_hadamard() {
  auto loop = DirectedGraph::free_loops(1);
  Rng rng(41);
  // Radius estimates for geometric coefficient norms c^k, at k_max = 60.
  for (double c : {0.5, 0.9, 1.7}) {
    HardyElement theta(AlgebraElement::one(loop), [loop, c](int k) {
      CorrTensor t(loop, k);
      t.set_coeff(Path(*loop, std::vector<int>(k, 0)), std::pow(c, k));
      return t;
    });
    RadiusEstimate est = radius_of_convergence(theta, 60);
    if (std::abs(est.radius - 1.0 / c) > 1e-6)
      return "radius estimate misses 1/c";
  }

  // Partial-sum term norms at ||eta|| = rho are Cauchy with ratio rho*c.
  double c = 0.8, rho = 0.7;
  HardyElement theta(AlgebraElement::one(loop), [loop, c](int k) {
    CorrTensor t(loop, k);
    t.set_coeff(Path(*loop, std::vector<int>(k, 0)), std::pow(c, k));
    return t;
  });
  auto rep3 = std::make_shared<Representation>(loop, std::vector<int>{3});
  Matrix a = random_matrix(3, 3, rng);
  a *= rho / op_norm(a);
  DualPoint eta(rep3, {a});
  double bound = 1.0;
  for (int k = 1; k <= 40; ++k) {
    bound *= rho * c;
    double tk = op_norm(series_term_matrix(theta.tensor(k), eta));
    if (tk > bound * (1.0 + 1e-6)) {
      std::ostringstream msg;
      msg << "term norm " << tk << " exceeds (rho c)^k = " << bound << " at k = "
          << k;
      return msg.str();
    }
  }

  // h(z) = sum z^n at random ||A|| <= 0.9 matches the resolvent to 1e-8.
  HardyElement ones(AlgebraElement::one(loop), [loop](int k) {
    CorrTensor t(loop, k);
    t.set_coeff(Path(*loop, std::vector<int>(k, 0)), 1.0);
    return t;
  });
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + static_cast<int>(rng() % 3);
    auto rep = std::make_shared<Representation>(loop, std::vector<int>{m});
    Matrix b = random_matrix(m, m, rng);
    b *= 0.9 / op_norm(b);
    DualPoint p(rep, {b});
    EvalResult r = evaluate(ones, p, 1e-10, 3000);
    Matrix expect = (Matrix::Identity(m, m) - b.adjoint()).inverse();
    if (op_norm(r.value - expect) > 1e-8)
      return "h(z) evaluation misses the resolvent";
  }
  return "";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "correspondence axioms and Cauchy-Schwarz (C2, free d=3)", c1_axioms},
      {2, "Cuntz-Toeplitz relations at N=6 (C2, free d=2)", c2_cuntz_toeplitz},
      {3, "creation-operator norm identity (100 random tensors)", c3_norm_identity},
      {4, "gauge Fourier analysis and Cesaro means", c4_gauge},
      {5, "classical Pick oracle agreement (100 scalar instances)", c5_classical_pick},
      {6, "roundtrip interpolation feasibility (50 polynomials)", c6_roundtrip_interpolation},
      {7, "realization forward direction (50 coisometries)", c7_realization_forward},
      {8, "Schwartz lemma at random interior points (50 elements)", c8_schwartz},
      {9, "intertwiner preservation with flagged counterexample", c9_intertwiner_preservation},
      {10, "direct-sum and unitary-similarity functoriality (50 cases)", c10_functoriality},
      {11, "superharmonic certificates and telescoping bounds", c11_superharmonic},
      {12, "absolute-continuity classification and detector agreement", c12_ac_classification},
      {13, "commutator-ideal probe on free d=2", c13_commutator_ideal},
      {14, "Cauchy-Hadamard radius and boundary behavior", c14_cauchy_hadamard},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string msg;
    try {
      msg = c.body();
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    if (msg.empty()) {
      std::printf("PASS criterion %2d: %s\n", c.id, c.name.c_str());
    } else {
      std::printf("FAIL criterion %2d: %s -- %s\n", c.id, c.name.c_str(),
                  msg.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
