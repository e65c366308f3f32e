#include <doctest.h>

#include <cmath>

#include "nchardy/accont.hpp"
#include "test_util.hpp"

using namespace nchardy;
using testutil::c2;
using testutil::free_d;

namespace {
RepPtr scalar_rep(GraphPtr g) {
  return std::make_shared<Representation>(Representation::scalar(std::move(g)));
}

Matrix m1x1(cx v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}
}  // namespace

TEST_CASE("is_superharmonic") {
  auto loop = free_d(1);
  auto rep = scalar_rep(loop);
  CommutantElement one = CommutantElement::identity(rep);
  CommutantElement zero(rep);

  Superoperator phi_half = cp_map(make_covariant(rep, {m1x1(0.5)}));
  SuperharmonicFlags f1 = is_superharmonic(one, phi_half);
  CHECK(f1.superharmonic);
  CHECK(f1.pure);
  CHECK(f1.decay[0] == doctest::Approx(0.25));

  Superoperator phi_one = cp_map(make_covariant(rep, {m1x1(1.0)}));
  SuperharmonicFlags f2 = is_superharmonic(one, phi_one, 50);
  CHECK(f2.superharmonic);
  CHECK_FALSE(f2.pure);

  SuperharmonicFlags f3 = is_superharmonic(zero, phi_one);
  CHECK(f3.superharmonic);
  CHECK(f3.pure);
}

TEST_CASE("superharmonic certificates") {
  SUBCASE("scalar T=1/2 realizes the geometric identity") {
    auto loop = free_d(1);
    auto rep = scalar_rep(loop);
    CovariantRep t = make_covariant(rep, {m1x1(0.5)});
    auto fb = std::make_shared<FockBasis>(loop, 20);
    SuperharmonicCertificate cert =
        superharmonic_certificate(CommutantElement::identity(rep), t, fb);
    CHECK(cert.r.block(0)(0, 0).real() ==
          doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    // sum_{n<=20} (3/4)(1/4)^n = 1 to 1e-10.
    CHECK(std::abs(cert.partial_sums.back().block(0)(0, 0) - cx(1.0)) < 1e-10);
    CHECK(cert.cc_star_residual < 1e-10);
    CHECK(cert.intertwining_residual < 1e-12);

    // Telescoping at every level up to the cap.
    Superoperator phi = cp_map(t);
    CommutantElement q = CommutantElement::identity(rep);
    for (std::size_t n = 0; n < cert.partial_sums.size(); ++n) {
      CommutantElement tail_el = q;
      for (std::size_t j = 0; j <= n; ++j) tail_el = phi.apply(tail_el);
      CHECK((cert.partial_sums[n] - q).norm() <= tail_el.norm() + 1e-12);
    }
  }

  SUBCASE("Q = 0 gives the zero certificate") {
    auto loop = free_d(1);
    auto rep = scalar_rep(loop);
    CovariantRep t = make_covariant(rep, {m1x1(0.5)});
    auto fb = std::make_shared<FockBasis>(loop, 5);
    SuperharmonicCertificate cert =
        superharmonic_certificate(CommutantElement(rep), t, fb);
    CHECK(cert.r.norm() == 0.0);
    CHECK(cert.c.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("free d=2 row (1/2,1/2) has ratio-1/2 partial sums") {
    auto g = free_d(2);
    auto rep = scalar_rep(g);
    CovariantRep t = make_covariant(rep, {m1x1(0.5), m1x1(0.5)});
    auto fb = std::make_shared<FockBasis>(g, 10);
    SuperharmonicCertificate cert =
        superharmonic_certificate(CommutantElement::identity(rep), t, fb);
    CHECK(cert.r.block(0)(0, 0).real() ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    for (std::size_t n = 0; n + 1 < cert.partial_sums.size(); ++n) {
      double gap_n = 1.0 - cert.partial_sums[n].block(0)(0, 0).real();
      double gap_next = 1.0 - cert.partial_sums[n + 1].block(0)(0, 0).real();
      CHECK(gap_next == doctest::Approx(gap_n / 2.0).epsilon(1e-9));
    }
  }

  SUBCASE("certificate ranges satisfy the lemma inequalities") {
    Rng rng(7);
    auto rep = std::make_shared<Representation>(c2(), std::vector<int>{2, 2});
    for (int trial = 0; trial < 5; ++trial) {
      CovariantRep t = make_covariant(
          rep, {0.45 * random_matrix(2, 2, rng), 0.45 * random_matrix(2, 2, rng)});
      auto fb = std::make_shared<FockBasis>(c2(), 2);
      // Representations share the graph through the rep pointer.
      auto fb2 = std::make_shared<FockBasis>(rep->graph(), 8);
      SuperharmonicCertificate cert = superharmonic_certificate(
          CommutantElement::identity(rep), t, fb2);
      Matrix ccs = cert.c * cert.c.adjoint();
      Superoperator phi = cp_map(t);
      CommutantElement cc = CommutantElement::compress(rep, ccs);
      CHECK((cc - phi.apply(cc)).min_eig() >= -(cert.tail + 1e-10));
      CHECK(cert.cc_star_residual <= cert.tail + 1e-10);
    }
  }
}

TEST_CASE("completely_non_coisometric") {
  auto loop = free_d(1);
  auto rep = scalar_rep(loop);

  CncResult half = completely_non_coisometric(make_covariant(rep, {m1x1(0.5)}));
  CHECK(half.completely_non_coisometric);
  CHECK(half.w.cols() == 0);

  CncResult unit = completely_non_coisometric(make_covariant(rep, {m1x1(1.0)}));
  CHECK_FALSE(unit.completely_non_coisometric);
  CHECK(unit.w.cols() == 1);

  SUBCASE("free d=2 with T=(1,0) keeps the whole space") {
    auto g = free_d(2);
    auto r2 = scalar_rep(g);
    CncResult res =
        completely_non_coisometric(make_covariant(r2, {m1x1(1.0), m1x1(0.0)}));
    CHECK_FALSE(res.completely_non_coisometric);
    CHECK(res.w.cols() == 1);
  }

  SUBCASE("truncated induced representations shrink W to zero") {
    auto g = c2();
    auto fb = std::make_shared<FockBasis>(g, 3);
    InducedRep ind(Representation::scalar(g), fb);
    CncResult res = completely_non_coisometric(ind.cov());
    CHECK(res.completely_non_coisometric);
  }

  SUBCASE("the iteration is monotone and stabilizes within dim H steps") {
    Rng rng(11);
    auto r2 = std::make_shared<Representation>(c2(), std::vector<int>{2, 2});
    for (int trial = 0; trial < 10; ++trial) {
      Matrix b0 = random_matrix(2, 2, rng);
      Matrix b1 = random_matrix(2, 2, rng);
      CovariantRep t = make_covariant(r2, {b0, b1});
      double n = t.norm();
      CovariantRep scaled =
          make_covariant(r2, {b0 / n, b1 / n});  // exactly norm 1
      CncResult res = completely_non_coisometric(scaled);
      CHECK(res.w.cols() <= 4);
    }
  }
}

TEST_CASE("periodic_state_search") {
  auto loop = free_d(1);
  auto rep = scalar_rep(loop);

  SUBCASE("the identity map has the k=1 state") {
    Superoperator phi = cp_map(make_covariant(rep, {m1x1(1.0)}));
    auto found = periodic_state_search(phi, 3);
    REQUIRE(found.has_value());
    CHECK(found->period == 1);
    CHECK(std::abs(found->state.block(0)(0, 0) - cx(1.0)) < 1e-10);
  }

  SUBCASE("strict contractions have none") {
    Superoperator phi = cp_map(make_covariant(rep, {m1x1(0.5)}));
    CHECK_FALSE(periodic_state_search(phi, 4).has_value());
  }

  SUBCASE("the 2x2 permutation has a periodic state") {
    auto r2 = std::make_shared<Representation>(loop, std::vector<int>{2});
    Matrix perm(2, 2);
    perm << 0, 1, 1, 0;
    Superoperator phi = cp_map(make_covariant(r2, {perm}));
    auto found = periodic_state_search(phi, 2);
    REQUIRE(found.has_value());
    // The state is invariant under Phi^2 = id's dual in particular.
    Superoperator dual = phi.dual();
    CommutantElement twice = dual.apply(dual.apply(found->state));
    CHECK((twice - found->state).norm() < 1e-10);
  }
}

TEST_CASE("ac_membership") {
  auto loop = free_d(1);
  auto rep = scalar_rep(loop);
  auto fb = std::make_shared<FockBasis>(loop, 8);

  SUBCASE("strict contractions are absolutely continuous") {
    ACReport r = ac_membership(make_covariant(rep, {m1x1(0.5)}), fb);
    CHECK(r.verdict == AcVerdict::absolutely_continuous);
    CHECK(r.w.cols() == 0);
    REQUIRE(!r.certificates.empty());
    CHECK(r.certificates.front().cc_star_residual <=
          r.certificates.front().tail + 1e-10);
  }

  SUBCASE("the scalar unitary is not AC, with both witnesses") {
    ACReport r = ac_membership(make_covariant(rep, {m1x1(1.0)}), fb);
    CHECK(r.verdict == AcVerdict::not_ac);
    CHECK(r.w.cols() == 1);
    REQUIRE(r.periodic_state.has_value());
    CHECK(r.periodic_state->period == 1);
  }

  SUBCASE("induced representations are AC") {
    auto g = c2();
    auto fbc = std::make_shared<FockBasis>(g, 3);
    InducedRep ind(Representation::scalar(g), fbc);
    ACReport r = ac_membership(ind.cov(), fbc);
    CHECK(r.verdict == AcVerdict::absolutely_continuous);
  }

  SUBCASE("free d=2 point (1,0) is not AC with the W witness") {
    auto g = free_d(2);
    auto r2 = scalar_rep(g);
    auto fb2 = std::make_shared<FockBasis>(g, 4);
    ACReport r = ac_membership(make_covariant(r2, {m1x1(1.0), m1x1(0.0)}), fb2);
    CHECK(r.verdict == AcVerdict::not_ac);
    CHECK(r.w.cols() == 1);
  }

  SUBCASE("detector agreement on random contractions") {
    Rng rng(13);
    auto r2 = std::make_shared<Representation>(c2(), std::vector<int>{2, 2});
    auto fb2 = std::make_shared<FockBasis>(r2->graph(), 4);
    for (int trial = 0; trial < 25; ++trial) {
      Matrix b0 = random_matrix(2, 2, rng);
      Matrix b1 = random_matrix(2, 2, rng);
      double n = op_norm((Matrix(2, 4) << b0, b1).finished());
      double scale = (trial % 3 == 0) ? 1.0 / n : 0.8 / n;
      CovariantRep t = make_covariant(r2, {scale * b0, scale * b1});
      ACReport r = ac_membership(t, fb2);
      if (r.periodic_state.has_value())
        CHECK(r.verdict == AcVerdict::not_ac);
      if (r.verdict == AcVerdict::absolutely_continuous)
        CHECK_FALSE(r.periodic_state.has_value());
    }
  }
}

TEST_CASE("induced_intertwiners") {
  auto loop = free_d(1);
  auto rep = scalar_rep(loop);
  auto fb = std::make_shared<FockBasis>(loop, 6);
  InducedRep s0(Representation::scalar(loop), fb);

  // For |z| < 1 the intertwiners C S0 = conj(z) C are the geometric rows.
  DualPoint z(rep, {m1x1(cx(0.4, 0.2))});
  IntertwinerSpace space = induced_intertwiners(s0, z.to_covariant());
  REQUIRE(space.basis.size() == 1);
  const Matrix& c = space.basis.front();
  // Ratios of consecutive entries equal conj(z).
  for (int i = 0; i + 1 < 6; ++i)
    CHECK(std::abs(c(0, i + 1) / c(0, i) - std::conj(cx(0.4, 0.2))) < 1e-10);
}

TEST_CASE("is_wandering") {
  SUBCASE("level-0 vectors of induced representations wander") {
    auto g = c2();
    auto fb = std::make_shared<FockBasis>(g, 4);
    InducedRep ind(Representation::scalar(g), fb);
    Vector h = Vector::Zero(ind.cov().rep()->dim());
    h(ind.coord(fb->index(Path(0)), 0)) = 1.0;
    CHECK(is_wandering(h, ind.cov(), 3));
  }

  SUBCASE("unitaries have no wandering vectors") {
    auto loop = free_d(1);
    auto rep = scalar_rep(loop);
    CovariantRep u = make_covariant(rep, {m1x1(1.0)});
    Vector h(1);
    h(0) = 1.0;
    CHECK_FALSE(is_wandering(h, u, 2));
  }

  SUBCASE("zero vector wanders vacuously") {
    auto loop = free_d(1);
    auto rep = scalar_rep(loop);
    CovariantRep u = make_covariant(rep, {m1x1(1.0)});
    CHECK(is_wandering(Vector::Zero(1), u, 2));
  }

  SUBCASE("non-partial-isometries are rejected") {
    auto loop = free_d(1);
    auto rep = scalar_rep(loop);
    CovariantRep t = make_covariant(rep, {m1x1(0.5)});
    Vector h(1);
    h(0) = 1.0;
    CHECK_THROWS_AS(is_wandering(h, t, 2), ContractViolation);
  }
}
