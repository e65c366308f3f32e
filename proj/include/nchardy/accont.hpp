#ifndef NCHARDY_ACCONT_HPP
#define NCHARDY_ACCONT_HPP

#include <optional>
#include <vector>

#include "nchardy/reps.hpp"
#include "nchardy/types.hpp"

namespace nchardy {

// Basis of the truncated intertwiner space I(S0, eta*) = {C: H_ind -> H with
// C sigma0(.) = sigma(.) C and C S0(e) = T(e) C}, the edge equations imposed
// on the columns the truncation preserves (Fock levels <= N-1).
struct IntertwinerSpace {
  std::vector<Matrix> basis;  // orthonormal in the Frobenius inner product
};

IntertwinerSpace induced_intertwiners(const InducedRep& s0, const CovariantRep& t);

struct SuperharmonicFlags {
  bool superharmonic = false;
  bool pure = false;
  std::vector<double> decay;  // ||Phi^n(Q)||
};

// (i) Q >= 0 and Phi(Q) <= Q by eigenvalue checks at 1e-10; (ii) purity by
// iteration against the 1e-8 threshold.
SuperharmonicFlags is_superharmonic(const CommutantElement& q,
                                    const Superoperator& phi,
                                    int cap = defaults::kIterationCap,
                                    double threshold = tol::kPurity);

struct SuperharmonicCertificate {
  CommutantElement q;
  CommutantElement r;  // PSD square root of Q - Phi(Q)
  std::vector<CommutantElement> partial_sums;  // sum_{n<=N} Phi^n(r^2)
  double tail;                  // ||Phi^{N+1}(Q)||
  Matrix c;                     // truncated intertwiner, induced space -> H
  double cc_star_residual;      // ||C C* - Q|| against the reported tail
  double intertwining_residual; // interior-column residual of C S0(e) = T(e) C
};

// Realizes a pure superharmonic Q as C C* for a truncated intertwiner C,
// C* = sum_{n<=N} (I (x) r) T~_n* into F_N(E) (x) H with the inclusion
// isometry on the range of r.
SuperharmonicCertificate superharmonic_certificate(const CommutantElement& q,
                                                   const CovariantRep& t,
                                                   FockBasisPtr basis);

struct CncResult {
  bool completely_non_coisometric = false;
  Matrix w;  // orthonormal basis of the largest bad subspace
};

// Largest subspace of ker(I - T~ T~*) invariant under every T(e)* and Q_v,
// by the decreasing fixed-point iteration; stabilizes within dim H steps.
CncResult completely_non_coisometric(const CovariantRep& t);

struct PeriodicState {
  int period;
  CommutantElement state;  // density: PSD, trace 1, (Phi^k)^dual-invariant
};

// Cesaro averages of the trace-dual iterates from the maximally mixed element;
// a trace collapse below 1e-8 certifies absence for every period.
std::optional<PeriodicState> periodic_state_search(
    const Superoperator& phi, int k_max,
    int horizon = defaults::kCesaroHorizon, double trace_floor = tol::kPurity);

enum class AcVerdict { absolutely_continuous, not_ac, undecided };

struct ACReport {
  AcVerdict verdict = AcVerdict::undecided;
  Matrix w;  // the obstruction subspace (empty when AC)
  std::optional<PeriodicState> periodic_state;
  std::vector<SuperharmonicCertificate> certificates;
};

// Decides absolute continuity by the completely-non-coisometric criterion
// (exact for the finite-dimensional commutants here); attaches the periodic
// state as an independent obstruction witness and, for pure contractions,
// the Q = I superharmonic certificate.
ACReport ac_membership(const CovariantRep& t, FockBasisPtr basis,
                       int periodic_k_max = 8);

// Pairwise orthogonality of the subspaces T~_n(E^n (x) [sigma(M) h]) for
// n <= level_cap. The representation must be isometric where it acts: T~ a
// partial isometry, so truncated induced representations qualify.
bool is_wandering(const Vector& h, const CovariantRep& t, int level_cap,
                  double eps = tol::kResidual);

}  // namespace nchardy

#endif
