#ifndef NCHARDY_PICK_HPP
#define NCHARDY_PICK_HPP

#include <string>
#include <vector>

#include "nchardy/eval.hpp"
#include "nchardy/random.hpp"
#include "nchardy/reps.hpp"
#include "nchardy/types.hpp"

namespace nchardy {

// Resolvent would act on or beyond the unit sphere.
struct BoundaryPointError : Error {
  explicit BoundaryPointError(const std::string& what) : Error(what) {}
};

// theta_{eta,zeta}(a) = eta* (I_E (x) a) zeta = <eta, a zeta> on sigma(M)'.
Superoperator theta_map(const DualPoint& eta, const DualPoint& zeta);

// (id - theta)^{-1}; requires the spectral radius of theta below 1 - 1e-9 and
// verifies the inverse to 1e-10, else throws BoundaryPointError.
Superoperator resolvent(const Superoperator& theta);

// A k x k block map with values in maps sigma(M)' -> B(H), stored as one
// block matrix of (dim^2 x comm_dim) panels.
class KernelBlockMap {
 public:
  KernelBlockMap(RepPtr rep, int k, Matrix stacked);

  const RepPtr& rep() const { return rep_; }
  int size() const { return k_; }
  Matrix block(int i, int j) const;  // (dim^2) x comm_dim panel
  Matrix apply(int i, int j, const CommutantElement& a) const;  // dim x dim

  // Max over a commutant basis of || K(j,i)(a) - K(i,j)(a*)* ||.
  double hermitian_residual() const;

 private:
  RepPtr rep_;
  int k_;
  Matrix stacked_;  // (k dim^2) x (k comm_dim)
};

struct InterpolationProblem {
  std::vector<DualPoint> points;  // all on one representation
  std::vector<Matrix> left;       // B_i on H
  std::vector<Matrix> right;      // C_i on H
};

// Entries ((Ad(B_i,B_j) - Ad(C_i,C_j)) o (id - theta_{eta_i,eta_j})^{-1}).
KernelBlockMap pick_matrix(const InterpolationProblem& problem);

struct CpVerdict {
  bool cp = false;
  bool marginal = false;  // |min eig| within 10x of the PSD tolerance
  double min_eig = 0.0;
  double choi_norm = 0.0;
  RealVector spectrum;  // Choi eigenvalues, ascending
  Vector witness;       // eigenvector of the minimal eigenvalue when not CP
};

// Choi test of Psi_K composed with the conditional expectation onto
// M_k(sigma(M)'); CP iff min eig >= -1e-9 ||Choi||.
CpVerdict is_completely_positive(const KernelBlockMap& k);

// Same certificate for an endomorphism of the commutant.
CpVerdict is_completely_positive(const Superoperator& phi);

struct NpResult {
  bool feasible = false;
  CpVerdict choi;
  bool faithful = true;  // sigma faithful (no zero multiplicities)
};

NpResult np_feasible(const InterpolationProblem& problem);

// Kernel K_Z(eta_i, eta_j) = (id - Ad(Z_i, Z_j)) o resolvent for sampled
// values Z_i at the sample points; a necessary test for membership of the
// Schur class on any finite sample.
CpVerdict schur_kernel_test(const std::vector<Matrix>& z_values,
                            const std::vector<DualPoint>& sample);

// Transfer-function realization data: U = [[A,B],[C,D]] from E (+) H to
// (E^sigma (x)_tau E) (+) H, with tau the aux representation of sigma(M)'
// with multiplicities aux_mult. Coordinates: aux block v is C^{m_v} (x)
// C^{p_v} (m fastest), target block e is C^{m_{s(e)}} (x) C^{p_{r(e)}}.
class Realization {
 public:
  Realization(RepPtr rep, std::vector<int> aux_mult, Matrix a, Matrix b,
              Matrix c, Matrix d);

  const RepPtr& rep() const { return rep_; }
  const std::vector<int>& aux_mult() const { return aux_mult_; }
  int aux_dim() const { return aux_off_.back(); }
  int target_dim() const { return tgt_off_.back(); }
  int aux_offset(int v) const { return aux_off_.at(v); }
  int target_offset(int e) const { return tgt_off_.at(e); }

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }
  const Matrix& c() const { return c_; }
  const Matrix& d() const { return d_; }

  // || U U* - I ||, and the worst module-map intertwining residual.
  double coisometry_residual() const;
  double module_residual() const;

  // L_eta: aux -> target, x |-> eta (x) x.
  Matrix point_map(const DualPoint& eta) const;

 private:
  RepPtr rep_;
  std::vector<int> aux_mult_;
  std::vector<int> aux_off_, tgt_off_;
  Matrix a_, b_, c_, d_;
};

// Z(eta*) = D + C (I - L_eta* A)^{-1} L_eta* B. Rejects realizations whose
// coisometry residual exceeds 1e-10 and points that put the spectral radius
// of L_eta* A at 1 - 1e-9 or above.
Matrix realization_evaluate(const Realization& r, const DualPoint& eta);

// Structured Gaussian U whitened to a coisometry; the module-map structure
// (per-vertex free parameters tensored with identities) is preserved.
Realization random_coisometric_realization(RepPtr rep, std::vector<int> aux_mult,
                                           Rng& rng);

struct SchwartzResult {
  bool pass = false;
  double min_eig = 0.0;    // of <eta,eta> - X(eta*) X(eta*)*
  double slack = 0.0;      // 1e-8 + tail contributions
  double tail_bound = 0.0;
};

// Schwartz lemma check X(eta*) X(eta*)* <= <eta,eta> + slack I for a
// normalized element vanishing at 0. Preconditions (a0 = 0 and
// hardy_norm_lower <= 1 at the given truncation) are reported distinctly.
SchwartzResult schwartz_check(const HardyElement& theta, const DualPoint& eta,
                              FockBasisPtr basis);

struct LyapunovVerdict {
  bool holds = false;
  std::string method;       // "choi" (decision) or "sampled" (one-sided)
  double min_eig = 0.0;     // Choi: minimal eigenvalue; sampled: worst margin
};

// Decides {a >= 0 : Phi(a) <= a} subset {a >= 0 : Psi(a) <= a}. With id - Phi
// invertible this is the Choi positivity of (id - Psi)(id - Phi)^{-1};
// otherwise Cesaro-projected random PSD elements sample the cone and the
// verdict is one-sided.
LyapunovVerdict lyapunov_preorder(const Superoperator& phi,
                                  const Superoperator& psi, Rng& rng,
                                  int samples = 20);

struct BoundarySample {
  int point_index;  // which eta_i the intertwiner belongs to
  Matrix c;         // C: induced space -> H
};

struct BoundaryVerdict {
  bool consistent = false;
  double min_eig = 0.0;            // of (C_l C_j*) - (D C C* D*)
  double precondition_residual = 0.0;
};

// Necessary boundary interpolation condition
// (D_{i(l)} C_l C_j* D_{i(j)}*)_{l,j} <= (C_l C_j*)_{l,j} for a supplied
// finite intertwiner family against a truncated induced representation.
// Samples whose intertwining residual exceeds pre_tol are rejected.
BoundaryVerdict boundary_np_check(const std::vector<DualPoint>& points,
                                  const std::vector<Matrix>& d_values,
                                  const std::vector<BoundarySample>& samples,
                                  const InducedRep& s0, double pre_tol = 1e-9);

}  // namespace nchardy

#endif
