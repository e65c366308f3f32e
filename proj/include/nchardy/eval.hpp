#ifndef NCHARDY_EVAL_HPP
#define NCHARDY_EVAL_HPP

#include <functional>
#include <utility>
#include <vector>

#include "nchardy/fock.hpp"
#include "nchardy/reps.hpp"
#include "nchardy/types.hpp"

namespace nchardy {

struct EvalResult {
  Matrix value;            // sigma(a0) + sum_k eta_k* L_{theta_k} on H
  double tail_bound = 0.0; // bound on the discarded series tail; 0 for polynomials
  int terms_used = 0;
};

struct RadiusExceeded : Error {
  EvalResult partial;
  RadiusExceeded(const std::string& what, EvalResult p)
      : Error(what), partial(std::move(p)) {}
};

// X-hat(eta*): sums the series until the geometric tail estimate (ratio of the
// last two nonzero term norms, capped at 0.99) drops below `tolerance`.
// Polynomials are summed exactly with tail 0. Throws RadiusExceeded with the
// partial sum when the cap is hit first. A run of 16 zero terms is treated as
// a terminated series, keeping the live tail estimate.
EvalResult evaluate(const HardyElement& theta, const DualPoint& eta,
                    double tolerance = 1e-12,
                    int term_cap = defaults::kIterationCap);

// One series term eta_k* L_{theta_k} as a matrix on H.
Matrix series_term_matrix(const CorrTensor& t, const DualPoint& eta);

struct RadiusEstimate {
  double radius;                 // +infinity for eventually-zero series
  std::vector<double> root_seq;  // ||theta_k||^{1/k}, k = 1..k_max
  bool eventually_geometric;     // trailing ratios constant to 1e-9
};

// Cauchy-Hadamard estimate: the reciprocal of the max of ||theta_k||^{1/k}
// over a trailing window.
RadiusEstimate radius_of_convergence(const HardyElement& theta, int k_max);

struct DirectSum {
  RepPtr rep;
  Matrix embed1;  // H1 -> H1 (+) H2, vertex-blockwise
  Matrix embed2;
  DualPoint point;
};

DirectSum direct_sum(const DualPoint& eta, const DualPoint& zeta);

// (I (x) u) eta u* for a unitary commutant element; rejects non-unitary u.
DualPoint unitary_conjugate(const CommutantElement& u, const DualPoint& eta);

// Orthonormal basis (Frobenius) of {C: H_sigma -> H_tau | C sigma(.) = tau(.) C
// and C eta* = zeta* (I_E (x) C)}, found as a null space with singular values
// under 1e-10 of the largest treated as zero.
struct IntertwinerBasis {
  DualPoint source;
  DualPoint target;
  std::vector<Matrix> basis;
  // Max residual of C eta_k* = zeta_k* (I (x) C) over the basis, k <= checked.
  double power_residual = 0.0;
};

IntertwinerBasis intertwiner_space(const DualPoint& eta, const DualPoint& zeta,
                                   int check_powers = 3);

// A function per point, as produced by evaluate or a realization.
using Section = std::function<EvalResult(const DualPoint&)>;

Section section_of(const HardyElement& theta, double tolerance = 1e-12);

struct PreservationRow {
  int pair_index;
  int intertwiner_dim;
  double residual;     // max_C ||C f(eta) - f(zeta) C||
  double budget;       // tolerance + both tail bounds
  bool pass;
};

struct PreservationReport {
  std::vector<PreservationRow> rows;
  bool all_pass = true;
};

// Intertwiner-preservation test of a section on sampled point pairs.
PreservationReport check_intertwiner_preservation(
    const Section& f, const std::vector<std::pair<DualPoint, DualPoint>>& samples,
    double tolerance);

// Text table: one row per point pair with residual, budget, and verdict.
std::string format_table(const PreservationReport& report);

}  // namespace nchardy

#endif
