#ifndef NCHARDY_TYPES_HPP
#define NCHARDY_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nchardy {

using cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// Coordinatewise equality of algebra/tensor data.
inline constexpr double kEq = 1e-12;
// Operator identities (covariance, dilation properties, isometry flags).
inline constexpr double kResidual = 1e-10;
// Relative floor for PSD decisions on Choi matrices.
inline constexpr double kPsdRel = 1e-9;
// Fourier roundtrip residual for graded-element recovery.
inline constexpr double kFourier = 1e-9;
// Purity / decay detection threshold.
inline constexpr double kPurity = 1e-8;
// Null-space singular value cutoff, relative to the largest singular value.
inline constexpr double kNullRel = 1e-10;
}  // namespace tol

namespace defaults {
inline constexpr int kLevelCap = 6;
inline constexpr int kIterationCap = 500;
inline constexpr int kPurityCap = 200;
inline constexpr int kCesaroHorizon = 10000;
inline constexpr unsigned long kSeed = 0;
}  // namespace defaults

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Violated precondition on an operation (degree mismatch, shape mismatch, ...).
struct ContractViolation : Error {
  explicit ContractViolation(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

// Operator norm (largest singular value) via the Hermitian eigenproblem of A*A.
double op_norm(const Matrix& a);

// Smallest eigenvalue of a (numerically) Hermitian matrix.
double min_eig_herm(const Matrix& a);

// PSD square root of a Hermitian matrix; negative eigenvalues below -clip are
// reported, smaller ones clipped to zero.
Matrix psd_sqrt(const Matrix& a, double clip = 1e-10);

// Orthonormal basis of the null space, with singular values below
// rel_tol * sigma_max treated as zero. Columns are the basis.
Matrix null_space(const Matrix& a, double rel_tol = tol::kNullRel);

// Orthonormal basis of the column space at the same threshold.
Matrix column_space(const Matrix& a, double rel_tol = tol::kNullRel);

// Kronecker product; with column-major vectorization, vec(AXB) =
// kron(B.transpose(), A) vec(X).
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace nchardy

#endif
