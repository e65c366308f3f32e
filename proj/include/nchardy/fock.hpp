#ifndef NCHARDY_FOCK_HPP
#define NCHARDY_FOCK_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nchardy/corr.hpp"
#include "nchardy/graph.hpp"
#include "nchardy/types.hpp"

namespace nchardy {

// Truncated Fock space F(E) = M + E + E^2 + ... up to level N. The basis is
// every composable path of length <= N in canonical order; each level is a
// contiguous index range.
class FockBasis {
 public:
  FockBasis(GraphPtr g, int level_cap);

  const GraphPtr& graph() const { return graph_; }
  int level_cap() const { return cap_; }
  int size() const { return static_cast<int>(paths_.size()); }
  const Path& path(int i) const { return paths_.at(i); }
  int index(const Path& p) const;
  int level_of(int i) const;
  int level_offset(int level) const { return offsets_.at(level); }
  int level_size(int level) const {
    return offsets_.at(level + 1) - offsets_.at(level);
  }

  // 0/1 diagonal of the projection onto one level.
  Matrix level_projection(int level) const;

 private:
  GraphPtr graph_;
  int cap_;
  std::vector<Path> paths_;
  std::vector<int> offsets_;  // cap+2 entries; offsets_[l]..offsets_[l+1])
  std::map<Path, int> index_;
};

using FockBasisPtr = std::shared_ptr<const FockBasis>;

// A dense operator on the truncated Fock space.
struct FockOperator {
  FockBasisPtr basis;
  Matrix mat;
  std::string label;

  FockOperator(FockBasisPtr b, Matrix m, std::string lab = "");
  static FockOperator zero(FockBasisPtr b, std::string lab = "");
  static FockOperator identity(FockBasisPtr b, std::string lab = "I");

  double norm() const { return op_norm(mat); }
  FockOperator adjoint() const;
};

FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a, const FockOperator& b);
FockOperator operator*(const FockOperator& a, const FockOperator& b);
FockOperator operator*(cx c, const FockOperator& a);

// An element of H^inf(E) presented by its Fourier expansion: a degree-0 part
// a0 in M and tensors theta_k in E^k. Series terms beyond the stored list may
// come from a generator rule; polynomials have no rule.
class HardyElement {
 public:
  HardyElement(AlgebraElement a0, std::vector<CorrTensor> tensors);
  // Series whose degree-k term is produced on demand by rule(k), k >= 1.
  HardyElement(AlgebraElement a0, std::function<CorrTensor(int)> rule);

  static HardyElement polynomial(GraphPtr g, std::vector<CorrTensor> tensors);
  static HardyElement from_tensor(const CorrTensor& t);

  const GraphPtr& graph() const { return a0_.graph(); }
  const AlgebraElement& a0() const { return a0_; }
  bool is_polynomial() const { return !rule_; }
  // Highest stored degree for polynomials; meaningless for rule series.
  int poly_degree() const { return static_cast<int>(tensors_.size()); }
  CorrTensor tensor(int k) const;  // k >= 1

  HardyElement scaled(cx c) const;

 private:
  AlgebraElement a0_;
  std::vector<CorrTensor> tensors_;  // index k-1 holds the degree-k term
  std::function<CorrTensor(int)> rule_;
};

// Matrix of eta -> xi (x) eta, mapping level j into level j + deg(xi) and
// annihilating levels above N - deg(xi). Degree 0 falls back to phi_inf.
FockOperator creation_operator(const CorrTensor& xi, FockBasisPtr basis);

// Diagonal action of M: multiplies each path coefficient by a(r(path)).
FockOperator phi_inf(const AlgebraElement& a, FockBasisPtr basis);

// Fourier operator Phi_j(X) = sum_k P_{k+j} X P_k.
FockOperator gauge_fourier(const FockOperator& x, int j);

// Cesaro mean Sigma_k(X) = sum_{|j|<k} (1 - |j|/k) Phi_j(X).
FockOperator cesaro(const FockOperator& x, int k);

struct NotFourierGraded : Error {
  explicit NotFourierGraded(const std::string& what) : Error(what) {}
};

// Recovers xi_k with Phi_k(X) = T_{xi_k} by reading the level-0 columns:
// xi_k(alpha) = <delta_alpha, X delta_{s(alpha)}>. Throws NotFourierGraded
// when the roundtrip against gauge_fourier misses by more than the tolerance
// on levels <= N - k.
CorrTensor fourier_tensor(const FockOperator& x, int k,
                          double tolerance = tol::kFourier);

// Largest singular value of the truncation of phi_inf(a0) + sum_k T_{theta_k};
// a lower bound for the H^inf(E) norm, nondecreasing in the level cap.
double hardy_norm_lower(const HardyElement& theta, FockBasisPtr basis);

// The truncated matrix itself.
FockOperator truncate(const HardyElement& theta, FockBasisPtr basis);

// Series product on Fourier coefficients (both factors polynomials).
HardyElement hardy_product(const HardyElement& a, const HardyElement& b);

struct IdealCompression {
  FockOperator projection;             // P onto the complement of J.F(E)
  Matrix ideal_range;                  // orthonormal basis of the truncated J.F(E)
  std::function<FockOperator(const FockOperator&)> compress;  // X -> PXP
};

// Compression by the two-sided ideal generated by polynomial elements:
// P projects onto the orthogonal complement of span{ S_mu G delta_nu }.
// An empty generator list yields P = I.
IdealCompression ideal_compression(const std::vector<HardyElement>& generators,
                                   FockBasisPtr basis);

}  // namespace nchardy

#endif
