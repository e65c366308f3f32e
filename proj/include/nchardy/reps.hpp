#ifndef NCHARDY_REPS_HPP
#define NCHARDY_REPS_HPP

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "nchardy/corr.hpp"
#include "nchardy/fock.hpp"
#include "nchardy/graph.hpp"
#include "nchardy/types.hpp"

namespace nchardy {

// A normal representation of M = l^inf(G0): H = (+)_v C^{m_v} with contiguous
// vertex blocks. Multiplicity 0 is allowed but makes sigma non-faithful.
class Representation {
 public:
  Representation(GraphPtr g, std::vector<int> multiplicities);
  static Representation scalar(GraphPtr g);  // every m_v = 1

  const GraphPtr& graph() const { return graph_; }
  int mult(int v) const { return mult_.at(v); }
  const std::vector<int>& multiplicities() const { return mult_; }
  int offset(int v) const { return offset_.at(v); }
  int dim() const { return offset_.back(); }
  bool faithful() const;

  Matrix sigma(const AlgebraElement& a) const;
  Matrix vertex_projection(int v) const;  // Q_v

  // Vectorization of the commutant sigma(M)' = (+)_v M_{m_v}: blocks in
  // vertex order, column-major inside each block.
  int comm_dim() const { return comm_offset_.back(); }
  int comm_offset(int v) const { return comm_offset_.at(v); }

 private:
  GraphPtr graph_;
  std::vector<int> mult_;
  std::vector<int> offset_;
  std::vector<int> comm_offset_;
};

using RepPtr = std::shared_ptr<const Representation>;

bool same_rep(const RepPtr& a, const RepPtr& b);

// An element of the commutant sigma(M)' = (+)_v B(H_v).
class CommutantElement {
 public:
  explicit CommutantElement(RepPtr rep);  // zero
  CommutantElement(RepPtr rep, std::vector<Matrix> blocks);
  static CommutantElement identity(RepPtr rep);
  static CommutantElement from_vec(RepPtr rep, const Vector& v);
  // Conditional expectation: block-diagonal compression of a full matrix.
  static CommutantElement compress(RepPtr rep, const Matrix& full);

  const RepPtr& rep() const { return rep_; }
  const Matrix& block(int v) const { return blocks_.at(v); }
  Matrix& block(int v) { return blocks_.at(v); }

  Vector vec() const;
  Matrix to_operator() const;  // block-diagonal matrix on H
  CommutantElement adjoint() const;
  double norm() const;      // operator norm = max over blocks
  double min_eig() const;   // min over blocks, Hermitian part
  bool is_unitary(double eps = tol::kEq) const;

 private:
  RepPtr rep_;
  std::vector<Matrix> blocks_;
};

CommutantElement operator+(const CommutantElement& a, const CommutantElement& b);
CommutantElement operator-(const CommutantElement& a, const CommutantElement& b);
CommutantElement operator*(const CommutantElement& a, const CommutantElement& b);
CommutantElement operator*(cx c, const CommutantElement& a);

// Coordinates of E^{(x)k} (x)_sigma H: one block H_{s(alpha)} per length-k
// path alpha, in canonical path order.
class PathSpace {
 public:
  PathSpace(RepPtr rep, int degree);

  const RepPtr& rep() const { return rep_; }
  int degree() const { return degree_; }
  int n_paths() const { return static_cast<int>(paths_.size()); }
  const Path& path(int i) const { return paths_.at(i); }
  int offset(int i) const { return offsets_.at(i); }
  int block_size(int i) const { return offsets_.at(i + 1) - offsets_.at(i); }
  int dim() const { return offsets_.back(); }

  // (+)_alpha b_{s(alpha)}: the action I_{E^k} (x) b of a commutant element.
  Matrix ampliation(const CommutantElement& b) const;
  // Diagonal of the left action phi_infty(a) (x) I: a(r(alpha)) per block.
  Matrix left_action(const AlgebraElement& a) const;

 private:
  RepPtr rep_;
  int degree_;
  std::vector<Path> paths_;
  std::vector<int> offsets_;
};

// A completely contractive covariant representation (T, sigma), stored as the
// edge blocks T(e): H_{s(e)} -> H_{r(e)}.
class CovariantRep {
 public:
  CovariantRep(RepPtr rep, std::vector<Matrix> edge_blocks);

  const RepPtr& rep() const { return rep_; }
  const Matrix& block(int e) const { return blocks_.at(e); }
  // T(e) as a full H -> H matrix (zero off its vertex blocks).
  Matrix full_block(int e) const;

  // T~: E (x) H -> H, column blocks per edge.
  const Matrix& t_tilde() const { return t_tilde_; }
  // ||T~||; computed on first use and shared across copies (the blocks are
  // immutable, so concurrent readers stay safe).
  double norm() const;
  bool is_contractive(double eps = tol::kResidual) const {
    return norm() <= 1.0 + eps;
  }

 private:
  struct NormCache;
  RepPtr rep_;
  std::vector<Matrix> blocks_;
  Matrix t_tilde_;
  std::shared_ptr<NormCache> norm_cache_;
};

// Builds a covariant representation from per-edge data. Blocks may be given in
// exact shape m_{r(e)} x m_{s(e)} or as full dim x dim matrices; full matrices
// must be supported on Q_{r(e)} . Q_{s(e)} to 1e-12, which is exactly the
// covariance condition for graph correspondences.
CovariantRep make_covariant(RepPtr rep, const std::vector<Matrix>& edge_blocks);

// A point eta = T~* of the dual ball: blocks eta_e: H_{r(e)} -> H_{s(e)}.
class DualPoint {
 public:
  DualPoint(RepPtr rep, std::vector<Matrix> blocks);
  static DualPoint zero(RepPtr rep);
  static DualPoint from_covariant(const CovariantRep& t);

  const RepPtr& rep() const { return rep_; }
  const Matrix& block(int e) const { return blocks_.at(e); }

  // The map H -> E (x) H in PathSpace(rep, 1) coordinates.
  Matrix as_matrix() const;
  double norm() const;

  CovariantRep to_covariant() const;  // T(e) = eta_e*

 private:
  RepPtr rep_;
  std::vector<Matrix> blocks_;
};

// A linear map on the commutant, stored on its vectorization.
class Superoperator {
 public:
  Superoperator(RepPtr rep, Matrix mat);
  static Superoperator identity(RepPtr rep);
  static Superoperator zero(RepPtr rep);
  static Superoperator from_action(
      RepPtr rep,
      const std::function<CommutantElement(const CommutantElement&)>& action);

  const RepPtr& rep() const { return rep_; }
  const Matrix& matrix() const { return mat_; }

  CommutantElement apply(const CommutantElement& b) const;
  Superoperator compose(const Superoperator& inner) const;  // this o inner
  // Trace dual with respect to <A,B> = tr(A*B).
  Superoperator dual() const;
  double spectral_radius() const;

 private:
  RepPtr rep_;
  Matrix mat_;
};

Superoperator operator+(const Superoperator& a, const Superoperator& b);
Superoperator operator-(const Superoperator& a, const Superoperator& b);
Superoperator operator*(cx c, const Superoperator& a);

// T~_n: E^{(x)n} (x) H -> H with column blocks T(e_1)...T(e_n) per path.
Matrix generalized_power(const CovariantRep& t, int n);

// I_{E^{(x)m}} (x) Y for Y: E^{(x)n} (x) H -> H, in canonical path
// coordinates: E^{(x)(m+n)} (x) H -> E^{(x)m} (x) H.
Matrix tensor_identity_left(const RepPtr& rep, int m, int n, const Matrix& y);

// Phi_T(b) = T~ (I_E (x) b) T~*.
Superoperator cp_map(const CovariantRep& t);

struct Classification {
  bool contractive = false;
  bool isometric = false;
  bool fully_coisometric = false;
  bool pure = false;
  std::vector<double> purity_trace;  // ||T~_n T~_n*|| for n = 1, 2, ...
};

Classification classify(const CovariantRep& t,
                        int purity_cap = defaults::kPurityCap,
                        double purity_threshold = tol::kPurity);

// Structure of the sigma-dual correspondence E^sigma over sigma(M)'.
struct DualCorrespondence {
  RepPtr rep;
  GraphPtr opposite;  // edge i reverses edge i of the base graph

  // Shape of the block eta_e: rows m_{s(e)}, cols m_{r(e)}.
  std::pair<int, int> block_shape(int e) const;
  // <eta, zeta> = eta* zeta, a commutant element.
  CommutantElement inner_product(const DualPoint& eta, const DualPoint& zeta) const;
  // The bimodule product x . eta . y = (I (x) x) eta y.
  DualPoint act(const CommutantElement& x, const DualPoint& eta,
                const CommutantElement& y) const;
};

DualCorrespondence dual_correspondence(RepPtr rep);

// The representation induced by pi0 on the truncated F(E) (x) H0, with the
// basis reordered so vertex blocks are contiguous.
class InducedRep {
 public:
  InducedRep(const Representation& pi0, FockBasisPtr basis);

  const CovariantRep& cov() const { return cov_; }
  const RepPtr& rep() const { return cov_.rep(); }
  const FockBasisPtr& basis() const { return basis_; }
  const std::vector<int>& pi0_multiplicities() const { return pi0_mult_; }

  // Coordinate of (basis path p, pi0 copy t), t < pi0_mult[s(path p)].
  int coord(int path_index, int t) const;
  int level_of_coord(int i) const;
  Matrix level_projection(int level) const;
  // Columns of E (x) H whose Fock level is at most `level`; T~ is isometric
  // there despite the truncation.
  std::vector<int> interior_edge_columns(int level) const;

 private:
  FockBasisPtr basis_;
  std::vector<int> pi0_mult_;
  std::vector<int> coord_;     // (path, t) -> index in H, flattened
  std::vector<int> coord_off_; // per path
  std::vector<int> level_;     // index in H -> Fock level
  CovariantRep cov_;
};

InducedRep induced_rep(const Representation& pi0, FockBasisPtr basis);

// Schaffer-style isometric dilation on K = H (+) (F_N(E) (x) D), D the defect.
struct Dilation {
  CovariantRep big;      // (V, tau) on K
  Matrix embedding;      // K x H isometry onto the H summand
  InducedRep tail;       // the induced structure on F_N(E) (x) D
  std::vector<int> defect_mult;  // dim D_v per vertex

  Matrix h_projection() const { return embedding * embedding.adjoint(); }
};

// Requires ||T~|| <= 1 + 1e-12. The returned dilation satisfies, up to
// 1e-10: P V(e) P = T(e) P, V(e)* leaves H invariant, tau(a) P = sigma(a) P,
// and V~ is isometric on interior Fock levels.
Dilation isometric_dilation(const CovariantRep& t, FockBasisPtr basis);

}  // namespace nchardy

#endif
