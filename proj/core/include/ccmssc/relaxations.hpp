#pragma once

#include "ccmssc/data_model.hpp"
#include "ccmssc/sdp_core.hpp"

#include <string>
#include <vector>

namespace ccmssc {

enum class RelaxationKind { VectorLifting, MatrixLifting, PengWei, AminiLevina };

std::string to_string(RelaxationKind kind);
RelaxationKind relaxation_from_string(const std::string& name);

/// The data a node relaxation is built from: shrunk Gram matrix T W T^T,
/// super point weights e, and cannot-links on super points.
struct ReducedInstance {
  Matrix gram;
  std::vector<int> weights;
  double trace = 0.0;  // tr(W) of the unshrunk instance
  Vector diag_sum;     // T diag(W)
  CardinalitySpec cards;
  std::vector<IndexPair> cannot;

  int size() const { return static_cast<int>(weights.size()); }
  int points() const;
  Vector weight_vector() const;

  static ReducedInstance root(const Matrix& gram, const CardinalitySpec& cards);
  static ReducedInstance from(const Matrix& gram, const ShrinkMap& map, const std::vector<IndexPair>& cannot,
                              const CardinalitySpec& cards);
};

enum class CutKind { VlTriA, VlTriB, MlTriA, MlTriB };

/// Triangle inequality on super points. For VlTriA, r < s < t. For the B
/// kinds r is the apex and s < t. For MlTriA only (r, s) is used: Z_rs <= Z_rr.
struct Cut {
  CutKind kind;
  int cluster = 0;  // VL block; 0 for ML
  int r = 0, s = 0, t = 0;

  auto operator<=>(const Cut&) const = default;
};

std::string to_string(CutKind kind);

/// Index bookkeeping shared by the builders and the dual extraction.
struct RelaxationLayout {
  RelaxationKind kind;
  int m = 0;
  int k = 0;
  // Offsets into the equality list.
  int eq_unit = 0;       // VL: Y_j(0,0) = 1, k rows
  int eq_assign = 0;     // VL: sum_j pi_j = 1; ML: X 1 = 1; m rows
  int eq_size = 0;       // VL/ML: cluster sizes, k - 1 rows
  int eq_diag = 0;       // VL: k*m rows (block major); ML: m rows
  int eq_rowsum = 0;     // VL: k*m rows; ML: Z e = 1, m rows
  int eq_cblock = 0;     // ML only: k(k+1)/2 rows
  int eq_cannot = 0;     // k rows per cannot pair (ML: one row per pair)
  int eq_mustlink = 0;   // rows added by append_mustlink_rows
  int eq_end = 0;
  int in_cannot = 0;     // k rows per cannot pair
  int in_cuts = 0;
};

struct Relaxation {
  sdp::Problem problem;
  RelaxationLayout layout;
  std::vector<Cut> cuts;  // inequalities from in_cuts on, in order
  /// Equality multipliers lambda with b^T lambda = offset such that
  /// cost + A^T lambda is the pairwise-distance cost. Both costs agree on
  /// the feasible set; the distance form carries no offset.
  Vector distance_shift;
};

/// Solves the distance form and maps the multipliers back to `problem`.
sdp::Solution solve_relaxation(const Relaxation& rel, const sdp::Settings& settings,
                               const sdp::WarmStart* warm = nullptr);

/// Y_j = [1 pi_j^T; pi_j Pi_j], j = 1..k.
Relaxation build_vl(const ReducedInstance& inst, const std::vector<Cut>& cuts = {});
/// Y = [C X^T; X Z] with C = Diag(c).
Relaxation build_ml(const ReducedInstance& inst, const std::vector<Cut>& cuts = {});
/// Z 1 = 1, tr Z = k, Z PSD, Z >= 0 on an unshrunk instance.
Relaxation build_pw(const Matrix& gram, int k);
/// Z 1 = 1, diag Z = (k/n) 1, Z PSD, Z >= 0.
Relaxation build_al(const Matrix& gram, int k);

Relaxation build(RelaxationKind kind, const ReducedInstance& inst, const std::vector<Cut>& cuts = {});

/// Adds must-link rows to an unshrunk VL or ML relaxation: equal rows of
/// Pi_j (VL) or of X and Z (ML). Rows implied by the others are left out.
/// Must be called before cuts are relied on by index.
void append_mustlink_rows(Relaxation& rel, const std::vector<IndexPair>& must);

/// Primal pieces on super points.
struct VlPrimal {
  std::vector<Vector> pi;
  std::vector<Matrix> big_pi;
};
struct MlPrimal {
  Matrix x;  // m x k
  Matrix z;  // m x m
};

VlPrimal extract_vl(const Relaxation& rel, const std::vector<Matrix>& x);
MlPrimal extract_ml(const Relaxation& rel, const std::vector<Matrix>& x);

/// Multipliers named after the constraint groups. Signs follow
/// cost - A^T y + G^T w = S + Z.
struct VlDual {
  std::vector<double> v;        // v_j = -(multiplier of Y_j(0,0) = 1)
  Vector y;                     // sum_j pi_j = 1
  std::vector<double> alpha;    // size constraints, alpha[k-1] = 0
  std::vector<Vector> beta;     // diag Pi_j = pi_j
  std::vector<Vector> gamma;    // Pi_j e = c_j pi_j
  std::vector<Matrix> big_v;    // nonnegative part on Pi_j
  std::vector<Vector> cannot_eq;   // per block, one per cannot pair: Pi_ab = 0
  std::vector<Vector> cannot_in;   // per block, >= 0: pi_a + pi_b <= 1
  Vector cut_w;                 // >= 0, one per cut
};

struct MlDual {
  Vector y1;       // X 1 = 1
  Vector y2;       // X^T e = diag C (last entry 0)
  Vector alpha1;   // Z e = 1
  Vector alpha2;   // diag Z = X diag(C^-1)
  Matrix c_mult;   // C block multipliers as M with <M, C> = sum of mu_ab C_ab
  Matrix u;        // nonnegative part on X (m x k)
  Matrix v;        // nonnegative part on Z (m x m)
  Vector cannot_eq;  // Z_ab = 0
  Matrix cannot_in;  // pairs x k, >= 0: X_ah + X_bh <= 1
  Vector cut_w;
};

VlDual extract_vl_dual(const Relaxation& rel, const sdp::Dual& d);
MlDual extract_ml_dual(const Relaxation& rel, const sdp::Dual& d);

/// Objective of the relaxation at a primal point, written in the relaxation's
/// own variables (tr W minus the coupling term).
double vl_objective(const ReducedInstance& inst, const VlPrimal& p);
double ml_objective(const ReducedInstance& inst, const MlPrimal& p);

}  // namespace ccmssc
