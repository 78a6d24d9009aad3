#pragma once

#include "ccmssc/relaxations.hpp"
#include "ccmssc/sdp_core.hpp"

#include <string>
#include <vector>

namespace ccmssc {

enum class BoundMethod { ErrorBound, LpRepair, MinusInfinity };

std::string to_string(BoundMethod m);

/// A lower bound on the relaxation value that holds for any approximate dual.
struct SafeBound {
  double value;
  BoundMethod method;
  double perturbation = 0.0;  // eigenvalue correction folded into value, <= 0
};

/// Upper bounds on the largest eigenvalue of each PSD block over the feasible set.
double eig_cap_vl(const CardinalitySpec& cards, int j);
double eig_cap_ml(const CardinalitySpec& cards);
std::vector<double> eig_caps(const Relaxation& rel, const CardinalitySpec& cards);

/// b^T y - h^T w + sum_b cap_b * (negative eigenvalue sum of S_b), where
/// S = cost - A^T y + G^T max(w, 0) - Z and Z is d.z clamped to >= 0 on the
/// mask and 0 off it. Valid for every y, w, z.
double jansson_bound(const sdp::Problem& problem, const sdp::Dual& d, const std::vector<double>& caps);

/// Same bound with the mask part of the dual residual moved into Z before
/// clamping. Never worse than the plain bound on the same (y, w).
double jansson_bound_absorbed(const sdp::Problem& problem, const sdp::Dual& d, const std::vector<double>& caps);

/// Closed-form bounds written in the named multipliers.
SafeBound error_bound_vl(const ReducedInstance& inst, const std::vector<Cut>& cuts, const VlDual& d);
SafeBound error_bound_ml(const ReducedInstance& inst, const std::vector<Cut>& cuts, const MlDual& d);

struct LpRepairSettings {
  int max_iterations = 200000;
  double time_limit = 0.0;
};

/// Fixes the PSD slack at proj_PSD(S) and solves the LP over the remaining
/// multipliers; the result is re-validated through jansson_bound.
SafeBound lp_dual_repair(const Relaxation& rel, const sdp::Dual& approx, const std::vector<double>& caps,
                         const LpRepairSettings& settings = {});

SafeBound best_safe_bound(const SafeBound& a, const SafeBound& b);

}  // namespace ccmssc
