#pragma once

#include "ccmssc/relaxations.hpp"

#include <vector>

namespace ccmssc {

struct FoundCut {
  Cut cut;
  double violation;  // lhs - rhs at the separating point, > 0
};

/// lhs - rhs of the cut at a primal point (positive means violated).
double cut_violation(const Cut& cut, const VlPrimal& p);
double cut_violation(const Cut& cut, const MlPrimal& p);

/// All triangle cuts violated by more than violation_tol, most violated first
/// (ties in Cut order), truncated to max_found.
std::vector<FoundCut> separate_vl(const VlPrimal& p, int max_found, double violation_tol);
std::vector<FoundCut> separate_ml(const MlPrimal& p, int max_found, double violation_tol);

/// Drops pool cuts with slack > inactive_tol and multiplier < inactive_tol,
/// then appends the first ceil(add_fraction * |found|) new cuts of `found`.
/// slacks and multipliers are aligned with pool.
std::vector<Cut> update_pool(const std::vector<Cut>& pool, const std::vector<double>& slacks, const Vector& multipliers,
                             const std::vector<FoundCut>& found, double add_fraction, double inactive_tol);

/// Stop when nothing was separated or the bound moved by less than rel_tol.
bool cp_should_stop(double prev_lb, double new_lb, int n_found, double rel_tol);

/// Rewrites cut indices through new_id (old super point -> new super point).
/// Cuts whose indices stop being distinct are dropped.
std::vector<Cut> remap_cuts(const std::vector<Cut>& cuts, const std::vector<int>& new_id);

}  // namespace ccmssc
