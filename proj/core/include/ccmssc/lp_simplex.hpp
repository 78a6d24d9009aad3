#pragma once

#include <Eigen/Sparse>

#include "ccmssc/data_model.hpp"

#include <vector>

namespace ccmssc::lp {

/// min c^T x  s.t.  A x = b,  x_j >= 0 unless free[j].
struct StandardForm {
  Eigen::SparseMatrix<double> a;  // column major
  Vector b;
  Vector c;
  std::vector<bool> free;  // empty means all columns are bounded below by 0
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::IterationLimit;
  Vector x;
  Vector duals;  // simplex multipliers: c_j - duals^T a_j >= 0 at optimum
  double objective = 0.0;
  int iterations = 0;
};

struct Settings {
  int max_iterations = 200000;
  int refactor_every = 64;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double time_limit = 0.0;  // seconds, <= 0 disables
};

/// Two-phase revised primal simplex with a sparse LU basis and product-form
/// updates. Intended for problems with few rows and many columns.
Result solve(const StandardForm& lp, const Settings& settings = {});

}  // namespace ccmssc::lp
