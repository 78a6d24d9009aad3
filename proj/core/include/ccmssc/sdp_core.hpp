#pragma once

#include "ccmssc/data_model.hpp"

#include <optional>
#include <vector>

namespace ccmssc::sdp {

/// One upper-triangle entry of a symmetric coefficient matrix A, meaning
/// A(row, col) = A(col, row) = value. row <= col.
struct SymEntry {
  int block;
  int row;
  int col;
  double value;
};

/// <A, X> = rhs.
struct Equality {
  std::vector<SymEntry> terms;
  double rhs = 0.0;
};

/// <G, X> <= rhs.
struct Inequality {
  std::vector<SymEntry> terms;
  double rhs = 0.0;
};

/// min  offset + sum_b <C_b, X_b>
/// s.t. equalities, inequalities, X_b PSD, X_b >= 0 where mask_b == 1.
struct Problem {
  std::vector<int> dims;
  std::vector<Matrix> cost;
  std::vector<Matrix> mask;  // 0/1 entries, symmetric
  double offset = 0.0;
  std::vector<Equality> equalities;
  std::vector<Inequality> inequalities;

  int blocks() const { return static_cast<int>(dims.size()); }
  /// Throws std::invalid_argument on inconsistent dimensions or indices.
  void validate() const;
};

/// Dual certificate pieces: cost - A^T y + G^T w = S + Z.
struct Dual {
  Vector y;                 // equality multipliers
  Vector w;                 // inequality multipliers, >= 0
  std::vector<Matrix> s;    // PSD part
  std::vector<Matrix> z;    // nonnegative part, zero off the mask
};

enum class Status { Converged, IterationLimit, TimeLimit };

struct Solution {
  std::vector<Matrix> x;     // PSD-projected primal
  Dual dual;
  double primal_objective = 0.0;  // includes offset
  double dual_objective = 0.0;    // includes offset
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  double sigma = 1.0;
  Status status = Status::IterationLimit;
};

struct Settings {
  double tol = 1e-4;
  int max_iterations = 20000;
  double time_limit = 0.0;  // seconds, <= 0 disables
  double sigma = 1.0;
  int check_every = 10;
};

/// Primal iterate and dual slacks of an earlier solve on a problem with the
/// same block dimensions. Multipliers are recomputed.
struct WarmStart {
  std::vector<Matrix> x;
  std::vector<Matrix> s;
  std::vector<Matrix> z;
  double sigma = 1.0;
};

/// Symmetric Gauss-Seidel ADMM on the dual of Problem.
Solution solve(const Problem& problem, const Settings& settings, const WarmStart* warm = nullptr);

WarmStart warm_start_from(const Solution& sol);

/// Nearest PSD matrix in Frobenius norm. Input is symmetrized first.
Matrix project_psd(const Matrix& m);
/// Sum of the negative eigenvalues (<= 0).
double negative_eigenvalue_sum(const Matrix& m);

/// <A, X> for a term list.
double apply_terms(const std::vector<SymEntry>& terms, const std::vector<Matrix>& x);
/// out_b += scale * A for a term list.
void add_terms(const std::vector<SymEntry>& terms, double scale, std::vector<Matrix>& out);

}  // namespace ccmssc::sdp
