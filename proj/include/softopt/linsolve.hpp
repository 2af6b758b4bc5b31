#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <span>
#include <vector>

#include "softopt/grid.hpp"

namespace softopt {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Fixed sparsity pattern for a per-node field with `dofs_per_node` components,
/// with precomputed value slots so element assembly is a scatter-add.
class AssemblyPattern {
 public:
  AssemblyPattern(const Grid& grid, int dofs_per_node);

  int size() const { return static_cast<int>(pattern_.rows()); }
  int dofs_per_element() const { return dofs_per_element_; }
  /// Zero-valued matrix with the full pattern.
  SparseMatrix zero_matrix() const { return pattern_; }
  /// Add coef[e] * Ke to every element block of `m` (m must come from zero_matrix()).
  void add_elements(SparseMatrix& m, std::span<const double> coef, const Eigen::MatrixXd& Ke) const;
  void add_element(SparseMatrix& m, int e, double coef, const Eigen::MatrixXd& Ke) const;
  /// Index into valuePtr() for (row, col); -1 when outside the pattern.
  int slot(int row, int col) const;
  std::vector<int> element_dofs(int e) const;

 private:
  const Grid* grid_;
  int dofs_per_node_;
  int dofs_per_element_;
  SparseMatrix pattern_;
  std::vector<int> slots_;  // ne * dpe * dpe, column-major per element block
};

struct SolveReport {
  double relative_residual = 0.0;  // normwise backward error ||r|| / (||K|| ||x|| + ||b||), inf-norms
  int refinements = 0;
};

/// Symmetric positive definite solve on the free (unconstrained) dofs of a
/// matrix sharing one pattern across calls. The symbolic analysis is reused.
class ConstrainedSolver {
 public:
  ConstrainedSolver(const SparseMatrix& pattern, std::vector<int> fixed_dofs, double residual_tol = 1e-9);

  const std::vector<int>& free_dofs() const { return free_; }
  const std::vector<int>& fixed_dofs() const { return fixed_; }
  int free_index(int dof) const { return free_index_[dof]; }
  int num_free() const { return static_cast<int>(free_.size()); }

  /// Extract the free block of `full` and factorise it. Throws ErrorKind::solver if singular.
  void factorize(const SparseMatrix& full);
  /// Solve K_ff x = b on free dofs with residual control.
  Eigen::VectorXd solve(const Eigen::VectorXd& b, SolveReport* report = nullptr) const;

  Eigen::VectorXd gather(const Eigen::VectorXd& full) const;
  Eigen::VectorXd scatter(const Eigen::VectorXd& free, const Eigen::VectorXd& fill) const;
  const SparseMatrix& reduced() const { return reduced_; }

 private:
  std::vector<int> fixed_;
  std::vector<int> free_;
  std::vector<int> free_index_;
  std::vector<int> value_map_;  // full nnz slot -> reduced slot, -1 if dropped
  SparseMatrix reduced_;
  double tol_;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> ldlt_;
  bool analyzed_ = false;
};

}  // namespace softopt
