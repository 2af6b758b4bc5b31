#pragma once

#include <Eigen/Dense>

#include "softopt/grid.hpp"

namespace softopt {

struct ProjectionParams {
  double beta = 1.0;
  double eta = 0.5;
};

/// beta continuation: starts at `start`, doubles every `interval` iterations, capped at `max`.
struct ContinuationSchedule {
  double start = 1.0;
  double max = 16.0;
  int interval = 40;

  /// beta in effect for 1-based iteration `iter`.
  double beta_at(int iter) const;
  bool is_boundary(int iter) const;  // true when beta_at(iter) != beta_at(iter - 1)
};

Eigen::VectorXd filter_densities(const Eigen::VectorXd& rho, const Neighborhoods& nb);

/// Transpose of filter_densities.
Eigen::VectorXd filter_transpose(const Eigen::VectorXd& a, const Neighborhoods& nb);

struct Projection {
  Eigen::VectorXd value;
  Eigen::VectorXd slope;  // d rho_bar / d rho_tilde
};

Projection project(const Eigen::VectorXd& rho_tilde, const ProjectionParams& params);

/// df/drho = F^T (slope .* df/drho_bar).
Eigen::VectorXd chain_sensitivities(const Eigen::VectorXd& df_drho_bar, const Eigen::VectorXd& slope,
                                    const Neighborhoods& nb);

/// Mean of 4 rho (1 - rho).
double grayness(const Eigen::VectorXd& rho_bar);

}  // namespace softopt
