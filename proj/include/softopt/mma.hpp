#pragma once

#include <Eigen/Dense>

namespace softopt {

/// Method of moving asymptotes for
///   min f0(x) + a0 z + sum(c_i y_i + d_i y_i^2 / 2)
///   s.t. f_i(x) - a_i z - y_i <= 0,  xmin <= x <= xmax,  y, z >= 0.
struct MmaSettings {
  double move = 0.2;
  double asyinit = 0.5;
  double asyincr = 1.2;
  double asydecr = 0.7;
  double albefa = 0.1;
  double raa0 = 1e-5;
  double a0 = 1.0;
  double a = 0.0;
  double c = 1000.0;
  double d = 1.0;
};

struct MmaResult {
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // constraint relaxation
  double z = 0.0;
  Eigen::VectorXd lambda;
};

class Mma {
 public:
  Mma(int n, int m, MmaSettings settings = {});

  int n() const { return n_; }
  int m() const { return m_; }
  const MmaSettings& settings() const { return settings_; }
  void set_move(double move) { settings_.move = move; }

  /// One outer update. dfdx is m x n. Throws ErrorKind::optimizer when the
  /// subproblem produces a non-finite point.
  MmaResult update(const Eigen::VectorXd& x, double f0, const Eigen::VectorXd& df0dx, const Eigen::VectorXd& fval,
                   const Eigen::MatrixXd& dfdx, const Eigen::VectorXd& xmin, const Eigen::VectorXd& xmax);

  /// Forget asymptote history; the next two updates use the initial spacing.
  void reset();

  const Eigen::VectorXd& low() const { return low_; }
  const Eigen::VectorXd& upp() const { return upp_; }

 private:
  int n_, m_;
  MmaSettings settings_;
  int iter_ = 0;
  Eigen::VectorXd xold1_, xold2_, low_, upp_;
};

}  // namespace softopt
