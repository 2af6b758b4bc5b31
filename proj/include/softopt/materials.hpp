#pragma once

#include <array>
#include <vector>

namespace softopt {

/// Value of a scalar map together with its derivative.
struct ValueGrad {
  double value = 0.0;
  double grad = 0.0;
};

/// Normalised tanh step: 0 at x=0, 1 at x=1, eta where the slope peaks.
ValueGrad smoothed_heaviside(double x, double beta, double eta);

/// Moduli in Pa; 1-3 materials with E_min < E[0] < E[1] < E[2].
struct MaterialSet {
  double E_min = 100.0;
  std::vector<double> E{1.0e6, 1.0e7, 1.0e8};
  double nu = 0.3;
  double penalty = 3.0;

  int count() const { return static_cast<int>(E.size()); }
  void validate() const;
};

struct ModulusResult {
  double value = 0.0;
  std::array<double, 3> partial{0.0, 0.0, 0.0};  // dE/drho_k
};

/// Multi-material SIMP: density channel 1 chooses solid vs void, channel 2
/// chooses material 2 over 1, channel 3 material 3 over 2. Channels beyond the
/// material count are ignored (their partials are zero).
ModulusResult interpolate_modulus(double rho1, double rho2, double rho3, const MaterialSet& mats);

/// Darcy flow and drainage parameters (normalised flow units, pressures in Pa).
struct FlowParams {
  double K_v = 1.0;
  double K_s = 1.0e-7;
  double beta_k = 10.0;
  double eta_k = 0.2;
  double D_s = 0.0;
  double beta_d = 10.0;
  double eta_d = 0.3;
  double p_atm = 0.0;
  double P_in = 5.0e4;

  void validate() const;
};

ValueGrad flow_coefficient(double rho1, const FlowParams& params);

struct DrainageResult {
  double value = 0.0;
  double d_rho = 0.0;
  double d_p = 0.0;
};

/// Q_drain = -D_s * H(rho1; beta_d, eta_d) * (p - p_atm).
DrainageResult drainage_term(double rho1, double p, const FlowParams& params);

/// Drainage coefficient that makes the pressure inside a solid wall decay to
/// `ratio` of its surface value over `depth` metres on a grid of spacing h.
/// Uses the exact geometric decay of the discrete (lumped) operator, with the
/// depth rounded up to whole elements.
double calibrate_drainage(double K_s, double h, double depth, double ratio);

}  // namespace softopt
