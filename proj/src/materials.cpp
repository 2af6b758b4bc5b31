#include "softopt/materials.hpp"

#include <cmath>

#include "softopt/error.hpp"

namespace softopt {

ValueGrad smoothed_heaviside(double x, double beta, double eta) {
  const double a = std::tanh(beta * eta);
  const double denom = a + std::tanh(beta * (1.0 - eta));
  const double t = std::tanh(beta * (x - eta));
  return {(a + t) / denom, beta * (1.0 - t * t) / denom};
}

void MaterialSet::validate() const {
  if (E.empty() || E.size() > 3) fail(ErrorKind::config, "materials: 1 to 3 moduli required");
  if (!(E_min > 0.0)) fail(ErrorKind::config, "materials: E_min must be positive");
  if (!(E_min < E[0])) fail(ErrorKind::config, "materials: E_min must be below E_1");
  for (std::size_t i = 1; i < E.size(); ++i)
    if (!(E[i] > E[i - 1])) fail(ErrorKind::config, "materials: moduli must be strictly increasing");
  if (!(nu >= 0.0 && nu < 0.5)) fail(ErrorKind::config, "materials: nu must lie in [0, 0.5)");
  if (!(penalty >= 1.0)) fail(ErrorKind::config, "materials: penalty must be >= 1");
}

ModulusResult interpolate_modulus(double rho1, double rho2, double rho3, const MaterialSet& mats) {
  const double p = mats.penalty;
  auto pw = [p](double r) { return std::pow(r, p); };
  auto dpw = [p](double r) { return r > 0.0 ? p * std::pow(r, p - 1.0) : (p == 1.0 ? 1.0 : 0.0); };

  // Innermost-out: s3 mixes E2/E3, s2 mixes E1/s3, result mixes E_min/s2.
  double inner = mats.E[0];
  double d_inner_d2 = 0.0, d_inner_d3 = 0.0;
  if (mats.count() >= 2) {
    double top = mats.E[1];
    double d_top_d3 = 0.0;
    if (mats.count() == 3) {
      top = (1.0 - pw(rho3)) * mats.E[1] + pw(rho3) * mats.E[2];
      d_top_d3 = dpw(rho3) * (mats.E[2] - mats.E[1]);
    }
    inner = (1.0 - pw(rho2)) * mats.E[0] + pw(rho2) * top;
    d_inner_d2 = dpw(rho2) * (top - mats.E[0]);
    d_inner_d3 = pw(rho2) * d_top_d3;
  }
  ModulusResult r;
  r.value = (1.0 - pw(rho1)) * mats.E_min + pw(rho1) * inner;
  r.partial[0] = dpw(rho1) * (inner - mats.E_min);
  r.partial[1] = pw(rho1) * d_inner_d2;
  r.partial[2] = pw(rho1) * d_inner_d3;
  return r;
}

void FlowParams::validate() const {
  if (!(K_s > 0.0 && K_s < K_v)) fail(ErrorKind::config, "flow: require 0 < K_s < K_v");
  if (!(eta_k > 0.0 && eta_k < 1.0) || !(eta_d > 0.0 && eta_d < 1.0))
    fail(ErrorKind::config, "flow: eta_k and eta_d must lie in (0, 1)");
  if (!(beta_k > 0.0 && beta_d > 0.0)) fail(ErrorKind::config, "flow: beta_k and beta_d must be positive");
  if (!(D_s >= 0.0)) fail(ErrorKind::config, "flow: D_s must be non-negative");
  if (!(P_in > p_atm)) fail(ErrorKind::config, "flow: P_in must exceed p_atm");
}

ValueGrad flow_coefficient(double rho1, const FlowParams& params) {
  const auto H = smoothed_heaviside(rho1, params.beta_k, params.eta_k);
  const double span = 1.0 - params.K_s / params.K_v;
  return {params.K_v * (1.0 - span * H.value), -params.K_v * span * H.grad};
}

DrainageResult drainage_term(double rho1, double p, const FlowParams& params) {
  const auto H = smoothed_heaviside(rho1, params.beta_d, params.eta_d);
  const double gauge = p - params.p_atm;
  return {-params.D_s * H.value * gauge, -params.D_s * H.grad * gauge, -params.D_s * H.value};
}

double calibrate_drainage(double K_s, double h, double depth, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) fail(ErrorKind::config, "drainage ratio must lie in (0, 1)");
  if (!(depth > 0.0)) fail(ErrorKind::config, "drainage depth must be positive");
  const double elements = std::ceil(depth / h - 1e-9);
  const double mu = std::pow(ratio, 1.0 / elements);  // per-element decay factor
  return K_s / (h * h) * (mu + 1.0 / mu - 2.0);
}

}  // namespace softopt
