#include "softopt/filtering.hpp"

#include <algorithm>
#include <cmath>

#include "softopt/materials.hpp"

namespace softopt {

double ContinuationSchedule::beta_at(int iter) const {
  const int steps = interval > 0 ? std::max(0, iter - 1) / interval : 0;
  double beta = start;
  for (int s = 0; s < steps && beta < max; ++s) beta *= 2.0;
  return std::min(beta, max);
}

bool ContinuationSchedule::is_boundary(int iter) const {
  return iter > 1 && beta_at(iter) != beta_at(iter - 1);
}

Eigen::VectorXd filter_densities(const Eigen::VectorXd& rho, const Neighborhoods& nb) {
  Eigen::VectorXd out(nb.size());
  for (int i = 0; i < nb.size(); ++i) {
    double acc = 0.0;
    for (int k = nb.offsets[i]; k < nb.offsets[i + 1]; ++k) acc += nb.weight[k] * rho[nb.index[k]];
    out[i] = acc / nb.row_sum[i];
  }
  return out;
}

Eigen::VectorXd filter_transpose(const Eigen::VectorXd& a, const Neighborhoods& nb) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nb.size());
  for (int i = 0; i < nb.size(); ++i) {
    const double ai = a[i] / nb.row_sum[i];
    for (int k = nb.offsets[i]; k < nb.offsets[i + 1]; ++k) out[nb.index[k]] += nb.weight[k] * ai;
  }
  return out;
}

Projection project(const Eigen::VectorXd& rho_tilde, const ProjectionParams& params) {
  Projection p{Eigen::VectorXd(rho_tilde.size()), Eigen::VectorXd(rho_tilde.size())};
  for (Eigen::Index i = 0; i < rho_tilde.size(); ++i) {
    const auto h = smoothed_heaviside(rho_tilde[i], params.beta, params.eta);
    p.value[i] = h.value;
    p.slope[i] = h.grad;
  }
  return p;
}

Eigen::VectorXd chain_sensitivities(const Eigen::VectorXd& df_drho_bar, const Eigen::VectorXd& slope,
                                    const Neighborhoods& nb) {
  return filter_transpose(df_drho_bar.cwiseProduct(slope), nb);
}

double grayness(const Eigen::VectorXd& rho_bar) {
  if (rho_bar.size() == 0) return 0.0;
  return (4.0 * rho_bar.array() * (1.0 - rho_bar.array())).sum() / static_cast<double>(rho_bar.size());
}

}  // namespace softopt
