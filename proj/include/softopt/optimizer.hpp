#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "softopt/adjoint.hpp"
#include "softopt/analysis.hpp"
#include "softopt/design.hpp"
#include "softopt/error.hpp"
#include "softopt/filtering.hpp"
#include "softopt/problem.hpp"

namespace softopt {

/// Design variables x (channel-major blocks over the design elements) to
/// physical densities: passive values are inserted, every channel is filtered
/// and projected, and passive elements are pinned again afterwards.
class DesignMapping {
 public:
  DesignMapping(const Grid& grid, const DomainMask& mask, int channels, double r_min, double eta_p);

  int channels() const { return channels_; }
  int num_design() const { return static_cast<int>(design_.size()); }
  int size() const { return channels_ * num_design(); }
  const std::vector<int>& design_elements() const { return design_; }
  const Neighborhoods& neighborhoods() const { return nb_; }

  struct Forward {
    PhysicalDesign design;
    std::array<Eigen::VectorXd, 3> slope;
  };
  Forward forward(const Eigen::VectorXd& x, double beta) const;
  /// Physical densities of one channel only.
  Eigen::VectorXd forward_channel(const Eigen::VectorXd& x, int channel, double beta) const;
  /// d(.)/dx from d(.)/drho_bar per channel.
  Eigen::VectorXd backward(const std::array<Eigen::VectorXd, 3>& d_phys,
                           const std::array<Eigen::VectorXd, 3>& slope) const;

  /// Raw (unfiltered) field of every element for the given x.
  PhysicalDesign raw_field(const Eigen::VectorXd& x) const;

 private:
  const DomainMask* mask_;
  int channels_;
  double eta_p_;
  std::vector<int> design_;
  Neighborhoods nb_;
  PhysicalDesign passive_;  // channel values of passive elements, 0 elsewhere
};

/// Channel 1 at vf1+vf2+vf3, channel k>1 at vf_k; passive elements take their pattern.
PhysicalDesign initialize(const ProblemSpec& problem, const Grid& grid, const DomainMask& mask);
/// The design-element entries of a field, channel-major.
Eigen::VectorXd design_vector(const PhysicalDesign& field, const DesignMapping& mapping);

std::array<double, 3> constraint_values(const PhysicalDesign& design, const Grid& grid,
                                        const std::vector<double>& fractions);

struct HistoryRow {
  int iter = 0;
  double f = 0.0;
  std::array<double, 3> g{0.0, 0.0, 0.0};
  double change = 0.0;
  double grayness = 0.0;
  double u_out = 0.0;
  double SE = 0.0;
  double E_t = 0.0;
  double beta = 1.0;
  bool max_principle = true;
};

enum class RunStatus { converged, max_iters, failed };
const char* to_string(RunStatus s);

struct OptResult {
  RunStatus status = RunStatus::max_iters;
  std::vector<HistoryRow> history;
  Eigen::VectorXd x;
  PhysicalDesign design;  // physical densities of the final (or last good) design
  double scale = 0.0;
  double beta = 1.0;
  double f = 0.0;
  std::array<double, 3> g{0.0, 0.0, 0.0};
  double grayness = 0.0;
  std::optional<FieldSolution> fields;
  // failure only
  std::string stage;
  std::string error;
  ErrorKind error_kind = ErrorKind::optimizer;
  double seconds = 0.0;
};

struct RunOptions {
  std::function<void(const HistoryRow&)> on_iteration;
};

OptResult run(const ProblemSpec& problem, const RunOptions& options = {});

}  // namespace softopt
