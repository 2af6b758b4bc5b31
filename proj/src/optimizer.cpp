#include "softopt/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "softopt/log.hpp"
#include "softopt/mma.hpp"

namespace softopt {

using Eigen::VectorXd;

DesignMapping::DesignMapping(const Grid& grid, const DomainMask& mask, int channels, double r_min, double eta_p)
    : mask_(&mask), channels_(channels), eta_p_(eta_p), design_(mask.design_elements()),
      nb_(filter_neighborhoods(grid, r_min)) {
  if (channels < 1 || channels > 3) fail(ErrorKind::config, "channel count must be 1-3");
  const int ne = grid.num_elements();
  passive_ = PhysicalDesign::uniform(ne, 0.0, 0.0, 0.0);
  for (int e = 0; e < ne; ++e)
    if (mask.tag[e] == ElementTag::passive_solid) passive_.set_element(e, material_pattern(mask.material[e]));
}

PhysicalDesign DesignMapping::raw_field(const VectorXd& x) const {
  if (x.size() != size()) fail(ErrorKind::dimension, "design vector size mismatch");
  PhysicalDesign raw = passive_;
  const int nd = num_design();
  for (int c = 0; c < channels_; ++c)
    for (int i = 0; i < nd; ++i) raw.rho[c][design_[i]] = x[c * nd + i];
  return raw;
}

VectorXd DesignMapping::forward_channel(const VectorXd& x, int c, double beta) const {
  VectorXd raw = passive_.rho[c];
  const int nd = num_design();
  if (c < channels_)
    for (int i = 0; i < nd; ++i) raw[design_[i]] = x[c * nd + i];
  VectorXd out = project(filter_densities(raw, nb_), {beta, eta_p_}).value;
  for (std::size_t e = 0; e < mask_->tag.size(); ++e)
    if (mask_->tag[e] != ElementTag::design) out[e] = passive_.rho[c][e];
  return out;
}

DesignMapping::Forward DesignMapping::forward(const VectorXd& x, double beta) const {
  const PhysicalDesign raw = raw_field(x);
  Forward fw;
  for (int c = 0; c < 3; ++c) {
    auto pr = project(filter_densities(raw.rho[c], nb_), {beta, eta_p_});
    fw.design.rho[c] = std::move(pr.value);
    fw.slope[c] = std::move(pr.slope);
    for (std::size_t e = 0; e < mask_->tag.size(); ++e)
      if (mask_->tag[e] != ElementTag::design) {
        fw.design.rho[c][e] = passive_.rho[c][e];
        fw.slope[c][e] = 0.0;
      }
  }
  return fw;
}

VectorXd DesignMapping::backward(const std::array<VectorXd, 3>& d_phys, const std::array<VectorXd, 3>& slope) const {
  const int nd = num_design();
  VectorXd out(size());
  for (int c = 0; c < channels_; ++c) {
    const VectorXd full = chain_sensitivities(d_phys[c], slope[c], nb_);
    for (int i = 0; i < nd; ++i) out[c * nd + i] = full[design_[i]];
  }
  return out;
}

PhysicalDesign initialize(const ProblemSpec& problem, const Grid& grid, const DomainMask& mask) {
  const auto& vf = problem.volume_fractions;
  const int channels = problem.channels();
  PhysicalDesign d = PhysicalDesign::uniform(grid.num_elements(), problem.volume_fraction_total(),
                                             channels >= 2 ? vf[1] : 0.0, channels >= 3 ? vf[2] : 0.0);
  for (int e = 0; e < grid.num_elements(); ++e) {
    if (mask.tag[e] == ElementTag::passive_void) d.set_element(e, {0.0, 0.0, 0.0});
    else if (mask.tag[e] == ElementTag::passive_solid) d.set_element(e, material_pattern(mask.material[e]));
  }
  return d;
}

VectorXd design_vector(const PhysicalDesign& field, const DesignMapping& mapping) {
  const int nd = mapping.num_design();
  VectorXd x(mapping.size());
  for (int c = 0; c < mapping.channels(); ++c)
    for (int i = 0; i < nd; ++i) x[c * nd + i] = field.rho[c][mapping.design_elements()[i]];
  return x;
}

std::array<double, 3> constraint_values(const PhysicalDesign& design, const Grid& grid,
                                        const std::vector<double>& fractions) {
  return volume_constraints(design, grid, fractions).g;
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::failed: return "failed";
  }
  return "failed";
}

namespace {

constexpr double kMinMove = 1e-3;

// Largest change of the cumulative phase indicators rho1, rho1*rho2, rho1*rho2*rho3,
// so material selection only counts where there is material.
double design_change(const PhysicalDesign& a, const PhysicalDesign& b, int channels) {
  double change = 0.0;
  Eigen::ArrayXd pa = Eigen::ArrayXd::Ones(a.rho[0].size()), pb = pa;
  for (int c = 0; c < channels; ++c) {
    pa *= a.rho[c].array();
    pb *= b.rho[c].array();
    change = std::max(change, (pa - pb).abs().maxCoeff());
  }
  return change;
}

double volume_limit(const ProblemSpec& problem, int c) {
  return c == 0 ? problem.volume_fraction_total() : problem.volume_fractions[c];
}

// Shift channel c of x down uniformly, inside the move box, until its volume
// constraint holds at `beta`.
void restore_feasibility(VectorXd& x, const VectorXd& lb, const VectorXd& ub, const DesignMapping& map,
                         const ProblemSpec& problem, const Grid& grid, double beta) {
  const int nd = map.num_design();
  const double total = grid.element_volume() * grid.num_elements();
  for (int c = 0; c < map.channels(); ++c) {
    const double limit = volume_limit(problem, c);
    auto shifted = [&](double t) {
      VectorXd y = x;
      for (int i = c * nd; i < (c + 1) * nd; ++i) y[i] = std::clamp(x[i] + t, lb[i], ub[i]);
      return y;
    };
    auto g = [&](const VectorXd& y) {
      return grid.element_volume() * map.forward_channel(y, c, beta).sum() / (limit * total) - 1.0;
    };
    if (g(x) <= 0.0) continue;
    double t_in = -1.0, t_out = 0.0;
    if (g(shifted(t_in)) > 0.0) {
      x = shifted(t_in);
      log(LogLevel::warn, "volume constraint " + std::to_string(c + 1) + " cannot be restored inside the move limit");
      continue;
    }
    for (int k = 0; k < 60; ++k) {
      const double t = 0.5 * (t_in + t_out);
      if (g(shifted(t)) <= 0.0) t_in = t;
      else t_out = t;
    }
    x = shifted(t_in);
  }
}

struct Evaluation {
  DesignMapping::Forward fw;
  FieldSolution sol;
  VolumeConstraints vc;
};

}  // namespace

OptResult run(const ProblemSpec& problem, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  OptResult res;
  std::string stage = "setup";
  auto finish = [&] {
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  };
  try {
    Analysis analysis(problem);
    const auto& grid = analysis.grid();
    const int channels = problem.channels();
    const DesignMapping map(grid, analysis.mask(), channels, problem.filter.r_min, problem.filter.eta_p);
    ObjectiveSpec objective = problem.effective_objective();
    const auto& sched = problem.filter.beta;
    const auto& opt = problem.optimizer;

    VectorXd x = design_vector(initialize(problem, grid, analysis.mask()), map);
    res.x = x;
    res.design = map.forward(x, sched.beta_at(1)).design;

    auto evaluate = [&](const VectorXd& xv, double beta) {
      Evaluation ev;
      stage = "filter/projection";
      ev.fw = map.forward(xv, beta);
      stage = "forward solve";
      ev.sol = analysis.solve(ev.fw.design);
      ev.vc = volume_constraints(ev.fw.design, grid, problem.volume_fractions);
      return ev;
    };

    const int n = map.size();
    MmaSettings ms;
    ms.move = opt.move;
    Mma mma(n, channels, ms);
    PhysicalDesign rho_prev;
    // per-variable move limits, halved when a variable reverses direction
    VectorXd move = VectorXd::Constant(n, opt.move);
    VectorXd last_step = VectorXd::Zero(n);
    bool converged = false;

    if (opt.max_iters == 0) {
      auto ev = evaluate(x, sched.beta_at(1));
      stage = "objective";
      if (!(objective.scale > 0.0)) objective.scale = calibrate_scale(ev.sol.metrics, objective, ev.sol.u.lpNorm<Eigen::Infinity>());
      res.f = objective_value(ev.sol.metrics, objective);
      res.g = ev.vc.g;
      res.grayness = grayness(ev.fw.design.rho[0]);
      res.design = ev.fw.design;
      res.fields = std::move(ev.sol);
    }

    for (int it = 1; it <= opt.max_iters; ++it) {
      const double beta = sched.beta_at(it);
      auto ev = evaluate(x, beta);
      stage = "objective";
      if (!(objective.scale > 0.0)) {
        objective.scale = calibrate_scale(ev.sol.metrics, objective, ev.sol.u.lpNorm<Eigen::Infinity>());
        log(LogLevel::info, "objective scale s = " + std::to_string(objective.scale));
      }
      const auto parts = objective_parts(ev.sol.metrics, objective);

      HistoryRow row;
      row.iter = it;
      row.f = parts.f;
      row.g = ev.vc.g;
      row.change = it == 1 ? 0.0 : design_change(rho_prev, ev.fw.design, channels);
      rho_prev = ev.fw.design;
      row.grayness = grayness(ev.fw.design.rho[0]);
      row.u_out = ev.sol.metrics.u_out;
      row.SE = ev.sol.metrics.SE;
      row.E_t = ev.sol.metrics.E_t;
      row.beta = beta;
      row.max_principle = ev.sol.max_principle;
      res.history.push_back(row);
      if (options.on_iteration) options.on_iteration(row);

      // last good design
      res.x = x;
      res.design = ev.fw.design;
      res.f = parts.f;
      res.g = ev.vc.g;
      res.grayness = row.grayness;
      res.beta = beta;

      const double gmax = *std::max_element(ev.vc.g.begin(), ev.vc.g.begin() + channels);
      if (it > 1 && row.change < opt.tol && beta >= sched.max && gmax <= opt.feasibility) {
        converged = true;
        res.fields = std::move(ev.sol);
        break;
      }
      if (it == opt.max_iters) {
        res.fields = std::move(ev.sol);
        break;
      }

      stage = "adjoint";
      const auto adj = solve_adjoints(analysis, ev.sol, parts);
      const auto sens = total_gradient(analysis, ev.sol, adj, parts, ev.vc);
      const VectorXd df = map.backward(sens.df, ev.fw.slope);
      Eigen::MatrixXd dg = Eigen::MatrixXd::Zero(channels, n);
      for (int c = 0; c < channels; ++c) {
        std::array<VectorXd, 3> only;
        for (int k = 0; k < 3; ++k) only[k] = k == c ? sens.dg[c] : VectorXd::Zero(grid.num_elements());
        dg.row(c) = map.backward(only, ev.fw.slope).transpose();
      }
      VectorXd gv(channels);
      for (int c = 0; c < channels; ++c) gv[c] = ev.vc.g[c];

      stage = "mma update";
      const double next_beta = sched.beta_at(it + 1);
      if (next_beta != beta) {
        mma.reset();
        move.setConstant(opt.move);
        last_step.setZero();
      }
      const VectorXd lo = VectorXd::Zero(n), hi = VectorXd::Ones(n);
      MmaResult up;
      try {
        up = mma.update(x, parts.f, df, gv, dg, lo, hi);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::optimizer) throw;
        log(LogLevel::warn, std::string("MMA update failed, retrying with half move limit: ") + err.what());
        mma.set_move(0.5 * mma.settings().move);
        mma.reset();
        up = mma.update(x, parts.f, df, gv, dg, lo, hi);
        mma.set_move(opt.move);
      }

      stage = "feasibility restoration";
      const VectorXd lb = (x.array() - move.array()).max(0.0).matrix();
      const VectorXd ub = (x.array() + move.array()).min(1.0).matrix();
      VectorXd x_new = up.x.cwiseMax(lb).cwiseMin(ub);
      restore_feasibility(x_new, lb, ub, map, problem, grid, next_beta);
      const VectorXd step = x_new - x;
      for (int j = 0; j < n; ++j) {
        if (step[j] * last_step[j] < 0.0) move[j] = std::max(kMinMove, 0.5 * move[j]);
        else if (step[j] != 0.0) move[j] = std::min(opt.move, 1.2 * move[j]);
      }
      last_step = step;
      x = x_new;

      if (it % 10 == 0 || log_level() >= LogLevel::debug) {
        std::ostringstream os;
        os << "iter " << it << " f=" << row.f << " g1=" << row.g[0] << " change=" << row.change
           << " gray=" << row.grayness << " beta=" << beta;
        log(LogLevel::info, os.str());
      }
    }
    res.scale = objective.scale;
    res.status = converged ? RunStatus::converged : RunStatus::max_iters;
  } catch (const Error& err) {
    res.status = RunStatus::failed;
    res.stage = stage;
    res.error = err.what();
    res.error_kind = err.kind();
  } catch (const std::exception& err) {
    res.status = RunStatus::failed;
    res.stage = stage;
    res.error = err.what();
  }
  return finish();
}

}  // namespace softopt
