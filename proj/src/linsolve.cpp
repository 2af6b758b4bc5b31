#include "softopt/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "softopt/error.hpp"

namespace softopt {

AssemblyPattern::AssemblyPattern(const Grid& grid, int dofs_per_node)
    : grid_(&grid), dofs_per_node_(dofs_per_node), dofs_per_element_(dofs_per_node * grid.nodes_per_element()) {
  const int n = dofs_per_node * grid.num_nodes();
  const int dpe = dofs_per_element_;
  std::vector<Eigen::Triplet<double, int>> trip;
  trip.reserve(static_cast<std::size_t>(grid.num_elements()) * dpe * dpe);
  for (int e = 0; e < grid.num_elements(); ++e) {
    auto dofs = element_dofs(e);
    for (int b = 0; b < dpe; ++b)
      for (int a = 0; a < dpe; ++a) trip.emplace_back(dofs[a], dofs[b], 0.0);
  }
  pattern_.resize(n, n);
  pattern_.setFromTriplets(trip.begin(), trip.end());
  pattern_.makeCompressed();
  slots_.resize(trip.size());
  std::size_t k = 0;
  for (int e = 0; e < grid.num_elements(); ++e) {
    auto dofs = element_dofs(e);
    for (int b = 0; b < dpe; ++b)
      for (int a = 0; a < dpe; ++a) slots_[k++] = slot(dofs[a], dofs[b]);
  }
}

std::vector<int> AssemblyPattern::element_dofs(int e) const {
  std::vector<int> dofs;
  dofs.reserve(dofs_per_element_);
  for (int node : grid_->element_nodes(e))
    for (int c = 0; c < dofs_per_node_; ++c) dofs.push_back(dofs_per_node_ * node + c);
  return dofs;
}

int AssemblyPattern::slot(int row, int col) const {
  const int* outer = pattern_.outerIndexPtr();
  const int* inner = pattern_.innerIndexPtr();
  const int* begin = inner + outer[col];
  const int* end = inner + outer[col + 1];
  const int* it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return -1;
  return static_cast<int>(it - inner);
}

void AssemblyPattern::add_element(SparseMatrix& m, int e, double coef, const Eigen::MatrixXd& Ke) const {
  const int dpe = dofs_per_element_;
  double* values = m.valuePtr();
  const int* s = slots_.data() + static_cast<std::size_t>(e) * dpe * dpe;
  const double* k = Ke.data();  // column-major, matches slot order
  for (int i = 0; i < dpe * dpe; ++i) values[s[i]] += coef * k[i];
}

void AssemblyPattern::add_elements(SparseMatrix& m, std::span<const double> coef, const Eigen::MatrixXd& Ke) const {
  for (int e = 0; e < grid_->num_elements(); ++e)
    if (coef[e] != 0.0) add_element(m, e, coef[e], Ke);
}

ConstrainedSolver::ConstrainedSolver(const SparseMatrix& pattern, std::vector<int> fixed_dofs, double residual_tol)
    : fixed_(std::move(fixed_dofs)), tol_(residual_tol) {
  const int n = static_cast<int>(pattern.rows());
  std::sort(fixed_.begin(), fixed_.end());
  fixed_.erase(std::unique(fixed_.begin(), fixed_.end()), fixed_.end());
  free_index_.assign(n, -1);
  std::vector<char> is_fixed(n, 0);
  for (int d : fixed_) is_fixed[d] = 1;
  for (int d = 0; d < n; ++d)
    if (!is_fixed[d]) {
      free_index_[d] = static_cast<int>(free_.size());
      free_.push_back(d);
    }
  const int nf = num_free();
  std::vector<Eigen::Triplet<double, int>> trip;
  for (int col = 0; col < n; ++col) {
    if (free_index_[col] < 0) continue;
    for (SparseMatrix::InnerIterator it(pattern, col); it; ++it)
      if (free_index_[it.row()] >= 0) trip.emplace_back(free_index_[it.row()], free_index_[col], 0.0);
  }
  reduced_.resize(nf, nf);
  reduced_.setFromTriplets(trip.begin(), trip.end());
  reduced_.makeCompressed();

  value_map_.assign(pattern.nonZeros(), -1);
  const int* outer = pattern.outerIndexPtr();
  const int* inner = pattern.innerIndexPtr();
  for (int col = 0; col < n; ++col) {
    const int fc = free_index_[col];
    if (fc < 0) continue;
    for (int k = outer[col]; k < outer[col + 1]; ++k) {
      const int fr = free_index_[inner[k]];
      if (fr < 0) continue;
      const int* rb = reduced_.innerIndexPtr() + reduced_.outerIndexPtr()[fc];
      const int* re = reduced_.innerIndexPtr() + reduced_.outerIndexPtr()[fc + 1];
      const int* pos = std::lower_bound(rb, re, fr);
      value_map_[k] = static_cast<int>(pos - reduced_.innerIndexPtr());
    }
  }
}

void ConstrainedSolver::factorize(const SparseMatrix& full) {
  if (static_cast<std::size_t>(full.nonZeros()) != value_map_.size())
    fail(ErrorKind::dimension, "matrix pattern differs from solver pattern");
  std::fill(reduced_.valuePtr(), reduced_.valuePtr() + reduced_.nonZeros(), 0.0);
  const double* v = full.valuePtr();
  double* r = reduced_.valuePtr();
  for (std::size_t k = 0; k < value_map_.size(); ++k)
    if (value_map_[k] >= 0) r[value_map_[k]] += v[k];
  if (num_free() == 0) return;
  if (!ldlt_) ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>();
  if (!analyzed_) {
    ldlt_->analyzePattern(reduced_);
    analyzed_ = true;
  }
  ldlt_->factorize(reduced_);
  if (ldlt_->info() != Eigen::Success)
    fail(ErrorKind::solver, "sparse factorisation failed (singular system: check supports/boundary conditions)");
  const auto& d = ldlt_->vectorD();
  if (d.size() > 0) {
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(d.minCoeff() > dmax * 1e-14))
      fail(ErrorKind::solver, "system is singular or indefinite (insufficient supports or boundary conditions)");
  }
}

Eigen::VectorXd ConstrainedSolver::solve(const Eigen::VectorXd& b, SolveReport* report) const {
  if (b.size() != num_free()) fail(ErrorKind::dimension, "right-hand side size mismatch");
  SolveReport rep;
  if (num_free() == 0) return Eigen::VectorXd();
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (report) *report = rep;
    return Eigen::VectorXd::Zero(b.size());
  }
  // normwise backward error: a plain ||r||/||b|| floors near cond*eps on high-contrast designs
  double knorm = 0.0;
  for (int c = 0; c < reduced_.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(reduced_, c); it; ++it) s += std::abs(it.value());
    knorm = std::max(knorm, s);
  }
  const double binf = b.lpNorm<Eigen::Infinity>();
  auto backward = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
    return r.lpNorm<Eigen::Infinity>() / (knorm * x.lpNorm<Eigen::Infinity>() + binf);
  };
  Eigen::VectorXd x = ldlt_->solve(b);
  Eigen::VectorXd r = b - reduced_ * x;
  rep.relative_residual = backward(x, r);
  std::vector<double> history{rep.relative_residual};
  while (rep.relative_residual > tol_ && rep.refinements < 4) {
    x += ldlt_->solve(r);
    r = b - reduced_ * x;
    rep.relative_residual = backward(x, r);
    history.push_back(rep.relative_residual);
    ++rep.refinements;
  }
  if (!(rep.relative_residual <= tol_)) {
    std::ostringstream os;
    os << "linear solve did not reach backward error " << tol_ << "; history:";
    for (double h : history) os << ' ' << h;
    fail(ErrorKind::solver, os.str());
  }
  if (report) *report = rep;
  return x;
}

Eigen::VectorXd ConstrainedSolver::gather(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(num_free());
  for (int i = 0; i < num_free(); ++i) out[i] = full[free_[i]];
  return out;
}

Eigen::VectorXd ConstrainedSolver::scatter(const Eigen::VectorXd& free, const Eigen::VectorXd& fill) const {
  Eigen::VectorXd out = fill;
  for (int i = 0; i < num_free(); ++i) out[free_[i]] = free[i];
  return out;
}

}  // namespace softopt
