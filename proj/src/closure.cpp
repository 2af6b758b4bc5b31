#include "softopt/closure.hpp"

#include <algorithm>
#include <deque>

#include "softopt/error.hpp"

namespace softopt {

SkinResult heuristic_skin(const PhysicalDesign& design, const Grid& grid, const Eigen::VectorXd& p,
                          double P_in, double p_atm, int material, double threshold) {
  if (p.size() != grid.num_pressure_dofs()) fail(ErrorKind::dimension, "pressure field size mismatch");
  if (design.num_elements() != grid.num_elements()) fail(ErrorKind::dimension, "design size mismatch");
  const double level = p_atm + 0.5 * (P_in - p_atm);
  const auto solid = material_pattern(material);
  SkinResult out{design, {}, 0.0};
  for (int e = 0; e < grid.num_elements(); ++e) {
    if (!(design.rho[0][e] < threshold)) continue;
    double lo = p[grid.pressure_dof(grid.element_nodes(e)[0])], hi = lo;
    for (int n : grid.element_nodes(e)) {
      lo = std::min(lo, p[grid.pressure_dof(n)]);
      hi = std::max(hi, p[grid.pressure_dof(n)]);
    }
    if (lo < level && level <= hi) {
      out.design.set_element(e, solid);
      out.added.push_back(e);
    }
  }
  out.added_fraction = static_cast<double>(out.added.size()) / grid.num_elements();
  return out;
}

DomainMask non_design_skin(const DomainMask& mask, const Grid& grid, int thickness,
                           const std::vector<int>& exempt_faces, int material) {
  if (thickness < 1) fail(ErrorKind::config, "skin thickness must be at least one element");
  DomainMask out = mask;
  for (int e = 0; e < grid.num_elements(); ++e) {
    const auto ijk = grid.element_ijk(e);
    bool in_skin = false;
    for (int axis = 0; axis < grid.dim() && !in_skin; ++axis)
      for (int side = 0; side < 2; ++side) {
        if (std::find(exempt_faces.begin(), exempt_faces.end(), 2 * axis + side) != exempt_faces.end()) continue;
        const int depth = side == 0 ? ijk[axis] : grid.nel(axis) - 1 - ijk[axis];
        if (depth < thickness) {
          in_skin = true;
          break;
        }
      }
    if (in_skin) {
      out.tag[e] = ElementTag::passive_solid;
      out.material[e] = material;
    }
  }
  if (out.num_design() == 0) fail(ErrorKind::config, "skin thickness consumes the entire design domain");
  return out;
}

std::vector<int> adjacent_elements(const std::vector<Face>& faces) {
  std::vector<int> out;
  out.reserve(faces.size());
  for (const auto& f : faces) out.push_back(f.element);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SealReport check_sealed(const Eigen::VectorXd& rho1, const Grid& grid, const std::vector<Face>& inlet_faces,
                        const std::vector<Face>& drain_faces, double threshold) {
  if (rho1.size() != grid.num_elements()) fail(ErrorKind::dimension, "design size mismatch");
  const int ne = grid.num_elements();
  std::vector<char> is_drain(ne, 0);
  for (int e : adjacent_elements(drain_faces)) is_drain[e] = 1;
  std::vector<int> pred(ne, -2);  // -2 unvisited, -1 seed
  std::deque<int> queue;
  for (int e : adjacent_elements(inlet_faces))
    if (rho1[e] < threshold) {
      pred[e] = -1;
      queue.push_back(e);
    }
  SealReport report;
  while (!queue.empty()) {
    const int e = queue.front();
    queue.pop_front();
    if (is_drain[e]) {
      report.sealed = false;
      for (int cur = e; cur >= 0; cur = pred[cur]) report.leak_path.push_back(cur);
      std::reverse(report.leak_path.begin(), report.leak_path.end());
      return report;
    }
    for (int f = 0; f < grid.faces_per_element(); ++f) {
      const int nb = grid.face_neighbor(e, f);
      if (nb < 0 || pred[nb] != -2 || !(rho1[nb] < threshold)) continue;
      pred[nb] = e;
      queue.push_back(nb);
    }
  }
  return report;
}

}  // namespace softopt
