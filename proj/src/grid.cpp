#include "softopt/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "softopt/error.hpp"

namespace softopt {

const char* to_string(RegionRole role) {
  switch (role) {
    case RegionRole::pressure_inlet: return "pressure_inlet";
    case RegionRole::pressure_drain: return "pressure_drain";
    case RegionRole::fixed_support: return "fixed_support";
    case RegionRole::output: return "output";
    case RegionRole::symmetry: return "symmetry";
  }
  return "unknown";
}

RegionRole region_role_from_string(const std::string& s) {
  for (auto r : {RegionRole::pressure_inlet, RegionRole::pressure_drain, RegionRole::fixed_support,
                 RegionRole::output, RegionRole::symmetry})
    if (s == to_string(r)) return r;
  fail(ErrorKind::config, "unknown region role '" + s + "'");
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  if (spec.dim != 2 && spec.dim != 3) fail(ErrorKind::config, "grid dim must be 2 or 3");
  if (!(spec.h > 0.0) || !std::isfinite(spec.h)) fail(ErrorKind::config, "grid h must be positive");
  for (int a = 0; a < 3; ++a) {
    if (a >= spec.dim) spec_.nel[a] = 1;
    if (spec_.nel[a] < 1) fail(ErrorKind::config, "grid element counts must be >= 1");
  }
  std::int64_t ne = 1, nn = 1;
  for (int a = 0; a < spec.dim; ++a) {
    ne *= spec_.nel[a];
    nn *= spec_.nel[a] + 1;
  }
  const std::int64_t limit = std::numeric_limits<int>::max() / 8;
  if (nn * spec.dim > limit || ne * (1 << spec.dim) > limit)
    fail(ErrorKind::size, "grid too large: degree-of-freedom index space overflows");
  num_elements_ = static_cast<int>(ne);
  num_nodes_ = static_cast<int>(nn);
  volume_ = std::pow(spec.h, spec.dim);

  const int npe = nodes_per_element();
  connectivity_.resize(static_cast<std::size_t>(num_elements_) * npe);
  for (int e = 0; e < num_elements_; ++e) {
    auto ijk = element_ijk(e);
    for (int a = 0; a < npe; ++a) {
      connectivity_[static_cast<std::size_t>(e) * npe + a] =
          node_index(ijk[0] + (a & 1), ijk[1] + ((a >> 1) & 1), ijk[2] + ((a >> 2) & 1));
    }
  }
}

int Grid::node_index(int i, int j, int k) const {
  return i + nodes_per_axis(0) * (j + nodes_per_axis(1) * k);
}

int Grid::element_index(int i, int j, int k) const {
  return i + spec_.nel[0] * (j + spec_.nel[1] * k);
}

std::array<int, 3> Grid::node_ijk(int node) const {
  const int nx = nodes_per_axis(0), ny = nodes_per_axis(1);
  return {node % nx, (node / nx) % ny, node / (nx * ny)};
}

std::array<int, 3> Grid::element_ijk(int element) const {
  const int nx = spec_.nel[0], ny = spec_.nel[1];
  return {element % nx, (element / nx) % ny, element / (nx * ny)};
}

std::array<double, 3> Grid::node_coord(int node) const {
  auto ijk = node_ijk(node);
  return {ijk[0] * spec_.h, ijk[1] * spec_.h, ijk[2] * spec_.h};
}

std::array<double, 3> Grid::element_centroid(int element) const {
  auto ijk = element_ijk(element);
  std::array<double, 3> c{};
  for (int a = 0; a < 3; ++a) c[a] = a < spec_.dim ? (ijk[a] + 0.5) * spec_.h : 0.0;
  return c;
}

std::array<double, 3> Grid::extent() const {
  std::array<double, 3> e{};
  for (int a = 0; a < 3; ++a) e[a] = a < spec_.dim ? spec_.nel[a] * spec_.h : 0.0;
  return e;
}

std::span<const int> Grid::element_nodes(int element) const {
  const int npe = nodes_per_element();
  return {connectivity_.data() + static_cast<std::size_t>(element) * npe,
          static_cast<std::size_t>(npe)};
}

int Grid::face_neighbor(int element, int local) const {
  auto ijk = element_ijk(element);
  const int axis = local / 2;
  const int step = (local % 2) ? 1 : -1;
  ijk[axis] += step;
  if (ijk[axis] < 0 || ijk[axis] >= spec_.nel[axis]) return -1;
  return element_index(ijk[0], ijk[1], ijk[2]);
}

std::vector<int> Grid::face_nodes(int element, int local) const {
  const int axis = local / 2;
  const int side = local % 2;
  auto nodes = element_nodes(element);
  std::vector<int> out;
  for (int a = 0; a < nodes_per_element(); ++a)
    if (((a >> axis) & 1) == side) out.push_back(nodes[a]);
  return out;
}

namespace {

bool in_box(const std::array<double, 3>& x, const Box& box, int dim, double tol) {
  for (int a = 0; a < dim; ++a)
    if (x[a] < box.lo[a] - tol || x[a] > box.hi[a] + tol) return false;
  return true;
}

}  // namespace

Selection select_region(const Grid& grid, const BoundaryRegion& region) {
  const double tol = grid.h() * 1e-6;
  Selection sel;
  std::vector<char> inside(grid.num_nodes(), 0);
  for (int n = 0; n < grid.num_nodes(); ++n) {
    if (in_box(grid.node_coord(n), region.box, grid.dim(), tol)) {
      inside[n] = 1;
      sel.nodes.push_back(n);
    }
  }
  if (sel.nodes.empty())
    fail(ErrorKind::config, "region '" + region.name + "' (" + to_string(region.role) +
                                ") selects no nodes");
  for (int e = 0; e < grid.num_elements(); ++e) {
    for (int f = 0; f < grid.faces_per_element(); ++f) {
      if (!grid.is_boundary_face(e, f)) continue;
      auto fn = grid.face_nodes(e, f);
      if (std::all_of(fn.begin(), fn.end(), [&](int n) { return inside[n] != 0; }))
        sel.faces.push_back({e, f});
    }
  }
  return sel;
}

Neighborhoods filter_neighborhoods(const Grid& grid, double r_min) {
  if (!(r_min > 0.0)) fail(ErrorKind::config, "filter radius must be positive");
  Neighborhoods nb;
  nb.r_min = r_min;
  const int reach = static_cast<int>(std::ceil(r_min / grid.h()));
  const int ne = grid.num_elements();
  nb.offsets.reserve(ne + 1);
  nb.offsets.push_back(0);
  nb.row_sum.assign(ne, 0.0);
  const std::array<int, 3> lim{grid.nel(0), grid.nel(1), grid.nel(2)};
  for (int e = 0; e < ne; ++e) {
    auto ijk = grid.element_ijk(e);
    const auto ci = grid.element_centroid(e);
    const int rz = grid.dim() == 3 ? reach : 0;
    for (int k = std::max(0, ijk[2] - rz); k <= std::min(lim[2] - 1, ijk[2] + rz); ++k)
      for (int j = std::max(0, ijk[1] - reach); j <= std::min(lim[1] - 1, ijk[1] + reach); ++j)
        for (int i = std::max(0, ijk[0] - reach); i <= std::min(lim[0] - 1, ijk[0] + reach); ++i) {
          const int o = grid.element_index(i, j, k);
          const auto cj = grid.element_centroid(o);
          double d2 = 0.0;
          for (int a = 0; a < 3; ++a) d2 += (ci[a] - cj[a]) * (ci[a] - cj[a]);
          const double w = r_min - std::sqrt(d2);
          if (w > 0.0) {
            nb.index.push_back(o);
            nb.weight.push_back(w);
            nb.row_sum[e] += w;
          }
        }
    nb.offsets.push_back(static_cast<int>(nb.index.size()));
  }
  return nb;
}

DomainMask DomainMask::all_design(int num_elements) {
  DomainMask m;
  m.tag.assign(num_elements, ElementTag::design);
  m.material.assign(num_elements, 0);
  return m;
}

int DomainMask::num_design() const {
  return static_cast<int>(std::count(tag.begin(), tag.end(), ElementTag::design));
}

std::vector<int> DomainMask::design_elements() const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(tag.size()); ++e)
    if (tag[e] == ElementTag::design) out.push_back(e);
  return out;
}

}  // namespace softopt
