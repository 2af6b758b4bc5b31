#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace softopt {

/// Uniform structured grid: `dim` axes, `nel[a]` elements along axis a,
/// square/cubic elements of edge `h` metres. Unused axes have nel = 1.
struct GridSpec {
  int dim = 2;
  std::array<int, 3> nel{1, 1, 1};
  double h = 1.0;
};

enum class RegionRole { pressure_inlet, pressure_drain, fixed_support, output, symmetry };

const char* to_string(RegionRole role);
RegionRole region_role_from_string(const std::string& s);

/// Axis-aligned box in physical coordinates (metres); inclusive.
struct Box {
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> hi{0, 0, 0};
};

struct BoundaryRegion {
  std::string name;
  RegionRole role = RegionRole::pressure_inlet;
  Box box;
  // output only
  std::array<double, 3> direction{0, 0, 0};
  double k_out = 0.0;  // N/m
  // symmetry only: axis normal to the symmetry plane
  int normal_axis = -1;
};

/// An element face: local index 2*axis for the low side, 2*axis+1 for the high side.
struct Face {
  int element = 0;
  int local = 0;
  friend bool operator==(const Face&, const Face&) = default;
};

struct Selection {
  std::vector<int> nodes;
  std::vector<Face> faces;  // faces lying on the domain boundary
};

class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  double h() const { return spec_.h; }
  int nel(int axis) const { return spec_.nel[axis]; }
  int nodes_per_axis(int axis) const { return axis < spec_.dim ? spec_.nel[axis] + 1 : 1; }

  int num_elements() const { return num_elements_; }
  int num_nodes() const { return num_nodes_; }
  int nodes_per_element() const { return 1 << spec_.dim; }
  int faces_per_element() const { return 2 * spec_.dim; }

  int pressure_dof(int node) const { return node; }
  int displacement_dof(int node, int comp) const { return spec_.dim * node + comp; }
  int num_pressure_dofs() const { return num_nodes_; }
  int num_displacement_dofs() const { return spec_.dim * num_nodes_; }

  int node_index(int i, int j, int k = 0) const;
  int element_index(int i, int j, int k = 0) const;
  std::array<int, 3> node_ijk(int node) const;
  std::array<int, 3> element_ijk(int element) const;

  std::array<double, 3> node_coord(int node) const;
  std::array<double, 3> element_centroid(int element) const;
  double element_volume() const { return volume_; }
  std::array<double, 3> extent() const;

  /// Local node a sits at offset bit d of a along axis d (lexicographic).
  std::span<const int> element_nodes(int element) const;

  /// Face-adjacent element across `local` face, or -1 on the domain boundary.
  int face_neighbor(int element, int local) const;
  bool is_boundary_face(int element, int local) const { return face_neighbor(element, local) < 0; }
  /// Global node ids of an element face.
  std::vector<int> face_nodes(int element, int local) const;

 private:
  GridSpec spec_;
  int num_elements_ = 0;
  int num_nodes_ = 0;
  double volume_ = 0.0;
  std::vector<int> connectivity_;
};

/// Nodes and boundary faces inside the region box (tolerance h*1e-6).
/// Throws ErrorKind::config naming the region when the selection is empty.
Selection select_region(const Grid& grid, const BoundaryRegion& region);

/// Row-compressed symmetric filter neighbourhoods with cone weights
/// w_ij = max(0, r_min - |c_i - c_j|).
struct Neighborhoods {
  std::vector<int> offsets;  // size num_elements + 1
  std::vector<int> index;
  std::vector<double> weight;
  std::vector<double> row_sum;
  double r_min = 0.0;

  int size() const { return static_cast<int>(row_sum.size()); }
  int count(int i) const { return offsets[i + 1] - offsets[i]; }
};

Neighborhoods filter_neighborhoods(const Grid& grid, double r_min);

enum class ElementTag : std::uint8_t { design, passive_solid, passive_void };

struct DomainMask {
  std::vector<ElementTag> tag;
  std::vector<int> material;  // 1-based material index for passive_solid, 0 otherwise

  static DomainMask all_design(int num_elements);
  int num_design() const;
  std::vector<int> design_elements() const;
};

}  // namespace softopt
