#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "softopt/design.hpp"
#include "softopt/grid.hpp"
#include "softopt/optimizer.hpp"
#include "softopt/problem.hpp"

namespace softopt {

std::string read_file(const std::string& path);
/// Writes to a temporary sibling and renames it over `path`; creates parent directories.
void write_file_atomic(const std::string& path, const std::string& content);

/// Design file: JSON header (dims, h, channel order) with the physical
/// densities of all elements, one array per channel.
struct DesignFile {
  GridSpec grid;
  int channels = 3;
  PhysicalDesign design;
};

std::string design_to_json(const PhysicalDesign& design, const GridSpec& grid, int channels);
DesignFile parse_design(const std::string& text);
DesignFile load_design(const std::string& path);
/// Throws ErrorKind::dimension when the design does not fit the problem grid.
void check_design_fits(const DesignFile& file, const ProblemSpec& problem);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_number(double v);
std::string csv_row(const std::vector<std::string>& fields);

extern const std::vector<std::string> kHistoryColumns;
std::string history_csv(const std::vector<HistoryRow>& rows);

struct SweepRow {
  double k_out = 0.0;
  double u_out = 0.0;
  double SE = 0.0;
  double W = 0.0;
  double E_t = 0.0;
};
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct VtkFields {
  const PhysicalDesign* design = nullptr;
  const Eigen::VectorXd* E = nullptr;  // per element
  const Eigen::VectorXd* p = nullptr;  // per node
  const Eigen::VectorXd* u = nullptr;  // per node, dim components
  int material_count = 3;
};

/// Legacy ASCII structured-points file with point data (pressure,
/// displacement) and cell data (rho1-3, modulus, material).
std::string vtk_string(const Grid& grid, const VtkFields& fields);

struct VtkData {
  std::array<int, 3> dimensions{0, 0, 0};
  std::array<double, 3> spacing{0, 0, 0};
  std::map<std::string, std::vector<double>> point_data;
  std::map<std::string, std::vector<double>> cell_data;
};
VtkData parse_vtk(const std::string& text);

}  // namespace softopt
