#include "softopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "softopt/error.hpp"

namespace softopt {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) fail(ErrorKind::io, "cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write '" + tmp + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::io, "write failed for '" + tmp + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::io, "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

std::string design_to_json(const PhysicalDesign& design, const GridSpec& grid, int channels) {
  json j;
  j["format"] = "softopt-design";
  j["version"] = 1;
  json nel = json::array();
  for (int a = 0; a < grid.dim; ++a) nel.push_back(grid.nel[a]);
  j["dim"] = grid.dim;
  j["nel"] = nel;
  j["h_m"] = grid.h;
  j["channels"] = channels;
  j["channel_order"] = {"topology", "select2", "select3"};
  j["field"] = "physical";
  json data = json::array();
  for (int c = 0; c < 3; ++c) data.push_back(std::vector<double>(design.rho[c].data(), design.rho[c].data() + design.rho[c].size()));
  j["data"] = data;
  return j.dump() + "\n";
}

DesignFile parse_design(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::io, std::string("design: invalid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "softopt-design") fail(ErrorKind::io, "design.format: expected 'softopt-design'");
    if (j.value("version", 0) != 1) fail(ErrorKind::io, "design.version: unsupported version");
    DesignFile f;
    f.grid.dim = j.at("dim").get<int>();
    const auto nel = j.at("nel").get<std::vector<int>>();
    if (static_cast<int>(nel.size()) != f.grid.dim) fail(ErrorKind::io, "design.nel: expected one count per axis");
    for (int a = 0; a < f.grid.dim; ++a) f.grid.nel[a] = nel[a];
    f.grid.h = j.at("h_m").get<double>();
    f.channels = j.value("channels", 3);
    long ne = 1;
    for (int a = 0; a < f.grid.dim; ++a) ne *= f.grid.nel[a];
    const auto& data = j.at("data");
    if (!data.is_array() || data.size() != 3) fail(ErrorKind::io, "design.data: expected three channel arrays");
    for (int c = 0; c < 3; ++c) {
      const auto v = data[c].get<std::vector<double>>();
      if (static_cast<long>(v.size()) != ne)
        fail(ErrorKind::dimension, "design.data[" + std::to_string(c) + "]: expected " + std::to_string(ne) + " values");
      f.design.rho[c] = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
      if (f.design.rho[c].minCoeff() < 0.0 || f.design.rho[c].maxCoeff() > 1.0)
        fail(ErrorKind::io, "design.data[" + std::to_string(c) + "]: densities must lie in [0, 1]");
    }
    return f;
  } catch (const json::exception& e) {
    fail(ErrorKind::io, std::string("design: ") + e.what());
  }
}

DesignFile load_design(const std::string& path) { return parse_design(read_file(path)); }

void check_design_fits(const DesignFile& file, const ProblemSpec& problem) {
  std::ostringstream os;
  bool ok = file.grid.dim == problem.grid.dim;
  for (int a = 0; ok && a < problem.grid.dim; ++a) ok = file.grid.nel[a] == problem.grid.nel[a];
  if (!ok) {
    os << "design grid (";
    for (int a = 0; a < file.grid.dim; ++a) os << (a ? "x" : "") << file.grid.nel[a];
    os << ") does not match problem grid (";
    for (int a = 0; a < problem.grid.dim; ++a) os << (a ? "x" : "") << problem.grid.nel[a];
    os << ")";
    fail(ErrorKind::dimension, os.str());
  }
  if (std::abs(file.grid.h - problem.grid.h) > 1e-9 * problem.grid.h)
    fail(ErrorKind::dimension, "design element size does not match the problem grid");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\r\n";
}

const std::vector<std::string> kHistoryColumns{"iter", "f", "g1", "g2", "g3", "change",
                                               "grayness", "u_out", "SE", "E_t"};

std::string history_csv(const std::vector<HistoryRow>& rows) {
  std::string out = csv_row(kHistoryColumns);
  for (const auto& r : rows)
    out += csv_row({std::to_string(r.iter), csv_number(r.f), csv_number(r.g[0]), csv_number(r.g[1]),
                    csv_number(r.g[2]), csv_number(r.change), csv_number(r.grayness), csv_number(r.u_out),
                    csv_number(r.SE), csv_number(r.E_t)});
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_row({"k_out", "u_out", "SE", "W", "E_t"});
  for (const auto& r : rows)
    out += csv_row({csv_number(r.k_out), csv_number(r.u_out), csv_number(r.SE), csv_number(r.W), csv_number(r.E_t)});
  return out;
}

std::string vtk_string(const Grid& grid, const VtkFields& f) {
  std::ostringstream os;
  os << std::setprecision(17);
  const int dim = grid.dim();
  os << "# vtk DataFile Version 3.0\n";
  os << "softopt fields\n";
  os << "ASCII\n";
  os << "DATASET STRUCTURED_POINTS\n";
  os << "DIMENSIONS " << grid.nodes_per_axis(0) << ' ' << grid.nodes_per_axis(1) << ' ' << grid.nodes_per_axis(2)
     << '\n';
  os << "ORIGIN 0 0 0\n";
  os << "SPACING " << grid.h() << ' ' << grid.h() << ' ' << grid.h() << '\n';
  if (f.p || f.u) {
    os << "POINT_DATA " << grid.num_nodes() << '\n';
    if (f.p) {
      os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
      for (int n = 0; n < grid.num_nodes(); ++n) os << (*f.p)[grid.pressure_dof(n)] << '\n';
    }
    if (f.u) {
      os << "VECTORS displacement double\n";
      for (int n = 0; n < grid.num_nodes(); ++n) {
        for (int c = 0; c < 3; ++c) {
          if (c) os << ' ';
          os << (c < dim ? (*f.u)[grid.displacement_dof(n, c)] : 0.0);
        }
        os << '\n';
      }
    }
  }
  if (f.design || f.E) {
    os << "CELL_DATA " << grid.num_elements() << '\n';
    if (f.design) {
      for (int c = 0; c < 3; ++c) {
        os << "SCALARS rho" << c + 1 << " double 1\nLOOKUP_TABLE default\n";
        for (int e = 0; e < grid.num_elements(); ++e) os << f.design->rho[c][e] << '\n';
      }
    }
    if (f.E) {
      os << "SCALARS modulus double 1\nLOOKUP_TABLE default\n";
      for (int e = 0; e < grid.num_elements(); ++e) os << (*f.E)[e] << '\n';
    }
    if (f.design) {
      os << "SCALARS material int 1\nLOOKUP_TABLE default\n";
      for (int e = 0; e < grid.num_elements(); ++e)
        os << dominant_material(f.design->rho[0][e], f.design->rho[1][e], f.design->rho[2][e], f.material_count)
           << '\n';
    }
  }
  return os.str();
}

VtkData parse_vtk(const std::string& text) {
  std::istringstream in(text);
  VtkData d;
  std::string line;
  for (int i = 0; i < 3; ++i)
    if (!std::getline(in, line)) fail(ErrorKind::io, "vtk: truncated header");
  if (line != "ASCII") fail(ErrorKind::io, "vtk: only ASCII files are supported");
  std::map<std::string, std::vector<double>>* section = nullptr;
  long count = 0;
  std::string word;
  while (in >> word) {
    if (word == "DATASET") {
      in >> word;
      if (word != "STRUCTURED_POINTS") fail(ErrorKind::io, "vtk: expected STRUCTURED_POINTS");
    } else if (word == "DIMENSIONS") {
      in >> d.dimensions[0] >> d.dimensions[1] >> d.dimensions[2];
    } else if (word == "SPACING") {
      in >> d.spacing[0] >> d.spacing[1] >> d.spacing[2];
    } else if (word == "ORIGIN") {
      double o;
      in >> o >> o >> o;
    } else if (word == "POINT_DATA") {
      in >> count;
      section = &d.point_data;
    } else if (word == "CELL_DATA") {
      in >> count;
      section = &d.cell_data;
    } else if (word == "SCALARS" || word == "VECTORS") {
      if (!section) fail(ErrorKind::io, "vtk: data array outside a POINT_DATA/CELL_DATA section");
      std::string name, type;
      int comps = word == "VECTORS" ? 3 : 1;
      in >> name >> type;
      if (word == "SCALARS") {
        std::getline(in, line);
        std::istringstream rest(line);
        int c;
        if (rest >> c) comps = c;
        in >> word;
        if (word != "LOOKUP_TABLE") fail(ErrorKind::io, "vtk: expected LOOKUP_TABLE after SCALARS " + name);
        in >> word;
      }
      auto& values = (*section)[name];
      values.resize(static_cast<std::size_t>(count) * comps);
      for (auto& v : values)
        if (!(in >> v)) fail(ErrorKind::io, "vtk: truncated array " + name);
    } else {
      fail(ErrorKind::io, "vtk: unexpected keyword '" + word + "'");
    }
  }
  return d;
}

}  // namespace softopt
