#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "helpers.hpp"
#include "softopt/error.hpp"
#include "softopt/io.hpp"

using namespace softopt;
using Eigen::VectorXd;

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_row({"a", "b,c"}) == "a,\"b,c\"\r\n");
  CHECK(std::stod(csv_number(0.1)) == 0.1);
  CHECK(std::stod(csv_number(-1.234567890123456789e-7)) == -1.234567890123456789e-7);
}

TEST_CASE("history csv layout") {
  CHECK(kHistoryColumns == std::vector<std::string>{"iter", "f", "g1", "g2", "g3", "change", "grayness", "u_out", "SE", "E_t"});
  HistoryRow r;
  r.iter = 3;
  r.f = -2.5;
  const auto csv = history_csv({r, r});
  CHECK(csv.rfind("iter,f,g1,g2,g3,change,grayness,u_out,SE,E_t\r\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("\r\n3,-2.5,") != std::string::npos);
  const auto sweep = sweep_csv({{0.1, 1, 2, 3, 4}});
  CHECK(sweep.rfind("k_out,u_out,SE,W,E_t\r\n", 0) == 0);
  CHECK(sweep.substr(sweep.size() - 10) == ",1,2,3,4\r\n");
}

TEST_CASE("design round trip") {
  GridSpec gs{2, {5, 3, 1}, 0.002};
  const auto d = testing::random_design(15, 8, 0.0, 1.0);
  const auto f = parse_design(design_to_json(d, gs, 3));
  CHECK(f.grid.nel == gs.nel);
  CHECK(f.grid.h == gs.h);
  CHECK(f.channels == 3);
  for (int k = 0; k < 3; ++k) CHECK(f.design.rho[k] == d.rho[k]);

  auto problem = testing::small_problem(5, 3);
  problem.grid.h = 0.002;
  check_design_fits(f, problem);
  problem.grid.nel = {3, 5, 1};
  try {
    check_design_fits(f, problem);
    FAIL("expected dimension error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::dimension);
  }
  CHECK_THROWS_AS(parse_design("{\"format\":\"other\"}"), Error);
}

TEST_CASE("atomic writes create directories") {
  const auto dir = std::filesystem::temp_directory_path() / "softopt_io_test";
  std::filesystem::remove_all(dir);
  const auto path = (dir / "a" / "b.txt").string();
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  CHECK(read_file(path) == "two");
  CHECK(std::distance(std::filesystem::directory_iterator(dir / "a"), {}) == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(read_file((dir / "missing").string()), Error);
}

TEST_CASE("vtk export") {
  Grid g({3, {2, 2, 2}, 0.5});
  auto d = PhysicalDesign::uniform(8, 0.2, 0.0, 0.0);
  d.set_element(3, {1.0, 1.0, 0.0});
  d.set_element(5, {1.0, 1.0, 1.0});
  VectorXd p(27), u(81), E(8);
  for (int i = 0; i < 27; ++i) p[i] = 5e4 * std::sin(0.3 * i) + 1.0 / 3.0;
  for (int i = 0; i < 81; ++i) u[i] = 1e-5 * i;
  E.setConstant(7.5e5);
  const auto text = vtk_string(g, {&d, &E, &p, &u, 3});
  CHECK(text.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(text.find("DATASET STRUCTURED_POINTS") != std::string::npos);
  CHECK(text.find("DIMENSIONS 3 3 3") != std::string::npos);

  const auto v = parse_vtk(text);
  CHECK(v.dimensions == std::array<int, 3>{3, 3, 3});
  CHECK(v.spacing[0] == 0.5);
  REQUIRE(v.point_data.count("pressure"));
  for (int i = 0; i < 27; ++i) CHECK(std::abs(v.point_data.at("pressure")[i] - p[i]) <= 1e-9 * std::abs(p[i]));
  REQUIRE(v.point_data.count("displacement"));
  CHECK(v.point_data.at("displacement")[3 * 4 + 2] == doctest::Approx(u[14]));
  REQUIRE(v.cell_data.count("material"));
  CHECK(v.cell_data.at("material")[3] == 2);
  CHECK(v.cell_data.at("material")[5] == 3);
  CHECK(v.cell_data.at("material")[0] == 0);
  CHECK(v.cell_data.at("rho1")[3] == 1.0);
  CHECK(v.cell_data.at("modulus")[0] == 7.5e5);

  // 2-D displacement is padded with a zero z component
  Grid g2({2, {1, 1, 1}, 1.0});
  VectorXd u2 = VectorXd::Ones(8);
  const auto v2 = parse_vtk(vtk_string(g2, {nullptr, nullptr, nullptr, &u2, 3}));
  CHECK(v2.dimensions == std::array<int, 3>{2, 2, 1});
  CHECK(v2.point_data.at("displacement").size() == 12);
  CHECK(v2.point_data.at("displacement")[2] == 0.0);
}

TEST_CASE("dominant material") {
  CHECK(dominant_material(1, 1, 0, 3) == 2);
  CHECK(dominant_material(1, 0, 0, 3) == 1);
  CHECK(dominant_material(1, 1, 1, 3) == 3);
  CHECK(dominant_material(0.4, 1, 1, 3) == 0);
  CHECK(dominant_material(0.9, 0.9, 0.9, 1) == 1);
  CHECK(material_pattern(2) == std::array<double, 3>{1, 1, 0});
  CHECK(material_pattern(0) == std::array<double, 3>{0, 0, 0});
}
