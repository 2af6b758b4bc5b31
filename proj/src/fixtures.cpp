#include "softopt/fixtures.hpp"

#include <algorithm>

#include "softopt/error.hpp"
#include "softopt/grid.hpp"

namespace softopt {

namespace {

Box box2(double x0, double y0, double x1, double y1) { return {{x0, y0, 0.0}, {x1, y1, 0.0}}; }
Box box3(double x0, double y0, double z0, double x1, double y1, double z1) { return {{x0, y0, z0}, {x1, y1, z1}}; }

BoundaryRegion region(const std::string& name, RegionRole role, const Box& box) {
  BoundaryRegion r;
  r.name = name;
  r.role = role;
  r.box = box;
  return r;
}

BoundaryRegion output(const Box& box, std::array<double, 3> dir, double k_out) {
  auto r = region("output", RegionRole::output, box);
  r.direction = dir;
  r.k_out = k_out;
  return r;
}

BoundaryRegion symmetry(const std::string& name, const Box& box, int axis) {
  auto r = region(name, RegionRole::symmetry, box);
  r.normal_axis = axis;
  return r;
}

// 96 x 24 elements of 0.75 mm: the 72 mm finger envelope. A void channel two
// elements high runs from the clamped edge to mid-length below the centre line.
constexpr double kFingerH = 0.75e-3;
constexpr int kFingerNx = 96, kFingerNy = 24;
constexpr int kChannelRow = 8;  // rows 8-9, below the mid-plane so the tip starts moving down
// Springs in 2-D act per metre of depth: 1 kN/m here is ~15 N/m on a 15 mm deep part.
constexpr double kSpring2d = 1000.0;
constexpr int kChannelLen = 48;

ProblemSpec finger2d() {
  ProblemSpec p;
  p.name = "finger2d";
  p.grid = {2, {kFingerNx, kFingerNy, 1}, kFingerH};
  const double h = kFingerH, L = kFingerNx * h, H = kFingerNy * h;
  const double y0 = kChannelRow * h, y1 = (kChannelRow + 2) * h;
  p.regions.push_back(region("clamp", RegionRole::fixed_support, box2(0, 0, 0, H)));
  p.regions.push_back(region("inlet", RegionRole::pressure_inlet, box2(0, y0, 0, y1)));
  p.regions.push_back(region("drain_top", RegionRole::pressure_drain, box2(0, H, L, H)));
  p.regions.push_back(region("drain_bottom", RegionRole::pressure_drain, box2(0, 0, L, 0)));
  p.regions.push_back(region("drain_tip", RegionRole::pressure_drain, box2(L, 0, L, H)));
  p.regions.push_back(output(box2(L, H / 3, L, 2 * H / 3), {0, -1, 0}, kSpring2d));
  p.passive.push_back({box2(0, y0, kChannelLen * h, y1), ElementTag::passive_void, 0});
  p.filter.r_min = 1.5 * h;
  p.volume_fractions = {0.3, 0.2, 0.2};
  p.output_dir = "out/finger2d";
  return p;
}

// Half of a planar gripper: the jaw axis y = 0 is a symmetry plane, the
// channel enters on it from the left and the jaw tip closes towards it.
ProblemSpec gripper2d() {
  ProblemSpec p;
  p.name = "gripper2d";
  const double h = 1.0e-3;
  const int nx = 64, ny = 32;
  p.grid = {2, {nx, ny, 1}, h};
  const double L = nx * h, H = ny * h;
  p.regions.push_back(region("clamp", RegionRole::fixed_support, box2(0, 8 * h, 0, H)));
  p.regions.push_back(symmetry("axis", box2(0, 0, L, 0), 1));
  p.regions.push_back(region("inlet", RegionRole::pressure_inlet, box2(0, 0, 0, 2 * h)));
  p.regions.push_back(region("drain_top", RegionRole::pressure_drain, box2(0, H, L, H)));
  p.regions.push_back(region("drain_tip", RegionRole::pressure_drain, box2(L, 0, L, H)));
  p.regions.push_back(output(box2(L, 2 * H / 3, L, H), {0, -1, 0}, kSpring2d));
  p.passive.push_back({box2(0, 0, 24 * h, 2 * h), ElementTag::passive_void, 0});
  p.filter.r_min = 1.5 * h;
  p.volume_fractions = {0.3, 0.2, 0.2};
  p.output_dir = "out/gripper2d";
  return p;
}

// Quarter of a gripper finger with symmetry planes y = 0 and z = 0.
ProblemSpec gripper3d() {
  ProblemSpec p;
  p.name = "gripper3d";
  const double h = 1.0e-3;
  const int nx = 24, ny = 12, nz = 12;
  p.grid = {3, {nx, ny, nz}, h};
  const double L = nx * h, W = ny * h, D = nz * h;
  p.regions.push_back(region("clamp", RegionRole::fixed_support, box3(0, 0, 0, 0, W, D)));
  p.regions.push_back(symmetry("sym_y", box3(0, 0, 0, L, 0, D), 1));
  p.regions.push_back(symmetry("sym_z", box3(0, 0, 0, L, W, 0), 2));
  p.regions.push_back(region("inlet", RegionRole::pressure_inlet, box3(0, 0, 0, 0, 2 * h, 2 * h)));
  p.regions.push_back(region("drain_y", RegionRole::pressure_drain, box3(0, W, 0, L, W, D)));
  p.regions.push_back(region("drain_z", RegionRole::pressure_drain, box3(0, 0, D, L, W, D)));
  p.regions.push_back(region("drain_tip", RegionRole::pressure_drain, box3(L, 0, 0, L, W, D)));
  p.regions.push_back(output(box3(L, 2 * W / 3, 0, L, W, D), {0, -1, 0}, 10.0));
  p.passive.push_back({box3(0, 0, 0, 8 * h, 2 * h, 2 * h), ElementTag::passive_void, 0});
  p.filter.r_min = 2.5 * h;
  p.volume_fractions = {0.3, 0.2, 0.2};
  p.output_dir = "out/gripper3d";
  return p;
}

// Same envelope and boundary layout as finger2d, single material, used to
// evaluate the hand-designed seven-chamber actuator.
constexpr int kPneuBase = 4;     // strain-limiting rows 0-3
constexpr int kPneuChannel = 2;  // feed channel rows 4-5
constexpr int kPneuTop = 2;      // top wall rows 22-23
constexpr int kPneuWall = 2;     // 1.5 mm walls
constexpr int kPneuChamber = 10;
constexpr int kPneuChambers = 7;

ProblemSpec pneunet2d() {
  ProblemSpec p;
  p.name = "pneunet2d";
  p.grid = {2, {kFingerNx, kFingerNy, 1}, kFingerH};
  const double h = kFingerH, L = kFingerNx * h, H = kFingerNy * h;
  const double y0 = kPneuBase * h, y1 = (kPneuBase + kPneuChannel) * h;
  p.regions.push_back(region("clamp", RegionRole::fixed_support, box2(0, 0, 0, H)));
  p.regions.push_back(region("inlet", RegionRole::pressure_inlet, box2(0, y0, 0, y1)));
  p.regions.push_back(region("drain_top", RegionRole::pressure_drain, box2(0, H, L, H)));
  p.regions.push_back(region("drain_bottom", RegionRole::pressure_drain, box2(0, 0, L, 0)));
  p.regions.push_back(region("drain_tip", RegionRole::pressure_drain, box2(L, 0, L, H)));
  p.regions.push_back(output(box2(L, H / 3, L, 2 * H / 3), {0, -1, 0}, kSpring2d));
  p.materials.E = {1.0e6};
  p.filter.r_min = 1.5 * h;
  p.volume_fractions = {0.6};
  p.output_dir = "out/pneunet2d";
  return p;
}

PhysicalDesign pneunet2d_design() {
  const int nx = kFingerNx, ny = kFingerNy;
  PhysicalDesign d = PhysicalDesign::uniform(nx * ny, 1.0, 0.0, 0.0);
  auto set_void = [&](int i, int j) { d.rho[0][i + nx * j] = 0.0; };
  const int first = kPneuWall;
  const int last = first + kPneuChambers * kPneuChamber + (kPneuChambers - 1) * kPneuWall;  // exclusive
  for (int i = 0; i < last; ++i)
    for (int j = kPneuBase; j < kPneuBase + kPneuChannel; ++j) set_void(i, j);
  for (int c = 0; c < kPneuChambers; ++c) {
    const int i0 = first + c * (kPneuChamber + kPneuWall);
    for (int i = i0; i < i0 + kPneuChamber; ++i)
      for (int j = kPneuBase; j < ny - kPneuTop; ++j) set_void(i, j);
  }
  return d;
}

}  // namespace

std::vector<std::string> fixture_names() { return {"finger2d", "gripper2d", "gripper3d", "pneunet2d"}; }

bool is_fixture(const std::string& name) {
  const auto names = fixture_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ProblemSpec fixture(const std::string& name) {
  ProblemSpec p;
  if (name == "finger2d") p = finger2d();
  else if (name == "gripper2d") p = gripper2d();
  else if (name == "gripper3d") p = gripper3d();
  else if (name == "pneunet2d") p = pneunet2d();
  else fail(ErrorKind::config, "unknown fixture '" + name + "' (expected finger2d|gripper2d|gripper3d|pneunet2d)");
  p.validate();
  return p;
}

bool has_fixture_design(const std::string& name) { return name == "pneunet2d"; }

PhysicalDesign fixture_design(const std::string& name) {
  if (name != "pneunet2d") fail(ErrorKind::config, "fixture '" + name + "' has no built-in design");
  return pneunet2d_design();
}

}  // namespace softopt
