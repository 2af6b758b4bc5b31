#include "softopt/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "softopt/closure.hpp"
#include "softopt/error.hpp"

namespace softopt {

using nlohmann::json;

const char* to_string(ObjectiveVariant v) {
  return v == ObjectiveVariant::baseline ? "baseline" : "energy_penalty";
}

const char* to_string(ClosureMode m) {
  switch (m) {
    case ClosureMode::none: return "none";
    case ClosureMode::heuristic: return "heuristic";
    case ClosureMode::skin: return "skin";
    case ClosureMode::energy_penalty: return "energy_penalty";
  }
  return "none";
}

ClosureMode closure_mode_from_string(const std::string& s) {
  for (auto m : {ClosureMode::none, ClosureMode::heuristic, ClosureMode::skin, ClosureMode::energy_penalty})
    if (s == to_string(m)) return m;
  fail(ErrorKind::config, "unknown closure mode '" + s + "' (expected none|heuristic|skin|energy_penalty)");
}

double ProblemSpec::volume_fraction_total() const {
  double s = 0.0;
  for (double v : volume_fractions) s += v;
  return s;
}

std::vector<const BoundaryRegion*> ProblemSpec::regions_with(RegionRole role) const {
  std::vector<const BoundaryRegion*> out;
  for (const auto& r : regions)
    if (r.role == role) out.push_back(&r);
  return out;
}

void ProblemSpec::validate() const {
  if (grid.dim != 2 && grid.dim != 3) fail(ErrorKind::config, "grid.dim: must be 2 or 3");
  for (int a = 0; a < grid.dim; ++a)
    if (grid.nel[a] < 1) fail(ErrorKind::config, "grid.nel: counts must be >= 1");
  if (!(grid.h > 0.0)) fail(ErrorKind::config, "grid.h_m: must be positive");
  materials.validate();
  flow.validate();
  if (static_cast<int>(volume_fractions.size()) != materials.count())
    fail(ErrorKind::config, "volume_fractions: need one fraction per material");
  for (double v : volume_fractions)
    if (!(v >= 0.0 && v <= 1.0)) fail(ErrorKind::config, "volume_fractions: each must lie in [0, 1]");
  if (volume_fraction_total() > 1.0 + 1e-12)
    fail(ErrorKind::config, "volume_fractions: sum must not exceed 1");
  if (!(volume_fraction_total() > 0.0)) fail(ErrorKind::config, "volume_fractions: total must be positive");
  if (!(filter.r_min > 0.0)) fail(ErrorKind::config, "filter.r_min_m: must be positive");
  if (!(filter.eta_p > 0.0 && filter.eta_p < 1.0)) fail(ErrorKind::config, "filter.eta_p: must lie in (0, 1)");
  if (!(filter.beta.start >= 1.0) || filter.beta.max < filter.beta.start || filter.beta.interval < 1)
    fail(ErrorKind::config, "filter: require 1 <= beta_start <= beta_max and beta_interval >= 1");
  if (!(objective.n >= 1.0)) fail(ErrorKind::config, "objective.n: must be >= 1");
  if (!(objective.target_magnitude > 0.0)) fail(ErrorKind::config, "objective.target_magnitude: must be positive");
  if (optimizer.max_iters < 0) fail(ErrorKind::config, "optimizer.max_iters: must be >= 0");
  if (!(optimizer.move > 0.0 && optimizer.move <= 0.5)) fail(ErrorKind::config, "optimizer.move: must lie in (0, 0.5]");
  if (!(optimizer.tol > 0.0)) fail(ErrorKind::config, "optimizer.tol: must be positive");
  if (closure.skin_thickness < 1) fail(ErrorKind::config, "closure.skin_thickness: must be >= 1");
  if (closure.skin_material < 1 || closure.skin_material > materials.count())
    fail(ErrorKind::config, "closure.skin_material: out of range");
  if (drainage.automatic && !(drainage.ratio > 0.0 && drainage.ratio < 1.0))
    fail(ErrorKind::config, "flow.drain_ratio: must lie in (0, 1)");

  if (regions_with(RegionRole::pressure_inlet).empty())
    fail(ErrorKind::config, "regions: missing required region with role pressure_inlet");
  if (regions_with(RegionRole::output).size() != 1)
    fail(ErrorKind::config, "regions: exactly one region with role output is required");
  if (regions_with(RegionRole::fixed_support).empty() && regions_with(RegionRole::symmetry).empty())
    fail(ErrorKind::config, "regions: missing required region with role fixed_support");
  for (const auto& r : regions) {
    for (int a = 0; a < grid.dim; ++a)
      if (r.box.lo[a] > r.box.hi[a]) fail(ErrorKind::config, "region '" + r.name + "': box lo exceeds hi");
    if (r.role == RegionRole::output) {
      double n2 = 0.0;
      for (int a = 0; a < grid.dim; ++a) n2 += r.direction[a] * r.direction[a];
      if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
        fail(ErrorKind::config, "region '" + r.name + "': output direction must have unit norm");
      if (!(r.k_out >= 0.0)) fail(ErrorKind::config, "region '" + r.name + "': k_out must be >= 0");
    }
    if (r.role == RegionRole::symmetry && (r.normal_axis < 0 || r.normal_axis >= grid.dim))
      fail(ErrorKind::config, "region '" + r.name + "': symmetry normal_axis out of range");
  }
  for (const auto& b : passive)
    if (b.tag == ElementTag::passive_solid && (b.material < 1 || b.material > materials.count()))
      fail(ErrorKind::config, "passive: solid block material out of range");
}

FlowParams ProblemSpec::resolved_flow() const {
  FlowParams f = flow;
  if (drainage.automatic) {
    const double depth = drainage.depth > 0.0 ? drainage.depth : filter.r_min;
    f.D_s = calibrate_drainage(f.K_s, grid.h, depth, drainage.ratio);
  }
  return f;
}

ObjectiveSpec ProblemSpec::effective_objective() const {
  ObjectiveSpec o = objective;
  if (closure.mode == ClosureMode::energy_penalty) o.variant = ObjectiveVariant::energy_penalty;
  return o;
}

std::vector<int> skin_exempt_faces(const ProblemSpec& problem, const Grid& grid) {
  std::vector<int> exempt;
  auto add = [&](int code) {
    if (std::find(exempt.begin(), exempt.end(), code) == exempt.end()) exempt.push_back(code);
  };
  for (const auto* r : problem.regions_with(RegionRole::pressure_inlet)) {
    const auto sel = select_region(grid, *r);
    for (const auto& f : sel.faces) add(f.local);
    // an inlet narrower than one element face selects nodes only
    for (int axis = 0; axis < grid.dim(); ++axis)
      for (int side = 0; side < 2; ++side) {
        const int plane = side == 0 ? 0 : grid.nel(axis);
        const bool on = std::all_of(sel.nodes.begin(), sel.nodes.end(),
                                    [&](int n) { return grid.node_ijk(n)[axis] == plane; });
        if (on) add(2 * axis + side);
      }
  }
  for (const auto* r : problem.regions_with(RegionRole::symmetry)) {
    const auto sel = select_region(grid, *r);
    for (const auto& f : sel.faces)
      if (f.local / 2 == r->normal_axis) add(f.local);
  }
  std::sort(exempt.begin(), exempt.end());
  return exempt;
}

DomainMask build_domain_mask(const ProblemSpec& problem, const Grid& grid) {
  DomainMask mask = DomainMask::all_design(grid.num_elements());
  const double tol = grid.h() * 1e-6;
  for (const auto& b : problem.passive) {
    for (int e = 0; e < grid.num_elements(); ++e) {
      const auto c = grid.element_centroid(e);
      bool inside = true;
      for (int a = 0; a < grid.dim(); ++a)
        if (c[a] < b.box.lo[a] - tol || c[a] > b.box.hi[a] + tol) inside = false;
      if (!inside) continue;
      mask.tag[e] = b.tag;
      mask.material[e] = b.tag == ElementTag::passive_solid ? b.material : 0;
    }
  }
  if (problem.closure.mode == ClosureMode::skin)
    mask = non_design_skin(mask, grid, problem.closure.skin_thickness, skin_exempt_faces(problem, grid),
                           problem.closure.skin_material);
  if (mask.num_design() == 0) fail(ErrorKind::config, "passive: no design elements remain");
  return mask;
}

// ---------------------------------------------------------------------------
// JSON reading

namespace {

const char* type_name(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return "null";
    case json::value_t::object: return "object";
    case json::value_t::array: return "array";
    case json::value_t::string: return "string";
    case json::value_t::boolean: return "boolean";
    case json::value_t::number_integer:
    case json::value_t::number_unsigned: return "integer";
    case json::value_t::number_float: return "number";
    default: return "value";
  }
}

[[noreturn]] void type_error(const std::string& path, const std::string& expected, const json& got) {
  fail(ErrorKind::config, path + ": expected " + expected + ", got " + type_name(got));
}

class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) type_error(path_, "object", j);
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return path_ + "." + key; }

  const json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) fail(ErrorKind::config, path(key) + ": required key missing");
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return as_number(j_.at(key), path(key));
  }
  double number(const std::string& key) { return as_number(raw(key), path(key)); }

  int integer(const std::string& key, int fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return as_integer(j_.at(key), path(key));
  }
  int integer(const std::string& key) { return as_integer(raw(key), path(key)); }

  std::string string(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) type_error(path(key), "string", v);
    return v.get<std::string>();
  }
  std::string string(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) type_error(path(key), "string", v);
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::size_t min_len, std::size_t max_len) {
    const auto& v = raw(key);
    return as_numbers(v, path(key), min_len, max_len);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail(ErrorKind::config, path(it.key()) + ": unknown key");
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) type_error(path, "number", v);
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ErrorKind::config, path + ": must be finite");
    return d;
  }
  static int as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) type_error(path, "integer", v);
    return v.get<int>();
  }
  static std::vector<double> as_numbers(const json& v, const std::string& path, std::size_t min_len,
                                        std::size_t max_len) {
    if (!v.is_array()) type_error(path, "array of numbers", v);
    if (v.size() < min_len || v.size() > max_len)
      fail(ErrorKind::config, path + ": expected " + std::to_string(min_len) +
                                  (min_len == max_len ? "" : "-" + std::to_string(max_len)) + " entries");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

Box read_box(const json& j, const std::string& path, int dim) {
  ObjectReader r(j, path);
  Box b;
  const auto lo = r.numbers("lo", dim, dim);
  const auto hi = r.numbers("hi", dim, dim);
  for (int a = 0; a < dim; ++a) {
    b.lo[a] = lo[a];
    b.hi[a] = hi[a];
  }
  r.finish();
  return b;
}

json box_json(const Box& b, int dim) {
  json lo = json::array(), hi = json::array();
  for (int a = 0; a < dim; ++a) {
    lo.push_back(b.lo[a]);
    hi.push_back(b.hi[a]);
  }
  return {{"lo", lo}, {"hi", hi}};
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::config, std::string("problem: invalid JSON: ") + e.what());
  }
  ObjectReader r(root, "problem");
  ProblemSpec p;
  const auto format = r.string("format", "softopt-problem");
  if (format != "softopt-problem") fail(ErrorKind::config, "problem.format: expected 'softopt-problem'");
  if (r.integer("version", 1) != 1) fail(ErrorKind::config, "problem.version: unsupported version");
  p.name = r.string("name", p.name);

  {
    ObjectReader g(r.raw("grid"), "problem.grid");
    p.grid.dim = g.integer("dim");
    if (p.grid.dim != 2 && p.grid.dim != 3) fail(ErrorKind::config, "problem.grid.dim: must be 2 or 3");
    const auto nel = g.numbers("nel", p.grid.dim, p.grid.dim);
    for (int a = 0; a < p.grid.dim; ++a) {
      if (nel[a] != std::floor(nel[a]) || nel[a] < 1)
        fail(ErrorKind::config, "problem.grid.nel: expected positive integers");
      p.grid.nel[a] = static_cast<int>(nel[a]);
    }
    p.grid.h = g.number("h_m");
    g.finish();
  }

  {
    const auto& regions = r.raw("regions");
    if (!regions.is_array()) type_error("problem.regions", "array", regions);
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const std::string path = "problem.regions[" + std::to_string(i) + "]";
      ObjectReader rr(regions[i], path);
      BoundaryRegion reg;
      const auto role = rr.string("role");
      try {
        reg.role = region_role_from_string(role);
      } catch (const Error&) {
        fail(ErrorKind::config, path + ".role: expected one of pressure_inlet|pressure_drain|fixed_support|output|symmetry");
      }
      reg.name = rr.string("name", role);
      reg.box = read_box(rr.raw("box_m"), path + ".box_m", p.grid.dim);
      if (reg.role == RegionRole::output) {
        const auto d = rr.numbers("direction", p.grid.dim, p.grid.dim);
        for (int a = 0; a < p.grid.dim; ++a) reg.direction[a] = d[a];
        reg.k_out = rr.number("k_out_N_per_m", 0.0);
      }
      if (reg.role == RegionRole::symmetry) reg.normal_axis = rr.integer("normal_axis");
      rr.finish();
      p.regions.push_back(reg);
    }
  }

  if (r.has("passive")) {
    const auto& blocks = r.raw("passive");
    if (!blocks.is_array()) type_error("problem.passive", "array", blocks);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string path = "problem.passive[" + std::to_string(i) + "]";
      ObjectReader br(blocks[i], path);
      PassiveBlock b;
      const auto kind = br.string("kind");
      if (kind == "void") {
        b.tag = ElementTag::passive_void;
      } else if (kind == "solid") {
        b.tag = ElementTag::passive_solid;
        b.material = br.integer("material", 1);
      } else {
        fail(ErrorKind::config, path + ".kind: expected 'void' or 'solid'");
      }
      b.box = read_box(br.raw("box_m"), path + ".box_m", p.grid.dim);
      br.finish();
      p.passive.push_back(b);
    }
  }

  if (r.has("materials")) {
    ObjectReader m(r.raw("materials"), "problem.materials");
    p.materials.E_min = m.number("E_min_Pa", p.materials.E_min);
    if (m.has("E_Pa")) p.materials.E = m.numbers("E_Pa", 1, 3);
    p.materials.nu = m.number("nu", p.materials.nu);
    p.materials.penalty = m.number("penalty", p.materials.penalty);
    m.finish();
  }

  if (r.has("flow")) {
    ObjectReader f(r.raw("flow"), "problem.flow");
    p.flow.K_v = f.number("K_v", p.flow.K_v);
    p.flow.K_s = f.number("K_s", p.flow.K_s);
    p.flow.beta_k = f.number("beta_k", p.flow.beta_k);
    p.flow.eta_k = f.number("eta_k", p.flow.eta_k);
    p.flow.beta_d = f.number("beta_d", p.flow.beta_d);
    p.flow.eta_d = f.number("eta_d", p.flow.eta_d);
    p.flow.p_atm = f.number("p_atm_Pa", p.flow.p_atm);
    p.flow.P_in = f.number("P_in_Pa", p.flow.P_in);
    if (f.has("D_s")) {
      const auto& v = f.raw("D_s");
      if (v.is_string()) {
        if (v.get<std::string>() != "auto") fail(ErrorKind::config, "problem.flow.D_s: expected number or \"auto\"");
        p.drainage.automatic = true;
      } else {
        p.flow.D_s = ObjectReader::as_number(v, "problem.flow.D_s");
        p.drainage.automatic = false;
      }
    }
    p.drainage.ratio = f.number("drain_ratio", p.drainage.ratio);
    p.drainage.depth = f.number("drain_depth_m", p.drainage.depth);
    f.finish();
  }

  {
    ObjectReader f(r.raw("filter"), "problem.filter");
    p.filter.r_min = f.number("r_min_m");
    p.filter.eta_p = f.number("eta_p", p.filter.eta_p);
    p.filter.beta.start = f.number("beta_start", p.filter.beta.start);
    p.filter.beta.max = f.number("beta_max", p.filter.beta.max);
    p.filter.beta.interval = f.integer("beta_interval", p.filter.beta.interval);
    f.finish();
  }

  if (r.has("volume_fractions")) p.volume_fractions = r.numbers("volume_fractions", 1, 3);
  else p.volume_fractions.resize(p.materials.count());

  if (r.has("objective")) {
    ObjectReader o(r.raw("objective"), "problem.objective");
    const auto variant = o.string("variant", "baseline");
    if (variant == "baseline") p.objective.variant = ObjectiveVariant::baseline;
    else if (variant == "energy_penalty") p.objective.variant = ObjectiveVariant::energy_penalty;
    else fail(ErrorKind::config, "problem.objective.variant: expected 'baseline' or 'energy_penalty'");
    p.objective.n = o.number("n", p.objective.n);
    if (o.has("scale")) {
      const auto& v = o.raw("scale");
      if (v.is_string()) {
        if (v.get<std::string>() != "auto") fail(ErrorKind::config, "problem.objective.scale: expected number or \"auto\"");
        p.objective.scale = 0.0;
      } else {
        p.objective.scale = ObjectReader::as_number(v, "problem.objective.scale");
      }
    }
    p.objective.target_magnitude = o.number("target_magnitude", p.objective.target_magnitude);
    o.finish();
  }

  if (r.has("optimizer")) {
    ObjectReader o(r.raw("optimizer"), "problem.optimizer");
    p.optimizer.max_iters = o.integer("max_iters", p.optimizer.max_iters);
    p.optimizer.move = o.number("move", p.optimizer.move);
    p.optimizer.tol = o.number("tol", p.optimizer.tol);
    p.optimizer.feasibility = o.number("feasibility", p.optimizer.feasibility);
    o.finish();
  }

  if (r.has("closure")) {
    ObjectReader c(r.raw("closure"), "problem.closure");
    p.closure.mode = closure_mode_from_string(c.string("mode", "none"));
    p.closure.skin_thickness = c.integer("skin_thickness", p.closure.skin_thickness);
    p.closure.skin_material = c.integer("skin_material", p.closure.skin_material);
    c.finish();
  }

  if (r.has("output")) {
    ObjectReader o(r.raw("output"), "problem.output");
    p.output_dir = o.string("dir", p.output_dir);
    o.finish();
  }
  r.finish();
  p.validate();
  return p;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string problem_to_json(const ProblemSpec& p) {
  const int dim = p.grid.dim;
  json root;
  root["format"] = "softopt-problem";
  root["version"] = 1;
  root["name"] = p.name;
  json nel = json::array();
  for (int a = 0; a < dim; ++a) nel.push_back(p.grid.nel[a]);
  root["grid"] = {{"dim", dim}, {"nel", nel}, {"h_m", p.grid.h}};
  json regions = json::array();
  for (const auto& r : p.regions) {
    json jr = {{"name", r.name}, {"role", to_string(r.role)}, {"box_m", box_json(r.box, dim)}};
    if (r.role == RegionRole::output) {
      json d = json::array();
      for (int a = 0; a < dim; ++a) d.push_back(r.direction[a]);
      jr["direction"] = d;
      jr["k_out_N_per_m"] = r.k_out;
    }
    if (r.role == RegionRole::symmetry) jr["normal_axis"] = r.normal_axis;
    regions.push_back(jr);
  }
  root["regions"] = regions;
  json passive = json::array();
  for (const auto& b : p.passive) {
    json jb = {{"kind", b.tag == ElementTag::passive_solid ? "solid" : "void"}, {"box_m", box_json(b.box, dim)}};
    if (b.tag == ElementTag::passive_solid) jb["material"] = b.material;
    passive.push_back(jb);
  }
  root["passive"] = passive;
  root["materials"] = {{"E_min_Pa", p.materials.E_min}, {"E_Pa", p.materials.E}, {"nu", p.materials.nu},
                       {"penalty", p.materials.penalty}};
  json flow = {{"K_v", p.flow.K_v},       {"K_s", p.flow.K_s},          {"beta_k", p.flow.beta_k},
               {"eta_k", p.flow.eta_k},   {"beta_d", p.flow.beta_d},    {"eta_d", p.flow.eta_d},
               {"p_atm_Pa", p.flow.p_atm}, {"P_in_Pa", p.flow.P_in}};
  if (p.drainage.automatic) {
    flow["D_s"] = "auto";
    flow["drain_ratio"] = p.drainage.ratio;
    flow["drain_depth_m"] = p.drainage.depth;
  } else {
    flow["D_s"] = p.flow.D_s;
  }
  root["flow"] = flow;
  root["filter"] = {{"r_min_m", p.filter.r_min},
                    {"eta_p", p.filter.eta_p},
                    {"beta_start", p.filter.beta.start},
                    {"beta_max", p.filter.beta.max},
                    {"beta_interval", p.filter.beta.interval}};
  root["volume_fractions"] = p.volume_fractions;
  json obj = {{"variant", to_string(p.objective.variant)}, {"n", p.objective.n},
              {"target_magnitude", p.objective.target_magnitude}};
  if (p.objective.scale > 0.0) obj["scale"] = p.objective.scale;
  else obj["scale"] = "auto";
  root["objective"] = obj;
  root["optimizer"] = {{"max_iters", p.optimizer.max_iters},
                       {"move", p.optimizer.move},
                       {"tol", p.optimizer.tol},
                       {"feasibility", p.optimizer.feasibility}};
  root["closure"] = {{"mode", to_string(p.closure.mode)},
                     {"skin_thickness", p.closure.skin_thickness},
                     {"skin_material", p.closure.skin_material}};
  root["output"] = {{"dir", p.output_dir}};
  return root.dump(2) + "\n";
}

}  // namespace softopt
