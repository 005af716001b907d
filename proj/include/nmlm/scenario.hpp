#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nmlm/errors.hpp"
#include "nmlm/multilevel.hpp"

namespace nmlm {

enum class ScenarioKind { Couette, Poiseuille };

inline std::string to_string(ScenarioKind k) { return k == ScenarioKind::Couette ? "couette" : "poiseuille"; }

/// Everything needed to reproduce one steady solve.
struct ScenarioConfig {
  std::string name = "couette";
  ScenarioKind kind = ScenarioKind::Couette;
  double length = 1.0;
  int cells = 128;
  int order = 4;
  CollisionSpec collision;
  BoundarySpec left_wall;
  BoundarySpec right_wall;
  Vec3 force{0.0, 0.0, 0.0};
  double rho0 = 1.0;
  Vec3 u0{0.0, 0.0, 0.0};
  double theta0 = 1.0;

  int levels = 1;
  ReductionStrategy strategy = ReductionStrategy::MinusTwo;
  int gamma = 1;
  int s1 = 2;
  int s2 = 2;
  int s3 = 10;
  double cfl = 0.9;
  double tol = 1e-8;
  int max_iters = 200000;

  bool baseline = false;     // also run the 1-level solver for the ratios
  bool write_profile = true;
  bool write_history = true;

  void validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (!(length > 0.0)) fail("length must be positive");
    if (cells < 2) fail("cells must be >= 2");
    if (order < 2 || order > kMaxOrder) fail("order must be in [2, " + std::to_string(kMaxOrder) + "]");
    if (!(collision.nu_law.kn > 0.0)) fail("kn must be positive");
    if (!(collision.prandtl > 0.0)) fail("prandtl must be positive");
    if (!(left_wall.theta_w > 0.0) || !(right_wall.theta_w > 0.0)) fail("wall temperatures must be positive");
    for (const auto* w : {&left_wall, &right_wall})
      if (w->accommodation < 0.0 || w->accommodation > 1.0) fail("accommodation must be in [0, 1]");
    if (!(rho0 > 0.0) || !(theta0 > 0.0)) fail("initial density and temperature must be positive");
    if (levels < 1) fail("levels must be >= 1");
    if (gamma < 1) fail("gamma must be >= 1");
    if (s1 < 0 || s2 < 0 || s3 < 0) fail("smoothing counts must be non-negative");
    if (!(cfl > 0.0 && cfl < 1.0)) fail("cfl must be in (0, 1)");
    if (!(tol > 0.0)) fail("tol must be positive");
    if (max_iters < 0) fail("max_iters must be non-negative");
    if (kind == ScenarioKind::Couette && (force[0] != 0.0 || force[1] != 0.0 || force[2] != 0.0))
      fail("couette scenario takes no external force");
    if (kind == ScenarioKind::Poiseuille)
      for (const auto* w : {&left_wall, &right_wall})
        if (w->u_w[0] != 0.0 || w->u_w[1] != 0.0 || w->u_w[2] != 0.0) fail("poiseuille walls must be at rest");
  }

  Problem problem() const {
    return Problem{Grid1D::uniform(length, cells), left_wall, right_wall, ScenarioSource{force, collision}};
  }

  Field initial_field() const { return Field::uniform(order, cells, rho0, u0, theta0); }

  /// Plan for `lv` levels; fewer levels are used if the strategy runs out of orders.
  CyclePlan plan(int lv) const {
    CyclePlan p;
    p.orders = order_sequence(order, strategy, lv).orders;
    p.gamma = gamma;
    p.s1 = s1;
    p.s2 = s2;
    p.s3 = s3;
    return p;
  }
  CyclePlan plan() const { return plan(levels); }

  SmootherConfig smoother() const { return SmootherConfig{cfl, 30}; }
  SolveOptions solve_options() const { return SolveOptions{tol, max_iters, kTruncatedNormCap}; }
};

inline ScenarioConfig couette_preset() {
  ScenarioConfig c;
  c.name = "couette";
  c.kind = ScenarioKind::Couette;
  c.collision.kind = CollisionKind::ESBGK;
  c.collision.prandtl = 2.0 / 3.0;
  c.collision.nu_law = NuLaw::power_law(0.1199, 0.81);
  c.right_wall.u_w = {0.0, 1.2577, 0.0};
  return c;
}

inline ScenarioConfig poiseuille_preset() {
  ScenarioConfig c;
  c.name = "poiseuille";
  c.kind = ScenarioKind::Poiseuille;
  c.collision.kind = CollisionKind::ESBGK;
  c.collision.prandtl = 2.0 / 3.0;
  c.collision.nu_law = NuLaw::hard_sphere(0.1);
  c.force = {0.0, 0.2555, 0.0};
  return c;
}

inline std::vector<std::string> preset_names() { return {"couette", "poiseuille"}; }

inline ScenarioConfig preset(const std::string& name) {
  if (name == "couette") return couette_preset();
  if (name == "poiseuille") return poiseuille_preset();
  throw ConfigError("unknown preset '" + name + "'");
}

namespace detail {

inline std::string strip_comments(std::istream& in) {
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    out << line << '\n';
  }
  return out.str();
}

inline Vec3 parse_vec3(const std::string& s) {
  std::string t = s;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream is(t);
  Vec3 v{0.0, 0.0, 0.0};
  for (std::size_t d = 0; d < 3; ++d)
    if (!(is >> v[d])) throw ConfigError("expected three numbers, got '" + s + "'");
  std::string rest;
  if (is >> rest) throw ConfigError("expected three numbers, got '" + s + "'");
  return v;
}

template <class T>
T get_or(const boost::property_tree::ptree& pt, const std::string& key, T fallback) {
  const auto v = pt.get_optional<std::string>(key);
  if (!v) return fallback;
  std::istringstream is(*v);
  T out;
  if (!(is >> std::boolalpha >> out)) throw ConfigError("bad value for '" + key + "': '" + *v + "'");
  std::string rest;
  if (is >> rest) throw ConfigError("bad value for '" + key + "': '" + *v + "'");
  return out;
}

inline CollisionKind parse_collision(const std::string& s) {
  if (s == "bgk") return CollisionKind::BGK;
  if (s == "shakhov") return CollisionKind::Shakhov;
  if (s == "esbgk" || s == "es-bgk") return CollisionKind::ESBGK;
  throw ConfigError("unknown collision model '" + s + "'");
}

}  // namespace detail

/// Reads a config. Keys not present keep the preset named by
/// [scenario] kind (couette by default).
inline ScenarioConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream clean(detail::strip_comments(in));
  try {
    pt::read_ini(clean, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  static const std::vector<std::string> known_sections{"scenario", "solver", "output"};
  for (const auto& [section, sub] : tree) {
    if (std::find(known_sections.begin(), known_sections.end(), section) == known_sections.end())
      throw ConfigError("unknown section or key outside a section: '" + section + "'");
    (void)sub;
  }

  const std::string kind = tree.get<std::string>("scenario.kind", "couette");
  ScenarioConfig c = preset(kind);
  c.name = tree.get<std::string>("scenario.name", kind);

  using detail::get_or;
  c.length = get_or(tree, "scenario.length", c.length);
  c.cells = get_or(tree, "scenario.cells", c.cells);
  c.order = get_or(tree, "scenario.order", c.order);
  if (auto s = tree.get_optional<std::string>("scenario.collision")) c.collision.kind = detail::parse_collision(*s);
  c.collision.prandtl = get_or(tree, "scenario.prandtl", c.collision.prandtl);
  if (auto s = tree.get_optional<std::string>("scenario.nu_law")) {
    if (*s == "power") c.collision.nu_law.kind = NuLawKind::PowerLaw;
    else if (*s == "hard_sphere") c.collision.nu_law.kind = NuLawKind::HardSphere;
    else throw ConfigError("unknown nu_law '" + *s + "'");
  }
  c.collision.nu_law.kn = get_or(tree, "scenario.kn", c.collision.nu_law.kn);
  c.collision.nu_law.w = get_or(tree, "scenario.w", c.collision.nu_law.w);
  if (auto s = tree.get_optional<std::string>("scenario.force")) c.force = detail::parse_vec3(*s);
  c.left_wall.theta_w = get_or(tree, "scenario.left_theta", c.left_wall.theta_w);
  c.right_wall.theta_w = get_or(tree, "scenario.right_theta", c.right_wall.theta_w);
  if (auto s = tree.get_optional<std::string>("scenario.left_u")) c.left_wall.u_w = detail::parse_vec3(*s);
  if (auto s = tree.get_optional<std::string>("scenario.right_u")) c.right_wall.u_w = detail::parse_vec3(*s);
  const double chi = get_or(tree, "scenario.accommodation", c.left_wall.accommodation);
  c.left_wall.accommodation = chi;
  c.right_wall.accommodation = chi;
  c.rho0 = get_or(tree, "scenario.rho0", c.rho0);
  if (auto s = tree.get_optional<std::string>("scenario.u0")) c.u0 = detail::parse_vec3(*s);
  c.theta0 = get_or(tree, "scenario.theta0", c.theta0);

  c.levels = get_or(tree, "solver.levels", c.levels);
  if (auto s = tree.get_optional<std::string>("solver.strategy")) {
    try {
      c.strategy = parse_strategy(*s);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  c.gamma = get_or(tree, "solver.gamma", c.gamma);
  c.s1 = get_or(tree, "solver.s1", c.s1);
  c.s2 = get_or(tree, "solver.s2", c.s2);
  c.s3 = get_or(tree, "solver.s3", c.s3);
  c.cfl = get_or(tree, "solver.cfl", c.cfl);
  c.tol = get_or(tree, "solver.tol", c.tol);
  c.max_iters = get_or(tree, "solver.max_iters", c.max_iters);

  c.baseline = get_or(tree, "output.baseline", c.baseline);
  c.write_profile = get_or(tree, "output.profile", c.write_profile);
  c.write_history = get_or(tree, "output.history", c.write_history);

  c.validate();
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace nmlm
