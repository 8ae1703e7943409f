#include "delam/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "delam/error.hpp"

namespace delam {

#ifndef DELAM_VERSION_STRING
#define DELAM_VERSION_STRING "0.0.0"
#endif

std::string_view version_string() { return DELAM_VERSION_STRING; }

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Slider: return "slider";
    case RunMode::Mesh2D: return "mesh2d";
    case RunMode::Sweep: return "sweep";
    case RunMode::Adaptive: return "adaptive";
    case RunMode::Oracle: return "oracle";
  }
  return "?";
}

RunMode parse_run_mode(std::string_view name) {
  for (RunMode m : {RunMode::Slider, RunMode::Mesh2D, RunMode::Sweep, RunMode::Adaptive, RunMode::Oracle}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument(fmt::format("unknown mode '{}' (expected slider, mesh2d, sweep, adaptive or oracle)", name));
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"geometry", {"layout", "length", "height", "contact_length", "nx", "ny"}},
      {"material", {"young", "poisson", "chi", "plane_stress"}},
      {"adhesive", {"k_n", "k_t", "alpha"}},
      {"loading", {"v_D", "T", "body_force", "surface_force"}},
      {"numerics", {"tau", "qp_tol", "qp_max_changes", "energy_tol"}},
      {"driver", {"chi0", "tau0", "chi_final", "gate_C", "gamma", "max_tau_halvings", "sweep_chi", "sweep_tau",
                  "threads"}},
      {"output", {"directory", "snapshot_stride"}},
  };
  return s;
}

class Reader {
 public:
  Reader(YAML::Node root, std::string source) : root_(std::move(root)), source_(std::move(source)) {}

  std::string where(const YAML::Node& n) const {
    const YAML::Mark m = n.Mark();
    if (m.is_null() || m.line < 0) return source_ + " (override)";
    return fmt::format("{}:{}:{}", source_, m.line + 1, m.column + 1);
  }
  std::string where_key(const std::string& block, const std::string& key) const {
    const YAML::Node b = root_[block];
    if (b && b.IsMap() && b[key]) return where(b[key]);
    if (b) return where(b);
    return source_;
  }
  void fail(const std::string& location, const std::string& msg) { errors_.push_back(location + ": " + msg); }

  void check_structure() {
    if (!root_ || root_.IsNull()) return;
    if (!root_.IsMap()) {
      fail(where(root_), "top level must be a mapping of blocks");
      return;
    }
    for (const auto& kv : root_) {
      const auto name = kv.first.as<std::string>();
      if (name == "mode") continue;
      const auto it = schema().find(name);
      if (it == schema().end()) {
        fail(where(kv.first), fmt::format("unknown key '{}'", name));
        continue;
      }
      if (!kv.second.IsMap()) {
        fail(where(kv.second), fmt::format("block '{}' must be a mapping", name));
        continue;
      }
      for (const auto& entry : kv.second) {
        const auto key = entry.first.as<std::string>();
        if (!it->second.contains(key)) fail(where(entry.first), fmt::format("unknown key '{}.{}'", name, key));
      }
    }
  }

  YAML::Node node(const std::string& block, const std::string& key) const {
    if (!root_ || !root_.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
    const YAML::Node b = root_[block];
    if (!b || !b.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
    return b[key];
  }

  template <class T>
  void get(const std::string& block, const std::string& key, T& out, bool required) {
    const YAML::Node n = node(block, key);
    if (!n) {
      if (required) missing_.push_back(block + "." + key);
      return;
    }
    convert(n, block + "." + key, out);
  }

  void get_mode(RunMode& out, bool& present) {
    present = false;
    if (!root_ || !root_.IsMap() || !root_["mode"]) {
      missing_.push_back("mode");
      return;
    }
    std::string s;
    convert(root_["mode"], "mode", s);
    try {
      out = parse_run_mode(s);
      present = true;
    } catch (const std::invalid_argument& e) {
      fail(where(root_["mode"]), e.what());
    }
  }

  void check(bool ok, const std::string& block, const std::string& key, const std::string& msg) {
    if (!ok) fail(where_key(block, key), fmt::format("{}.{}: {}", block, key, msg));
  }

  void finish() {
    if (!missing_.empty()) {
      std::string list;
      for (const auto& m : missing_) list += (list.empty() ? "" : ", ") + m;
      errors_.insert(errors_.begin(), fmt::format("{}: missing required keys: {}", source_, list));
    }
    if (!errors_.empty()) {
      std::string msg;
      for (const auto& e : errors_) msg += (msg.empty() ? "" : "\n") + e;
      throw ConfigError(msg);
    }
  }

  const YAML::Node& root() const { return root_; }

 private:
  void type_error(const YAML::Node& n, const std::string& key, const char* expected) {
    fail(where(n), fmt::format("{}: expected {}", key, expected));
  }

  void convert(const YAML::Node& n, const std::string& key, double& out) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "");
      out = n.as<double>();
    } catch (const YAML::Exception&) {
      type_error(n, key, "a real number");
    }
  }
  void convert(const YAML::Node& n, const std::string& key, int& out) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "");
      out = n.as<int>();
    } catch (const YAML::Exception&) {
      type_error(n, key, "an integer");
    }
  }
  void convert(const YAML::Node& n, const std::string& key, unsigned& out) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "");
      out = n.as<unsigned>();
    } catch (const YAML::Exception&) {
      type_error(n, key, "a nonnegative integer");
    }
  }
  void convert(const YAML::Node& n, const std::string& key, bool& out) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "");
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      type_error(n, key, "true or false");
    }
  }
  void convert(const YAML::Node& n, const std::string& key, std::string& out) {
    if (!n.IsScalar()) {
      type_error(n, key, "a string");
      return;
    }
    out = n.as<std::string>();
  }
  void convert(const YAML::Node& n, const std::string& key, Vec2& out) {
    try {
      if (!n.IsSequence() || n.size() != 2) throw YAML::Exception(n.Mark(), "");
      out = Vec2(n[0].as<double>(), n[1].as<double>());
    } catch (const YAML::Exception&) {
      type_error(n, key, "a pair [x, y] of real numbers");
    }
  }
  void convert(const YAML::Node& n, const std::string& key, std::vector<double>& out) {
    try {
      if (!n.IsSequence()) throw YAML::Exception(n.Mark(), "");
      out.clear();
      for (const auto& v : n) out.push_back(v.as<double>());
    } catch (const YAML::Exception&) {
      type_error(n, key, "a list of real numbers");
    }
  }

  YAML::Node root_;
  std::string source_;
  std::vector<std::string> errors_;
  std::vector<std::string> missing_;
};

void apply_override(YAML::Node& root, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(fmt::format("--override '{}': expected key=value", item));
  }
  const std::string key = item.substr(0, eq);
  const std::string value = item.substr(eq + 1);
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("--override '{}': {}", item, e.msg));
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    root[key] = parsed;
    return;
  }
  const std::string block = key.substr(0, dot);
  const std::string field = key.substr(dot + 1);
  if (field.find('.') != std::string::npos) throw ConfigError(fmt::format("--override '{}': key nests too deep", item));
  if (!root[block] || !root[block].IsMap()) root[block] = YAML::Node(YAML::NodeType::Map);
  root[block][field] = parsed;
}

RunConfig read_config(YAML::Node root, const std::string& source, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(root, o);
  Reader r(root, source);
  r.check_structure();

  RunConfig cfg;
  bool have_mode = false;
  r.get_mode(cfg.mode, have_mode);
  const RunMode mode = cfg.mode;
  const bool single = have_mode && (mode == RunMode::Slider || mode == RunMode::Mesh2D || mode == RunMode::Oracle);

  std::string layout;
  r.get("geometry", "layout", layout, true);
  bool have_layout = false;
  if (!layout.empty()) {
    try {
      std::string upper = layout;
      for (char& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
      cfg.geometry.layout = parse_mesh_layout(upper);
      have_layout = true;
    } catch (const std::exception& e) {
      r.fail(r.where_key("geometry", "layout"), e.what());
    }
  }
  r.get("geometry", "length", cfg.geometry.length, true);
  r.get("geometry", "height", cfg.geometry.height, true);
  const bool exp2d = have_layout && cfg.geometry.layout == MeshLayout::Exp2D;
  cfg.geometry.contact_length = cfg.geometry.height;
  r.get("geometry", "contact_length", cfg.geometry.contact_length, exp2d);
  r.get("geometry", "nx", cfg.geometry.nx, true);
  r.get("geometry", "ny", cfg.geometry.ny, true);

  r.get("material", "young", cfg.material.young, true);
  r.get("material", "poisson", cfg.material.poisson, true);
  r.get("material", "chi", cfg.material.chi, single);
  r.get("material", "plane_stress", cfg.material.plane_stress, false);

  r.get("adhesive", "k_n", cfg.adhesive.k_n, true);
  r.get("adhesive", "k_t", cfg.adhesive.k_t, true);
  r.get("adhesive", "alpha", cfg.adhesive.alpha, true);

  r.get("loading", "v_D", cfg.loading.dirichlet_velocity, true);
  r.get("loading", "T", cfg.loading.horizon, true);
  r.get("loading", "body_force", cfg.loading.body_force, false);
  r.get("loading", "surface_force", cfg.loading.surface_force, false);

  r.get("numerics", "tau", cfg.numerics.tau, single);
  r.get("numerics", "qp_tol", cfg.numerics.qp_tol, false);
  r.get("numerics", "qp_max_changes", cfg.numerics.qp_max_changes, false);
  r.get("numerics", "energy_tol", cfg.numerics.energy_tol, false);

  const bool adaptive = have_mode && mode == RunMode::Adaptive;
  const bool sweep = have_mode && mode == RunMode::Sweep;
  r.get("driver", "chi0", cfg.driver.adaptive.chi0, adaptive);
  r.get("driver", "tau0", cfg.driver.adaptive.tau0, adaptive);
  r.get("driver", "chi_final", cfg.driver.adaptive.chi_final, adaptive);
  r.get("driver", "gate_C", cfg.driver.adaptive.gate_C, false);
  r.get("driver", "gamma", cfg.driver.adaptive.gamma, false);
  r.get("driver", "max_tau_halvings", cfg.driver.adaptive.max_tau_halvings, false);
  r.get("driver", "sweep_chi", cfg.driver.sweep_chi, sweep);
  r.get("driver", "sweep_tau", cfg.driver.sweep_tau, sweep);
  r.get("driver", "threads", cfg.driver.threads, false);

  r.get("output", "directory", cfg.output.directory, false);
  r.get("output", "snapshot_stride", cfg.output.snapshot_stride, false);

  // Constraints.
  const auto& g = cfg.geometry;
  r.check(g.length > 0.0, "geometry", "length", "must be > 0");
  r.check(g.height > 0.0, "geometry", "height", "must be > 0");
  r.check(g.nx >= 1, "geometry", "nx", "must be >= 1");
  r.check(g.ny >= 1, "geometry", "ny", "must be >= 1");
  if (have_layout && cfg.geometry.layout == MeshLayout::Slider) {
    r.check(g.contact_length == g.height, "geometry", "contact_length", "must equal height for the slider layout");
  }
  if (exp2d) {
    r.check(g.contact_length > 0.0 && g.contact_length < g.length, "geometry", "contact_length",
            "must lie in (0, length)");
    r.check(g.nx >= 2, "geometry", "nx", "must be >= 2 for the exp2d layout");
  }
  r.check(cfg.material.young > 0.0, "material", "young", "must be > 0");
  r.check(cfg.material.poisson >= 0.0 && cfg.material.poisson < 0.5, "material", "poisson", "must lie in [0, 0.5)");
  r.check(cfg.material.chi >= 0.0, "material", "chi", "must be >= 0");
  r.check(cfg.adhesive.k_n > 0.0, "adhesive", "k_n", "must be > 0");
  r.check(cfg.adhesive.k_t > 0.0, "adhesive", "k_t", "must be > 0");
  r.check(cfg.adhesive.alpha > 0.0, "adhesive", "alpha", "must be > 0");
  r.check(cfg.loading.horizon >= 0.0, "loading", "T", "must be >= 0");
  r.check(!single || cfg.numerics.tau > 0.0, "numerics", "tau", "must be > 0");
  r.check(cfg.numerics.tau >= 0.0, "numerics", "tau", "must be >= 0");
  r.check(cfg.numerics.qp_tol > 0.0, "numerics", "qp_tol", "must be > 0");
  r.check(cfg.numerics.qp_max_changes >= 1, "numerics", "qp_max_changes", "must be >= 1");
  r.check(cfg.numerics.energy_tol > 0.0, "numerics", "energy_tol", "must be > 0");
  const auto& d = cfg.driver.adaptive;
  if (adaptive) {
    r.check(d.chi0 > 0.0, "driver", "chi0", "must be > 0");
    r.check(d.tau0 > 0.0, "driver", "tau0", "must be > 0");
    r.check(d.chi_final > 0.0, "driver", "chi_final", "must be > 0");
  }
  r.check(d.gate_C >= 0.0, "driver", "gate_C", "must be >= 0 (0 calibrates from a pilot run)");
  r.check(d.gamma > 0.0, "driver", "gamma", "must be > 0");
  r.check(d.max_tau_halvings >= 0, "driver", "max_tau_halvings", "must be >= 0");
  if (sweep) {
    r.check(!cfg.driver.sweep_chi.empty(), "driver", "sweep_chi", "must be nonempty");
    r.check(!cfg.driver.sweep_tau.empty(), "driver", "sweep_tau", "must be nonempty");
    for (double c : cfg.driver.sweep_chi) r.check(c >= 0.0, "driver", "sweep_chi", "entries must be >= 0");
    for (double t : cfg.driver.sweep_tau) r.check(t > 0.0, "driver", "sweep_tau", "entries must be > 0");
  }
  r.check(cfg.output.snapshot_stride >= 0, "output", "snapshot_stride", "must be >= 0");
  r.check(!cfg.output.directory.empty(), "output", "directory", "must be nonempty");
  if (have_mode && have_layout) {
    const bool lay_slider = cfg.geometry.layout == MeshLayout::Slider;
    if (mode == RunMode::Slider && !lay_slider) r.fail(r.where_key("geometry", "layout"), "mode slider needs layout slider");
    if (mode == RunMode::Mesh2D && lay_slider) r.fail(r.where_key("geometry", "layout"), "mode mesh2d needs layout exp2d");
    if (mode == RunMode::Oracle && !lay_slider) r.fail(r.where_key("geometry", "layout"), "mode oracle needs layout slider");
  }
  r.finish();
  return cfg;
}

}  // namespace

RunConfig parse_config_string(std::string_view text, const std::string& source, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(fmt::format("{}:{}:{}: {}", source, e.mark.line + 1, e.mark.column + 1, e.msg));
  }
  return read_config(root, source, overrides);
}

RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("{}: cannot open configuration file", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str(), path.string(), overrides);
}

namespace {

void emit_vec(YAML::Emitter& e, const char* key, const Vec2& v) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << YAML::EndSeq;
}

void emit_list(YAML::Emitter& e, const char* key, const std::vector<double>& v) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double x : v) e << x;
  e << YAML::EndSeq;
}

}  // namespace

std::string emit_config(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "mode" << YAML::Value << std::string(to_string(c.mode));

  e << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  std::string layout(to_string(c.geometry.layout));
  for (char& ch : layout) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  e << YAML::Key << "layout" << YAML::Value << layout;
  e << YAML::Key << "length" << YAML::Value << c.geometry.length;
  e << YAML::Key << "height" << YAML::Value << c.geometry.height;
  e << YAML::Key << "contact_length" << YAML::Value << c.geometry.contact_length;
  e << YAML::Key << "nx" << YAML::Value << c.geometry.nx;
  e << YAML::Key << "ny" << YAML::Value << c.geometry.ny;
  e << YAML::EndMap;

  e << YAML::Key << "material" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "young" << YAML::Value << c.material.young;
  e << YAML::Key << "poisson" << YAML::Value << c.material.poisson;
  e << YAML::Key << "chi" << YAML::Value << c.material.chi;
  e << YAML::Key << "plane_stress" << YAML::Value << c.material.plane_stress;
  e << YAML::EndMap;

  e << YAML::Key << "adhesive" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "k_n" << YAML::Value << c.adhesive.k_n;
  e << YAML::Key << "k_t" << YAML::Value << c.adhesive.k_t;
  e << YAML::Key << "alpha" << YAML::Value << c.adhesive.alpha;
  e << YAML::EndMap;

  e << YAML::Key << "loading" << YAML::Value << YAML::BeginMap;
  emit_vec(e, "v_D", c.loading.dirichlet_velocity);
  e << YAML::Key << "T" << YAML::Value << c.loading.horizon;
  emit_vec(e, "body_force", c.loading.body_force);
  emit_vec(e, "surface_force", c.loading.surface_force);
  e << YAML::EndMap;

  e << YAML::Key << "numerics" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "tau" << YAML::Value << c.numerics.tau;
  e << YAML::Key << "qp_tol" << YAML::Value << c.numerics.qp_tol;
  e << YAML::Key << "qp_max_changes" << YAML::Value << c.numerics.qp_max_changes;
  e << YAML::Key << "energy_tol" << YAML::Value << c.numerics.energy_tol;
  e << YAML::EndMap;

  const auto& d = c.driver.adaptive;
  e << YAML::Key << "driver" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "chi0" << YAML::Value << d.chi0;
  e << YAML::Key << "tau0" << YAML::Value << d.tau0;
  e << YAML::Key << "chi_final" << YAML::Value << d.chi_final;
  e << YAML::Key << "gate_C" << YAML::Value << d.gate_C;
  e << YAML::Key << "gamma" << YAML::Value << d.gamma;
  e << YAML::Key << "max_tau_halvings" << YAML::Value << d.max_tau_halvings;
  emit_list(e, "sweep_chi", c.driver.sweep_chi);
  emit_list(e, "sweep_tau", c.driver.sweep_tau);
  e << YAML::Key << "threads" << YAML::Value << c.driver.threads;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << c.output.directory;
  e << YAML::Key << "snapshot_stride" << YAML::Value << c.output.snapshot_stride;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

ProblemSetup make_problem(const RunConfig& cfg) {
  const auto& g = cfg.geometry;
  ProblemSetup p;
  p.mesh = build_rect_mesh(g.length, g.height, g.contact_length, g.nx, g.ny, g.layout);
  p.material = cfg.material;
  p.adhesive = AdhesiveLaw::uniform(p.mesh.num_contact_edges(), cfg.adhesive.k_n, cfg.adhesive.k_t, cfg.adhesive.alpha);
  p.load = cfg.loading;
  p.qp.tol = cfg.numerics.qp_tol;
  p.qp.max_changes = cfg.numerics.qp_max_changes;
  return p;
}

SliderParams slider_params(const RunConfig& cfg) {
  SliderParams p;
  p.young = cfg.material.young;
  p.length = cfg.geometry.length;
  p.stiffness = cfg.adhesive.k_n;
  p.alpha = cfg.adhesive.alpha;
  p.velocity = cfg.loading.dirichlet_velocity.norm();
  p.chi = cfg.material.chi;
  return p;
}

}  // namespace delam
