#include "qla/config.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qla {
namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw Error("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(where + "." + key + " has the wrong type");
  }
}

std::array<double, 2> get_center(const json& j, std::array<double, 2> fallback, const std::string& where) {
  if (!j.contains("center")) return fallback;
  const json& c = j.at("center");
  if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
    throw Error(where + ".center must be [x, y]");
  }
  return {c[0].get<double>(), c[1].get<double>()};
}

Profile parse_profile(const json& j, const std::string& where, bool allow_extras) {
  if (!j.is_object()) throw Error(where + " must be an object");
  const std::string type = get_or<std::string>(j, "type", "", where);
  if (type == "homogeneous") {
    if (allow_extras) only_keys(j, where, {"type", "n", "per_axis"});
    else only_keys(j, where, {"type", "n"});
    return Homogeneous{get_or(j, "n", 1.0, where)};
  }
  if (type == "cylinder") {
    if (allow_extras) only_keys(j, where, {"type", "center", "diameter", "n_max", "boundary_width", "per_axis"});
    else only_keys(j, where, {"type", "center", "diameter", "n_max", "boundary_width"});
    const auto c = get_center(j, {256.0, 256.0}, where);
    return Cylinder{c[0], c[1], get_or(j, "diameter", 100.0, where), get_or(j, "n_max", 3.0, where),
                    get_or(j, "boundary_width", 5.0, where)};
  }
  if (type == "cone") {
    if (allow_extras) only_keys(j, where, {"type", "center", "base_diameter", "n_max", "edge_rounding", "per_axis"});
    else only_keys(j, where, {"type", "center", "base_diameter", "n_max", "edge_rounding"});
    const auto c = get_center(j, {256.0, 256.0}, where);
    return Cone{c[0], c[1], get_or(j, "base_diameter", 100.0, where), get_or(j, "n_max", 3.0, where),
                get_or(j, "edge_rounding", 0.0, where)};
  }
  throw Error(where + ".type must be homogeneous, cylinder, cone or raster (got '" + type + "')");
}

json profile_to_json(const Profile& p) {
  if (const auto* h = std::get_if<Homogeneous>(&p)) return {{"type", "homogeneous"}, {"n", h->n}};
  if (const auto* c = std::get_if<Cylinder>(&p)) {
    return {{"type", "cylinder"},
            {"center", {c->center_x, c->center_y}},
            {"diameter", c->diameter},
            {"n_max", c->n_max},
            {"boundary_width", c->boundary_width}};
  }
  const auto& k = std::get<Cone>(p);
  return {{"type", "cone"},
          {"center", {k.center_x, k.center_y}},
          {"base_diameter", k.base_diameter},
          {"n_max", k.n_max},
          {"edge_rounding", k.edge_rounding}};
}

constexpr const char* kAxisKeys[3] = {"n_x", "n_y", "n_z"};

}  // namespace

const char* to_string(Polarization p) { return p == Polarization::Ez_By ? "Ez_By" : "Ey_Bz"; }
const char* to_string(PotentialMode m) {
  return m == PotentialMode::end_only ? "end_only" : "halfway_and_end";
}
const char* to_string(PotentialForm f) { return f == PotentialForm::balanced ? "balanced" : "printed"; }

void RunConfig::validate() const {
  grid.validate();
  if (steps < 0) throw Error("steps must be >= 0");
  if (snapshot_interval < 0) throw Error("snapshot_interval must be >= 0");
  if (!(pulse.width > 0.0)) throw Error("pulse width must be positive");
  if (!std::isfinite(pulse.amplitude) || !std::isfinite(pulse.center_x)) throw Error("pulse values must be finite");
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(root, "config",
            {"grid", "medium", "pulse", "steps", "snapshot_interval", "potential_mode", "potential_form",
             "output_dir", "seed"});
  RunConfig cfg;

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    only_keys(g, "grid", {"nx", "ny", "delta"});
    cfg.grid.nx = get_or(g, "nx", cfg.grid.nx, "grid");
    cfg.grid.ny = get_or(g, "ny", cfg.grid.ny, "grid");
    cfg.grid.delta = get_or(g, "delta", cfg.grid.delta, "grid");
  }

  if (root.contains("medium")) {
    const json& m = root.at("medium");
    if (!m.is_object()) throw Error("medium must be an object");
    if (get_or<std::string>(m, "type", "", "medium") == "raster") {
      only_keys(m, "medium", {"type", "path"});
      const auto p = std::filesystem::path(get_or<std::string>(m, "path", "", "medium"));
      if (p.empty()) throw Error("raster medium needs a path");
      cfg.raster_path = p.is_relative() ? base_dir / p : p;
    } else {
      cfg.medium.profile = parse_profile(m, "medium", true);
      if (m.contains("per_axis")) {
        const json& pa = m.at("per_axis");
        only_keys(pa, "medium.per_axis", {"n_x", "n_y", "n_z"});
        for (int a = 0; a < 3; ++a) {
          if (pa.contains(kAxisKeys[a])) {
            cfg.medium.per_axis[static_cast<std::size_t>(a)] =
                parse_profile(pa.at(kAxisKeys[a]), std::string("medium.per_axis.") + kAxisKeys[a], false);
          }
        }
      }
    }
  }

  if (root.contains("pulse")) {
    const json& p = root.at("pulse");
    only_keys(p, "pulse", {"polarization", "center_x", "width", "amplitude"});
    const std::string pol = get_or<std::string>(p, "polarization", "Ez_By", "pulse");
    if (pol == "Ez_By") cfg.pulse.polarization = Polarization::Ez_By;
    else if (pol == "Ey_Bz") cfg.pulse.polarization = Polarization::Ey_Bz;
    else throw Error("pulse.polarization must be Ez_By or Ey_Bz");
    cfg.pulse.center_x = get_or(p, "center_x", cfg.pulse.center_x, "pulse");
    cfg.pulse.width = get_or(p, "width", cfg.pulse.width, "pulse");
    cfg.pulse.amplitude = get_or(p, "amplitude", cfg.pulse.amplitude, "pulse");
  }

  cfg.steps = get_or(root, "steps", cfg.steps, "config");
  cfg.snapshot_interval = get_or(root, "snapshot_interval", cfg.snapshot_interval, "config");

  const std::string mode = get_or<std::string>(root, "potential_mode", "halfway_and_end", "config");
  if (mode == "halfway_and_end") cfg.potential_mode = PotentialMode::halfway_and_end;
  else if (mode == "end_only") cfg.potential_mode = PotentialMode::end_only;
  else throw Error("potential_mode must be end_only or halfway_and_end");

  const std::string form = get_or<std::string>(root, "potential_form", "balanced", "config");
  if (form == "balanced") cfg.potential_form = PotentialForm::balanced;
  else if (form == "printed") cfg.potential_form = PotentialForm::printed;
  else throw Error("potential_form must be balanced or printed");

  cfg.output_dir = get_or<std::string>(root, "output_dir", cfg.output_dir.string(), "config");
  cfg.seed = get_or(root, "seed", cfg.seed, "config");
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text, path.parent_path());
}

std::string config_to_json(const RunConfig& c) {
  json root;
  root["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}, {"delta", c.grid.delta}};
  if (c.raster_path) {
    root["medium"] = {{"type", "raster"}, {"path", c.raster_path->generic_string()}};
  } else {
    json m = profile_to_json(c.medium.profile);
    json pa = json::object();
    for (int a = 0; a < 3; ++a) {
      if (const auto& p = c.medium.per_axis[static_cast<std::size_t>(a)]) pa[kAxisKeys[a]] = profile_to_json(*p);
    }
    if (!pa.empty()) m["per_axis"] = pa;
    root["medium"] = m;
  }
  root["pulse"] = {{"polarization", to_string(c.pulse.polarization)},
                   {"center_x", c.pulse.center_x},
                   {"width", c.pulse.width},
                   {"amplitude", c.pulse.amplitude}};
  root["steps"] = c.steps;
  root["snapshot_interval"] = c.snapshot_interval;
  root["potential_mode"] = to_string(c.potential_mode);
  root["potential_form"] = to_string(c.potential_form);
  root["output_dir"] = c.output_dir.generic_string();
  root["seed"] = c.seed;
  return root.dump(2);
}

}  // namespace qla
