// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vpshield/errors.hpp"

namespace vpshield {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + v);
  }
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& item : split_list(v))
    if (!item.empty()) out.push_back(to_double(key, item));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean for '" + key + "': " + v);
}

Scenario parse_scenario(const std::string& v) {
  if (v == "torus_two_sign") return Scenario::TorusTwoSign;
  if (v == "torus_same_sign") return Scenario::TorusSameSign;
  if (v == "cylinder") return Scenario::Cylinder;
  if (v == "halfspace") return Scenario::HalfSpace;
  if (v == "single_particle") return Scenario::SingleParticle;
  throw ConfigError("unknown scenario: " + v);
}

void apply_preset(RunConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::TorusTwoSign:
      cfg.geometry_kind = ShieldGeometry::Kind::Torus;
      cfg.init.q = 2.7;
      cfg.init.alpha_decay = 3.5;
      cfg.species = {{1.0, 1.0, 500}, {-1.0, 1.0, 500}};
      break;
    case Scenario::TorusSameSign:
      cfg.geometry_kind = ShieldGeometry::Kind::Torus;
      cfg.init.q = 2.9;
      cfg.init.alpha_decay = 2.8;
      cfg.species = {{1.0, 1.0, 500}, {0.5, 1.0, 500}};
      break;
    case Scenario::Cylinder:
      cfg.geometry_kind = ShieldGeometry::Kind::Cylinder;
      cfg.tau = 2.0;
      cfg.init.q = 2.0;
      cfg.init.alpha_decay = 3.5;
      cfg.init.d0 = 0.1;
      cfg.init.R_dom = 20.0;
      cfg.species = {{1.0, 1.0, 500}};
      break;
    case Scenario::HalfSpace:
      cfg.geometry_kind = ShieldGeometry::Kind::HalfSpace;
      cfg.tau = 2.0;
      cfg.init.q = 2.0;
      cfg.init.alpha_decay = 3.5;
      cfg.init.d0 = 0.1;
      cfg.init.R_dom = 20.0;
      cfg.species = {{1.0, 1.0, 500}};
      break;
    case Scenario::SingleParticle:
      cfg.geometry_kind = ShieldGeometry::Kind::Torus;
      cfg.species = {{1.0, 1.0, 1}};
      cfg.q_radii.clear();
      break;
  }
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::TorusTwoSign: return "torus_two_sign";
    case Scenario::TorusSameSign: return "torus_same_sign";
    case Scenario::Cylinder: return "cylinder";
    case Scenario::HalfSpace: return "halfspace";
    case Scenario::SingleParticle: return "single_particle";
  }
  return "?";
}

ShieldGeometry RunConfig::make_geometry() const {
  switch (geometry_kind) {
    case ShieldGeometry::Kind::Torus:
      return ShieldGeometry::torus(R, r0, tau);
    case ShieldGeometry::Kind::Cylinder:
      return ShieldGeometry::cylinder(A, tau);
    case ShieldGeometry::Kind::HalfSpace:
      return ShieldGeometry::half_space(tau, L_cut);
    case ShieldGeometry::Kind::None:
      return ShieldGeometry::none();
  }
  return ShieldGeometry::none();
}

RunConfig parse_config(const std::string& text) {
  // first pass: collect (section, key, value) and locate the scenario
  struct Entry {
    std::string section, key, value;
  };
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got: " + s);
    entries.push_back({section, trim(s.substr(0, eq)), trim(s.substr(eq + 1))});
  }

  RunConfig cfg;
  bool have_scenario = false;
  for (const Entry& e : entries) {
    if (e.section == "run" && e.key == "scenario") {
      cfg.scenario = parse_scenario(e.value);
      have_scenario = true;
    }
  }
  if (!have_scenario) throw ConfigError("missing [run] scenario");
  apply_preset(cfg);

  std::vector<double> sigmas, weights, counts;
  for (const Entry& e : entries) {
    const std::string id = e.section + "." + e.key;
    if (id == "run.scenario") {
      // already handled
    } else if (id == "run.T") {
      cfg.T = to_double(id, e.value);
    } else if (id == "run.seed") {
      cfg.seed = static_cast<std::uint64_t>(to_double(id, e.value));
    } else if (id == "run.workers") {
      cfg.workers = static_cast<unsigned>(to_double(id, e.value));
    } else if (id == "run.out_dir") {
      cfg.out_dir = e.value;
    } else if (id == "run.allow_hypothesis_violation") {
      cfg.allow_hypothesis_violation = to_bool(id, e.value);
    } else if (id == "geometry.kind") {
      if (e.value == "torus") cfg.geometry_kind = ShieldGeometry::Kind::Torus;
      else if (e.value == "cylinder")
        cfg.geometry_kind = ShieldGeometry::Kind::Cylinder;
      else if (e.value == "halfspace")
        cfg.geometry_kind = ShieldGeometry::Kind::HalfSpace;
      else if (e.value == "none")
        cfg.geometry_kind = ShieldGeometry::Kind::None;
      else
        throw ConfigError("unknown geometry kind: " + e.value);
    } else if (id == "geometry.R") {
      cfg.R = to_double(id, e.value);
    } else if (id == "geometry.r0") {
      cfg.r0 = to_double(id, e.value);
    } else if (id == "geometry.tau") {
      cfg.tau = to_double(id, e.value);
    } else if (id == "geometry.A") {
      cfg.A = to_double(id, e.value);
    } else if (id == "geometry.L_cut") {
      cfg.L_cut = to_double(id, e.value);
    } else if (id == "initial.lambda") {
      cfg.init.lambda = to_double(id, e.value);
    } else if (id == "initial.q") {
      cfg.init.q = to_double(id, e.value);
    } else if (id == "initial.alpha") {
      cfg.init.alpha_decay = to_double(id, e.value);
    } else if (id == "initial.C0") {
      cfg.init.C0 = to_double(id, e.value);
    } else if (id == "initial.d0") {
      cfg.init.d0 = to_double(id, e.value);
    } else if (id == "initial.N_cut") {
      cfg.init.N_cut = to_double(id, e.value);
    } else if (id == "initial.R_dom") {
      cfg.init.R_dom = to_double(id, e.value);
    } else if (id == "initial.x_core") {
      cfg.init.x_core = to_double(id, e.value);
    } else if (id == "initial.spatial_mode") {
      if (e.value == "power_law") cfg.init.spatial_mode = SpatialMode::PowerLaw;
      else if (e.value == "cell_bounded")
        cfg.init.spatial_mode = SpatialMode::CellBounded;
      else
        throw ConfigError("unknown spatial_mode: " + e.value);
    } else if (id == "species.sigmas") {
      sigmas = to_doubles(id, e.value);
    } else if (id == "species.weights") {
      weights = to_doubles(id, e.value);
    } else if (id == "species.counts") {
      counts = to_doubles(id, e.value);
    } else if (id == "field.epsilon") {
      cfg.epsilon = e.value == "auto" ? -1.0 : to_double(id, e.value);
    } else if (id == "step.dt_macro") {
      cfg.step.dt_macro = to_double(id, e.value);
    } else if (id == "step.c_rot") {
      cfg.step.c_rot = to_double(id, e.value);
    } else if (id == "step.c_dist") {
      cfg.step.c_dist = to_double(id, e.value);
    } else if (id == "step.freeze_E") {
      cfg.step.freeze_E = to_bool(id, e.value);
    } else if (id == "step.dt_floor") {
      cfg.step.dt_floor = to_double(id, e.value);
    } else if (id == "output.snapshot_times") {
      cfg.snapshot_times = to_doubles(id, e.value);
    } else if (id == "output.q_radii") {
      cfg.q_radii = to_doubles(id, e.value);
    } else if (id == "output.n_tracers") {
      cfg.n_tracers = static_cast<std::size_t>(to_double(id, e.value));
    } else if (id == "output.diag_window") {
      cfg.diag_window = to_double(id, e.value);
    } else if (id == "convergence.ladder") {
      cfg.ladder = to_doubles(id, e.value);
    } else if (id == "particle.x") {
      const auto v = to_doubles(id, e.value);
      if (v.size() != 3) throw ConfigError("particle.x needs 3 components");
      cfg.particle_x = {v[0], v[1], v[2]};
    } else if (id == "particle.v") {
      const auto v = to_doubles(id, e.value);
      if (v.size() != 3) throw ConfigError("particle.v needs 3 components");
      cfg.particle_v = {v[0], v[1], v[2]};
    } else {
      throw ConfigError("unknown configuration key: [" + e.section + "] " +
                        e.key);
    }
  }

  if (!sigmas.empty() || !weights.empty() || !counts.empty()) {
    if (sigmas.empty() || counts.empty())
      throw ConfigError("species override needs both sigmas and counts");
    if (weights.empty()) weights.assign(sigmas.size(), 1.0);
    if (sigmas.size() != counts.size() || sigmas.size() != weights.size())
      throw ConfigError("species lists must have matching lengths");
    cfg.species.clear();
    for (std::size_t i = 0; i < sigmas.size(); ++i)
      cfg.species.push_back(
          {sigmas[i], weights[i], static_cast<std::size_t>(counts[i])});
  }

  validate(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const RunConfig& cfg) {
  const bool lax = cfg.allow_hypothesis_violation;

  if (cfg.geometry_kind == ShieldGeometry::Kind::Torus &&
      !(cfg.r0 > 0.0 && cfg.r0 < cfg.R))
    throw ConfigError("torus geometry requires 0 < r0 < R");
  if (cfg.geometry_kind == ShieldGeometry::Kind::Cylinder && !(cfg.A > 0.0))
    throw ConfigError("cylinder geometry requires A > 0");

  if (!lax) {
    if (cfg.geometry_kind == ShieldGeometry::Kind::Torus && !(cfg.tau > 3.5))
      throw ConfigError(
          "field profile requires tau > 7/2 (got tau = " +
          std::to_string(cfg.tau) + ")");
    if ((cfg.geometry_kind == ShieldGeometry::Kind::Cylinder ||
         cfg.geometry_kind == ShieldGeometry::Kind::HalfSpace) &&
        !(cfg.tau > 0.0))
      throw ConfigError("straight-field-line shields require tau > 0");

    const double q = cfg.init.q;
    const double alpha = cfg.init.alpha_decay;
    switch (cfg.scenario) {
      case Scenario::TorusTwoSign:
        if (!(q > 18.0 / 7.0))
          throw ConfigError(
              "Theorem 1 requires q > 18/7 (got q = " + std::to_string(q) +
              ")");
        if (!(alpha > 3.0))
          throw ConfigError("Theorem 1 requires alpha > 3 (got alpha = " +
                            std::to_string(alpha) + ")");
        break;
      case Scenario::TorusSameSign: {
        if (!(alpha > 8.0 / 3.0 && alpha <= 3.0))
          throw ConfigError(
              "Theorem 2 requires 8/3 < alpha <= 3 (got alpha = " +
              std::to_string(alpha) + ")");
        const double bound = 45.0 / 7.0 - (9.0 / 7.0) * alpha;
        if (!(q > bound))
          throw ConfigError("Theorem 2 requires q > 45/7 - (9/7)*alpha = " +
                            std::to_string(bound) + " (got q = " +
                            std::to_string(q) + ")");
        bool pos = false, neg = false;
        for (const Species& s : cfg.species)
          (s.sigma > 0 ? pos : neg) = true;
        if (pos && neg)
          throw ConfigError(
              "Theorem 2 requires all species charges of the same sign");
        break;
      }
      case Scenario::Cylinder:
      case Scenario::HalfSpace:
        if (!(q >= 2.0))
          throw ConfigError(
              "straight-field-line scenarios require at least gaussian "
              "velocity decay, q >= 2");
        break;
      case Scenario::SingleParticle:
        break;
    }
    if (cfg.scenario != Scenario::SingleParticle) {
      if (!(cfg.init.d0 > 0.0))
        throw ConfigError("initial data requires standoff d0 > 0");
      if (!(cfg.init.N_cut > 0.0))
        throw ConfigError("partial dynamics requires N_cut > 0");
      if (cfg.geometry_kind == ShieldGeometry::Kind::Torus &&
          !(cfg.init.R_dom >= 10.0 * cfg.R))
        throw ConfigError("domain truncation requires R_dom >= 10 R");
    }
  }

  if (!(cfg.step.dt_macro > 0.0)) throw ConfigError("dt_macro must be > 0");
  if (!(cfg.T >= 0.0)) throw ConfigError("T must be >= 0");
  if (!(cfg.init.x_core > 0.0)) throw ConfigError("x_core must be > 0");
  for (const Species& s : cfg.species) {
    if (s.sigma == 0.0) throw ConfigError("species sigma must be nonzero");
    if (!(s.weight > 0.0))
      throw ConfigError("species weight must be positive");
  }
}

std::string render_manifest_body(const RunConfig& cfg) {
  std::ostringstream out;
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  const auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + num(v[i]);
    return s;
  };
  out << "scenario = " << to_string(cfg.scenario) << "\n";
  out << "geometry.kind = "
      << (cfg.geometry_kind == ShieldGeometry::Kind::Torus       ? "torus"
          : cfg.geometry_kind == ShieldGeometry::Kind::Cylinder  ? "cylinder"
          : cfg.geometry_kind == ShieldGeometry::Kind::HalfSpace ? "halfspace"
                                                                 : "none")
      << "\n";
  out << "geometry.R = " << num(cfg.R) << "\n";
  out << "geometry.r0 = " << num(cfg.r0) << "\n";
  out << "geometry.tau = " << num(cfg.tau) << "\n";
  out << "geometry.A = " << num(cfg.A) << "\n";
  out << "geometry.L_cut = " << num(cfg.L_cut) << "\n";
  out << "initial.lambda = " << num(cfg.init.lambda) << "\n";
  out << "initial.q = " << num(cfg.init.q) << "\n";
  out << "initial.alpha = " << num(cfg.init.alpha_decay) << "\n";
  out << "initial.C0 = " << num(cfg.init.C0) << "\n";
  out << "initial.d0 = " << num(cfg.init.d0) << "\n";
  out << "initial.N_cut = " << num(cfg.init.N_cut) << "\n";
  out << "initial.R_dom = " << num(cfg.init.R_dom) << "\n";
  out << "initial.x_core = " << num(cfg.init.x_core) << "\n";
  out << "initial.spatial_mode = "
      << (cfg.init.spatial_mode == SpatialMode::PowerLaw ? "power_law"
                                                         : "cell_bounded")
      << "\n";
  {
    std::string sg, wt, ct;
    for (std::size_t i = 0; i < cfg.species.size(); ++i) {
      sg += (i ? "," : "") + num(cfg.species[i].sigma);
      wt += (i ? "," : "") + num(cfg.species[i].weight);
      ct += (i ? "," : "") + std::to_string(cfg.species[i].count);
    }
    out << "species.sigmas = " << sg << "\n";
    out << "species.weights = " << wt << "\n";
    out << "species.counts = " << ct << "\n";
  }
  out << "particle.x = " << num(cfg.particle_x.x) << ","
      << num(cfg.particle_x.y) << "," << num(cfg.particle_x.z) << "\n";
  out << "particle.v = " << num(cfg.particle_v.x) << ","
      << num(cfg.particle_v.y) << "," << num(cfg.particle_v.z) << "\n";
  out << "field.epsilon = "
      << (cfg.epsilon < 0.0 ? std::string("auto") : num(cfg.epsilon)) << "\n";
  out << "step.dt_macro = " << num(cfg.step.dt_macro) << "\n";
  out << "step.c_rot = " << num(cfg.step.c_rot) << "\n";
  out << "step.c_dist = " << num(cfg.step.c_dist) << "\n";
  out << "step.freeze_E = " << (cfg.step.freeze_E ? "true" : "false") << "\n";
  out << "step.dt_floor = " << num(cfg.step.dt_floor) << "\n";
  out << "run.T = " << num(cfg.T) << "\n";
  out << "run.seed = " << cfg.seed << "\n";
  out << "run.workers = " << cfg.workers << "\n";
  out << "run.out_dir = " << cfg.out_dir << "\n";
  out << "run.allow_hypothesis_violation = "
      << (cfg.allow_hypothesis_violation ? "true" : "false") << "\n";
  out << "output.snapshot_times = " << list(cfg.snapshot_times) << "\n";
  out << "output.q_radii = " << list(cfg.q_radii) << "\n";
  out << "output.n_tracers = " << cfg.n_tracers << "\n";
  out << "output.diag_window = " << num(cfg.diag_window) << "\n";
  out << "convergence.ladder = " << list(cfg.ladder) << "\n";
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string body = render_manifest_body(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : body) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace vpshield
