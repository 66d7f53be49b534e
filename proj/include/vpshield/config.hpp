// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vpshield/dynamics.hpp"
#include "vpshield/ensemble.hpp"
#include "vpshield/geometry.hpp"

namespace vpshield {

enum class Scenario {
  TorusTwoSign,   ///< bounded-mass, mixed-sign hypotheses
  TorusSameSign,  ///< same-sign, possibly heavy-tailed hypotheses
  Cylinder,       ///< straight field lines, cylindrical wall
  HalfSpace,      ///< straight field lines, planar wall
  SingleParticle  ///< one tracer, no self-field
};

std::string to_string(Scenario s);

/// Fully resolved run configuration. Defaults come from the scenario
/// preset; every value that influenced a run is recorded in its manifest.
struct RunConfig {
  Scenario scenario = Scenario::SingleParticle;

  // geometry
  ShieldGeometry::Kind geometry_kind = ShieldGeometry::Kind::Torus;
  double R = 2.0;
  double r0 = 0.5;
  double tau = 4.0;
  double A = 1.0;
  double L_cut = 1.0;

  InitialData init;
  std::vector<Species> species;

  // single-particle state
  Vec3 particle_x{2.9, 0.0, 0.0};
  Vec3 particle_v{-1.0, 0.0, 0.2};

  // self-field; epsilon < 0 means "auto": half the mean inter-particle
  // spacing of the initial ensemble
  double epsilon = -1.0;

  StepPolicy step;

  double T = 1.0;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string out_dir = "out";
  bool allow_hypothesis_violation = false;

  // outputs
  std::vector<double> snapshot_times;
  std::vector<double> q_radii{2.0, 4.0};
  std::size_t n_tracers = 4;
  double diag_window = 0.1;

  // convergence ladder (pairs (N, 2N) per rung)
  std::vector<double> ladder{4.0, 8.0, 16.0};

  ShieldGeometry make_geometry() const;
};

/// Parse flat-section `key = value` text into a validated config.
/// Unknown sections or keys are hard errors; hypothesis violations name
/// the violated constraint unless allow_hypothesis_violation is set.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Re-validate (used after CLI overrides).
void validate(const RunConfig& cfg);

/// Canonical key = value rendering of every effective setting.
std::string render_manifest_body(const RunConfig& cfg);

/// FNV-1a hash of the canonical rendering, as fixed-width hex.
std::string config_hash(const RunConfig& cfg);

}  // namespace vpshield
