// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

#include "vpshield/vec3.hpp"

namespace vpshield {

/// Field evaluated inside or on the singular surface.
class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A particle reached the shielded region. This is the shield-failure
/// detector: the run aborts and the offending state is reported, never
/// silently corrected.
class PenetrationError : public std::runtime_error {
 public:
  PenetrationError(std::size_t particle, double time, const Vec3& x,
                   const Vec3& v)
      : std::runtime_error("particle " + std::to_string(particle) +
                           " penetrated the shielded region at t=" +
                           std::to_string(time)),
        particle_id(particle),
        t(time),
        position(x),
        velocity(v) {}

  std::size_t particle_id;
  double t;
  Vec3 position;
  Vec3 velocity;
};

/// Sub-step size pinned at the floor for too long; the particle is
/// pathologically grazing the singular surface.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(std::size_t particle, double time)
      : std::runtime_error("particle " + std::to_string(particle) +
                           " stalled at the sub-step floor at t=" +
                           std::to_string(time)),
        particle_id(particle),
        t(time) {}

  std::size_t particle_id;
  double t;
};

}  // namespace vpshield
