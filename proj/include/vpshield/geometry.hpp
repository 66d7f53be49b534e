// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>

#include "vpshield/vec3.hpp"

namespace vpshield {

/// Point in toroidal coordinates relative to a torus of major radius R:
/// minor-radial distance r >= 0, toroidal angle theta, poloidal angle alpha,
/// both normalized into [0, 2*pi).
struct ToroidalPoint {
  double r = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  /// Set when r == 0, where alpha is undefined and reported as 0.
  bool degenerate = false;
};

/// Local orthonormal frame (e_r, e_theta, e_alpha) at a toroidal point.
/// Right-handed: e_r = e_theta x e_alpha.
struct ToroidalFrame {
  Vec3 e_r;
  Vec3 e_theta;
  Vec3 e_alpha;
};

/// Shield geometry: the region barred to the plasma together with the
/// parameters of its singular field profile.
struct ShieldGeometry {
  enum class Kind { Torus, Cylinder, HalfSpace, None };

  Kind kind = Kind::None;

  // Torus: major radius R, minor radius r0, singularity exponent tau.
  double R = 0.0;
  double r0 = 0.0;
  double tau = 0.0;
  // Torus field cutoff band.
  double blend_r1 = 0.0;
  double blend_r2 = 0.0;

  // Cylinder: radius A.
  double A = 0.0;

  // Half-space: field cutoff length.
  double L_cut = 1.0;

  static ShieldGeometry torus(double R, double r0, double tau);
  static ShieldGeometry cylinder(double A, double tau);
  static ShieldGeometry half_space(double tau, double L_cut = 1.0);
  static ShieldGeometry none();
};

/// Inverse toroidal chart: r = sqrt((rho-R)^2 + x3^2) with
/// rho = sqrt(x1^2+x2^2), theta the planar angle of (x1,x2), alpha the
/// planar angle of (rho-R, x3). At r == 0 alpha is undefined; the point
/// is flagged degenerate and alpha set to 0.
ToroidalPoint to_toroidal(const Vec3& x, double R);

/// x1 = (R + r cos a) cos t, x2 = (R + r cos a) sin t, x3 = r sin a.
Vec3 to_cartesian(const ToroidalPoint& p, double R);

ToroidalFrame frame_at(const ToroidalPoint& p);

/// Signed distance to the shielded region, positive outside:
/// torus r - r0, cylinder sqrt(x2^2+x3^2) - A, half-space -x1,
/// none +infinity.
double shield_distance(const Vec3& x, const ShieldGeometry& g);

/// Distance from the singular surface measured on the side where the
/// field formulas live and the plasma evolves. Equals shield_distance
/// for the torus and the half-space; for the cylinder the singular
/// profile of the field is defined on the inside, so the sign flips.
double barrier_distance(const Vec3& x, const ShieldGeometry& g);

inline double infinite_distance() {
  return std::numeric_limits<double>::infinity();
}

}  // namespace vpshield
