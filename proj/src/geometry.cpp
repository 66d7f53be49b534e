// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/geometry.hpp"

#include <cmath>

#include "vpshield/errors.hpp"

namespace vpshield {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}
}  // namespace

ShieldGeometry ShieldGeometry::torus(double R, double r0, double tau) {
  if (!(r0 > 0.0 && r0 < R))
    throw ConfigError("torus requires 0 < r0 < R");
  ShieldGeometry g;
  g.kind = Kind::Torus;
  g.R = R;
  g.r0 = r0;
  g.tau = tau;
  g.blend_r1 = r0 + (R - r0) / 8.0;
  g.blend_r2 = r0 + (R - r0) / 4.0;
  return g;
}

ShieldGeometry ShieldGeometry::cylinder(double A, double tau) {
  if (!(A > 0.0)) throw ConfigError("cylinder requires A > 0");
  ShieldGeometry g;
  g.kind = Kind::Cylinder;
  g.A = A;
  g.tau = tau;
  return g;
}

ShieldGeometry ShieldGeometry::half_space(double tau, double L_cut) {
  if (!(L_cut > 0.0)) throw ConfigError("half-space requires L_cut > 0");
  ShieldGeometry g;
  g.kind = Kind::HalfSpace;
  g.tau = tau;
  g.L_cut = L_cut;
  return g;
}

ShieldGeometry ShieldGeometry::none() { return ShieldGeometry{}; }

ToroidalPoint to_toroidal(const Vec3& x, double R) {
  const double rho = std::hypot(x.x, x.y);
  const double dr = rho - R;
  ToroidalPoint p;
  p.r = std::hypot(dr, x.z);
  p.theta = wrap_angle(std::atan2(x.y, x.x));
  if (p.r == 0.0) {
    p.alpha = 0.0;
    p.degenerate = true;
  } else {
    p.alpha = wrap_angle(std::atan2(x.z, dr));
  }
  return p;
}

Vec3 to_cartesian(const ToroidalPoint& p, double R) {
  const double w = R + p.r * std::cos(p.alpha);
  return {w * std::cos(p.theta), w * std::sin(p.theta),
          p.r * std::sin(p.alpha)};
}

ToroidalFrame frame_at(const ToroidalPoint& p) {
  const double ct = std::cos(p.theta);
  const double st = std::sin(p.theta);
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  ToroidalFrame f;
  f.e_r = {ca * ct, ca * st, sa};
  f.e_theta = {-st, ct, 0.0};
  f.e_alpha = {-sa * ct, -sa * st, ca};
  return f;
}

double shield_distance(const Vec3& x, const ShieldGeometry& g) {
  switch (g.kind) {
    case ShieldGeometry::Kind::Torus:
      return to_toroidal(x, g.R).r - g.r0;
    case ShieldGeometry::Kind::Cylinder:
      return std::hypot(x.y, x.z) - g.A;
    case ShieldGeometry::Kind::HalfSpace:
      return -x.x;
    case ShieldGeometry::Kind::None:
      return infinite_distance();
  }
  return infinite_distance();
}

double barrier_distance(const Vec3& x, const ShieldGeometry& g) {
  if (g.kind == ShieldGeometry::Kind::Cylinder)
    return g.A - std::hypot(x.y, x.z);
  return shield_distance(x, g);
}

}  // namespace vpshield
