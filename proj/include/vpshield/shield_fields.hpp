// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vpshield/geometry.hpp"
#include "vpshield/vec3.hpp"

namespace vpshield {

/// Radial profile of the singular torus field: pure power (r-r0)^(-tau)
/// on (r0, r1], blended smoothly to zero on (r1, r2), identically zero
/// beyond r2.
struct FieldProfile {
  double tau = 0.0;
  double r0 = 0.0;
  double blend_r1 = 0.0;
  double blend_r2 = 0.0;

  static FieldProfile from(const ShieldGeometry& torus);
};

/// C2 smoothstep falling from 1 at s=0 to 0 at s=1, and its derivative.
/// w(s) = 1 - s^3 (10 - 15 s + 6 s^2); w'(s) = -30 s^2 (1-s)^2.
double blend_down(double s);
double blend_down_prime(double s);

/// a(r) and its exact derivative (blend included). Throws
/// SingularityError for r <= r0.
std::pair<double, double> profile_a(double r, const FieldProfile& p);

/// External vector potential A(x). Torus: a(r)/(R + r cos alpha) e_theta.
/// Cylinder and half-space use a gauge validated through verify_curl.
/// Throws SingularityError inside or on the singular surface.
Vec3 vector_potential(const Vec3& x, const ShieldGeometry& g);

/// External magnetic field B(x) = curl A(x), in closed form.
Vec3 magnetic_field(const Vec3& x, const ShieldGeometry& g);

/// Max over samples of |curl_fd(A) - B| / |B| with 4th-order central
/// differences of step h. Where both sides vanish the error is 0.
/// Samples must keep a barrier distance of at least 10 h.
double verify_curl(const ShieldGeometry& g, std::span<const Vec3> samples,
                   double h);

/// Max over samples of |div_fd(B)| / |B| (0 where B vanishes).
double verify_divergence(const ShieldGeometry& g,
                         std::span<const Vec3> samples, double h);

}  // namespace vpshield
