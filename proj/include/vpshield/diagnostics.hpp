// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vpshield/ensemble.hpp"
#include "vpshield/geometry.hpp"
#include "vpshield/selffield.hpp"
#include "vpshield/vec3.hpp"

namespace vpshield {

/// One time-stamped row of all monitored quantities.
struct DiagRecord {
  double t = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double total = 0.0;
  std::vector<double> q_radii;   ///< window radii for Q(R,t)
  std::vector<double> q_values;  ///< Q at each radius, same order
  double min_shield_distance = 0.0;
  double max_speed = 0.0;
  double speed_work_residual_max = 0.0;
  double shield_balance_residual_max = 0.0;
  std::vector<double> avg_field_per_tracer;
};

/// Radial mollifier: 1 on [0,1], quintic C2 descent on (1,2), 0 beyond.
/// Its slope stays within [-1.875, 0], inside the admissible [-2, 0].
double mollifier(double r);

/// One sample of a tracked trajectory with the field felt at that time.
struct TrajectorySample {
  double t = 0.0;
  Vec3 x;
  Vec3 v;
  Vec3 E;
};

/// Residual of |V(t)|^2 = |v(0)|^2 + 2 int V.E ds over the sampled
/// trajectory (trapezoidal quadrature), normalized by max(1, |V(t)|^2).
/// The magnetic term is absent: the rotation does no work.
double speed_work_residual(std::span<const TrajectorySample> traj);

/// Residual of the toroidal balance identity: a(r(t)) - a(r(0)) against
/// the boundary term -[(R + r cos a)^2 theta_dot] plus the three time
/// integrals, accumulated over segments inside the chart r < (R+r0)/2,
/// normalized by max(1, |a(r)| at the last in-band sample).
double shield_balance(std::span<const TrajectorySample> traj,
                      const ShieldGeometry& torus);

/// Mollified kinetic plus interaction energy in a window of radius ~R
/// around mu. The interaction part reuses precomputed per-particle
/// potentials when given (phi_pot[j] = sum_{k!=j} sigma_k w_k / dist).
double local_energy(const Ensemble& e, const Vec3& mu, double R,
                    const FieldParams& fp);
double local_energy(const Ensemble& e, const Vec3& mu, double R,
                    std::span<const double> phi_pot);

/// Per-particle interaction potentials (one O(M^2) pass, parallel).
std::vector<double> interaction_potentials(const Ensemble& e,
                                           const FieldParams& fp);

/// Probe set for the sup in Q(R,t): every stride-th particle position
/// plus a lattice of spacing R/2 spanning |mu| <= extent_factor * R.
/// A finite probe set yields a lower bound on the true sup.
struct ProbeGrid {
  std::size_t particle_stride = 16;
  double extent_factor = 4.0;
  unsigned workers = 0;
};

double q_sup(const Ensemble& e, double R, const FieldParams& fp,
             const ProbeGrid& probes);
double q_sup(const Ensemble& e, double R, std::span<const double> phi_pot,
             const ProbeGrid& probes);

/// (1/Delta) int_t^{t+Delta} |E(X(s),s)| ds by trapezoid over the samples
/// that fall inside the window.
double avg_field_window(std::span<const TrajectorySample> traj,
                        double t_start, double Delta);

struct ToroidalVelocity {
  double v_r = 0.0;
  double v_theta = 0.0;
  double v_alpha = 0.0;
};

/// Projection of v on the local toroidal frame at x.
ToroidalVelocity toroidal_velocity(const Vec3& x, const Vec3& v, double R);

/// Streams DiagRecords as CSV, one row per macro step; Q(R) columns are
/// declared in the header as Q_R<value>.
class DiagWriter {
 public:
  DiagWriter(std::ostream& out, const std::vector<double>& q_radii,
             std::size_t n_tracers);
  void write(const DiagRecord& rec);

 private:
  std::ostream& out_;
  std::size_t n_q_;
  std::size_t n_tracers_;
};

}  // namespace vpshield
