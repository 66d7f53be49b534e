// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "vpshield/ensemble.hpp"
#include "vpshield/geometry.hpp"
#include "vpshield/selffield.hpp"
#include "vpshield/vec3.hpp"

namespace vpshield {

/// Sub-stepping policy. A sub-step dt must satisfy
/// |sigma| |B| dt <= c_rot and |v| dt <= c_dist * barrier_distance.
struct StepPolicy {
  double dt_macro = 0.01;
  double c_rot = 0.2;
  double c_dist = 0.1;
  bool freeze_E = true;  ///< E recomputed only at macro steps
  double dt_floor = 1e-12;
  int floor_abort = 1000;  ///< consecutive floor hits before StiffnessError
};

/// One symmetric split step with constant E and B:
/// half drift, half electric kick, exact magnetic rotation by -sigma |B| dt
/// about B (renormalized Rodrigues form), half kick, half drift.
/// Time-reversible for constant fields; with E = 0 the speed is preserved
/// to a couple of ulp.
std::pair<Vec3, Vec3> push_boris(const Vec3& x, const Vec3& v, double sigma,
                                 const Vec3& E, const Vec3& B, double dt);

/// Exact rotation of v about the axis of B by angle -sigma |B| dt.
Vec3 rotate_about_field(const Vec3& v, const Vec3& B, double sigma, double dt);

/// Time stepper for the characteristics system. Macro structure per step:
/// half electric kick (E frozen at the step boundary), magnetic flight of
/// dt with adaptive sub-steps (B re-evaluated every sub-step), field
/// recomputation, half kick. The E field is therefore evaluated exactly
/// once per macro step and always at synchronized particle positions.
class Simulation {
 public:
  Simulation(Ensemble ensemble, ShieldGeometry geometry, FieldParams fields,
             StepPolicy policy);

  /// Advance by one dt_macro (or an explicit dt, e.g. a shortened final
  /// step). Throws PenetrationError or StiffnessError; such a run is
  /// aborted, never silently corrected.
  void macro_step();
  void macro_step(double dt);

  const Ensemble& ensemble() const { return ensemble_; }
  /// E at the current particle positions (synchronized with ensemble()).
  const std::vector<Vec3>& efield() const { return efield_; }
  double time() const { return ensemble_.t; }
  const ShieldGeometry& geometry() const { return geometry_; }
  const FieldParams& field_params() const { return fields_; }
  const StepPolicy& policy() const { return policy_; }

 private:
  Ensemble ensemble_;
  ShieldGeometry geometry_;
  FieldParams fields_;
  StepPolicy policy_;
  std::vector<Vec3> efield_;

  void magnetic_flight(double dt);
};

/// Called after every completed macro step.
using MacroHook = std::function<void(const Simulation&, std::size_t step)>;

/// Evolve the ensemble to time T (whole macro steps plus a final partial
/// step when T is not a multiple of dt_macro).
Ensemble advance(Ensemble e, const ShieldGeometry& g, const FieldParams& fp,
                 const StepPolicy& sp, double T, const MacroHook& hook = {});

/// Static field snapshot: E from a fixed ensemble, B from the geometry.
struct FrozenField {
  const Ensemble* sources = nullptr;
  FieldParams params;
  ShieldGeometry geometry;

  Vec3 E(const Vec3& x) const;
  Vec3 B(const Vec3& x) const;
};

/// Determinant of the finite-difference Jacobian of the phase-space flow
/// map (x,v) -> (X(dt_total), V(dt_total)) under the frozen field.
/// Central differences with relative step 1e-6.
double flow_jacobian(const Vec3& x, const Vec3& v, double sigma,
                     const FrozenField& field, double dt_total,
                     int steps = 128);

}  // namespace vpshield
