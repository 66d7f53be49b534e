// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/dynamics.hpp"

#include <array>
#include <cmath>

#include "vpshield/errors.hpp"
#include "vpshield/parallel.hpp"
#include "vpshield/shield_fields.hpp"

namespace vpshield {

Vec3 rotate_about_field(const Vec3& v, const Vec3& B, double sigma,
                        double dt) {
  const double b = norm(B);
  if (b == 0.0) return v;
  const Vec3 axis = B / b;
  const double phi = -sigma * b * dt;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Vec3 out = c * v + s * cross(axis, v) + ((1.0 - c) * dot(axis, v)) * axis;
  // Renormalize in extended precision: the raw rotation is norm-preserving
  // only up to a few ulp per call, which would accumulate into a visible
  // speed drift over long pure-magnetic flights.
  const long double n2_in = (long double)v.x * v.x + (long double)v.y * v.y +
                            (long double)v.z * v.z;
  const long double n2_out = (long double)out.x * out.x +
                             (long double)out.y * out.y +
                             (long double)out.z * out.z;
  if (n2_out > 0.0L) {
    const long double f = sqrtl(n2_in / n2_out);
    out.x = static_cast<double>(out.x * f);
    out.y = static_cast<double>(out.y * f);
    out.z = static_cast<double>(out.z * f);
  }
  return out;
}

std::pair<Vec3, Vec3> push_boris(const Vec3& x, const Vec3& v, double sigma,
                                 const Vec3& E, const Vec3& B, double dt) {
  const Vec3 x_mid = x + (0.5 * dt) * v;
  Vec3 u = v + (0.5 * dt * sigma) * E;
  u = rotate_about_field(u, B, sigma, dt);
  u += (0.5 * dt * sigma) * E;
  return {x_mid + (0.5 * dt) * u, u};
}

Simulation::Simulation(Ensemble ensemble, ShieldGeometry geometry,
                       FieldParams fields, StepPolicy policy)
    : ensemble_(std::move(ensemble)),
      geometry_(geometry),
      fields_(fields),
      policy_(policy) {
  for (std::size_t i = 0; i < ensemble_.particles.size(); ++i) {
    const Particle& p = ensemble_.particles[i];
    if (!(barrier_distance(p.x, geometry_) > 0.0))
      throw PenetrationError(i, ensemble_.t, p.x, p.v);
  }
  efield_ = efield_all(ensemble_, fields_);
}

namespace {

struct FlightFault {
  enum class Kind { None, Penetration, Stiffness } kind = Kind::None;
  double t = 0.0;
  Vec3 x, v;
};

}  // namespace

void Simulation::magnetic_flight(double dt) {
  std::vector<FlightFault> faults(ensemble_.particles.size());
  const double t0 = ensemble_.t;
  parallel_for(ensemble_.particles.size(), fields_.workers,
               [&](std::size_t i) {
    Particle& p = ensemble_.particles[i];
    const double sigma = ensemble_.species[p.species_id].sigma;
    Vec3 x = p.x;
    Vec3 v = p.v;
    double remaining = dt;
    int floor_hits = 0;
    while (remaining > 0.0) {
      const double d = barrier_distance(x, geometry_);
      if (!(d > 0.0)) {
        faults[i] = {FlightFault::Kind::Penetration, t0 + (dt - remaining),
                     x, v};
        return;
      }
      double h = remaining;
      try {
        const double b = norm(magnetic_field(x, geometry_));
        if (b > 0.0 && sigma != 0.0)
          h = std::min(h, policy_.c_rot / (std::abs(sigma) * b));
      } catch (const SingularityError&) {
        faults[i] = {FlightFault::Kind::Penetration, t0 + (dt - remaining),
                     x, v};
        return;
      }
      const double speed = norm(v);
      if (speed > 0.0 && std::isfinite(d))
        h = std::min(h, policy_.c_dist * d / speed);
      if (h < policy_.dt_floor) {
        h = policy_.dt_floor;
        if (++floor_hits >= policy_.floor_abort) {
          faults[i] = {FlightFault::Kind::Stiffness, t0 + (dt - remaining),
                       x, v};
          return;
        }
      } else {
        floor_hits = 0;
      }
      h = std::min(h, remaining);
      // symmetric drift-rotate-drift with B at the midpoint
      const Vec3 x_mid = x + (0.5 * h) * v;
      Vec3 b_mid{};
      try {
        b_mid = magnetic_field(x_mid, geometry_);
      } catch (const SingularityError&) {
        faults[i] = {FlightFault::Kind::Penetration, t0 + (dt - remaining),
                     x_mid, v};
        return;
      }
      v = rotate_about_field(v, b_mid, sigma, h);
      x = x_mid + (0.5 * h) * v;
      remaining -= h;
      if (!(barrier_distance(x, geometry_) > 0.0)) {
        faults[i] = {FlightFault::Kind::Penetration, t0 + (dt - remaining),
                     x, v};
        return;
      }
    }
    p.x = x;
    p.v = v;
  });
  for (std::size_t i = 0; i < faults.size(); ++i) {
    if (faults[i].kind == FlightFault::Kind::Penetration)
      throw PenetrationError(i, faults[i].t, faults[i].x, faults[i].v);
    if (faults[i].kind == FlightFault::Kind::Stiffness)
      throw StiffnessError(i, faults[i].t);
  }
}

void Simulation::macro_step() { macro_step(policy_.dt_macro); }

void Simulation::macro_step(double dt_macro) {
  const int parts = policy_.freeze_E ? 1 : 2;
  const double dt = dt_macro / parts;
  for (int s = 0; s < parts; ++s) {
    // half kick with the boundary field
    parallel_for(ensemble_.particles.size(), fields_.workers,
                 [&](std::size_t i) {
      Particle& p = ensemble_.particles[i];
      p.v += (0.5 * dt * ensemble_.species[p.species_id].sigma) * efield_[i];
    });
    magnetic_flight(dt);
    efield_ = efield_all(ensemble_, fields_);
    parallel_for(ensemble_.particles.size(), fields_.workers,
                 [&](std::size_t i) {
      Particle& p = ensemble_.particles[i];
      p.v += (0.5 * dt * ensemble_.species[p.species_id].sigma) * efield_[i];
    });
    ensemble_.t += dt;
  }
}

Ensemble advance(Ensemble e, const ShieldGeometry& g, const FieldParams& fp,
                 const StepPolicy& sp, double T, const MacroHook& hook) {
  if (e.particles.empty()) {
    e.t += T;
    return e;
  }
  const double t_end = e.t + T;
  Simulation sim(std::move(e), g, fp, sp);
  std::size_t step = 0;
  while (sim.time() < t_end - 1e-15 * std::max(1.0, std::abs(t_end))) {
    sim.macro_step(std::min(sp.dt_macro, t_end - sim.time()));
    if (hook) hook(sim, step);
    ++step;
  }
  return sim.ensemble();
}

Vec3 FrozenField::E(const Vec3& x) const {
  if (!sources) return {};
  return efield_at(x, *sources, params);
}

Vec3 FrozenField::B(const Vec3& x) const {
  return magnetic_field(x, geometry);
}

namespace {

std::array<double, 6> integrate_frozen(const std::array<double, 6>& state,
                                       double sigma, const FrozenField& f,
                                       double dt_total, int steps) {
  Vec3 x{state[0], state[1], state[2]};
  Vec3 v{state[3], state[4], state[5]};
  const double h = dt_total / steps;
  for (int s = 0; s < steps; ++s) {
    const Vec3 x_mid = x + (0.5 * h) * v;
    const Vec3 e = f.E(x_mid);
    const Vec3 b = f.B(x_mid);
    v += (0.5 * h * sigma) * e;
    v = rotate_about_field(v, b, sigma, h);
    v += (0.5 * h * sigma) * e;
    x = x_mid + (0.5 * h) * v;
  }
  return {x.x, x.y, x.z, v.x, v.y, v.z};
}

double det6(double m[6][6]) {
  double det = 1.0;
  for (int c = 0; c < 6; ++c) {
    int pivot = c;
    for (int r = c + 1; r < 6; ++r)
      if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
    if (m[pivot][c] == 0.0) return 0.0;
    if (pivot != c) {
      for (int k = 0; k < 6; ++k) std::swap(m[pivot][k], m[c][k]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 6; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 6; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

}  // namespace

double flow_jacobian(const Vec3& x, const Vec3& v, double sigma,
                     const FrozenField& field, double dt_total, int steps) {
  const std::array<double, 6> base{x.x, x.y, x.z, v.x, v.y, v.z};
  double jac[6][6];
  for (int c = 0; c < 6; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(base[c]));
    std::array<double, 6> up = base, dn = base;
    up[c] += h;
    dn[c] -= h;
    const auto fu = integrate_frozen(up, sigma, field, dt_total, steps);
    const auto fd = integrate_frozen(dn, sigma, field, dt_total, steps);
    for (int r = 0; r < 6; ++r) jac[r][c] = (fu[r] - fd[r]) / (2.0 * h);
  }
  return det6(jac);
}

}  // namespace vpshield
