// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vpshield/parallel.hpp"
#include "vpshield/shield_fields.hpp"

namespace vpshield {

double mollifier(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return blend_down(r - 1.0);
}

double speed_work_residual(std::span<const TrajectorySample> traj) {
  if (traj.size() < 2) return 0.0;
  double work = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double dt = traj[i + 1].t - traj[i].t;
    work += 0.5 * dt *
            (dot(traj[i].v, traj[i].E) + dot(traj[i + 1].v, traj[i + 1].E));
  }
  const double v2_end = norm2(traj.back().v);
  const double v2_start = norm2(traj.front().v);
  return std::abs(v2_end - v2_start - 2.0 * work) / std::max(1.0, v2_end);
}

double shield_balance(std::span<const TrajectorySample> traj,
                      const ShieldGeometry& g) {
  if (traj.size() < 2) return 0.0;
  const double band_hi = 0.5 * (g.R + g.r0);
  const FieldProfile prof = FieldProfile::from(g);

  struct Local {
    double a = 0.0;        // a(r)
    double F = 0.0;        // (R + r cos a)^2 theta_dot
    double g1 = 0.0;       // 2 theta_dot (R+r cos a)(r_dot cos a - r a_dot sin a)
    double g2 = 0.0;       // -2 v_r v_th cos a + 2 v_al v_th sin a + (R+r cos a) E_th
    bool in_band = false;
  };
  const auto eval = [&](const TrajectorySample& s) {
    Local loc;
    const ToroidalPoint p = to_toroidal(s.x, g.R);
    if (!(p.r > g.r0 && p.r < band_hi)) return loc;
    loc.in_band = true;
    const ToroidalFrame f = frame_at(p);
    const double w = g.R + p.r * std::cos(p.alpha);
    const double v_r = dot(s.v, f.e_r);
    const double v_th = dot(s.v, f.e_theta);
    const double v_al = dot(s.v, f.e_alpha);
    const double theta_dot = v_th / w;
    const double alpha_dot = v_al / p.r;
    const double e_th = dot(s.E, f.e_theta);
    loc.a = profile_a(p.r, prof).first;
    loc.F = w * w * theta_dot;
    loc.g1 = 2.0 * theta_dot * w *
             (v_r * std::cos(p.alpha) - p.r * alpha_dot * std::sin(p.alpha));
    loc.g2 = -2.0 * v_r * v_th * std::cos(p.alpha) +
             2.0 * v_al * v_th * std::sin(p.alpha) + w * e_th;
    return loc;
  };

  double lhs = 0.0;
  double rhs = 0.0;
  double a_last = 0.0;
  Local prev = eval(traj[0]);
  bool have_prev = prev.in_band;
  double seg_a0 = prev.a, seg_F0 = prev.F;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const Local cur = eval(traj[i]);
    if (cur.in_band && have_prev) {
      const double dt = traj[i].t - traj[i - 1].t;
      rhs += 0.5 * dt * (prev.g1 + cur.g1 + prev.g2 + cur.g2);
    }
    if (cur.in_band && !have_prev) {
      seg_a0 = cur.a;
      seg_F0 = cur.F;
    }
    if (!cur.in_band && have_prev) {
      lhs += prev.a - seg_a0;
      rhs += -(prev.F - seg_F0);
      a_last = prev.a;
    }
    have_prev = cur.in_band;
    prev = cur;
  }
  if (have_prev) {
    lhs += prev.a - seg_a0;
    rhs += -(prev.F - seg_F0);
    a_last = prev.a;
  }
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(a_last));
}

std::vector<double> interaction_potentials(const Ensemble& e,
                                           const FieldParams& fp) {
  const std::size_t n = e.particles.size();
  const double eps2 = fp.epsilon * fp.epsilon;
  std::vector<double> phi(n, 0.0);
  parallel_for(n, fp.workers, [&](std::size_t j) {
    const Vec3& xj = e.particles[j].x;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;  // discrete self-energy excluded
      const Species& sk = e.species_of(e.particles[k]);
      const double r = std::sqrt(norm2(xj - e.particles[k].x) + eps2);
      if (r == 0.0) continue;
      acc += sk.sigma * sk.weight / r;
    }
    phi[j] = acc;
  });
  return phi;
}

double local_energy(const Ensemble& e, const Vec3& mu, double R,
                    std::span<const double> phi_pot) {
  double sum = 0.0;
  for (std::size_t j = 0; j < e.particles.size(); ++j) {
    const Particle& p = e.particles[j];
    const double w = mollifier(norm(p.x - mu) / R);
    if (w == 0.0) continue;
    const Species& s = e.species_of(p);
    double term = norm2(p.v);
    if (!phi_pot.empty()) term += s.sigma * phi_pot[j];
    sum += 0.5 * w * s.weight * term;
  }
  return sum;
}

double local_energy(const Ensemble& e, const Vec3& mu, double R,
                    const FieldParams& fp) {
  return local_energy(e, mu, R,
                      std::span<const double>(interaction_potentials(e, fp)));
}

namespace {

std::vector<Vec3> probe_points(const Ensemble& e, double R,
                               const ProbeGrid& probes) {
  std::vector<Vec3> mus;
  const std::size_t stride = std::max<std::size_t>(1, probes.particle_stride);
  for (std::size_t j = 0; j < e.particles.size(); j += stride)
    mus.push_back(e.particles[j].x);
  const double extent = probes.extent_factor * R;
  const double spacing = 0.5 * R;
  const int n = static_cast<int>(std::floor(extent / spacing));
  for (int ix = -n; ix <= n; ++ix)
    for (int iy = -n; iy <= n; ++iy)
      for (int iz = -n; iz <= n; ++iz)
        mus.push_back({ix * spacing, iy * spacing, iz * spacing});
  return mus;
}

}  // namespace

double q_sup(const Ensemble& e, double R, std::span<const double> phi_pot,
             const ProbeGrid& probes) {
  if (e.particles.empty()) return 0.0;
  const std::vector<Vec3> mus = probe_points(e, R, probes);
  std::vector<double> vals(mus.size(), 0.0);
  parallel_for(mus.size(), probes.workers, [&](std::size_t i) {
    vals[i] = local_energy(e, mus[i], R, phi_pot);
  });
  return *std::max_element(vals.begin(), vals.end());
}

double q_sup(const Ensemble& e, double R, const FieldParams& fp,
             const ProbeGrid& probes) {
  const std::vector<double> phi = interaction_potentials(e, fp);
  return q_sup(e, R, std::span<const double>(phi), probes);
}

double avg_field_window(std::span<const TrajectorySample> traj,
                        double t_start, double Delta) {
  if (traj.size() < 2) return traj.empty() ? 0.0 : norm(traj[0].E);
  const double t_end = t_start + Delta;
  double integral = 0.0;
  double covered = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double a = traj[i].t, b = traj[i + 1].t;
    const double lo = std::max(a, t_start), hi = std::min(b, t_end);
    if (hi <= lo || b == a) continue;
    // linear interpolation of |E| across the clipped sub-interval
    const double fa = norm(traj[i].E), fb = norm(traj[i + 1].E);
    const double flo = fa + (fb - fa) * (lo - a) / (b - a);
    const double fhi = fa + (fb - fa) * (hi - a) / (b - a);
    integral += 0.5 * (flo + fhi) * (hi - lo);
    covered += hi - lo;
  }
  return covered > 0.0 ? integral / covered : 0.0;
}

ToroidalVelocity toroidal_velocity(const Vec3& x, const Vec3& v, double R) {
  const ToroidalFrame f = frame_at(to_toroidal(x, R));
  return {dot(v, f.e_r), dot(v, f.e_theta), dot(v, f.e_alpha)};
}

DiagWriter::DiagWriter(std::ostream& out, const std::vector<double>& q_radii,
                       std::size_t n_tracers)
    : out_(out), n_q_(q_radii.size()), n_tracers_(n_tracers) {
  out_ << "t,kinetic,potential,total,min_shield_distance,max_speed,"
          "speed_work_residual_max,shield_balance_residual_max";
  char buf[64];
  for (double r : q_radii) {
    std::snprintf(buf, sizeof buf, ",Q_R%g", r);
    out_ << buf;
  }
  for (std::size_t i = 0; i < n_tracers_; ++i) out_ << ",tracer_avg_E" << i;
  out_ << "\n";
}

void DiagWriter::write(const DiagRecord& rec) {
  char buf[64];
  const auto put = [&](double v, bool lead_comma) {
    std::snprintf(buf, sizeof buf, lead_comma ? ",%.17g" : "%.17g", v);
    out_ << buf;
  };
  put(rec.t, false);
  put(rec.kinetic, true);
  put(rec.potential, true);
  put(rec.total, true);
  put(rec.min_shield_distance, true);
  put(rec.max_speed, true);
  put(rec.speed_work_residual_max, true);
  put(rec.shield_balance_residual_max, true);
  for (std::size_t i = 0; i < n_q_; ++i)
    put(i < rec.q_values.size() ? rec.q_values[i] : 0.0, true);
  for (std::size_t i = 0; i < n_tracers_; ++i)
    put(i < rec.avg_field_per_tracer.size() ? rec.avg_field_per_tracer[i]
                                            : 0.0,
        true);
  out_ << "\n";
}

}  // namespace vpshield
