// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Every tolerance is pinned here.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "vpshield/convergence.hpp"
#include "vpshield/diagnostics.hpp"
#include "vpshield/dynamics.hpp"
#include "vpshield/ensemble.hpp"
#include "vpshield/errors.hpp"
#include "vpshield/rng.hpp"
#include "vpshield/shield_fields.hpp"

using namespace vpshield;

namespace {

// ---- pinned tolerances -------------------------------------------------
constexpr double kFieldTol = 1e-5;          // criterion 1
constexpr double kSpeedDriftTol = 1e-13;    // criterion 2
constexpr double kSpeedWorkTol = 1e-3;      // criterion 4
constexpr double kOrder2RatioLo = 3.5;      // criteria 4, 6 (dt halving)
constexpr double kOrder2RatioHi = 4.5;
constexpr double kShieldBalanceTol = 1e-4;  // criterion 5
constexpr double kEnergyDriftTol = 1e-3;    // criterion 6
constexpr double kOrderLo = 1.5;            // criterion 6 ("approximately 2")
constexpr double kOrderHi = 2.5;
constexpr double kLiouvilleTol = 1e-5;      // criterion 7
constexpr double kScalingSlope = 0.2;       // criterion 8: 3 - alpha
constexpr double kScalingBand = 0.15;
// ------------------------------------------------------------------------

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool report(int num, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-24s %s  (%s)\n", num, name,
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// 1. Field correctness: curl A = B and div B = 0 by finite differences,
//    1000 samples per geometry, h = 1e-5.
bool criterion1() {
  const double t0 = now_s();
  double worst_curl = 0.0, worst_div = 0.0;
  {
    const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k) {
          const double r = g.r0 + 0.03 + (g.blend_r2 + 0.2 - g.r0 - 0.03) *
                                             (i + 0.5) / 10.0;
          const double th = 6.28 * (j + 0.5) / 10.0;
          const double al = 6.28 * (k + 0.5) / 10.0;
          pts.push_back(to_cartesian({r, th, al}, g.R));
        }
    worst_curl = std::max(worst_curl, verify_curl(g, pts, 1e-5));
    worst_div = std::max(worst_div, verify_divergence(g, pts, 1e-5));
  }
  {
    const ShieldGeometry g = ShieldGeometry::cylinder(1.0, 2.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k) {
          const double r = (0.10 + 0.82 * (i + 0.5) / 10.0) * g.A;
          const double ph = 6.28 * (j + 0.5) / 10.0;
          const double x1 = -2.0 + 4.0 * (k + 0.5) / 10.0;
          pts.push_back({x1, r * std::cos(ph), r * std::sin(ph)});
        }
    worst_curl = std::max(worst_curl, verify_curl(g, pts, 1e-5));
    worst_div = std::max(worst_div, verify_divergence(g, pts, 1e-5));
  }
  {
    const ShieldGeometry g = ShieldGeometry::half_space(2.0, 1.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k)
          pts.push_back({-(0.02 + 1.3 * (i + 0.5) / 10.0),
                         -3.0 + 6.0 * (j + 0.5) / 10.0,
                         -3.0 + 6.0 * (k + 0.5) / 10.0});
    worst_curl = std::max(worst_curl, verify_curl(g, pts, 1e-5));
    worst_div = std::max(worst_div, verify_divergence(g, pts, 1e-5));
  }
  const double dt = now_s() - t0;
  const bool pass =
      worst_curl < kFieldTol && worst_div < kFieldTol && dt < 5.0;
  return report(1, "field correctness", pass,
                fmt("curl %.2e, div %.2e, %.1fs, tol %.0e", worst_curl,
                    worst_div, dt, kFieldTol));
}

// 2. No-work invariant: 1e4 pure-magnetic sub-steps drift the speed by
//    at most 1e-13 relative.
bool criterion2() {
  const double t0 = now_s();
  const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
  Vec3 x{2.62, 0.0, 0.0};
  Vec3 v{-0.4, 0.8, 0.3};
  const double s0 = norm(v);
  const double h = 1e-5;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 x_mid = x + (0.5 * h) * v;
    v = rotate_about_field(v, magnetic_field(x_mid, g), 1.0, h);
    x = x_mid + (0.5 * h) * v;
  }
  const double drift = std::abs(norm(v) - s0) / s0;
  const double dt = now_s() - t0;
  const bool pass = drift <= kSpeedDriftTol && dt < 1.0;
  return report(2, "no-work invariant", pass,
                fmt("drift %.2e over 1e4 sub-steps, %.2fs, tol %.0e", drift,
                    dt, kSpeedDriftTol));
}

// 3. Impenetrability: tau = 4 torus, 1e4 macro-particles of two same-sign
//    species, T = 2: no penetration, positive clearance throughout.
//    Falsification: tau = 0.5 and a cold inward beam with the distance
//    guard disabled must trip the detector.
bool criterion3() {
  const double t0 = now_s();
  const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
  InitialData init;
  init.lambda = 1.0;
  init.q = 2.9;
  init.alpha_decay = 2.8;
  init.d0 = 0.2;
  init.N_cut = 6.0;
  init.R_dom = 20.0;
  const std::vector<Species> sp{{1.0, 1e-4, 5000}, {0.5, 1e-4, 5000}};
  Ensemble e = sample_initial(init, sp, g, 2026);
  FieldParams fp;
  fp.epsilon = 0.5 * mean_spacing(e);
  StepPolicy st;
  double min_clearance = infinite_distance();
  bool ok = true;
  std::string why;
  try {
    advance(std::move(e), g, fp, st, 2.0,
            [&](const Simulation& sim, std::size_t) {
              for (const Particle& p : sim.ensemble().particles)
                min_clearance =
                    std::min(min_clearance, barrier_distance(p.x, g));
            });
  } catch (const std::exception& ex) {
    ok = false;
    why = ex.what();
  }
  ok = ok && min_clearance > 0.0;

  // falsification companion
  bool detector_live = false;
  try {
    const ShieldGeometry weak = ShieldGeometry::torus(2.0, 0.5, 0.5);
    Ensemble beam;
    beam.species = {{1.0, 1.0, 1}};
    beam.particles.push_back({{2.9, 0.0, 0.0}, {-50.0, 0.0, 0.0}, 0});
    StepPolicy loose;  // both guards off: only then can the beam cross
    loose.c_dist = 1e9;
    loose.c_rot = 1e9;
    loose.dt_macro = 0.001;
    Simulation sim(beam, weak, FieldParams{}, loose);
    for (int i = 0; i < 1000 && !detector_live; ++i) sim.macro_step();
  } catch (const PenetrationError&) {
    detector_live = true;
  } catch (const StiffnessError&) {
    detector_live = false;
  }

  const double dt = now_s() - t0;
  const bool pass = ok && detector_live;
  return report(
      3, "impenetrability", pass,
      fmt("clearance %.3f%s, falsification %s, %.0fs", min_clearance,
          why.empty() ? "" : (", " + why).c_str(),
          detector_live ? "tripped" : "SILENT", dt));
}

// 4. Speed-work identity: max residual over all particles <= 1e-3 at the
//    default dt, and halving dt divides it by ~4.
bool criterion4() {
  const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
  InitialData init;
  init.lambda = 1.0;
  init.q = 2.9;
  init.alpha_decay = 2.8;
  init.d0 = 0.2;
  init.N_cut = 6.0;
  init.R_dom = 20.0;
  const Ensemble e0 = sample_initial(init, {{1.0, 1.0, 150}}, g, 77);
  FieldParams fp;
  fp.epsilon = 0.5 * mean_spacing(e0);

  const auto max_residual = [&](double dt_macro) {
    StepPolicy st;
    st.dt_macro = dt_macro;
    std::vector<std::vector<TrajectorySample>> traj(e0.particles.size());
    Simulation sim(e0, g, fp, st);
    const auto record = [&]() {
      for (std::size_t i = 0; i < traj.size(); ++i)
        traj[i].push_back({sim.time(), sim.ensemble().particles[i].x,
                           sim.ensemble().particles[i].v, sim.efield()[i]});
    };
    record();
    while (sim.time() < 0.4 - 1e-12) {
      sim.macro_step(dt_macro);
      record();
    }
    double worst = 0.0;
    for (const auto& t : traj)
      worst = std::max(worst, speed_work_residual(t));
    return worst;
  };

  const double r1 = max_residual(0.01);
  const double r2 = max_residual(0.005);
  const double ratio = r1 / r2;
  const bool pass = r1 <= kSpeedWorkTol && ratio >= kOrder2RatioLo &&
                    ratio <= kOrder2RatioHi;
  return report(4, "speed-work identity", pass,
                fmt("residual %.2e (tol %.0e), halving ratio %.2f in "
                    "[%.1f, %.1f]",
                    r1, kSpeedWorkTol, ratio, kOrder2RatioLo, kOrder2RatioHi));
}

// 5. Shield-balance identity on a grazing single-particle orbit against
//    a fine-step reference trajectory.
bool criterion5() {
  const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
  Ensemble e;
  e.species = {{1.0, 1.0, 1}};
  e.particles.push_back({{3.0, 0.0, 0.0}, {-0.6, 0.5, 0.2}, 0});
  StepPolicy st;
  st.dt_macro = 1e-4;  // reference integrator resolution
  FieldParams fp;
  std::vector<TrajectorySample> traj;
  Simulation sim(e, g, fp, st);
  traj.push_back({0.0, e.particles[0].x, e.particles[0].v, {}});
  double min_r = infinite_distance();
  while (sim.time() < 2.0 - 1e-12) {
    sim.macro_step();
    const Particle& p = sim.ensemble().particles[0];
    traj.push_back({sim.time(), p.x, p.v, {}});
    min_r = std::min(min_r, to_toroidal(p.x, g.R).r);
  }
  const double res = shield_balance(traj, g);
  const bool grazing = min_r < 0.5 * (g.R + g.r0);
  const bool pass = grazing && res <= kShieldBalanceTol;
  return report(5, "shield-balance identity", pass,
                fmt("residual %.2e (tol %.0e), min r %.3f, in band %s", res,
                    kShieldBalanceTol, min_r, grazing ? "yes" : "NO"));
}

// 6. Energy conservation in the two-sign scenario at fixed softening,
//    with second-order decay of the drift under dt halving.
bool criterion6() {
  const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
  InitialData init;
  init.lambda = 1.0;
  init.q = 2.7;
  init.alpha_decay = 3.5;
  init.d0 = 0.2;
  init.N_cut = 6.0;
  init.R_dom = 20.0;
  // mean-field macro-particle weights ~ 1/M: close encounters between
  // unit-weight charges at this softening are not resolved by the
  // default dt and would mask the integrator's own convergence order
  const Ensemble e0 =
      sample_initial(init, {{1.0, 0.01, 100}, {-1.0, 0.01, 100}}, g, 55);
  FieldParams fp;
  fp.epsilon = 0.3;

  const auto drift = [&](double dt_macro) {
    StepPolicy st;
    st.dt_macro = dt_macro;
    const auto total = [&](const Ensemble& e) {
      double kin = 0.0;
      for (const Particle& p : e.particles)
        kin += 0.5 * e.species_of(p).weight * norm2(p.v);
      return kin + potential_energy(e, fp);
    };
    const double h0 = total(e0);
    double worst = 0.0;
    advance(e0, g, fp, st, 1.0, [&](const Simulation& sim, std::size_t) {
      worst = std::max(worst,
                       std::abs(total(sim.ensemble()) - h0) / std::abs(h0));
    });
    return worst;
  };

  const double d1 = drift(0.01);
  const double d2 = drift(0.005);
  const double d4 = drift(0.0025);
  const double order = 0.5 * (std::log2(d1 / d2) + std::log2(d2 / d4));
  const bool pass =
      d1 <= kEnergyDriftTol && order >= kOrderLo && order <= kOrderHi;
  return report(6, "energy conservation", pass,
                fmt("drift %.2e (tol %.0e), order %.2f in [%.1f, %.1f]", d1,
                    kEnergyDriftTol, order, kOrderLo, kOrderHi));
}

// 7. Liouville: the phase-space flow of 100 random states under frozen
//    fields has unit Jacobian determinant.
bool criterion7() {
  const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
  Ensemble sources;
  sources.species = {{1.0, 1.0, 5}};
  RngStream srng(31);
  for (int i = 0; i < 5; ++i)
    sources.particles.push_back(
        {{srng.uniform(2.7, 3.5), srng.uniform(-1, 1), srng.uniform(-1, 1)},
         {},
         0});
  FrozenField field;
  field.sources = &sources;
  field.params.epsilon = 0.2;
  field.geometry = g;

  RngStream rng(13);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    // states span the weak tail of the external field and the field-free
    // exterior; deep inside the blend band the flow's higher derivatives
    // explode with the near-singular profile and a finite-difference
    // Jacobian is meaningless even though the underlying map stays
    // volume-preserving
    const Vec3 x{rng.uniform(2.85, 3.35), rng.uniform(-0.5, 0.5),
                 rng.uniform(-0.25, 0.25)};
    const Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    worst = std::max(worst,
                     std::abs(flow_jacobian(x, v, 1.0, field, 0.1) - 1.0));
  }
  const bool pass = worst <= kLiouvilleTol;
  return report(7, "Liouville volume", pass,
                fmt("max |det-1| %.2e over 100 states, tol %.0e", worst,
                    kLiouvilleTol));
}

// 8. Local-energy scaling: the windowed kinetic energy sup grows like
//    R^(3-alpha) for the alpha = 2.8 spatial profile.
bool criterion8() {
  InitialData init;
  init.lambda = 1.0;
  init.q = 2.9;
  init.alpha_decay = 2.8;
  init.d0 = 0.2;
  init.N_cut = 6.0;
  init.R_dom = 100.0;
  init.x_core = 0.01;  // resolve the profile well below the window radii
  const Ensemble e = sample_initial(init, {{1.0, 1.0, 100000}},
                                    ShieldGeometry::none(), 2024);
  ProbeGrid probes;
  probes.particle_stride = 64;
  std::vector<double> lr, lq;
  std::string vals;
  for (double R : {2.0, 4.0, 8.0, 16.0}) {
    const double q = q_sup(e, R, std::span<const double>{}, probes);
    lr.push_back(std::log(R));
    lq.push_back(std::log(q));
    vals += fmt(" Q(%g)=%.1f", R, q);
  }
  // least-squares slope
  double mr = 0, mq = 0;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    mr += lr[i];
    mq += lq[i];
  }
  mr /= lr.size();
  mq /= lq.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lr.size(); ++i) {
    num += (lr[i] - mr) * (lq[i] - mq);
    den += (lr[i] - mr) * (lr[i] - mr);
  }
  const double slope = num / den;
  const bool pass = std::abs(slope - kScalingSlope) <= kScalingBand;
  return report(8, "local-energy scaling", pass,
                fmt("slope %.3f, target %.1f +- %.2f,%s", slope,
                    kScalingSlope, kScalingBand, vals.c_str()));
}

// 9. Cutoff convergence: the final-time gap decreases strictly along the
//    ladder N = 4, 8, 16 in the same-sign heavy-tail scenario.
bool criterion9() {
  const ShieldGeometry g = ShieldGeometry::torus(2.0, 0.5, 4.0);
  InitialData init;
  init.lambda = 0.01;
  init.q = 2.9;
  init.alpha_decay = 2.8;
  init.d0 = 0.2;
  init.N_cut = 32.0;
  init.R_dom = 20.0;
  const Ensemble base =
      sample_initial(init, {{1.0, 1.0, 500}, {0.5, 1.0, 500}}, g, 11);
  FieldParams fp;
  fp.epsilon = 0.5 * mean_spacing(base);
  StepPolicy st;
  std::string vals;
  std::vector<double> sigmas;
  for (double N : {4.0, 8.0, 16.0}) {
    const PairRunReport rep = run_pair(base, N, 2.0 * N, g, fp, st, 0.5);
    sigmas.push_back(rep.sigma);
    vals += fmt(" sigma(%g)=%.3e", N, rep.sigma);
  }
  const bool pass = sigmas[0] > sigmas[1] && sigmas[1] > sigmas[2];
  return report(9, "cutoff convergence", pass, fmt("%s", vals.c_str() + 1));
}

// 10. Sampler fidelity: 1e6-sample Monte-Carlo checks of the velocity
//     tail and the spatial shells at 3 sigma.
bool criterion10() {
  const double t0 = now_s();
  const std::size_t n = 1000000;

  // velocity tail
  InitialData vinit;
  vinit.lambda = 0.5;
  vinit.q = 3.0;
  vinit.alpha_decay = 3.5;
  vinit.d0 = 0.2;
  vinit.N_cut = 5.0;
  vinit.R_dom = 20.0;
  const Ensemble ve =
      sample_initial(vinit, {{1.0, 1.0, n}}, ShieldGeometry::none(), 404);
  const auto p = [&](double s) {
    return s * s * std::exp(-vinit.lambda * std::pow(s, vinit.q));
  };
  const auto quad = [&](double a, double b) {
    const int m = 4000;
    const double h = (b - a) / m;
    double acc = p(a) + p(b);
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * p(a + i * h);
    return acc * h / 3.0;
  };
  const double Z = quad(0.0, vinit.N_cut);
  bool vel_ok = true;
  std::string detail;
  for (double s0 : {1.0, 2.0, 3.0}) {
    const double target = quad(s0, vinit.N_cut) / Z;
    std::size_t count = 0;
    for (const Particle& q : ve.particles)
      if (norm(q.v) > s0) ++count;
    const double emp = double(count) / double(n);
    const double dev = std::abs(emp - target) /
                       std::sqrt(target * (1.0 - target) / double(n));
    if (dev > 3.0) vel_ok = false;
    detail += fmt(" v>%g:%.1fsd", s0, dev);
  }

  // spatial shells (cell-bounded mode): occupancy of shell k relative to
  // the analytic band masses
  InitialData sinit = vinit;
  sinit.spatial_mode = SpatialMode::CellBounded;
  sinit.alpha_decay = 2.8;
  sinit.R_dom = 50.0;
  const Ensemble se =
      sample_initial(sinit, {{1.0, 1.0, n}}, ShieldGeometry::none(), 505);
  const auto band_mass = [&](int k) {
    const double lo = std::pow(2.0, k);
    const double hi = 1.5 * lo;
    return std::pow(2.0, -k * sinit.alpha_decay) *
           (hi * hi * hi - lo * lo * lo) / 3.0;
  };
  double total = 1.0 / 3.0;  // unit core
  for (int k = 0; k < 6; ++k) total += band_mass(k);
  bool shell_ok = true;
  for (int k = 0; k < 4; ++k) {
    const double target = band_mass(k) / total;
    const double lo = std::pow(2.0, k);
    std::size_t count = 0;
    for (const Particle& q : se.particles) {
      const double s = norm(q.x);
      if (s >= lo && s < 1.5 * lo) ++count;
    }
    const double emp = double(count) / double(n);
    const double dev = std::abs(emp - target) /
                       std::sqrt(target * (1.0 - target) / double(n));
    if (dev > 3.0) shell_ok = false;
    detail += fmt(" shell%d:%.1fsd", k, dev);
  }
  const double dt = now_s() - t0;
  const bool pass = vel_ok && shell_ok && dt < 30.0;
  return report(10, "sampler fidelity", pass,
                fmt("%s, %.1fs", detail.c_str() + 1, dt));
}

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool (*checks[])() = {criterion1, criterion2, criterion3, criterion4,
                        criterion5, criterion6, criterion7, criterion8,
                        criterion9, criterion10};
  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    if (only && only != i + 1) continue;
    if (!checks[i]()) ++failures;
  }
  if (!only)
    std::printf("%s: %d of 10 criteria failed\n",
                failures ? "RED" : "GREEN", failures);
  return failures;
}
