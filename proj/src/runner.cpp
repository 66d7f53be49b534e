// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "vpshield/dynamics.hpp"
#include "vpshield/errors.hpp"
#include "vpshield/selffield.hpp"
#include "vpshield/shield_fields.hpp"

namespace vpshield {

namespace {

void write_manifest(const RunConfig& cfg, const std::string& status,
                    double wall_seconds) {
  std::ofstream out(std::filesystem::path(cfg.out_dir) / "manifest.txt");
  out << "version = " << kVersion << "\n";
  out << "config_hash = " << config_hash(cfg) << "\n";
  out << "status = " << status << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", wall_seconds);
  out << "wall_seconds = " << buf << "\n";
  out << render_manifest_body(cfg);
}

}  // namespace

Ensemble build_initial(const RunConfig& cfg) {
  const ShieldGeometry g = cfg.make_geometry();
  if (cfg.scenario == Scenario::SingleParticle) {
    Ensemble e;
    e.species = cfg.species.empty() ? std::vector<Species>{{1.0, 1.0, 1}}
                                    : cfg.species;
    e.particles.push_back({cfg.particle_x, cfg.particle_v, 0});
    e.seed = cfg.seed;
    if (!(barrier_distance(cfg.particle_x, g) > 0.0))
      throw ConfigError("single-particle start is inside the barred region");
    return e;
  }
  return sample_initial(cfg.init, cfg.species, g, cfg.seed);
}

double resolve_epsilon(const RunConfig& cfg, const Ensemble& e) {
  if (cfg.epsilon >= 0.0) return cfg.epsilon;
  if (e.particles.size() < 2) return 0.0;
  return 0.5 * mean_spacing(e);
}

SimulateSummary run_simulate(const RunConfig& cfg) {
  const auto wall0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.out_dir);
  write_manifest(cfg, "started", 0.0);

  const ShieldGeometry g = cfg.make_geometry();
  Ensemble e0 = build_initial(cfg);
  FieldParams fp;
  fp.epsilon = resolve_epsilon(cfg, e0);
  fp.workers = cfg.workers;
  StepPolicy sp = cfg.step;

  const std::string hash = config_hash(cfg);
  const std::filesystem::path dir(cfg.out_dir);
  std::ofstream diag_out(dir / "diagnostics.csv");
  DiagWriter writer(diag_out, cfg.q_radii, cfg.n_tracers);

  const std::size_t n_tracers =
      std::min<std::size_t>(cfg.n_tracers, e0.particles.size());
  std::vector<std::vector<TrajectorySample>> tracers(n_tracers);

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  std::size_t snap_index = 0;

  SimulateSummary summary;
  summary.epsilon_used = fp.epsilon;

  const auto record = [&](const Simulation& sim) {
    const Ensemble& e = sim.ensemble();
    for (std::size_t i = 0; i < n_tracers; ++i)
      tracers[i].push_back(
          {sim.time(), e.particles[i].x, e.particles[i].v, sim.efield()[i]});

    DiagRecord rec;
    rec.t = sim.time();
    for (const Particle& p : e.particles) {
      const Species& s = e.species_of(p);
      rec.kinetic += 0.5 * s.weight * norm2(p.v);
      rec.max_speed = std::max(rec.max_speed, norm(p.v));
    }
    rec.potential = potential_energy(e, fp);
    rec.total = rec.kinetic + rec.potential;
    rec.min_shield_distance = infinite_distance();
    for (const Particle& p : e.particles)
      rec.min_shield_distance =
          std::min(rec.min_shield_distance, barrier_distance(p.x, g));
    for (std::size_t i = 0; i < n_tracers; ++i) {
      rec.speed_work_residual_max = std::max(
          rec.speed_work_residual_max, speed_work_residual(tracers[i]));
      if (g.kind == ShieldGeometry::Kind::Torus)
        rec.shield_balance_residual_max = std::max(
            rec.shield_balance_residual_max, shield_balance(tracers[i], g));
      rec.avg_field_per_tracer.push_back(avg_field_window(
          tracers[i], std::max(0.0, sim.time() - cfg.diag_window),
          cfg.diag_window));
    }
    if (!cfg.q_radii.empty()) {
      const std::vector<double> phi = interaction_potentials(e, fp);
      ProbeGrid probes;
      probes.workers = cfg.workers;
      rec.q_radii = cfg.q_radii;
      for (double r : cfg.q_radii)
        rec.q_values.push_back(
            q_sup(e, r, std::span<const double>(phi), probes));
    }
    writer.write(rec);
    summary.records.push_back(std::move(rec));

    while (next_snap < snaps.size() && snaps[next_snap] <= sim.time() + 1e-12) {
      char name[48];
      std::snprintf(name, sizeof name, "snapshot_%zu.csv", snap_index++);
      save_ensemble(e, (dir / name).string(), hash);
      ++next_snap;
    }
  };

  Simulation sim(std::move(e0), g, fp, sp);
  try {
    record(sim);
    const double t_end = cfg.T;
    while (sim.time() < t_end - 1e-15 * std::max(1.0, t_end)) {
      sim.macro_step(std::min(sp.dt_macro, t_end - sim.time()));
      record(sim);
    }
  } catch (const std::exception& ex) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
            .count();
    write_manifest(cfg, std::string("aborted: ") + ex.what(), wall);
    save_ensemble(sim.ensemble(), (dir / "final.csv").string(), hash);
    throw;
  }

  summary.final_state = sim.ensemble();
  save_ensemble(summary.final_state, (dir / "final.csv").string(), hash);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  write_manifest(cfg, "completed", wall);
  return summary;
}

std::vector<PairRunReport> run_convergence(const RunConfig& cfg) {
  const auto wall0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.out_dir);
  write_manifest(cfg, "started", 0.0);

  if (cfg.ladder.empty()) throw ConfigError("empty convergence ladder");
  const ShieldGeometry g = cfg.make_geometry();

  // The base ensemble keeps every velocity any rung could see.
  InitialData base_init = cfg.init;
  base_init.N_cut = std::max(
      base_init.N_cut,
      2.0 * *std::max_element(cfg.ladder.begin(), cfg.ladder.end()));
  Ensemble base = sample_initial(base_init, cfg.species, g, cfg.seed);

  FieldParams fp;
  fp.epsilon = resolve_epsilon(cfg, base);
  fp.workers = cfg.workers;

  std::vector<PairRunReport> ladder;
  for (double N : cfg.ladder)
    ladder.push_back(run_pair(base, N, 2.0 * N, g, fp, cfg.step, cfg.T));

  const std::filesystem::path dir(cfg.out_dir);
  {
    std::ofstream csv(dir / "convergence.csv");
    write_pair_csv(csv, ladder);
  }
  {
    std::ofstream txt(dir / "cauchy.txt");
    txt << "N_small N_large sigma_T ratio\n";
    char buf[128];
    for (const CauchyRow& row : cauchy_report(ladder)) {
      std::snprintf(buf, sizeof buf, "%g %g %.6e %.4f\n", row.N_small,
                    row.N_large, row.sigma_T, row.ratio);
      txt << buf;
    }
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  write_manifest(cfg, "completed", wall);
  return ladder;
}

std::vector<Vec3> field_check_samples(const ShieldGeometry& g) {
  std::vector<Vec3> pts;
  switch (g.kind) {
    case ShieldGeometry::Kind::Torus: {
      const double radii[] = {g.r0 + 0.05, g.r0 + 0.10, g.r0 + 0.15,
                              0.5 * (g.blend_r1 + g.blend_r2),
                              g.blend_r2 + 0.1};
      const double thetas[] = {0.3, 2.0, 4.5};
      const double alphas[] = {0.1, 1.7, 3.9, 5.2};
      for (double r : radii)
        for (double th : thetas)
          for (double al : alphas)
            pts.push_back(to_cartesian({r, th, al}, g.R));
      break;
    }
    case ShieldGeometry::Kind::Cylinder: {
      const double fracs[] = {0.46, 0.58, 0.70, 0.85};  // of A
      const double phis[] = {0.2, 1.4, 2.9, 4.4};
      const double x1s[] = {-1.0, 0.0, 2.0};
      for (double f : fracs)
        for (double ph : phis)
          for (double x1 : x1s)
            pts.push_back({x1, f * g.A * std::cos(ph), f * g.A * std::sin(ph)});
      break;
    }
    case ShieldGeometry::Kind::HalfSpace: {
      const double depths[] = {0.05, 0.2, 0.45 * g.L_cut, 0.7 * g.L_cut,
                               1.2 * g.L_cut};
      const double laterals[] = {-2.0, 0.0, 1.5};
      for (double d : depths)
        for (double y : laterals)
          for (double z : laterals) pts.push_back({-d, y, z});
      break;
    }
    case ShieldGeometry::Kind::None:
      pts.push_back({0.0, 0.0, 0.0});
      break;
  }
  return pts;
}

FieldCheckReport run_verify_fields(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const ShieldGeometry g = cfg.make_geometry();
  const std::vector<Vec3> pts = field_check_samples(g);

  FieldCheckReport rep;
  rep.n_samples = pts.size();
  rep.h = 1e-5;
  rep.curl_err = verify_curl(g, pts, rep.h);
  rep.div_err = verify_divergence(g, pts, rep.h);

  std::ofstream out(std::filesystem::path(cfg.out_dir) / "verify_fields.txt");
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "samples = %zu\nh = %g\nmax_rel_curl_err = %.6e\n"
                "max_rel_div_err = %.6e\n",
                rep.n_samples, rep.h, rep.curl_err, rep.div_err);
  out << buf;
  return rep;
}

}  // namespace vpshield
