// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "vpshield/config.hpp"
#include "vpshield/errors.hpp"
#include "vpshield/runner.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string geometry;
  double T = -1.0;
  std::int64_t seed = -1;
  int workers = -1;
  bool allow_violation = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
  auto* c = cmd->add_option("-c,--config", o.config_path,
                            "run configuration file");
  if (config_required) c->required();
  cmd->add_option("--out-dir", o.out_dir, "output directory override");
  cmd->add_option("--seed", o.seed, "RNG seed override");
  cmd->add_option("--workers", o.workers, "worker thread count override");
  cmd->add_option("--T", o.T, "final time override");
  cmd->add_option("--geometry", o.geometry,
                  "geometry override: torus|cylinder|halfspace|none");
  cmd->add_flag("--allow-hypothesis-violation", o.allow_violation,
                "accept configurations outside the validated parameter "
                "ranges (falsification runs)");
}

vpshield::RunConfig load(const CommonOpts& o) {
  vpshield::RunConfig cfg;
  if (!o.config_path.empty()) {
    // Pre-scan so that --allow-hypothesis-violation can rescue a config
    // that would fail validation during parsing.
    if (o.allow_violation) {
      std::ifstream in(o.config_path);
      if (!in)
        throw vpshield::ConfigError("cannot open config file: " +
                                    o.config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      cfg = vpshield::parse_config(
          buf.str() + "\n[run]\nallow_hypothesis_violation = true\n");
    } else {
      cfg = vpshield::parse_config_file(o.config_path);
    }
  }
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.workers >= 0) cfg.workers = static_cast<unsigned>(o.workers);
  if (o.T >= 0.0) cfg.T = o.T;
  if (o.allow_violation) cfg.allow_hypothesis_violation = true;
  if (!o.geometry.empty()) {
    using Kind = vpshield::ShieldGeometry::Kind;
    if (o.geometry == "torus") cfg.geometry_kind = Kind::Torus;
    else if (o.geometry == "cylinder") cfg.geometry_kind = Kind::Cylinder;
    else if (o.geometry == "halfspace") cfg.geometry_kind = Kind::HalfSpace;
    else if (o.geometry == "none") cfg.geometry_kind = Kind::None;
    else
      throw vpshield::ConfigError("unknown geometry: " + o.geometry);
  }
  vpshield::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle simulator for magnetically shielded plasmas"};
  app.require_subcommand(1);

  CommonOpts sim_o, conv_o, ver_o;
  CLI::App* sim = app.add_subcommand("simulate", "evolve an ensemble");
  add_common(sim, sim_o, true);
  CLI::App* conv =
      app.add_subcommand("convergence", "cutoff-convergence ladder study");
  add_common(conv, conv_o, true);
  CLI::App* ver = app.add_subcommand(
      "verify-fields", "finite-difference check of the external field");
  add_common(ver, ver_o, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const vpshield::RunConfig cfg = load(sim_o);
      const vpshield::SimulateSummary s = vpshield::run_simulate(cfg);
      std::printf("completed t=%.17g particles=%zu epsilon=%g out=%s\n",
                  s.final_state.t, s.final_state.particles.size(),
                  s.epsilon_used, cfg.out_dir.c_str());
    } else if (conv->parsed()) {
      const vpshield::RunConfig cfg = load(conv_o);
      const auto ladder = vpshield::run_convergence(cfg);
      for (const auto& row : vpshield::cauchy_report(ladder))
        std::printf("N=%g..%g sigma=%.6e ratio=%.4f\n", row.N_small,
                    row.N_large, row.sigma_T, row.ratio);
    } else {
      const vpshield::RunConfig cfg = load(ver_o);
      const vpshield::FieldCheckReport r = vpshield::run_verify_fields(cfg);
      std::printf("samples=%zu h=%g curl_err=%.6e div_err=%.6e\n",
                  r.n_samples, r.h, r.curl_err, r.div_err);
    }
  } catch (const vpshield::ConfigError& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 1;
  } catch (const vpshield::PenetrationError& ex) {
    std::fprintf(stderr,
                 "penetration: %s\n  x = (%.17g, %.17g, %.17g)\n  v = "
                 "(%.17g, %.17g, %.17g)\n",
                 ex.what(), ex.position.x, ex.position.y, ex.position.z,
                 ex.velocity.x, ex.velocity.y, ex.velocity.z);
    return 2;
  } catch (const vpshield::StiffnessError& ex) {
    std::fprintf(stderr, "stiffness: %s\n", ex.what());
    return 3;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
