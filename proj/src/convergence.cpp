// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vpshield/errors.hpp"

namespace vpshield {

PairRunReport run_pair(const Ensemble& base, double N_small, double N_large,
                       const ShieldGeometry& g, const FieldParams& fp,
                       const StepPolicy& sp, double T) {
  if (!(N_small <= N_large))
    throw ConfigError("run_pair requires N_small <= N_large");

  // Positions of the common particles (initial |v| <= N_small) inside
  // each cutoff ensemble. apply_cutoff preserves order, so both lists
  // enumerate the same base particles.
  std::vector<std::size_t> in_small, in_large;
  {
    std::size_t ks = 0, kl = 0;
    for (const Particle& p : base.particles) {
      const double s = norm(p.v);
      const bool small = !(s > N_small);
      const bool large = !(s > N_large);
      if (small) {
        in_small.push_back(ks);
        in_large.push_back(kl);
      }
      if (small) ++ks;
      if (large) ++kl;
    }
  }

  PairRunReport rep;
  rep.N_small = N_small;
  rep.N_large = N_large;

  Simulation sim_small(apply_cutoff(base, N_small), g, fp, sp);
  Simulation sim_large(apply_cutoff(base, N_large), g, fp, sp);

  const auto record = [&](double t) {
    double d = 0.0, h = 0.0;
    const auto& ps = sim_small.ensemble().particles;
    const auto& pl = sim_large.ensemble().particles;
    for (std::size_t i = 0; i < in_small.size(); ++i) {
      d = std::max(d, norm(ps[in_small[i]].x - pl[in_large[i]].x));
      h = std::max(h, norm(ps[in_small[i]].v - pl[in_large[i]].v));
    }
    rep.times.push_back(t);
    rep.delta_series.push_back(d);
    rep.eta_series.push_back(h);
    rep.sigma_series.push_back(d + h);
  };

  record(0.0);
  const double t_end = base.t + T;
  while (sim_small.time() < t_end - 1e-15 * std::max(1.0, std::abs(t_end))) {
    const double dt = std::min(sp.dt_macro, t_end - sim_small.time());
    sim_small.macro_step(dt);
    sim_large.macro_step(dt);
    record(sim_small.time());
  }

  rep.delta = rep.delta_series.back();
  rep.eta = rep.eta_series.back();
  rep.sigma = rep.sigma_series.back();
  return rep;
}

std::vector<CauchyRow> cauchy_report(
    const std::vector<PairRunReport>& ladder) {
  std::vector<CauchyRow> rows;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    CauchyRow row;
    row.N_small = ladder[i].N_small;
    row.N_large = ladder[i].N_large;
    row.sigma_T = ladder[i].sigma;
    row.ratio = i == 0 ? 1.0
                       : (ladder[i - 1].sigma > 0.0
                              ? ladder[i].sigma / ladder[i - 1].sigma
                              : 0.0);
    rows.push_back(row);
  }
  return rows;
}

void write_pair_csv(std::ostream& out,
                    const std::vector<PairRunReport>& ladder) {
  out << "N_small,N_large,t,delta,eta,sigma\n";
  char buf[192];
  for (const PairRunReport& r : ladder) {
    for (std::size_t i = 0; i < r.times.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%g,%g,%.17g,%.17g,%.17g,%.17g\n",
                    r.N_small, r.N_large, r.times[i], r.delta_series[i],
                    r.eta_series[i], r.sigma_series[i]);
      out << buf;
    }
  }
}

}  // namespace vpshield
