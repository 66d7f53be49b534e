// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <vector>

#include "vpshield/dynamics.hpp"
#include "vpshield/ensemble.hpp"

namespace vpshield {

/// Gap history between two cutoff dynamics started from identical data.
struct PairRunReport {
  double N_small = 0.0;
  double N_large = 0.0;
  double delta = 0.0;  ///< final sup position gap over the common set
  double eta = 0.0;    ///< final sup velocity gap
  double sigma = 0.0;  ///< delta + eta
  std::vector<double> times;
  std::vector<double> delta_series;
  std::vector<double> eta_series;
  std::vector<double> sigma_series;
};

/// Evolve apply_cutoff(base, N_small) and apply_cutoff(base, N_large) in
/// lockstep with identical dt and softening, recording at each macro step
/// the sup of the position and velocity gaps over matched particles with
/// initial |v| <= N_small.
PairRunReport run_pair(const Ensemble& base, double N_small, double N_large,
                       const ShieldGeometry& g, const FieldParams& fp,
                       const StepPolicy& sp, double T);

struct CauchyRow {
  double N_small = 0.0;
  double N_large = 0.0;
  double sigma_T = 0.0;
  double ratio = 0.0;  ///< sigma of this rung over the previous rung
};

/// Table of final-time gaps across a ladder of pair runs; only monotone
/// decrease is meaningful, rates involve unknowable constants.
std::vector<CauchyRow> cauchy_report(
    const std::vector<PairRunReport>& ladder);

/// CSV: N_small, N_large, t, delta, eta, sigma for every rung and step.
void write_pair_csv(std::ostream& out,
                    const std::vector<PairRunReport>& ladder);

}  // namespace vpshield
