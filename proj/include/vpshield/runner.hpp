// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "vpshield/config.hpp"
#include "vpshield/convergence.hpp"
#include "vpshield/diagnostics.hpp"
#include "vpshield/ensemble.hpp"

namespace vpshield {

inline constexpr const char* kVersion = "0.1.0";

/// Outcome of a full simulate run. Files written to cfg.out_dir:
/// manifest.txt, diagnostics.csv, snapshot_<k>.csv (+ .meta), final.csv.
struct SimulateSummary {
  Ensemble final_state;
  std::vector<DiagRecord> records;
  double epsilon_used = 0.0;
};

/// Build the initial ensemble for a config (scenario sampling or the
/// single-particle state) and resolve the softening parameter.
Ensemble build_initial(const RunConfig& cfg);
double resolve_epsilon(const RunConfig& cfg, const Ensemble& e);

/// Evolve to cfg.T with per-macro-step diagnostics and snapshot output.
/// Throws PenetrationError / StiffnessError; the manifest then keeps
/// status = aborted with the exception message.
SimulateSummary run_simulate(const RunConfig& cfg);

/// Cutoff-convergence study over cfg.ladder: pairs (N, 2N) from one base
/// ensemble drawn with a cutoff of at least twice the largest rung.
/// Writes convergence.csv and cauchy.txt to cfg.out_dir.
std::vector<PairRunReport> run_convergence(const RunConfig& cfg);

struct FieldCheckReport {
  std::size_t n_samples = 0;
  double h = 0.0;
  double curl_err = 0.0;
  double div_err = 0.0;
};

/// Finite-difference consistency check of the external field at a
/// deterministic sample set for the configured geometry. Writes
/// verify_fields.txt to cfg.out_dir.
FieldCheckReport run_verify_fields(const RunConfig& cfg);

/// Deterministic probe points outside (torus, half-space) or inside
/// (cylinder) the singular surface, all at barrier distance >= 10 h.
std::vector<Vec3> field_check_samples(const ShieldGeometry& g);

}  // namespace vpshield
