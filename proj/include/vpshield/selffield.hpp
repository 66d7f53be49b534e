// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vpshield/ensemble.hpp"
#include "vpshield/vec3.hpp"

namespace vpshield {

/// Regularization of the Coulomb kernel. epsilon = 0 is permitted only
/// for analytic few-body tests.
struct FieldParams {
  double epsilon = 0.0;
  unsigned workers = 0;  ///< 0 = hardware concurrency
};

/// Softened Coulomb field at x:
///   sum_{j != skip} sigma_j w_j (x - x_j) / (|x - x_j|^2 + eps^2)^{3/2}.
/// Summation in particle-index order.
Vec3 efield_at(const Vec3& x, const Ensemble& e, const FieldParams& p,
               std::optional<std::size_t> skip = std::nullopt);

/// Field at every particle with self-interaction excluded. Parallel over
/// targets; each target's sum runs in fixed index order, so the result is
/// bit-identical to per-particle efield_at calls for any worker count.
std::vector<Vec3> efield_all(const Ensemble& e, const FieldParams& p);

/// Pairwise interaction energy
///   1/2 sum_{j != k} sigma_j sigma_k w_j w_k / sqrt(|x_j-x_k|^2 + eps^2).
double potential_energy(const Ensemble& e, const FieldParams& p);

}  // namespace vpshield
