// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/selffield.hpp"

#include <cmath>

#include "vpshield/parallel.hpp"

namespace vpshield {

Vec3 efield_at(const Vec3& x, const Ensemble& e, const FieldParams& p,
               std::optional<std::size_t> skip) {
  const double eps2 = p.epsilon * p.epsilon;
  Vec3 field{};
  for (std::size_t j = 0; j < e.particles.size(); ++j) {
    if (skip && *skip == j) continue;
    const Particle& src = e.particles[j];
    const Vec3 d = x - src.x;
    const double r2 = norm2(d) + eps2;
    if (r2 == 0.0) continue;  // unsoftened self-coincident point
    const double inv = 1.0 / (r2 * std::sqrt(r2));
    const Species& s = e.species_of(src);
    field += (s.sigma * s.weight * inv) * d;
  }
  return field;
}

std::vector<Vec3> efield_all(const Ensemble& e, const FieldParams& p) {
  std::vector<Vec3> out(e.particles.size());
  parallel_for(e.particles.size(), p.workers, [&](std::size_t k) {
    out[k] = efield_at(e.particles[k].x, e, p, k);
  });
  return out;
}

double potential_energy(const Ensemble& e, const FieldParams& p) {
  const double eps2 = p.epsilon * p.epsilon;
  const std::size_t n = e.particles.size();
  std::vector<double> partial(n, 0.0);
  parallel_for(n, p.workers, [&](std::size_t j) {
    const Particle& a = e.particles[j];
    const Species& sa = e.species_of(a);
    double acc = 0.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      const Particle& b = e.particles[k];
      const Species& sb = e.species_of(b);
      const double r = std::sqrt(norm2(a.x - b.x) + eps2);
      if (r == 0.0) continue;
      acc += sa.sigma * sb.sigma * sa.weight * sb.weight / r;
    }
    partial[j] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;  // fixed order
  return total;
}

}  // namespace vpshield
