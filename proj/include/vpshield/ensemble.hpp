// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vpshield/geometry.hpp"
#include "vpshield/vec3.hpp"

namespace vpshield {

/// One plasma species: signed charge per unit mass, macro-particle
/// weight and particle count.
struct Species {
  double sigma = 1.0;
  double weight = 1.0;
  std::size_t count = 0;
};

enum class SpatialMode { PowerLaw, CellBounded };

/// Parameters of the initial-data classes used as scenario generators.
struct InitialData {
  double lambda = 1.0;       ///< velocity decay rate
  double q = 4.0;            ///< velocity decay exponent
  double alpha_decay = 3.5;  ///< spatial decay exponent
  double C0 = 1.0;           ///< amplitude (bookkeeping only)
  double d0 = 0.2;           ///< standoff distance from the shield
  double N_cut = 6.0;        ///< velocity cutoff
  double R_dom = 40.0;       ///< domain truncation radius
  double x_core = 1.0;       ///< radius where the spatial profile flattens
  SpatialMode spatial_mode = SpatialMode::PowerLaw;
};

struct Particle {
  Vec3 x;
  Vec3 v;
  std::uint32_t species_id = 0;
};

struct SamplingStats {
  double velocity_acceptance = 0.0;
  double position_acceptance = 0.0;
};

/// Weighted macro-particle realization of the species distributions.
struct Ensemble {
  std::vector<Particle> particles;
  std::vector<Species> species;
  double t = 0.0;
  std::uint64_t seed = 0;
  SamplingStats stats;

  std::size_t size() const { return particles.size(); }
  const Species& species_of(const Particle& p) const {
    return species[p.species_id];
  }
};

/// Draw an ensemble from the configured initial-data class. Velocities
/// come from a rejection sampler (piecewise-exponential tangent envelope)
/// for the radial density s^2 exp(-lambda s^q) truncated at N_cut;
/// positions from the spatial profile restricted to
/// {barrier_distance >= d0} and |x| <= R_dom. Deterministic per seed.
Ensemble sample_initial(const InitialData& init,
                        const std::vector<Species>& species,
                        const ShieldGeometry& geometry, std::uint64_t seed);

/// Remove particles with |v| > N, preserving order and metadata.
/// An infinite N is the identity.
Ensemble apply_cutoff(const Ensemble& e, double N);

/// Axis-aligned sampling window for density estimation.
struct GridWindow {
  Vec3 lo;
  Vec3 hi;
};

struct DensityGrid {
  Vec3 origin;
  double cell = 1.0;
  std::size_t nx = 0, ny = 0, nz = 0;
  std::vector<double> values;  // x-major: ((ix*ny)+iy)*nz+iz

  double& at(std::size_t ix, std::size_t iy, std::size_t iz) {
    return values[(ix * ny + iy) * nz + iz];
  }
  double at(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return values[(ix * ny + iy) * nz + iz];
  }
};

/// Charge-weighted histogram estimator of the spatial density.
DensityGrid density_on_grid(const Ensemble& e, double cell,
                            const GridWindow& window);

/// Crude mean inter-particle spacing (bounding-box volume per particle,
/// cube root); used for the default Coulomb softening.
double mean_spacing(const Ensemble& e);

/// Snapshot I/O: CSV with header species_id,x1,x2,x3,v1,v2,v3,weight and
/// a sidecar "<path>.meta" with seed, config hash and time.
void save_ensemble(const Ensemble& e, const std::string& path,
                   const std::string& config_hash);
Ensemble load_ensemble(const std::string& path);

}  // namespace vpshield
