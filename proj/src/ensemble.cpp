// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vpshield/errors.hpp"
#include "vpshield/rng.hpp"

namespace vpshield {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Vec3 random_direction(RngStream& rng) {
  const double c = 1.0 - 2.0 * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double phi = kTwoPi * rng.uniform();
  return {s * std::cos(phi), s * std::sin(phi), c};
}

/// Rejection sampler for the radial speed density p(s) = s^2 e^{-l s^q}
/// on (0, N]. log p is concave for q >= 1, so the exponential of the
/// tangent at any point majorizes p; the envelope is the tangent at each
/// segment midpoint, with analytic inversion per segment.
class SpeedSampler {
 public:
  SpeedSampler(double lambda, double q, double N)
      : lambda_(lambda), q_(q) {
    if (!(N > 0.0)) throw ConfigError("velocity cutoff must be positive");
    if (!(lambda > 0.0 && q >= 1.0))
      throw ConfigError("speed density requires lambda > 0 and q >= 1");
    constexpr int kSegments = 64;
    const double ds = N / kSegments;
    double cum = 0.0;
    for (int i = 0; i < kSegments; ++i) {
      Segment seg;
      seg.lo = i * ds;
      seg.hi = seg.lo + ds;
      const double sm = 0.5 * (seg.lo + seg.hi);
      seg.b = 2.0 / sm - lambda * q * std::pow(sm, q - 1.0);
      seg.a = log_p(sm) - seg.b * sm;
      // envelope mass over the segment
      double mass;
      const double bl = seg.b * seg.lo;
      const double bh = seg.b * seg.hi;
      if (std::abs(bh - bl) < 1e-12) {
        mass = std::exp(seg.a + 0.5 * (bl + bh)) * ds;
      } else {
        mass = std::exp(seg.a) * (std::exp(bh) - std::exp(bl)) / seg.b;
      }
      cum += mass;
      seg.cum = cum;
      segments_.push_back(seg);
    }
    total_ = cum;
  }

  double draw(RngStream& rng, std::size_t& proposals) {
    for (;;) {
      ++proposals;
      const double u = rng.uniform() * total_;
      const auto it = std::lower_bound(
          segments_.begin(), segments_.end(), u,
          [](const Segment& s, double val) { return s.cum < val; });
      const Segment& seg = it == segments_.end() ? segments_.back() : *it;
      const double w = rng.uniform();
      double s;
      const double el = std::exp(seg.b * seg.lo);
      const double eh = std::exp(seg.b * seg.hi);
      if (std::abs(eh - el) < 1e-300 || seg.b == 0.0) {
        s = seg.lo + w * (seg.hi - seg.lo);
      } else {
        s = std::log(el + w * (eh - el)) / seg.b;
      }
      if (s <= 0.0) continue;
      const double log_accept = log_p(s) - (seg.a + seg.b * s);
      if (std::log(std::max(rng.uniform(),
                            std::numeric_limits<double>::min())) <=
          log_accept)
        return s;
    }
  }

 private:
  struct Segment {
    double lo, hi, a, b, cum;
  };

  double log_p(double s) const {
    return 2.0 * std::log(s) - lambda_ * std::pow(s, q_);
  }

  double lambda_, q_;
  std::vector<Segment> segments_;
  double total_ = 0.0;
};

/// Radial position density s^2 g(s) with g(s) = min(1, (s/x_core)^-alpha),
/// truncated at R_dom. Closed-form inverse CDF.
class RadiusSampler {
 public:
  RadiusSampler(double alpha, double x_core, double R_dom)
      : alpha_(alpha), xc_(std::min(x_core, R_dom)), R_(R_dom) {
    core_mass_ = xc_ * xc_ * xc_ / 3.0;
    if (R_ > xc_) {
      if (alpha_ == 3.0) {
        tail_mass_ = std::pow(xc_, 3.0) * std::log(R_ / xc_);
      } else {
        tail_mass_ = std::pow(xc_, alpha_) *
                     (std::pow(R_, 3.0 - alpha_) -
                      std::pow(xc_, 3.0 - alpha_)) /
                     (3.0 - alpha_);
      }
    }
  }

  double draw(RngStream& rng) const {
    const double u = rng.uniform() * (core_mass_ + tail_mass_);
    if (u <= core_mass_ || tail_mass_ == 0.0) {
      return xc_ * std::cbrt(std::max(u, 0.0) / core_mass_);
    }
    const double w = (u - core_mass_) / tail_mass_;
    if (alpha_ == 3.0) return xc_ * std::pow(R_ / xc_, w);
    const double p = 3.0 - alpha_;
    return std::pow(std::pow(xc_, p) +
                        w * (std::pow(R_, p) - std::pow(xc_, p)),
                    1.0 / p);
  }

 private:
  double alpha_, xc_, R_;
  double core_mass_ = 0.0, tail_mass_ = 0.0;
};

/// Oscillatory on/off shell profile: the unit core plus shells
/// [2^k, 1.5*2^k) occupied at constant density 2^{-k alpha}, realizing a
/// per-unit-cell mass decay without a monotone density.
class ShellSampler {
 public:
  ShellSampler(double alpha, double R_dom) {
    bands_.push_back({0.0, std::min(1.0, R_dom), 1.0});
    for (int k = 0;; ++k) {
      const double lo = std::pow(2.0, k);
      const double hi = 1.5 * lo;
      if (hi > R_dom) break;
      bands_.push_back({lo, hi, std::pow(2.0, -k * alpha)});
    }
    double cum = 0.0;
    for (auto& b : bands_) {
      cum += b.density * (b.hi * b.hi * b.hi - b.lo * b.lo * b.lo) / 3.0;
      b.cum = cum;
    }
    total_ = cum;
  }

  double draw(RngStream& rng) const {
    const double u = rng.uniform() * total_;
    const auto it = std::lower_bound(
        bands_.begin(), bands_.end(), u,
        [](const Band& b, double val) { return b.cum < val; });
    const Band& b = it == bands_.end() ? bands_.back() : *it;
    const double w = rng.uniform();
    const double lo3 = b.lo * b.lo * b.lo;
    const double hi3 = b.hi * b.hi * b.hi;
    return std::cbrt(lo3 + w * (hi3 - lo3));
  }

 private:
  struct Band {
    double lo, hi, density;
    double cum = 0.0;
  };
  std::vector<Band> bands_;
  double total_ = 0.0;
};

}  // namespace

Ensemble sample_initial(const InitialData& init,
                        const std::vector<Species>& species,
                        const ShieldGeometry& geometry, std::uint64_t seed) {
  if (!(init.d0 > 0.0)) throw ConfigError("d0 must be positive");
  if (!(init.N_cut > 0.0))
    throw ConfigError("velocity cutoff N_cut must be positive");
  if (!(init.R_dom > 0.0)) throw ConfigError("R_dom must be positive");
  for (const Species& s : species) {
    if (s.sigma == 0.0) throw ConfigError("species sigma must be nonzero");
    if (!(s.weight > 0.0)) throw ConfigError("species weight must be positive");
  }

  Ensemble e;
  e.species = species;
  e.seed = seed;
  e.t = 0.0;

  SpeedSampler speeds(init.lambda, init.q, init.N_cut);
  RadiusSampler radii(init.alpha_decay, init.x_core, init.R_dom);
  ShellSampler shells(init.alpha_decay, init.R_dom);

  const RngStream root(seed);
  std::size_t v_proposals = 0, v_draws = 0;
  std::size_t x_proposals = 0, x_draws = 0;

  for (std::uint32_t si = 0; si < species.size(); ++si) {
    RngStream rng = root.substream(si);
    for (std::size_t k = 0; k < species[si].count; ++k) {
      Particle p;
      p.species_id = si;

      // position, rejecting points closer than d0 to the singular surface
      std::size_t tries = 0;
      for (;;) {
        ++x_proposals;
        if (++tries > 100000)
          throw ConfigError(
              "infeasible spatial support: standoff d0 rejects all samples");
        const double s = init.spatial_mode == SpatialMode::PowerLaw
                             ? radii.draw(rng)
                             : shells.draw(rng);
        const Vec3 x = s * random_direction(rng);
        if (norm(x) > init.R_dom) continue;
        if (barrier_distance(x, geometry) >= init.d0) {
          p.x = x;
          break;
        }
      }
      ++x_draws;

      const double speed = speeds.draw(rng, v_proposals);
      ++v_draws;
      p.v = speed * random_direction(rng);

      e.particles.push_back(p);
    }
  }

  e.stats.velocity_acceptance =
      v_proposals ? double(v_draws) / double(v_proposals) : 0.0;
  e.stats.position_acceptance =
      x_proposals ? double(x_draws) / double(x_proposals) : 0.0;
  return e;
}

Ensemble apply_cutoff(const Ensemble& e, double N) {
  Ensemble out;
  out.species = e.species;
  out.t = e.t;
  out.seed = e.seed;
  out.stats = e.stats;
  out.particles.reserve(e.particles.size());
  for (const Particle& p : e.particles)
    if (!(norm(p.v) > N)) out.particles.push_back(p);
  return out;
}

DensityGrid density_on_grid(const Ensemble& e, double cell,
                            const GridWindow& window) {
  if (!(cell > 0.0)) throw ConfigError("cell size must be positive");
  DensityGrid grid;
  grid.origin = window.lo;
  grid.cell = cell;
  grid.nx = static_cast<std::size_t>(
      std::max(0.0, std::ceil((window.hi.x - window.lo.x) / cell)));
  grid.ny = static_cast<std::size_t>(
      std::max(0.0, std::ceil((window.hi.y - window.lo.y) / cell)));
  grid.nz = static_cast<std::size_t>(
      std::max(0.0, std::ceil((window.hi.z - window.lo.z) / cell)));
  grid.values.assign(grid.nx * grid.ny * grid.nz, 0.0);
  const double inv_vol = 1.0 / (cell * cell * cell);
  for (const Particle& p : e.particles) {
    const double fx = (p.x.x - grid.origin.x) / cell;
    const double fy = (p.x.y - grid.origin.y) / cell;
    const double fz = (p.x.z - grid.origin.z) / cell;
    if (fx < 0 || fy < 0 || fz < 0) continue;
    const auto ix = static_cast<std::size_t>(fx);
    const auto iy = static_cast<std::size_t>(fy);
    const auto iz = static_cast<std::size_t>(fz);
    if (ix >= grid.nx || iy >= grid.ny || iz >= grid.nz) continue;
    const Species& s = e.species_of(p);
    grid.at(ix, iy, iz) += s.sigma * s.weight * inv_vol;
  }
  return grid;
}

double mean_spacing(const Ensemble& e) {
  if (e.particles.empty()) return 1.0;
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (const Particle& p : e.particles) {
    lo.x = std::min(lo.x, p.x.x);
    lo.y = std::min(lo.y, p.x.y);
    lo.z = std::min(lo.z, p.x.z);
    hi.x = std::max(hi.x, p.x.x);
    hi.y = std::max(hi.y, p.x.y);
    hi.z = std::max(hi.z, p.x.z);
  }
  const double vol = std::max(1e-300, (hi.x - lo.x) * (hi.y - lo.y) *
                                          (hi.z - lo.z));
  return std::cbrt(vol / double(e.particles.size()));
}

void save_ensemble(const Ensemble& e, const std::string& path,
                   const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open snapshot file: " + path);
  out << "species_id,x1,x2,x3,v1,v2,v3,weight\n";
  char buf[256];
  for (const Particle& p : e.particles) {
    std::snprintf(buf, sizeof buf,
                  "%u,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  p.species_id, p.x.x, p.x.y, p.x.z, p.v.x, p.v.y, p.v.z,
                  e.species_of(p).weight);
    out << buf;
  }
  std::ofstream meta(path + ".meta");
  meta << "seed = " << e.seed << "\n";
  meta << "config_hash = " << config_hash << "\n";
  char tbuf[64];
  std::snprintf(tbuf, sizeof tbuf, "%.17g", e.t);
  meta << "t = " << tbuf << "\n";
}

Ensemble load_ensemble(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot file: " + path);
  Ensemble e;
  std::string line;
  std::getline(in, line);  // header
  std::uint32_t max_id = 0;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Particle p;
    double w;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    row >> p.species_id >> p.x.x >> p.x.y >> p.x.z >> p.v.x >> p.v.y >>
        p.v.z >> w;
    if (!row) throw ConfigError("malformed snapshot row in " + path);
    max_id = std::max(max_id, p.species_id);
    if (weights.size() <= p.species_id) weights.resize(p.species_id + 1, 1.0);
    weights[p.species_id] = w;
    e.particles.push_back(p);
  }
  e.species.resize(max_id + 1);
  for (std::size_t i = 0; i < e.species.size(); ++i)
    e.species[i].weight = i < weights.size() ? weights[i] : 1.0;
  return e;
}

}  // namespace vpshield
