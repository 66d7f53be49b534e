// Copyright (c) 2026 vpshield contributors
// SPDX-License-Identifier: Apache-2.0

#include "vpshield/shield_fields.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "vpshield/errors.hpp"

namespace vpshield {

namespace {

// Adaptive Simpson quadrature; integrands here are smooth.
double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm, double whole, double tol,
               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, fa, b, fb, fm, whole, tol, 48);
}

// Rising C2 smoothstep, 0 at s=0 to 1 at s=1.
double rise(double s) { return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s); }

// Cylinder field intensity as a function of u = x2^2 + x3^2, defined on
// the inside u < A^2, cut off to zero below u = 0.25 A^2.
double cyl_intensity(double u, double A, double tau) {
  const double A2 = A * A;
  const double lo = 0.25 * A2;
  const double hi = 0.5 * A2;
  if (u <= lo) return 0.0;
  const double core = std::pow(A2 - u, -tau);
  if (u >= hi) return core;
  return core * rise((u - lo) / (hi - lo));
}

// Half-space field intensity as a function of the distance d = -x1 > 0,
// cut off to zero beyond d = L.
double half_intensity(double d, double L, double tau) {
  if (d >= L) return 0.0;
  const double core = std::pow(d, -tau);
  if (d <= 0.5 * L) return core;
  return core * blend_down((d - 0.5 * L) / (0.5 * L));
}

}  // namespace

double blend_down(double s) {
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double blend_down_prime(double s) {
  const double t = 1.0 - s;
  return -30.0 * s * s * t * t;
}

FieldProfile FieldProfile::from(const ShieldGeometry& torus) {
  FieldProfile p;
  p.tau = torus.tau;
  p.r0 = torus.r0;
  p.blend_r1 = torus.blend_r1;
  p.blend_r2 = torus.blend_r2;
  return p;
}

std::pair<double, double> profile_a(double r, const FieldProfile& p) {
  if (!(r > p.r0))
    throw SingularityError("profile_a evaluated at r <= r0");
  if (r >= p.blend_r2) return {0.0, 0.0};
  const double d = r - p.r0;
  const double core = std::pow(d, -p.tau);
  const double core_prime = -p.tau * std::pow(d, -p.tau - 1.0);
  if (r <= p.blend_r1) return {core, core_prime};
  const double band = p.blend_r2 - p.blend_r1;
  const double s = (r - p.blend_r1) / band;
  const double w = blend_down(s);
  const double wp = blend_down_prime(s) / band;
  return {core * w, core_prime * w + core * wp};
}

Vec3 vector_potential(const Vec3& x, const ShieldGeometry& g) {
  switch (g.kind) {
    case ShieldGeometry::Kind::None:
      return {};
    case ShieldGeometry::Kind::Torus: {
      const ToroidalPoint p = to_toroidal(x, g.R);
      if (!(p.r > g.r0))
        throw SingularityError("vector_potential inside the torus");
      if (p.r >= g.blend_r2) return {};
      const auto [a, a_prime] = profile_a(p.r, FieldProfile::from(g));
      (void)a_prime;
      const double w = g.R + p.r * std::cos(p.alpha);
      return (a / w) * frame_at(p).e_theta;
    }
    case ShieldGeometry::Kind::Cylinder: {
      const double r = std::hypot(x.y, x.z);
      if (!(r < g.A))
        throw SingularityError("vector_potential at or beyond the cylinder wall");
      // Azimuthal gauge around the x1 axis: A = (I(r)/r) phi_hat with
      // I(r) = int_{A/2}^{r} s H(s^2) ds, so that curl A = (H(r^2),0,0).
      const double half = 0.5 * g.A;
      if (r <= half) return {};
      const double knee = g.A / std::sqrt(2.0);
      double I = 0.0;
      const auto integrand = [&](double s) {
        return s * cyl_intensity(s * s, g.A, g.tau);
      };
      if (r <= knee) {
        I = integrate(integrand, half, r, 1e-14);
      } else {
        static thread_local double cached_A = -1.0, cached_tau = 0.0,
                                   cached_I = 0.0;
        if (cached_A != g.A || cached_tau != g.tau) {
          cached_I = integrate(integrand, half, knee, 1e-14);
          cached_A = g.A;
          cached_tau = g.tau;
        }
        const double A2 = g.A * g.A;
        double pure;
        if (g.tau == 1.0) {
          pure = 0.5 * (std::log(A2 - knee * knee) - std::log(A2 - r * r));
        } else {
          pure = (std::pow(A2 - r * r, 1.0 - g.tau) -
                  std::pow(A2 - knee * knee, 1.0 - g.tau)) /
                 (2.0 * (g.tau - 1.0));
        }
        I = cached_I + pure;
      }
      const Vec3 phi_hat{0.0, -x.z / r, x.y / r};
      return (I / r) * phi_hat;
    }
    case ShieldGeometry::Kind::HalfSpace: {
      const double d = -x.x;
      if (!(d > 0.0))
        throw SingularityError("vector_potential at or beyond the half-space wall");
      // A = (0, G(x1), 0) with dG/dx1 = B3(x1), so curl A = (0,0,B3).
      const double L = g.L_cut;
      double J;  // int_{ref}^{d} B3 with ref inside the pure region
      const auto integrand = [&](double s) {
        return half_intensity(s, L, g.tau);
      };
      if (d >= L) {
        static thread_local double cached_L = -1.0, cached_tau = 0.0,
                                   cached_J = 0.0;
        if (cached_L != L || cached_tau != g.tau) {
          cached_J = integrate(integrand, 0.5 * L, L, 1e-14);
          cached_L = L;
          cached_tau = g.tau;
        }
        J = cached_J;
      } else if (d > 0.5 * L) {
        J = integrate(integrand, 0.5 * L, d, 1e-14);
      } else if (g.tau == 1.0) {
        J = std::log(d) - std::log(0.5 * L);
      } else {
        J = (std::pow(d, 1.0 - g.tau) - std::pow(0.5 * L, 1.0 - g.tau)) /
            (1.0 - g.tau);
      }
      return {0.0, -J, 0.0};
    }
  }
  return {};
}

Vec3 magnetic_field(const Vec3& x, const ShieldGeometry& g) {
  switch (g.kind) {
    case ShieldGeometry::Kind::None:
      return {};
    case ShieldGeometry::Kind::Torus: {
      const ToroidalPoint p = to_toroidal(x, g.R);
      if (!(p.r > g.r0))
        throw SingularityError("magnetic_field inside the torus");
      if (p.r >= g.blend_r2) return {};
      const auto [a, a_prime] = profile_a(p.r, FieldProfile::from(g));
      (void)a;
      const double w = g.R + p.r * std::cos(p.alpha);
      return (a_prime / w) * frame_at(p).e_alpha;
    }
    case ShieldGeometry::Kind::Cylinder: {
      const double r2 = x.y * x.y + x.z * x.z;
      if (!(r2 < g.A * g.A))
        throw SingularityError("magnetic_field at or beyond the cylinder wall");
      return {cyl_intensity(r2, g.A, g.tau), 0.0, 0.0};
    }
    case ShieldGeometry::Kind::HalfSpace: {
      const double d = -x.x;
      if (!(d > 0.0))
        throw SingularityError("magnetic_field at or beyond the half-space wall");
      return {0.0, 0.0, half_intensity(d, g.L_cut, g.tau)};
    }
  }
  return {};
}

namespace {

// 4th-order central difference of a vector field component along axis k.
template <class F>
Vec3 partial(const F& field, const Vec3& x, int k, double h) {
  Vec3 e{};
  (k == 0 ? e.x : k == 1 ? e.y : e.z) = 1.0;
  const Vec3 f2p = field(x + 2.0 * h * e);
  const Vec3 f1p = field(x + h * e);
  const Vec3 f1m = field(x - h * e);
  const Vec3 f2m = field(x - 2.0 * h * e);
  return (1.0 / (12.0 * h)) *
         (-1.0 * f2p + 8.0 * f1p - 8.0 * f1m + 1.0 * f2m);
}

}  // namespace

double verify_curl(const ShieldGeometry& g, std::span<const Vec3> samples,
                   double h) {
  const auto A = [&](const Vec3& p) { return vector_potential(p, g); };
  double worst = 0.0;
  for (const Vec3& x : samples) {
    const Vec3 dA_dx = partial(A, x, 0, h);
    const Vec3 dA_dy = partial(A, x, 1, h);
    const Vec3 dA_dz = partial(A, x, 2, h);
    const Vec3 curl{dA_dy.z - dA_dz.y, dA_dz.x - dA_dx.z,
                    dA_dx.y - dA_dy.x};
    const Vec3 B = magnetic_field(x, g);
    const double nb = norm(B);
    const double err = nb > 0.0 ? norm(curl - B) / nb : norm(curl);
    worst = std::max(worst, err);
  }
  return worst;
}

double verify_divergence(const ShieldGeometry& g,
                         std::span<const Vec3> samples, double h) {
  const auto B = [&](const Vec3& p) { return magnetic_field(p, g); };
  double worst = 0.0;
  for (const Vec3& x : samples) {
    const double div =
        partial(B, x, 0, h).x + partial(B, x, 1, h).y + partial(B, x, 2, h).z;
    const double nb = norm(magnetic_field(x, g));
    const double err = nb > 0.0 ? std::abs(div) / nb : std::abs(div);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace vpshield
