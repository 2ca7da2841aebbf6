#pragma once

// Pointwise fields and momentum densities of a polarized paraxial beam.
// With k = omega = 1 and eps0 = 1 the densities come out in units of hbar k.

#include "shel/core_modes.hpp"
#include "shel/vec3.hpp"

namespace shel {

struct VectorFieldSample {
    CVec3 E;
    CVec3 B;
};

struct DensitySample {
    Point3 point;
    Vec3 p;
    Vec3 j;
};

/// Electric and magnetic field of the envelope f with Jones vector (alpha, beta).
VectorFieldSample vector_fields(const EnvelopeSample& env, const PolarizationState& pol);

/// Linear momentum density from the envelope; depends on the polarization only through sigma.
Vec3 momentum_density(const EnvelopeSample& env, double sigma, double k = 1.0);

/// j = r x p.
Vec3 angular_momentum_density(const Point3& point, const Vec3& p);

/// Evaluates p and j of a mode superposition at `point`.
DensitySample density_sample(const ModeSuperposition& modes, double sigma, const Point3& point,
                             const BeamGeometry& geom);

} // namespace shel
