#include "shel/field_densities.hpp"

#include "shel/errors.hpp"

namespace shel {

VectorFieldSample vector_fields(const EnvelopeSample& env, const PolarizationState& pol)
{
    constexpr Complex i{0.0, 1.0};
    constexpr double omega = 1.0;
    constexpr double k = 1.0;
    const Complex a = pol.alpha();
    const Complex b = pol.beta();
    VectorFieldSample s;
    s.E = {i * omega * a * env.f, i * omega * b * env.f, i * omega * i * (a * env.dx + b * env.dy)};
    s.B = {-i * k * b * env.f, i * k * a * env.f, -i * k * i * (b * env.dx - a * env.dy)};
    return s;
}

Vec3 momentum_density(const EnvelopeSample& env, double sigma, double k)
{
    if (!(sigma >= -1.0 && sigma <= 1.0)) throw ValidationError("helicity must lie in [-1, 1]");
    const Complex fx = env.f * std::conj(env.dx);
    const Complex fy = env.f * std::conj(env.dy);
    return {(-fx.imag() + sigma * fy.real()) / k, (-fy.imag() - sigma * fx.real()) / k, std::norm(env.f)};
}

Vec3 angular_momentum_density(const Point3& point, const Vec3& p) { return cross(point.vec(), p); }

DensitySample density_sample(const ModeSuperposition& modes, double sigma, const Point3& point,
                             const BeamGeometry& geom)
{
    const EnvelopeSample env = superposition_amplitude_and_gradient(modes, point, geom);
    const Vec3 p = momentum_density(env, sigma, geom.wavenumber());
    return {point, p, angular_momentum_density(point, p)};
}

} // namespace shel
