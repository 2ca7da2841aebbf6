#include "shel/tilt_frame.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shel/errors.hpp"
#include "shel/field_densities.hpp"

namespace shel {

namespace {

constexpr double kRotationTolerance = 1e-12;

double levi_civita(int i, int j, int k)
{
    if (i == j || j == k || i == k) return 0.0;
    // even permutations of (0, 1, 2)
    return ((i == 0 && j == 1) || (i == 1 && j == 2) || (i == 2 && j == 0)) ? 1.0 : -1.0;
}

void require_finite_tangent(const TiltFrame& frame)
{
    if (!(frame.theta() < std::numbers::pi / 2.0))
        throw ValidationError("tilt theta = " + std::to_string(frame.theta()) +
                              " reaches pi/2 where tan(theta) diverges");
}

} // namespace

TiltFrame::TiltFrame(double theta, double phi, double theta_max) : theta_(theta)
{
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw ValidationError("tilt angles must be finite");
    if (theta < 0.0) throw ValidationError("tilt theta must be non-negative");
    if (!(theta < theta_max))
        throw ValidationError("tilt theta = " + std::to_string(theta) + " must stay below " +
                              std::to_string(theta_max) + " rad: the tilted centroid grows like tan(theta)");
    if (!(theta_max <= std::numbers::pi)) throw ValidationError("theta_max must not exceed pi");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi_ = std::fmod(phi, two_pi);
    if (phi_ < 0.0) phi_ += two_pi;
    if (phi_ >= two_pi) phi_ = 0.0;
}

Vec3 TiltFrame::beam_axis() const
{
    const double s = std::sin(theta_);
    return {s * std::cos(phi_), s * std::sin(phi_), std::cos(theta_)};
}

Vec3 TiltFrame::incidence_normal() const { return {-std::sin(phi_), std::cos(phi_), 0.0}; }

RotationMatrix::RotationMatrix(const Mat3& m) : m_(m)
{
    if (max_abs_diff(m.transposed() * m, Mat3::identity()) > kRotationTolerance)
        throw ValidationError("rotation matrix is not orthogonal");
    if (std::fabs(m.determinant() - 1.0) > kRotationTolerance)
        throw ValidationError("rotation matrix does not have unit determinant");
}

Vec3 RotationMatrix::apply_inverse(const Vec3& v) const { return m_.transposed() * v; }

std::array<Mat3, 3> so3_generators()
{
    std::array<Mat3, 3> L{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) L[i](j, k) = -levi_civita(i, j, k);
    return L;
}

Mat3 generator_along(const Vec3& n)
{
    const auto L = so3_generators();
    return n.x * L[0] + n.y * L[1] + n.z * L[2];
}

RotationMatrix rotation_matrix(const TiltFrame& frame)
{
    const double t = frame.theta();
    if (t == 0.0) return RotationMatrix(Mat3::identity());
    const Mat3 K = generator_along(frame.incidence_normal());
    return RotationMatrix(Mat3::identity() + std::sin(t) * K + (1.0 - std::cos(t)) * (K * K));
}

Mat3 rotation_matrix_series(const TiltFrame& frame, int terms)
{
    if (terms < 1) throw ValidationError("series needs at least one term");
    const Mat3 A = frame.theta() * generator_along(frame.incidence_normal());
    // ||A|| = theta for a unit axis.
    int squarings = 0;
    double scale = 1.0;
    while (frame.theta() * scale > 0.25) {
        scale *= 0.5;
        ++squarings;
    }
    const Mat3 a = scale * A;
    Mat3 sum = Mat3::identity();
    Mat3 term = Mat3::identity();
    for (int k = 1; k < terms; ++k) {
        term = (1.0 / k) * (term * a);
        sum = sum + term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

Vec3 rotated_momentum_density(double sigma, const BeamGeometry& geom, const RotationMatrix& rot, const Point3& r)
{
    static const ModeSuperposition fundamental = ModeSuperposition::fundamental();
    const Point3 beam_point = Point3::from(rot.apply_inverse(r.vec()));
    const EnvelopeSample env = superposition_amplitude_and_gradient(fundamental, beam_point, geom);
    return rot.apply(momentum_density(env, sigma, geom.wavenumber()));
}

Vec3 rotated_momentum_density(double sigma, const BeamGeometry& geom, const TiltFrame& frame, const Point3& r)
{
    return rotated_momentum_density(sigma, geom, rotation_matrix(frame), r);
}

PlaneDomain tilted_domain(const BeamGeometry& geom, const TiltFrame& frame, double z, const QuadratureSpec& spec)
{
    require_finite_tangent(frame);
    const double c = std::cos(frame.theta());
    const double t = std::tan(frame.theta());
    // The beam axis meets the plane z at distance z / cos(theta) from the waist.
    const double half_width = spec.half_width_factor * geom.spot_size(z / c) / c;
    return {z * t * std::cos(frame.phi()), z * t * std::sin(frame.phi()), half_width};
}

BeamMoments tilted_moments_numeric(double sigma, const BeamGeometry& geom, const TiltFrame& frame, double z,
                                   const QuadratureSpec& spec)
{
    if (!(sigma >= -1.0 && sigma <= 1.0)) throw ValidationError("helicity must lie in [-1, 1]");
    const RotationMatrix rot = rotation_matrix(frame);
    const PlaneDomain domain = tilted_domain(geom, frame, z, spec);
    const auto sums = integrate_plane_n<8>(
        [&](const Point3& pt) {
            const Vec3 p = rotated_momentum_density(sigma, geom, rot, pt);
            const Vec3 j = cross(pt.vec(), p);
            return std::array<double, 8>{p.x, p.y, p.z, j.x, j.y, j.z, pt.x * p.z, pt.y * p.z};
        },
        z, domain, spec);
    if (!(sums[2] > 0.0)) throw NumericalError("vanishing total flux P_z through the observation plane");
    BeamMoments m;
    m.P = {sums[0], sums[1], sums[2]};
    m.J = {sums[3], sums[4], sums[5]};
    m.centroid = {sums[6] / sums[2], sums[7] / sums[2]};
    m.z = z;
    return m;
}

Vec2 tilted_centroid_numeric(double sigma, const BeamGeometry& geom, const TiltFrame& frame, double z,
                             const QuadratureSpec& spec)
{
    return tilted_moments_numeric(sigma, geom, frame, z, spec).centroid;
}

Vec2 tilted_centroid_closed(double sigma, const TiltFrame& frame, double z, const BeamGeometry& geom)
{
    require_finite_tangent(frame);
    const double lb = geom.reduced_wavelength();
    const double t = std::tan(frame.theta());
    const double cp = std::cos(frame.phi());
    const double sp = std::sin(frame.phi());
    return {-lb * 0.5 * sigma * t * sp + z * t * cp, lb * 0.5 * sigma * t * cp + z * t * sp};
}

TiltedMomenta tilted_momenta_closed(double sigma, const TiltFrame& frame, double lambda_bar)
{
    require_finite_tangent(frame);
    const double t = std::tan(frame.theta());
    const double s = std::sin(frame.theta());
    const double c = std::cos(frame.theta());
    const double cp = std::cos(frame.phi());
    const double sp = std::sin(frame.phi());
    const double spin = lambda_bar * 0.5 * sigma;
    return {{t * cp, t * sp, 1.0}, {spin * t * cp, spin * t * sp, spin * (2.0 - s * s) / (c * c)}};
}

double tilted_angular_momentum_norm_quoted(double sigma, const TiltFrame& frame, double lambda_bar)
{
    const double s = std::sin(frame.theta());
    const double c = std::cos(frame.theta());
    return lambda_bar * 0.5 * std::fabs(sigma) * std::sqrt(4.0 - s * s) / (c * c);
}

double spin_slice_profile_closed(double sigma, const BeamGeometry& geom, const TiltFrame& frame, double s)
{
    const double u = s / geom.waist();
    return std::exp(-2.0 * u * u) * (1.0 + sigma * geom.angular_spread() * u * std::tan(frame.theta()));
}

} // namespace shel
