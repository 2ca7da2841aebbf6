#pragma once

// A circularly (or linearly) polarized fundamental Gaussian whose propagation
// axis z' = R(theta, phi) z is tilted with respect to the observation axis z.
// The beam-frame momentum density p'(r') is mapped into the observation frame
// as p(r) = R p'(R^T r), and its centroid and moments are integrated over
// planes z = const.

#include <array>

#include "shel/core_modes.hpp"
#include "shel/quadrature.hpp"
#include "shel/vec3.hpp"

namespace shel {

inline constexpr double kDefaultMaxTilt = 1.4;

/// Polar tilt theta in [0, theta_max) and azimuth phi wrapped into [0, 2 pi).
/// theta_max may be raised up to pi for pure rotation work; everything that
/// involves tan(theta) additionally rejects theta >= pi/2.
class TiltFrame {
public:
    TiltFrame(double theta, double phi, double theta_max = kDefaultMaxTilt);

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    /// Beam axis z' = (sin t cos p, sin t sin p, cos t).
    Vec3 beam_axis() const;
    /// Unit normal to the plane spanned by z and z' (defined for theta = 0 by continuity).
    Vec3 incidence_normal() const;

private:
    double theta_;
    double phi_;
};

/// A proper orthogonal 3x3 matrix.
class RotationMatrix {
public:
    /// Throws ValidationError unless R^T R = I and det R = 1 within 1e-12.
    explicit RotationMatrix(const Mat3& m);

    const Mat3& matrix() const { return m_; }
    Vec3 apply(const Vec3& v) const { return m_ * v; }
    Vec3 apply_inverse(const Vec3& v) const;

private:
    Mat3 m_;
};

/// L_1, L_2, L_3 with [L_i]_{jk} = -epsilon_{ijk}, so that (n.L) v = n x v.
std::array<Mat3, 3> so3_generators();

/// n.L for a 3-vector n.
Mat3 generator_along(const Vec3& n);

/// exp(theta n.L) by the axis-angle closed form.
RotationMatrix rotation_matrix(const TiltFrame& frame);

/// exp(theta n.L) by a truncated power series with `terms` terms, combined with
/// scaling and squaring so that every series argument has norm <= 1/4.
Mat3 rotation_matrix_series(const TiltFrame& frame, int terms = 12);

/// p(r) of the tilted fundamental Gaussian with helicity sigma.
Vec3 rotated_momentum_density(double sigma, const BeamGeometry& geom, const TiltFrame& frame, const Point3& r);
Vec3 rotated_momentum_density(double sigma, const BeamGeometry& geom, const RotationMatrix& rot, const Point3& r);

/// Quadrature square for the plane z: centred where the beam axis crosses it and
/// widened by 1/cos(theta).
PlaneDomain tilted_domain(const BeamGeometry& geom, const TiltFrame& frame, double z, const QuadratureSpec& spec);

/// P, J and centroid of the tilted beam over the plane z.
BeamMoments tilted_moments_numeric(double sigma, const BeamGeometry& geom, const TiltFrame& frame, double z,
                                   const QuadratureSpec& spec = {});

Vec2 tilted_centroid_numeric(double sigma, const BeamGeometry& geom, const TiltFrame& frame, double z,
                             const QuadratureSpec& spec = {});

/// Leading-order centroid:
///   <x> = -lb (sigma/2) tan t sin p + z tan t cos p
///   <y> =  lb (sigma/2) tan t cos p + z tan t sin p
Vec2 tilted_centroid_closed(double sigma, const TiltFrame& frame, double z, const BeamGeometry& geom);

struct TiltedMomenta {
    Vec3 P_over_Pz;
    Vec3 J_over_Pz;
};

/// Leading-order P/P_z and J/P_z of the tilted beam (J in units of lambda_bar).
TiltedMomenta tilted_momenta_closed(double sigma, const TiltFrame& frame, double lambda_bar = 1.0);

/// The closed expression (sigma/2) sqrt(4 - sin^2 t) sec^2 t quoted for |J|/P_z.
double tilted_angular_momentum_norm_quoted(double sigma, const TiltFrame& frame, double lambda_bar = 1.0);

/// Normalised p_z profile along the line through the origin parallel to the
/// incidence normal, at coordinate s: exp(-2 (s/w0)^2) (1 + sigma theta0 (s/w0) tan t).
/// Valid at z = 0 and to leading order in theta0.
double spin_slice_profile_closed(double sigma, const BeamGeometry& geom, const TiltFrame& frame, double s);

} // namespace shel
