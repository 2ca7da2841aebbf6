#pragma once

// Hermite-Gaussian mode basis for paraxial beams.
//
// Internal units: lengths are measured in reduced wavelengths 1/k. The
// wavenumber is kept as an explicit field but every constructor helper
// defaults it to 1.

#include <cstddef>
#include <map>
#include <utility>

#include "shel/vec3.hpp"

namespace shel {

inline constexpr int kMaxHermiteOrder = 64;
inline constexpr int kDefaultMaxOrder = 8;
inline constexpr double kDefaultMaxAngularSpread = 0.2;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 vec() const { return {x, y, z}; }
    static Point3 from(const Vec3& v) { return {v.x, v.y, v.z}; }
};

/// Waist and wavenumber of a Gaussian beam plus the scales derived from them.
class BeamGeometry {
public:
    /// `kw0` is the dimensionless product k*w0. Throws ValidationError when
    /// the angular spread 2/(k w0) reaches `max_angular_spread`.
    explicit BeamGeometry(double kw0, double k = 1.0, double max_angular_spread = kDefaultMaxAngularSpread);

    double waist() const { return w0_; }
    double wavenumber() const { return k_; }
    double kw0() const { return k_ * w0_; }
    double rayleigh_range() const { return 0.5 * k_ * w0_ * w0_; }
    double reduced_wavelength() const { return 1.0 / k_; }
    double angular_spread() const { return 2.0 / (k_ * w0_); }
    double spot_size(double z) const;

private:
    double w0_;
    double k_;
};

/// Transverse Jones vector u = alpha x + beta y.
class PolarizationState {
public:
    /// Throws ValidationError unless |alpha|^2 + |beta|^2 = 1 within 1e-12.
    PolarizationState(Complex alpha, Complex beta);

    static PolarizationState linear_x() { return {1.0, 0.0}; }
    /// sigma = +1 for `handedness` > 0, -1 otherwise.
    static PolarizationState circular(int handedness);
    /// A real-helicity representative: cos(a) x + i sin(a) y with sin(2a) = sigma.
    static PolarizationState from_helicity(double sigma);

    Complex alpha() const { return alpha_; }
    Complex beta() const { return beta_; }

private:
    Complex alpha_;
    Complex beta_;
};

/// sigma = i (alpha beta* - alpha* beta).
double helicity(const PolarizationState& pol);

using ModeIndex = std::pair<int, int>;

/// Sparse Hermite-Gaussian coefficients f_nm. Iteration is n-major, m-minor.
class ModeSuperposition {
public:
    explicit ModeSuperposition(int max_order = kDefaultMaxOrder);

    /// Sets f_nm, replacing any previous value. Throws on indices outside [0, max_order].
    ModeSuperposition& set(int n, int m, Complex value);
    Complex coefficient(int n, int m) const;

    const std::map<ModeIndex, Complex>& coefficients() const { return coeffs_; }
    int max_order() const { return max_order_; }
    /// Largest n or m actually populated.
    int populated_order() const;
    bool empty() const { return coeffs_.empty(); }
    std::size_t size() const { return coeffs_.size(); }

    /// Sum of |f_nm|^2.
    double norm_squared() const;
    /// Copy scaled so that the norm is 1. Throws when the norm vanishes.
    ModeSuperposition normalized() const;
    ModeSuperposition scaled(Complex factor) const;

    static ModeSuperposition fundamental();
    /// LG^1_0 as (psi_10 + i psi_01)/sqrt(2).
    static ModeSuperposition laguerre_gauss_10();

private:
    int max_order_;
    std::map<ModeIndex, Complex> coeffs_;
};

/// H_n(u) by the three-term recurrence. n must be in [0, 64].
double hermite_eval(int n, double u);

/// psi_nm(r) with the normalisation, Gouy phase and complex Gaussian factor of
/// the standard Hermite-Gaussian family.
Complex mode_amplitude(int n, int m, const Point3& point, const BeamGeometry& geom);

struct TransverseGradient {
    Complex dx;
    Complex dy;
};

TransverseGradient mode_transverse_gradient(int n, int m, const Point3& point, const BeamGeometry& geom);

struct EnvelopeSample {
    Complex f;
    Complex dx;
    Complex dy;
};

/// f = sum f_nm psi_nm together with its analytic transverse gradient.
EnvelopeSample superposition_amplitude_and_gradient(const ModeSuperposition& modes, const Point3& point,
                                                    const BeamGeometry& geom);

} // namespace shel
