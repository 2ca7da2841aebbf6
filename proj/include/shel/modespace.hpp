#pragma once

// Closed-form P and J of a Hermite-Gaussian superposition, written as
// quadratic forms over the coefficients f_nm with banded ladder matrices.

#include "shel/core_modes.hpp"
#include "shel/vec3.hpp"

namespace shel {

/// B_np = (sqrt(p) d_{p,n+1} - sqrt(n) d_{n,p+1}) / (k w0)
/// C_np = (k w0 / 2) (sqrt(p) d_{p,n+1} + sqrt(n) d_{n,p+1})
/// Only the first off-diagonals are nonzero; B is antisymmetric and C symmetric.
class LadderCoefficients {
public:
    LadderCoefficients(const BeamGeometry& geom, int order);

    int order() const { return order_; }
    double B(int n, int p) const;
    double C(int n, int p) const;

private:
    int order_;
    double kw0_;
};

LadderCoefficients ladder_coefficients(const BeamGeometry& geom, int order);

Vec3 momentum_modespace(const ModeSuperposition& modes, const BeamGeometry& geom);

Vec3 angular_momentum_modespace(const ModeSuperposition& modes, const BeamGeometry& geom, double sigma);

struct ThreeModeSummary {
    Vec3 P;
    Vec3 J;
};

/// Shortcut formulas for f = f00 psi_00 + f01 psi_01 + f10 psi_10.
///
/// The transverse angular momentum follows the general quadratic form: a real
/// psi_01 admixture shifts the beam along y and feeds J_x, a real psi_10
/// admixture feeds J_y with the opposite sign.
ThreeModeSummary three_mode_summary(Complex f00, Complex f01, Complex f10, double sigma, const BeamGeometry& geom);

/// As above, reading the coefficients from `modes`; throws ValidationError if any
/// mode other than (0,0), (0,1), (1,0) is populated.
ThreeModeSummary three_mode_summary(const ModeSuperposition& modes, double sigma, const BeamGeometry& geom);

} // namespace shel
