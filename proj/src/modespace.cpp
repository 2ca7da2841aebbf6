#include "shel/modespace.hpp"

#include <cmath>
#include <string>

#include "shel/errors.hpp"

namespace shel {

namespace {

constexpr double kImagResidue = 1e-14;

double checked_real(Complex value, double scale, const char* what)
{
    if (std::fabs(value.imag()) > kImagResidue * std::fmax(1.0, scale))
        throw NumericalError(std::string(what) + " has a non-negligible imaginary part");
    return value.real();
}

} // namespace

LadderCoefficients::LadderCoefficients(const BeamGeometry& geom, int order) : order_(order), kw0_(geom.kw0())
{
    if (order < 1) throw ValidationError("ladder coefficients need order >= 1");
}

double LadderCoefficients::B(int n, int p) const
{
    if (p == n + 1) return std::sqrt(static_cast<double>(p)) / kw0_;
    if (n == p + 1) return -std::sqrt(static_cast<double>(n)) / kw0_;
    return 0.0;
}

double LadderCoefficients::C(int n, int p) const
{
    if (p == n + 1) return 0.5 * kw0_ * std::sqrt(static_cast<double>(p));
    if (n == p + 1) return 0.5 * kw0_ * std::sqrt(static_cast<double>(n));
    return 0.0;
}

LadderCoefficients ladder_coefficients(const BeamGeometry& geom, int order) { return {geom, order}; }

Vec3 momentum_modespace(const ModeSuperposition& modes, const BeamGeometry& geom)
{
    const LadderCoefficients lc(geom, std::max(1, modes.populated_order() + 1));
    constexpr Complex minus_i{0.0, -1.0};
    Complex px{};
    Complex py{};
    double scale = 0.0;
    double pz = 0.0;
    for (const auto& [idx, c] : modes.coefficients()) {
        const auto [n, m] = idx;
        const Complex cc = std::conj(c);
        pz += std::norm(c);
        for (const int p : {n - 1, n + 1}) {
            if (p < 0) continue;
            const Complex t = cc * lc.B(n, p) * modes.coefficient(p, m);
            px += t;
            scale += std::abs(t);
        }
        for (const int q : {m - 1, m + 1}) {
            if (q < 0) continue;
            const Complex t = cc * lc.B(m, q) * modes.coefficient(n, q);
            py += t;
            scale += std::abs(t);
        }
    }
    return {checked_real(minus_i * px, scale, "P_x"), checked_real(minus_i * py, scale, "P_y"), pz};
}

Vec3 angular_momentum_modespace(const ModeSuperposition& modes, const BeamGeometry& geom, double sigma)
{
    const LadderCoefficients lc(geom, std::max(1, modes.populated_order() + 1));
    const double lambda_bar = geom.reduced_wavelength();
    constexpr Complex i{0.0, 1.0};
    Complex jx{};
    Complex jy{};
    Complex jz_orbital{};
    double pz = 0.0;
    double scale_perp = 0.0;
    double scale_z = 0.0;
    for (const auto& [idx, c] : modes.coefficients()) {
        const auto [n, m] = idx;
        const Complex cc = std::conj(c);
        pz += std::norm(c);
        for (const int q : {m - 1, m + 1}) {
            if (q < 0) continue;
            const Complex t = cc * lc.C(m, q) * modes.coefficient(n, q);
            jx += t;
            scale_perp += std::abs(t);
        }
        for (const int p : {n - 1, n + 1}) {
            if (p < 0) continue;
            const Complex t = cc * lc.C(n, p) * modes.coefficient(p, m);
            jy -= t;
            scale_perp += std::abs(t);
        }
        // -i sqrt(n q) with p = n-1, q = m+1
        if (n >= 1) {
            const Complex t = -i * std::sqrt(static_cast<double>(n) * (m + 1)) * cc * modes.coefficient(n - 1, m + 1);
            jz_orbital += t;
            scale_z += std::abs(t);
        }
        // +i sqrt(m p) with p = n+1, q = m-1
        if (m >= 1) {
            const Complex t = i * std::sqrt(static_cast<double>(m) * (n + 1)) * cc * modes.coefficient(n + 1, m - 1);
            jz_orbital += t;
            scale_z += std::abs(t);
        }
    }
    return {lambda_bar * checked_real(jx, scale_perp, "J_x"), lambda_bar * checked_real(jy, scale_perp, "J_y"),
            lambda_bar * (sigma * pz + checked_real(jz_orbital, scale_z, "J_z"))};
}

ThreeModeSummary three_mode_summary(Complex f00, Complex f01, Complex f10, double sigma, const BeamGeometry& geom)
{
    const double theta0 = geom.angular_spread();
    const double w0 = geom.waist();
    const double lambda_bar = geom.reduced_wavelength();
    const Complex c00 = std::conj(f00);
    ThreeModeSummary s;
    s.P = {theta0 * (c00 * f10).imag(), theta0 * (c00 * f01).imag(), std::norm(f00) + std::norm(f01) + std::norm(f10)};
    s.J = {w0 * (c00 * f01).real(), -w0 * (c00 * f10).real(),
           lambda_bar * sigma * s.P.z + 2.0 * lambda_bar * (std::conj(f10) * f01).imag()};
    return s;
}

ThreeModeSummary three_mode_summary(const ModeSuperposition& modes, double sigma, const BeamGeometry& geom)
{
    for (const auto& [idx, c] : modes.coefficients()) {
        const bool allowed = idx == ModeIndex{0, 0} || idx == ModeIndex{0, 1} || idx == ModeIndex{1, 0};
        if (!allowed && c != Complex{})
            throw ValidationError("three-mode summary only accepts psi_00, psi_01 and psi_10; found (" +
                                  std::to_string(idx.first) + "," + std::to_string(idx.second) + ")");
    }
    return three_mode_summary(modes.coefficient(0, 0), modes.coefficient(0, 1), modes.coefficient(1, 0), sigma, geom);
}

} // namespace shel
