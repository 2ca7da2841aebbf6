#include "shel/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shel/field_densities.hpp"
#include "shel/modespace.hpp"
#include "shel/tilt_frame.hpp"

namespace shel {

namespace {

CheckResult check(std::string name, double measured, double tolerance)
{
    return {std::move(name), measured, tolerance, std::isfinite(measured) && measured <= tolerance};
}

ModeSuperposition random_modes(std::mt19937_64& rng, int max_order, int count)
{
    std::uniform_int_distribution<int> idx(0, max_order);
    std::normal_distribution<double> g(0.0, 1.0);
    ModeSuperposition s;
    while (static_cast<int>(s.size()) < count) s.set(idx(rng), idx(rng), Complex{g(rng), g(rng)});
    return s.normalized();
}

PolarizationState random_polarization(std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    const Complex a{g(rng), g(rng)};
    const Complex b{g(rng), g(rng)};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

double rel(double a, double b, double floor)
{
    return std::fabs(a - b) / std::fmax(std::fabs(b), floor);
}

double orthonormality_error(const BeamGeometry& g, double z, const QuadratureSpec& spec)
{
    constexpr int order = 4;
    constexpr int modes = (order + 1) * (order + 1);
    constexpr int pairs = modes * (modes + 1) / 2;
    const auto sums = integrate_plane_n<2 * pairs>(
        [&](const Point3& p) {
            std::array<Complex, modes> psi{};
            for (int a = 0; a < modes; ++a) psi[a] = mode_amplitude(a / (order + 1), a % (order + 1), p, g);
            std::array<double, 2 * pairs> out{};
            int k = 0;
            for (int a = 0; a < modes; ++a)
                for (int b = a; b < modes; ++b, ++k) {
                    const Complex v = psi[a] * std::conj(psi[b]);
                    out[2 * k] = v.real();
                    out[2 * k + 1] = v.imag();
                }
            return out;
        },
        z, beam_domain(g, z, spec), spec);
    double worst = 0.0;
    int k = 0;
    for (int a = 0; a < modes; ++a)
        for (int b = a; b < modes; ++b, ++k) {
            const double expected = a == b ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(Complex{sums[2 * k], sums[2 * k + 1]} - expected));
        }
    return worst;
}

} // namespace

std::vector<CheckResult> run_invariant_suite(const QuadratureSpec& spec)
{
    std::vector<CheckResult> out;
    std::mt19937_64 rng(20240917);
    const BeamGeometry g(20.0);
    const double L = g.rayleigh_range();

    {
        double worst = 0.0;
        for (double z : {0.0, 0.5 * L, 3.0 * L}) worst = std::max(worst, orthonormality_error(g, z, spec));
        out.push_back(check("basis_orthonormality", worst, 1e-9));
    }

    {
        const BeamGeometry gp(12.0);
        std::uniform_real_distribution<double> pos(-1.5, 1.5);
        double worst_paraxial = 0.0;
        double worst_gradient = 0.0;
        int tested = 0;
        while (tested < 60) {
            const int n = tested % 4;
            const int m = (tested / 4) % 3;
            const double z = pos(rng) * gp.rayleigh_range();
            const double w = gp.spot_size(z);
            const Point3 p{pos(rng) * w, pos(rng) * w, z};
            const Complex f = mode_amplitude(n, m, p, gp);
            if (std::abs(f) < 1e-2 * std::abs(mode_amplitude(0, 0, {0, 0, z}, gp))) continue;
            auto at = [&](double x, double y, double zz) { return mode_amplitude(n, m, {x, y, zz}, gp); };
            const double hx = 0.02;
            const double hz = 0.05;
            const Complex fxx = (at(p.x + hx, p.y, p.z) - 2.0 * f + at(p.x - hx, p.y, p.z)) / (hx * hx);
            const Complex fyy = (at(p.x, p.y + hx, p.z) - 2.0 * f + at(p.x, p.y - hx, p.z)) / (hx * hx);
            const Complex fz = (at(p.x, p.y, p.z + hz) - at(p.x, p.y, p.z - hz)) / (2.0 * hz);
            const double k = gp.wavenumber();
            worst_paraxial = std::max(worst_paraxial, std::abs(fxx + fyy + Complex{0, 2 * k} * fz) / (k * k * std::abs(f)));

            const double h = 1e-5 * gp.waist();
            const TransverseGradient grad = mode_transverse_gradient(n, m, p, gp);
            const Complex dx = (at(p.x + h, p.y, p.z) - at(p.x - h, p.y, p.z)) / (2.0 * h);
            const Complex dy = (at(p.x, p.y + h, p.z) - at(p.x, p.y - h, p.z)) / (2.0 * h);
            const double scale = std::max(std::abs(grad.dx) + std::abs(grad.dy), std::abs(f) / w);
            worst_gradient = std::max(worst_gradient, (std::abs(grad.dx - dx) + std::abs(grad.dy - dy)) / scale);
            ++tested;
        }
        out.push_back(check("paraxial_equation_residual", worst_paraxial, 1e-5));
        out.push_back(check("gradient_vs_finite_difference", worst_gradient, 1e-6));
    }

    {
        std::uniform_real_distribution<double> pos(-2.0, 2.0);
        double worst_poynting = 0.0;
        double worst_rj = 0.0;
        double worst_sigma_only = 0.0;
        const double r = 1.0 / std::numbers::sqrt2;
        const PolarizationState pa{r, Complex{0, r}};
        const PolarizationState pb{Complex{0, r}, -r};
        for (int trial = 0; trial < 100; ++trial) {
            const ModeSuperposition modes = random_modes(rng, 3, 4);
            const PolarizationState pol = random_polarization(rng);
            const double z = pos(rng) * L;
            const Point3 p{pos(rng) * g.spot_size(z), pos(rng) * g.spot_size(z), z};
            const EnvelopeSample env = superposition_amplitude_and_gradient(modes, p, g);
            const VectorFieldSample fields = vector_fields(env, pol);
            const Vec3 poynting = real(cross(fields.E, conj(fields.B)));
            const Vec3 dens = momentum_density(env, helicity(pol));
            worst_poynting = std::max(worst_poynting, norm(dens - poynting) / norm(poynting));
            const Vec3 j = angular_momentum_density(p, dens);
            worst_rj = std::max(worst_rj, std::fabs(dot(p.vec(), j)) / (norm(p.vec()) * norm(j)));
            const Vec3 da = momentum_density(env, helicity(pa));
            const Vec3 db = momentum_density(env, helicity(pb));
            worst_sigma_only = std::max(worst_sigma_only, norm(da - db) / norm(da));
        }
        out.push_back(check("poynting_vs_envelope_density", worst_poynting, 1e-12));
        out.push_back(check("r_dot_j", worst_rj, 1e-12));
        out.push_back(check("helicity_only_dependence", worst_sigma_only, 1e-14));
    }

    {
        double worst_parts = 0.0;
        double worst_oracle = 0.0;
        double worst_zdep = 0.0;
        double worst_theorem = 0.0;
        std::uniform_real_distribution<double> sig(-1.0, 1.0);
        for (int trial = 0; trial < 5; ++trial) {
            const ModeSuperposition modes = random_modes(rng, 3, 6);
            const double s = sig(rng);
            const auto [r1, r2] = parts_relations_residuals(modes, g, 0.0, spec);
            worst_parts = std::max({worst_parts, r1, r2});
            const Vec3 P = momentum_modespace(modes, g);
            const Vec3 J = angular_momentum_modespace(modes, g, s);
            const BeamMoments m0 = momenta_numeric(modes, s, g, 0.0, spec);
            const BeamMoments m3 = momenta_numeric(modes, s, g, 3.0 * L, spec);
            for (int c = 0; c < 3; ++c) {
                worst_oracle = std::max({worst_oracle, rel(m0.P[c], P[c], 1e-6), rel(m0.J[c], J[c], 1e-6)});
                worst_zdep = std::max({worst_zdep, std::fabs(m3.P[c] - m0.P[c]), std::fabs(m3.J[c] - m0.J[c])});
            }
            worst_theorem = std::max({worst_theorem, std::fabs(m0.J.x / m0.P.z - m0.centroid.y),
                                      std::fabs(m0.J.y / m0.P.z + m0.centroid.x)});
        }
        out.push_back(check("integration_by_parts_residual", worst_parts, 1e-8));
        out.push_back(check("modespace_vs_quadrature", worst_oracle, 1e-6));
        out.push_back(check("moments_z_independence", worst_zdep, 1e-7));
        out.push_back(check("centroid_theorem", worst_theorem, 1e-7));
    }

    {
        double worst = 0.0;
        for (double s : {-1.0, 0.0, 1.0}) {
            const BeamMoments m = momenta_numeric(ModeSuperposition::laguerre_gauss_10(), s, g, 0.0, spec);
            worst = std::max({worst, std::fabs(m.J.z / m.P.z - (s + 1.0))});
        }
        out.push_back(check("lg10_angular_momentum", worst, 1e-8));
    }

    {
        std::uniform_real_distribution<double> th(0.0, 1.39);
        std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
        double worst_orth = 0.0;
        double worst_series = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const TiltFrame f(th(rng), ph(rng));
            const Mat3 R = rotation_matrix(f).matrix();
            worst_orth = std::max({worst_orth, max_abs_diff(R.transposed() * R, Mat3::identity()),
                                   std::fabs(R.determinant() - 1.0), norm(R * Vec3{0, 0, 1} - f.beam_axis())});
            worst_series = std::max(worst_series, max_abs_diff(R, rotation_matrix_series(f)));
        }
        out.push_back(check("rotation_orthogonality", worst_orth, 1e-12));
        out.push_back(check("rodrigues_vs_series", worst_series, 1e-12));
    }

    {
        const BeamGeometry gt(200.0);
        double worst_shift = 0.0;
        double worst_momenta = 0.0;
        for (double theta : {0.1, 0.3, 0.6}) {
            const TiltFrame f(theta, 0.0);
            const BeamMoments m = tilted_moments_numeric(1.0, gt, f, 0.0, spec);
            const double expected = 0.5 * std::tan(theta);
            worst_shift = std::max(worst_shift, std::fabs(m.centroid.y - expected) / expected);
            const TiltedMomenta c = tilted_momenta_closed(1.0, f);
            worst_momenta = std::max({worst_momenta, rel(m.P.x / m.P.z, c.P_over_Pz.x, 1.0),
                                      rel(m.J.x / m.P.z, c.J_over_Pz.x, 1.0), rel(m.J.z / m.P.z, c.J_over_Pz.z, 1.0)});
        }
        out.push_back(check("geometric_spin_hall_shift", worst_shift, 0.01));
        out.push_back(check("tilted_momenta_closed_form", worst_momenta, 0.01));
    }

    return out;
}

} // namespace shel
