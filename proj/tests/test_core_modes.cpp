#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "shel/core_modes.hpp"
#include "shel/errors.hpp"
#include "shel/quadrature.hpp"

using namespace shel;

TEST_SUITE("core_modes")
{
    TEST_CASE("hermite_eval reproduces low orders")
    {
        CHECK(hermite_eval(0, 3.7) == 1.0);
        CHECK(hermite_eval(2, 1.0) == doctest::Approx(2.0));
        CHECK(hermite_eval(3, 0.5) == doctest::Approx(-5.0));
    }

    TEST_CASE("hermite_eval agrees with the explicit power sum")
    {
        for (int n = 0; n <= 20; ++n)
            for (double u : {-2.3, -0.7, 0.0, 0.4, 1.9}) {
                const double ref = oracle::hermite_explicit(n, u);
                CHECK(hermite_eval(n, u) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
            }
    }

    TEST_CASE("hermite_eval rejects orders above the cutoff")
    {
        CHECK_NOTHROW(hermite_eval(64, 0.3));
        CHECK_THROWS_AS(hermite_eval(65, 0.3), ValidationError);
        CHECK_THROWS_AS(hermite_eval(-1, 0.3), ValidationError);
    }

    TEST_CASE("geometry scales")
    {
        const BeamGeometry g(20.0);
        CHECK(g.waist() == 20.0);
        CHECK(g.rayleigh_range() == 200.0);
        CHECK(g.angular_spread() == doctest::Approx(0.1));
        CHECK(g.reduced_wavelength() == 1.0);
        CHECK(g.spot_size(0.0) == 20.0);
        CHECK(g.spot_size(200.0) == doctest::Approx(20.0 * std::sqrt(2.0)));
        CHECK_THROWS_AS(BeamGeometry(10.0), ValidationError); // theta0 = 0.2
        CHECK_THROWS_AS(BeamGeometry(-1.0), ValidationError);
        CHECK_NOTHROW(BeamGeometry(5.0, 1.0, 0.5));
    }

    TEST_CASE("mode_amplitude at the waist centre")
    {
        const BeamGeometry g(1.0, 1.0, 3.0);
        CHECK(std::abs(mode_amplitude(0, 0, {0, 0, 0}, g) - Complex{0.7978845608028654, 0.0}) < 1e-15);
        CHECK(std::abs(mode_amplitude(1, 0, {0.0, 0.37, 0.0}, g)) == 0.0);
        CHECK(std::abs(mode_amplitude(1, 0, {0.0, -1.2, 4.0}, g)) == 0.0);
    }

    TEST_CASE("mode_amplitude matches a direct transcription")
    {
        const BeamGeometry g(12.0);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> pos(-25.0, 25.0);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = trial % 6;
            const int m = (trial / 6) % 5;
            const Point3 p{pos(rng), pos(rng), 3.0 * pos(rng)};
            const Complex a = mode_amplitude(n, m, p, g);
            const Complex b = oracle::hg_direct(n, m, p.x, p.y, p.z, g.waist());
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(b) + 1e-300);
        }
    }

    TEST_CASE("|psi_21|^2 integrates to one at z = 1.5 L (Simpson oracle)")
    {
        const BeamGeometry g(16.0);
        const double z = 1.5 * g.rayleigh_range();
        const double h = 8.0 * g.spot_size(z);
        const Complex total = oracle::simpson_plane(
            [&](double x, double y) { return std::norm(oracle::hg_direct(2, 1, x, y, z, g.waist())); }, 0.0, 0.0, h,
            400);
        CHECK(total.real() == doctest::Approx(1.0).epsilon(1e-9));
    }

    TEST_CASE("orthonormality for orders <= 4 at several z")
    {
        const BeamGeometry g(16.0);
        const QuadratureSpec spec;
        for (double z : {0.0, 0.5 * g.rayleigh_range(), 3.0 * g.rayleigh_range()}) {
            const PlaneDomain dom = beam_domain(g, z, spec);
            double worst = 0.0;
            for (int n = 0; n <= 4; ++n)
                for (int m = 0; m <= 4; ++m)
                    for (int p = 0; p <= 4; ++p)
                        for (int q = 0; q <= 4; ++q) {
                            if (p * 5 + q < n * 5 + m) continue;
                            const Complex v = integrate_plane_complex(
                                [&](const Point3& pt) {
                                    return mode_amplitude(n, m, pt, g) * std::conj(mode_amplitude(p, q, pt, g));
                                },
                                z, dom, spec);
                            const double expected = (n == p && m == q) ? 1.0 : 0.0;
                            worst = std::fmax(worst, std::abs(v - expected));
                        }
            CHECK(worst < 1e-9);
        }
    }

    TEST_CASE("analytic gradient matches central differences")
    {
        const BeamGeometry g(14.0);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> pos(-2.0, 2.0);
        const double h = 1e-5 * g.waist();
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const int n = trial % 5;
            const int m = (trial / 5) % 4;
            const double z = pos(rng) * g.rayleigh_range();
            const double w = g.spot_size(z);
            const Point3 p{pos(rng) * w, pos(rng) * w, z};
            const TransverseGradient grad = mode_transverse_gradient(n, m, p, g);
            const Complex fdx = oracle::central_difference(
                [&](double x) { return mode_amplitude(n, m, {x, p.y, p.z}, g); }, p.x, h);
            const Complex fdy = oracle::central_difference(
                [&](double y) { return mode_amplitude(n, m, {p.x, y, p.z}, g); }, p.y, h);
            // Scale: the larger of |grad| and the natural gradient size |psi|/w.
            const double scale = std::fmax(std::abs(grad.dx) + std::abs(grad.dy),
                                           std::abs(mode_amplitude(n, m, p, g)) / w);
            worst = std::fmax(worst, (std::abs(grad.dx - fdx) + std::abs(grad.dy - fdy)) / scale);
        }
        CHECK(worst < 1e-6);
    }

    TEST_CASE("fundamental gradient at the waist")
    {
        const BeamGeometry g(20.0);
        const TransverseGradient origin = mode_transverse_gradient(0, 0, {0, 0, 0}, g);
        CHECK(std::abs(origin.dx) == 0.0);
        CHECK(std::abs(origin.dy) == 0.0);
        const double x = 7.5;
        const TransverseGradient gx = mode_transverse_gradient(0, 0, {x, 0, 0}, g);
        const Complex expected = -(2.0 * x / (g.waist() * g.waist())) * mode_amplitude(0, 0, {x, 0, 0}, g);
        CHECK(std::abs(gx.dx - expected) < 1e-15);
    }

    TEST_CASE("modes satisfy the paraxial wave equation")
    {
        const BeamGeometry g(12.0);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> pos(-1.5, 1.5);
        const double k = g.wavenumber();
        double worst = 0.0;
        int tested = 0;
        while (tested < 100) {
            const int n = tested % 4;
            const int m = (tested / 4) % 3;
            const double z = pos(rng) * g.rayleigh_range();
            const double w = g.spot_size(z);
            const Point3 p{pos(rng) * w, pos(rng) * w, z};
            const Complex f = mode_amplitude(n, m, p, g);
            const double peak = std::abs(mode_amplitude(0, 0, {0, 0, z}, g));
            if (std::abs(f) < 1e-2 * peak) continue; // near a nodal line the relative residual is meaningless
            const double hx = 0.02;
            const double hz = 0.05;
            const Complex fxx = oracle::second_difference(
                [&](double x) { return mode_amplitude(n, m, {x, p.y, p.z}, g); }, p.x, hx);
            const Complex fyy = oracle::second_difference(
                [&](double y) { return mode_amplitude(n, m, {p.x, y, p.z}, g); }, p.y, hx);
            const Complex fz = oracle::central_difference(
                [&](double zz) { return mode_amplitude(n, m, {p.x, p.y, zz}, g); }, p.z, hz);
            const Complex residual = fxx + fyy + Complex{0.0, 2.0 * k} * fz;
            worst = std::fmax(worst, std::abs(residual) / (k * k * std::abs(f)));
            ++tested;
        }
        CHECK(worst < 1e-5);
    }

    TEST_CASE("superposition is linear in the coefficients")
    {
        const BeamGeometry g(20.0);
        const Point3 origin{0, 0, 0};
        ModeSuperposition two;
        two.set(0, 0, 1.0 / std::numbers::sqrt2).set(1, 0, 1.0 / std::numbers::sqrt2);
        const EnvelopeSample s = superposition_amplitude_and_gradient(two, origin, g);
        CHECK(std::abs(s.f - mode_amplitude(0, 0, origin, g) / std::numbers::sqrt2) < 1e-16);

        const EnvelopeSample single = superposition_amplitude_and_gradient(ModeSuperposition::fundamental(),
                                                                           {3.0, -4.0, 50.0}, g);
        const TransverseGradient gr = mode_transverse_gradient(0, 0, {3.0, -4.0, 50.0}, g);
        CHECK(std::abs(single.f - mode_amplitude(0, 0, {3.0, -4.0, 50.0}, g)) < 1e-16);
        CHECK(std::abs(single.dx - gr.dx) < 1e-16);
        CHECK(std::abs(single.dy - gr.dy) < 1e-16);

        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> pos(-30.0, 30.0);
        for (int trial = 0; trial < 20; ++trial) {
            const ModeSuperposition modes = oracle::random_superposition(rng, 3, 3);
            const Point3 p{pos(rng), pos(rng), 10.0 * pos(rng)};
            Complex f{}, dx{}, dy{};
            for (const auto& [idx, c] : modes.coefficients()) {
                f += c * mode_amplitude(idx.first, idx.second, p, g);
                const TransverseGradient t = mode_transverse_gradient(idx.first, idx.second, p, g);
                dx += c * t.dx;
                dy += c * t.dy;
            }
            const EnvelopeSample s2 = superposition_amplitude_and_gradient(modes, p, g);
            const double sc = std::abs(mode_amplitude(0, 0, {0, 0, p.z}, g));
            CHECK(std::abs(s2.f - f) < 1e-14 * sc);
            CHECK(std::abs(s2.dx - dx) < 1e-14 * sc);
            CHECK(std::abs(s2.dy - dy) < 1e-14 * sc);
        }
    }

    TEST_CASE("empty superposition is rejected")
    {
        const BeamGeometry g(20.0);
        CHECK_THROWS_AS(superposition_amplitude_and_gradient(ModeSuperposition{}, {0, 0, 0}, g), ValidationError);
        ModeSuperposition s(2);
        CHECK_THROWS_AS(s.set(3, 0, 1.0), ValidationError);
        CHECK_THROWS_AS(ModeSuperposition{}.normalized(), ValidationError);
    }

    TEST_CASE("coefficient iteration is n-major then m-minor")
    {
        ModeSuperposition s;
        s.set(2, 0, 1.0).set(0, 3, 1.0).set(1, 1, 1.0).set(0, 1, 1.0);
        std::vector<ModeIndex> order;
        for (const auto& [idx, c] : s.coefficients()) order.push_back(idx);
        CHECK(order == std::vector<ModeIndex>{{0, 1}, {0, 3}, {1, 1}, {2, 0}});
    }

    TEST_CASE("helicity of standard polarizations")
    {
        const double r = 1.0 / std::numbers::sqrt2;
        CHECK(helicity(PolarizationState{1.0, 0.0}) == 0.0);
        CHECK(helicity(PolarizationState{r, Complex{0.0, r}}) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(helicity(PolarizationState{r, Complex{0.0, -r}}) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(helicity(PolarizationState::from_helicity(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
        CHECK_THROWS_AS(PolarizationState(1.0, 1.0), ValidationError);
    }

    TEST_CASE("helicity is invariant under a global phase")
    {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
        for (int trial = 0; trial < 50; ++trial) {
            // Build states whose components are exactly representable after rotation by a
            // quarter-turn phase, for which complex multiplication is exact.
            const double a = ang(rng);
            const PolarizationState base{std::cos(a), Complex{std::sin(a) * std::cos(a), std::sin(a) * std::sin(a)}};
            const double sb = helicity(base);
            for (const Complex phase : {Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}}) {
                const PolarizationState rotated{phase * base.alpha(), phase * base.beta()};
                CHECK(helicity(rotated) == sb);
            }
            const Complex generic = std::polar(1.0, ang(rng));
            const PolarizationState g2{generic * base.alpha(), generic * base.beta()};
            CHECK(helicity(g2) == doctest::Approx(sb).epsilon(1e-15).scale(1.0));
        }
    }
}
