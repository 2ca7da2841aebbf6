#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "shel/field_densities.hpp"

using namespace shel;

namespace {

double rel_vec(const Vec3& a, const Vec3& b)
{
    return norm(a - b) / std::fmax(norm(b), 1e-300);
}

PolarizationState random_polarization(std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    const Complex a{g(rng), g(rng)};
    const Complex b{g(rng), g(rng)};
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, b / n};
}

} // namespace

TEST_SUITE("field_densities")
{
    TEST_CASE("vector fields vanish with the envelope")
    {
        const VectorFieldSample s = vector_fields({}, PolarizationState::circular(1));
        CHECK(std::abs(s.E.x) + std::abs(s.E.y) + std::abs(s.E.z) == 0.0);
        CHECK(std::abs(s.B.x) + std::abs(s.B.y) + std::abs(s.B.z) == 0.0);
    }

    TEST_CASE("x-polarized plane-wave limit")
    {
        const Complex f{0.3, -0.4};
        const VectorFieldSample s = vector_fields({f, 0.0, 0.0}, PolarizationState::linear_x());
        CHECK(std::abs(s.E.x - Complex{0, 1} * f) < 1e-16);
        CHECK(std::abs(s.E.y) == 0.0);
        CHECK(std::abs(s.E.z) == 0.0);
        CHECK(std::abs(s.B.y - Complex{0, 1} * f) < 1e-16);
        CHECK(std::abs(s.B.x) == 0.0);
    }

    TEST_CASE("transverse field ratios for diagonal polarizations")
    {
        const double r = 1.0 / std::numbers::sqrt2;
        const VectorFieldSample s = vector_fields({0.7, 0.1, -0.2}, PolarizationState{r, Complex{0, r}});
        CHECK(std::abs(s.E.x / s.E.y) == doctest::Approx(std::abs(s.B.y / s.B.x)));
    }

    TEST_CASE("Re[E x B*] reproduces the momentum density")
    {
        const BeamGeometry g(18.0);
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> pos(-2.0, 2.0);
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            const ModeSuperposition modes = oracle::random_superposition(rng, 3, 4);
            const PolarizationState pol = random_polarization(rng);
            const double z = pos(rng) * g.rayleigh_range();
            const Point3 p{pos(rng) * g.spot_size(z), pos(rng) * g.spot_size(z), z};
            const EnvelopeSample env = superposition_amplitude_and_gradient(modes, p, g);
            const VectorFieldSample fields = vector_fields(env, pol);
            const Vec3 ref = oracle::poynting_momentum(fields.E, fields.B);
            worst = std::fmax(worst, rel_vec(momentum_density(env, helicity(pol)), ref));
        }
        CHECK(worst < 1e-12);
    }

    TEST_CASE("fundamental Gaussian at the waist")
    {
        const BeamGeometry g(20.0);
        const ModeSuperposition f00 = ModeSuperposition::fundamental();
        const Point3 off{3.0, -2.0, 0.0};
        const DensitySample lin = density_sample(f00, 0.0, off, g);
        CHECK(lin.p.x == 0.0);
        CHECK(lin.p.y == 0.0);
        CHECK(lin.p.z == doctest::Approx(std::norm(mode_amplitude(0, 0, off, g))));

        const Point3 half{0.0, g.waist() / 2.0, 0.0};
        const DensitySample circ = density_sample(f00, 1.0, half, g);
        CHECK(circ.p.x / circ.p.z == doctest::Approx(-g.angular_spread() / 2.0).epsilon(1e-13));

        const DensitySample flipped = density_sample(f00, -1.0, half, g);
        CHECK(flipped.p.x == -circ.p.x);
        CHECK(flipped.p.y == -circ.p.y);
        CHECK(flipped.p.z == circ.p.z);
    }

    TEST_CASE("angular momentum density edge cases")
    {
        const Vec3 p{0.3, -0.2, 1.1};
        CHECK(angular_momentum_density({0, 0, 0}, p) == Vec3{});
        const Vec3 j = angular_momentum_density({0.6, -0.4, 2.2}, p);
        CHECK(norm(j) == doctest::Approx(0.0));
    }

    TEST_CASE("r x p equals the expanded envelope form and is orthogonal to r")
    {
        const BeamGeometry g(16.0);
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> pos(-2.0, 2.0);
        std::uniform_real_distribution<double> sig(-1.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const ModeSuperposition modes = oracle::random_superposition(rng, 3, 3);
            const double sigma = sig(rng);
            const double z = pos(rng) * g.rayleigh_range();
            const Point3 r{pos(rng) * g.spot_size(z), pos(rng) * g.spot_size(z), z};
            const EnvelopeSample e = superposition_amplitude_and_gradient(modes, r, g);
            const DensitySample s = density_sample(modes, sigma, r, g);

            const Complex fx = e.f * std::conj(e.dx);
            const Complex fy = e.f * std::conj(e.dy);
            const double f2 = std::norm(e.f);
            const Vec3 expanded{r.y * f2 + r.z * fy.imag() + r.z * sigma * fx.real(),
                                -r.x * f2 - r.z * fx.imag() + r.z * sigma * fy.real(),
                                -r.x * fy.imag() + r.y * fx.imag() - sigma * (r.x * fx.real() + r.y * fy.real())};
            CHECK(rel_vec(s.j, expanded) < 1e-12);
            CHECK(std::fabs(dot(r.vec(), s.j)) <= 1e-12 * norm(r.vec()) * norm(s.j));
            CHECK(s.p.z >= 0.0);
        }
    }

    TEST_CASE("polarizations with equal helicity give identical densities")
    {
        const double r = 1.0 / std::numbers::sqrt2;
        const PolarizationState a{r, Complex{0, r}};
        const PolarizationState b{Complex{0, r}, -r};
        REQUIRE(helicity(a) == doctest::Approx(helicity(b)).epsilon(1e-16));
        const BeamGeometry g(20.0);
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> pos(-2.0, 2.0);
        for (int trial = 0; trial < 100; ++trial) {
            const ModeSuperposition modes = oracle::random_superposition(rng, 3, 3);
            const double z = pos(rng) * g.rayleigh_range();
            const Point3 pt{pos(rng) * g.spot_size(z), pos(rng) * g.spot_size(z), z};
            const DensitySample da = density_sample(modes, helicity(a), pt, g);
            const DensitySample db = density_sample(modes, helicity(b), pt, g);
            CHECK(norm(da.p - db.p) <= 1e-14 * norm(da.p));
            CHECK(norm(da.j - db.j) <= 1e-14 * norm(da.j));

            // Through the field route as well: only sigma survives in Re[E x B*].
            const EnvelopeSample e = superposition_amplitude_and_gradient(modes, pt, g);
            const VectorFieldSample fa = vector_fields(e, a);
            const VectorFieldSample fb = vector_fields(e, b);
            const Vec3 pa = oracle::poynting_momentum(fa.E, fa.B);
            const Vec3 pb = oracle::poynting_momentum(fb.E, fb.B);
            CHECK(norm(pa - pb) <= 1e-14 * norm(pa));
        }
    }

    TEST_CASE("helicity outside [-1, 1] is rejected")
    {
        CHECK_THROWS(momentum_density({1.0, 0.0, 0.0}, 1.5));
    }
}
