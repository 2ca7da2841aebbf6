#pragma once

// Tensor Gauss-Legendre integration over a square patch of a transverse plane,
// and the beam moments built on it.
//
// Rows of the tensor grid are summed independently (possibly on several
// threads) and then combined by a fixed pairwise reduction, so a result only
// depends on the node count, never on the thread count.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "shel/core_modes.hpp"
#include "shel/errors.hpp"
#include "shel/vec3.hpp"

namespace shel {

struct QuadratureSpec {
    double half_width_factor = 8.0;
    int nodes_per_axis = 201;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;

    /// Throws ValidationError unless nodes_per_axis is odd and >= 21 and half_width_factor >= 5.
    void validate() const;
    /// Same spec with 2n+1 nodes per axis.
    QuadratureSpec refined() const;
};

/// Axis-aligned square [cx - h, cx + h] x [cy - h, cy + h] in a plane z = const.
struct PlaneDomain {
    double center_x = 0.0;
    double center_y = 0.0;
    double half_width = 1.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct BeamMoments {
    Vec3 P;
    Vec3 J;
    Vec2 centroid;
    double z = 0.0;
};

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

/// Square of half-width c * w(z) * widen centred on (cx, cy).
PlaneDomain beam_domain(const BeamGeometry& geom, double z, const QuadratureSpec& spec, double widen = 1.0,
                        double center_x = 0.0, double center_y = 0.0);

namespace detail {

/// Calls row(i) for i in [0, rows) on up to `threads` workers; rethrows the first failure.
void for_each_row(int rows, unsigned threads, const std::function<void(int)>& row);

template <std::size_t N>
std::array<double, N> pairwise_sum(const std::vector<std::array<double, N>>& parts, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) return parts[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    auto a = pairwise_sum(parts, lo, mid);
    const auto b = pairwise_sum(parts, mid, hi);
    for (std::size_t c = 0; c < N; ++c) a[c] += b[c];
    return a;
}

[[noreturn]] void throw_non_finite(const Point3& p);

} // namespace detail

/// Integrates a vector-valued sampler `Point3 -> std::array<double, N>` over `domain` at height z.
template <std::size_t N, class Sampler>
std::array<double, N> integrate_plane_n(Sampler&& sampler, double z, const PlaneDomain& domain,
                                        const QuadratureSpec& spec)
{
    spec.validate();
    const GaussLegendreRule rule = gauss_legendre(spec.nodes_per_axis);
    const int n = spec.nodes_per_axis;
    const double h = domain.half_width;
    std::vector<std::array<double, N>> rows(static_cast<std::size_t>(n));
    detail::for_each_row(n, spec.threads, [&](int i) {
        const double x = domain.center_x + h * rule.nodes[i];
        std::array<double, N> acc{};
        for (int j = 0; j < n; ++j) {
            const Point3 p{x, domain.center_y + h * rule.nodes[j], z};
            const std::array<double, N> v = sampler(p);
            for (std::size_t c = 0; c < N; ++c) {
                if (!std::isfinite(v[c])) detail::throw_non_finite(p);
                acc[c] += rule.weights[j] * v[c];
            }
        }
        for (std::size_t c = 0; c < N; ++c) acc[c] *= rule.weights[i] * h * h;
        rows[i] = acc;
    });
    return detail::pairwise_sum(rows, 0, rows.size());
}

/// Scalar integral of a real sampler.
template <class Sampler>
double integrate_plane(Sampler&& sampler, double z, const PlaneDomain& domain, const QuadratureSpec& spec)
{
    return integrate_plane_n<1>([&](const Point3& p) { return std::array<double, 1>{sampler(p)}; }, z, domain,
                                spec)[0];
}

/// Integral of a complex sampler.
template <class Sampler>
std::complex<double> integrate_plane_complex(Sampler&& sampler, double z, const PlaneDomain& domain,
                                             const QuadratureSpec& spec)
{
    const auto r = integrate_plane_n<2>(
        [&](const Point3& p) {
            const std::complex<double> v = sampler(p);
            return std::array<double, 2>{v.real(), v.imag()};
        },
        z, domain, spec);
    return {r[0], r[1]};
}

/// Relative change of a scalar integral when the node count goes from n to 2n+1.
template <class Sampler>
double convergence_change(Sampler&& sampler, double z, const PlaneDomain& domain, const QuadratureSpec& spec)
{
    const double coarse = integrate_plane(sampler, z, domain, spec);
    const double fine = integrate_plane(sampler, z, domain, spec.refined());
    const double scale = std::fmax(std::fabs(fine), 1e-300);
    return std::fabs(fine - coarse) / scale;
}

/// Intensity centroid <r_perp> at height z.
Vec2 centroid(const ModeSuperposition& modes, const PolarizationState& pol, const BeamGeometry& geom, double z,
              const QuadratureSpec& spec = {});

/// P and J per unit length at height z, together with the centroid.
BeamMoments momenta_numeric(const ModeSuperposition& modes, const PolarizationState& pol, const BeamGeometry& geom,
                            double z, const QuadratureSpec& spec = {});

/// Same as momenta_numeric but keyed on the helicity directly.
BeamMoments momenta_numeric(const ModeSuperposition& modes, double sigma, const BeamGeometry& geom, double z,
                            const QuadratureSpec& spec = {});

/// Residuals of the two integration-by-parts identities:
///   first  = |int Re(f df*/dx)| + |int Re(f df*/dy)|
///   second = |int [x Re(f df*/dx) + y Re(f df*/dy)] + int |f|^2|
std::pair<double, double> parts_relations_residuals(const ModeSuperposition& modes, const BeamGeometry& geom,
                                                    double z, const QuadratureSpec& spec = {});

} // namespace shel
