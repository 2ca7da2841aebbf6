#include "shel/quadrature.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "shel/field_densities.hpp"

namespace shel {

void QuadratureSpec::validate() const
{
    if (nodes_per_axis < 21 || nodes_per_axis % 2 == 0)
        throw ValidationError("nodes_per_axis must be odd and >= 21 (got " + std::to_string(nodes_per_axis) + ")");
    if (!(half_width_factor >= 5.0) || !std::isfinite(half_width_factor))
        throw ValidationError("half_width_factor must be >= 5 (got " + std::to_string(half_width_factor) + ")");
}

QuadratureSpec QuadratureSpec::refined() const
{
    QuadratureSpec r = *this;
    r.nodes_per_axis = 2 * nodes_per_axis + 1;
    return r;
}

GaussLegendreRule gauss_legendre(int n)
{
    if (n < 1) throw ValidationError("Gauss-Legendre rule needs at least one node");
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi's estimate of the i-th largest root, then Newton.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 1 ? x : p1;
            const double pm = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

PlaneDomain beam_domain(const BeamGeometry& geom, double z, const QuadratureSpec& spec, double widen,
                        double center_x, double center_y)
{
    return {center_x, center_y, spec.half_width_factor * geom.spot_size(z) * widen};
}

namespace detail {

void for_each_row(int rows, unsigned threads, const std::function<void(int)>& row)
{
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max(rows, 1)));
    if (workers <= 1) {
        for (int i = 0; i < rows; ++i) row(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (int i = static_cast<int>(t); i < rows; i += static_cast<int>(workers)) row(i);
                } catch (...) {
                    const std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void throw_non_finite(const Point3& p)
{
    std::ostringstream os;
    os.precision(17);
    os << "non-finite integrand sample at (x, y, z) = (" << p.x << ", " << p.y << ", " << p.z << ")";
    throw NumericalError(os.str());
}

} // namespace detail

namespace {

// Integrand slots: p (3), j (3), x p_z, y p_z.
BeamMoments moments_from_density(const ModeSuperposition& modes, double sigma, const BeamGeometry& geom, double z,
                                 const QuadratureSpec& spec)
{
    const PlaneDomain domain = beam_domain(geom, z, spec);
    const auto sums = integrate_plane_n<8>(
        [&](const Point3& pt) {
            const DensitySample s = density_sample(modes, sigma, pt, geom);
            return std::array<double, 8>{s.p.x, s.p.y, s.p.z, s.j.x, s.j.y, s.j.z, pt.x * s.p.z, pt.y * s.p.z};
        },
        z, domain, spec);
    if (!(sums[2] > 0.0)) throw NumericalError("vanishing total flux P_z; centroid undefined");
    BeamMoments m;
    m.P = {sums[0], sums[1], sums[2]};
    m.J = {sums[3], sums[4], sums[5]};
    m.centroid = {sums[6] / sums[2], sums[7] / sums[2]};
    m.z = z;
    return m;
}

} // namespace

Vec2 centroid(const ModeSuperposition& modes, const PolarizationState& pol, const BeamGeometry& geom, double z,
              const QuadratureSpec& spec)
{
    (void)pol; // p_z = |f|^2 carries no polarization dependence
    const PlaneDomain domain = beam_domain(geom, z, spec);
    const auto sums = integrate_plane_n<3>(
        [&](const Point3& pt) {
            const double pz = std::norm(superposition_amplitude_and_gradient(modes, pt, geom).f);
            return std::array<double, 3>{pz, pt.x * pz, pt.y * pz};
        },
        z, domain, spec);
    if (!(sums[0] > 0.0)) throw NumericalError("vanishing total flux P_z; centroid undefined");
    return {sums[1] / sums[0], sums[2] / sums[0]};
}

BeamMoments momenta_numeric(const ModeSuperposition& modes, const PolarizationState& pol, const BeamGeometry& geom,
                            double z, const QuadratureSpec& spec)
{
    return moments_from_density(modes, helicity(pol), geom, z, spec);
}

BeamMoments momenta_numeric(const ModeSuperposition& modes, double sigma, const BeamGeometry& geom, double z,
                            const QuadratureSpec& spec)
{
    return moments_from_density(modes, sigma, geom, z, spec);
}

std::pair<double, double> parts_relations_residuals(const ModeSuperposition& modes, const BeamGeometry& geom,
                                                    double z, const QuadratureSpec& spec)
{
    const PlaneDomain domain = beam_domain(geom, z, spec);
    const auto sums = integrate_plane_n<4>(
        [&](const Point3& pt) {
            const EnvelopeSample e = superposition_amplitude_and_gradient(modes, pt, geom);
            const double rx = (e.f * std::conj(e.dx)).real();
            const double ry = (e.f * std::conj(e.dy)).real();
            return std::array<double, 4>{rx, ry, pt.x * rx + pt.y * ry, std::norm(e.f)};
        },
        z, domain, spec);
    return {std::fabs(sums[0]) + std::fabs(sums[1]), std::fabs(sums[2] + sums[3])};
}

} // namespace shel
