#include "shel/core_modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "shel/errors.hpp"

namespace shel {

namespace {

constexpr double kNormTolerance = 1e-12;

void require_order(int n, const char* what)
{
    if (n < 0 || n > kMaxHermiteOrder)
        throw ValidationError(std::string(what) + " order " + std::to_string(n) + " outside [0, " +
                              std::to_string(kMaxHermiteOrder) + "]");
}

// H_0..H_order at u.
void hermite_table(int order, double u, std::array<double, kMaxHermiteOrder + 1>& out)
{
    out[0] = 1.0;
    if (order >= 1) out[1] = 2.0 * u;
    for (int n = 1; n < order; ++n) out[n + 1] = 2.0 * u * out[n] - 2.0 * n * out[n - 1];
}

double log_normalisation(int n, int m, double w)
{
    return 0.5 * ((1.0 - n - m) * std::numbers::ln2 - std::log(std::numbers::pi) - 2.0 * std::log(w) -
                  std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
}

// Pieces shared by every mode at one point.
struct PointFrame {
    double w;
    double u;
    double v;
    Complex gaussian;     // exp(i k r^2 / (2 (z - iL)))
    Complex curvature_x;  // i k x / (z - iL)
    Complex curvature_y;
    double gouy;          // arctan(z/L)
};

PointFrame point_frame(const Point3& p, const BeamGeometry& geom)
{
    const double k = geom.wavenumber();
    const double L = geom.rayleigh_range();
    const Complex q{p.z, -L};
    PointFrame f;
    f.w = geom.spot_size(p.z);
    f.u = std::numbers::sqrt2 * p.x / f.w;
    f.v = std::numbers::sqrt2 * p.y / f.w;
    const Complex ik{0.0, k};
    f.gaussian = std::exp(ik * (p.x * p.x + p.y * p.y) / (2.0 * q));
    f.curvature_x = ik * p.x / q;
    f.curvature_y = ik * p.y / q;
    f.gouy = std::atan(p.z / L);
    return f;
}

Complex mode_prefactor(int n, int m, const PointFrame& f)
{
    const double phase = -(n + m + 1) * f.gouy;
    return std::exp(log_normalisation(n, m, f.w)) * f.gaussian * Complex{std::cos(phase), std::sin(phase)};
}

} // namespace

BeamGeometry::BeamGeometry(double kw0, double k, double max_angular_spread) : w0_(kw0 / k), k_(k)
{
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("wavenumber k must be positive and finite");
    if (!(kw0 > 0.0) || !std::isfinite(kw0)) throw ValidationError("waist k*w0 must be positive and finite");
    if (!(angular_spread() < max_angular_spread))
        throw ValidationError("angular spread theta0 = 2/(k w0) = " + std::to_string(angular_spread()) +
                              " violates the paraxial limit theta0 < " + std::to_string(max_angular_spread));
}

double BeamGeometry::spot_size(double z) const
{
    const double s = z / rayleigh_range();
    return w0_ * std::sqrt(1.0 + s * s);
}

PolarizationState::PolarizationState(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta)
{
    const double n = std::norm(alpha) + std::norm(beta);
    if (!(std::fabs(n - 1.0) <= kNormTolerance))
        throw ValidationError("polarization must satisfy |alpha|^2 + |beta|^2 = 1 (got " + std::to_string(n) + ")");
}

PolarizationState PolarizationState::circular(int handedness)
{
    const double s = std::numbers::sqrt2 / 2.0;
    return {s, Complex{0.0, handedness > 0 ? s : -s}};
}

PolarizationState PolarizationState::from_helicity(double sigma)
{
    if (!(sigma >= -1.0 && sigma <= 1.0)) throw ValidationError("helicity must lie in [-1, 1]");
    const double a = 0.5 * std::asin(sigma);
    return {std::cos(a), Complex{0.0, std::sin(a)}};
}

double helicity(const PolarizationState& pol)
{
    const Complex a = pol.alpha();
    const Complex b = pol.beta();
    const Complex s = Complex{0.0, 1.0} * (a * std::conj(b) - std::conj(a) * b);
    // alpha beta* - c.c. is purely imaginary, so the product is real up to rounding.
    if (std::fabs(s.imag()) > 1e-14) throw NumericalError("helicity acquired an imaginary part");
    return s.real();
}

ModeSuperposition::ModeSuperposition(int max_order) : max_order_(max_order)
{
    if (max_order < 0 || max_order > kMaxHermiteOrder)
        throw ValidationError("max_order must lie in [0, " + std::to_string(kMaxHermiteOrder) + "]");
}

ModeSuperposition& ModeSuperposition::set(int n, int m, Complex value)
{
    if (n < 0 || m < 0 || n > max_order_ || m > max_order_)
        throw ValidationError("mode index (" + std::to_string(n) + "," + std::to_string(m) + ") exceeds max order " +
                              std::to_string(max_order_));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
        throw ValidationError("mode coefficient must be finite");
    coeffs_[{n, m}] = value;
    return *this;
}

Complex ModeSuperposition::coefficient(int n, int m) const
{
    const auto it = coeffs_.find({n, m});
    return it == coeffs_.end() ? Complex{} : it->second;
}

int ModeSuperposition::populated_order() const
{
    int order = 0;
    for (const auto& [idx, c] : coeffs_) order = std::max({order, idx.first, idx.second});
    return order;
}

double ModeSuperposition::norm_squared() const
{
    double s = 0.0;
    for (const auto& [idx, c] : coeffs_) s += std::norm(c);
    return s;
}

ModeSuperposition ModeSuperposition::scaled(Complex factor) const
{
    ModeSuperposition out(max_order_);
    for (const auto& [idx, c] : coeffs_) out.coeffs_[idx] = factor * c;
    return out;
}

ModeSuperposition ModeSuperposition::normalized() const
{
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw ValidationError("cannot normalise a superposition with zero norm");
    return scaled(1.0 / std::sqrt(n2));
}

ModeSuperposition ModeSuperposition::fundamental()
{
    ModeSuperposition s;
    s.set(0, 0, 1.0);
    return s;
}

ModeSuperposition ModeSuperposition::laguerre_gauss_10()
{
    const double r = std::numbers::sqrt2 / 2.0;
    ModeSuperposition s;
    s.set(1, 0, r);
    s.set(0, 1, Complex{0.0, r});
    return s;
}

double hermite_eval(int n, double u)
{
    require_order(n, "Hermite polynomial");
    std::array<double, kMaxHermiteOrder + 1> h{};
    hermite_table(n, u, h);
    return h[n];
}

Complex mode_amplitude(int n, int m, const Point3& point, const BeamGeometry& geom)
{
    require_order(n, "mode");
    require_order(m, "mode");
    const PointFrame f = point_frame(point, geom);
    return mode_prefactor(n, m, f) * (hermite_eval(n, f.u) * hermite_eval(m, f.v));
}

TransverseGradient mode_transverse_gradient(int n, int m, const Point3& point, const BeamGeometry& geom)
{
    require_order(n, "mode");
    require_order(m, "mode");
    const PointFrame f = point_frame(point, geom);
    const double hn = hermite_eval(n, f.u);
    const double hm = hermite_eval(m, f.v);
    const double dhn = n > 0 ? 2.0 * n * hermite_eval(n - 1, f.u) : 0.0;
    const double dhm = m > 0 ? 2.0 * m * hermite_eval(m - 1, f.v) : 0.0;
    const double du = std::numbers::sqrt2 / f.w;
    const Complex pre = mode_prefactor(n, m, f);
    return {pre * (du * dhn * hm + hn * hm * f.curvature_x), pre * (hn * du * dhm + hn * hm * f.curvature_y)};
}

EnvelopeSample superposition_amplitude_and_gradient(const ModeSuperposition& modes, const Point3& point,
                                                    const BeamGeometry& geom)
{
    if (modes.empty()) throw ValidationError("mode superposition is empty");
    const int order = modes.populated_order();
    const PointFrame f = point_frame(point, geom);
    std::array<double, kMaxHermiteOrder + 1> hu{};
    std::array<double, kMaxHermiteOrder + 1> hv{};
    hermite_table(order, f.u, hu);
    hermite_table(order, f.v, hv);
    const double du = std::numbers::sqrt2 / f.w;

    // Accumulate the Hermite parts first; the Gaussian and curvature factors are common.
    Complex value{};
    Complex dvalue_x{};
    Complex dvalue_y{};
    for (const auto& [idx, c] : modes.coefficients()) {
        const auto [n, m] = idx;
        const double phase = -(n + m + 1) * f.gouy;
        const Complex weight = c * std::exp(log_normalisation(n, m, f.w)) * Complex{std::cos(phase), std::sin(phase)};
        value += weight * (hu[n] * hv[m]);
        if (n > 0) dvalue_x += weight * (du * 2.0 * n * hu[n - 1] * hv[m]);
        if (m > 0) dvalue_y += weight * (du * 2.0 * m * hu[n] * hv[m - 1]);
    }
    return {f.gaussian * value, f.gaussian * (dvalue_x + value * f.curvature_x),
            f.gaussian * (dvalue_y + value * f.curvature_y)};
}

} // namespace shel
