#include "shel/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "shel/errors.hpp"
#include "shel/field_densities.hpp"
#include "shel/invariants.hpp"
#include "shel/modespace.hpp"
#include "shel/tilt_frame.hpp"

namespace shel::app {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) parts.push_back(trim(item));
    return parts;
}

double parse_double(const std::string& text, const std::string& key)
{
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ValidationError(key + ": '" + text + "' is not a number");
    }
    if (used != t.size() || !std::isfinite(v)) throw ValidationError(key + ": '" + text + "' is not a finite number");
    return v;
}

int parse_int(const std::string& text, const std::string& key)
{
    const double v = parse_double(text, key);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw ValidationError(key + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& text, const std::string& key)
{
    std::vector<double> out;
    for (const std::string& item : split(text, ',')) out.push_back(parse_double(item, key));
    if (out.empty()) throw ValidationError(key + ": list must not be empty");
    return out;
}

ModeTerm parse_mode(const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 4) throw ValidationError("mode: expected n,m,re,im but got '" + text + "'");
    return {parse_int(parts[0], "mode n"), parse_int(parts[1], "mode m"), parse_double(parts[2], "mode re"),
            parse_double(parts[3], "mode im")};
}

void set_component(std::optional<Complex>& slot, bool imaginary, double v)
{
    Complex c = slot.value_or(Complex{});
    if (imaginary)
        c.imag(v);
    else
        c.real(v);
    slot = c;
}

ModeSuperposition build_modes(const RunConfig& c)
{
    ModeSuperposition modes(kMaxHermiteOrder);
    if (c.modes.empty()) return ModeSuperposition::fundamental();
    for (const ModeTerm& t : c.modes) modes.set(t.n, t.m, modes.coefficient(t.n, t.m) + Complex{t.re, t.im});
    if (!(modes.norm_squared() > 0.0)) throw ValidationError("mode coefficients must not all vanish");
    return modes.normalized();
}

std::vector<double> sigma_values(const RunConfig& c)
{
    if (c.alpha || c.beta) return {helicity(PolarizationState(c.alpha.value_or(Complex{}), c.beta.value_or(Complex{})))};
    return c.sigma;
}

std::vector<double> z_values(const RunConfig& c, const BeamGeometry& g)
{
    std::vector<double> out;
    for (const std::string& s : c.z) out.push_back(parse_length(s, g.rayleigh_range()));
    return out;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(std::initializer_list<const char*> names)
    {
        bool first = true;
        for (const char* n : names) {
            os_ << (first ? "" : ",") << n;
            first = false;
        }
        os_ << '\n';
    }

    void row(std::initializer_list<double> values)
    {
        bool first = true;
        for (double v : values) {
            os_ << (first ? "" : ",") << format_number(v);
            first = false;
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file '" + path + "'");
    f << content;
    f.flush();
    if (!f) throw IoError("failed writing output file '" + path + "'");
}

void emit(const RunConfig& c, std::ostream& out, const std::string& content)
{
    if (c.output.empty())
        out << content;
    else
        write_file(c.output, content);
}

int run_moments(const RunConfig& c, std::ostream& out)
{
    const BeamGeometry g(c.kw0);
    const ModeSuperposition modes = build_modes(c);
    std::ostringstream os;
    CsvWriter csv(os);
    csv.header({"sigma", "z_lambdabar", "Px_numeric", "Py_numeric", "Pz_numeric", "Jx_numeric", "Jy_numeric",
                "Jz_numeric", "Px_modespace", "Py_modespace", "Pz_modespace", "Jx_modespace", "Jy_modespace",
                "Jz_modespace", "x_centroid_lambdabar", "y_centroid_lambdabar"});
    const Vec3 P = momentum_modespace(modes, g);
    for (double s : sigma_values(c)) {
        const Vec3 J = angular_momentum_modespace(modes, g, s);
        for (double z : z_values(c, g)) {
            const BeamMoments m = momenta_numeric(modes, s, g, z, c.quadrature);
            csv.row({s, z, m.P.x, m.P.y, m.P.z, m.J.x, m.J.y, m.J.z, P.x, P.y, P.z, J.x, J.y, J.z, m.centroid.x,
                     m.centroid.y});
        }
    }
    emit(c, out, os.str());
    return kSuccess;
}

int run_centroid(const RunConfig& c, std::ostream& out)
{
    const BeamGeometry g(c.kw0);
    const ModeSuperposition modes = build_modes(c);
    const PolarizationState pol = PolarizationState::linear_x();
    // Straight-line prediction from the mode-space moments: <r>(z) = (J-derived offset) + z P_perp / P_z.
    const Vec3 P = momentum_modespace(modes, g);
    const Vec3 J = angular_momentum_modespace(modes, g, 0.0);
    std::ostringstream os;
    CsvWriter csv(os);
    csv.header({"z_lambdabar", "x_centroid_lambdabar", "y_centroid_lambdabar", "x_modespace_lambdabar",
                "y_modespace_lambdabar"});
    for (double z : z_values(c, g)) {
        const Vec2 r = centroid(modes, pol, g, z, c.quadrature);
        csv.row({z, r.x, r.y, (z * P.x - J.y) / P.z, (J.x + z * P.y) / P.z});
    }
    emit(c, out, os.str());
    return kSuccess;
}

int run_tilt_sweep(const RunConfig& c, std::ostream& out)
{
    const BeamGeometry g(c.kw0);
    std::ostringstream os;
    CsvWriter csv(os);
    csv.header({"theta_rad", "phi_rad", "sigma", "z_lambdabar", "x_centroid_lambdabar", "y_centroid_lambdabar",
                "x_closed_lambdabar", "y_closed_lambdabar", "Px_over_Pz", "Py_over_Pz", "Jx_over_Pz", "Jy_over_Pz",
                "Jz_over_Pz", "Jx_over_Pz_closed", "Jy_over_Pz_closed", "Jz_over_Pz_closed", "J_norm_over_Pz"});
    const std::vector<double> zs = z_values(c, g);
    for (double theta : c.theta)
        for (double phi : c.phi)
            for (double s : sigma_values(c))
                for (double z : zs) {
                    const TiltFrame f(theta, phi);
                    const BeamMoments m = tilted_moments_numeric(s, g, f, z, c.quadrature);
                    const Vec2 closed = tilted_centroid_closed(s, f, z, g);
                    const TiltedMomenta cm = tilted_momenta_closed(s, f, g.reduced_wavelength());
                    const Vec3 j = m.J / m.P.z;
                    csv.row({f.theta(), f.phi(), s, z, m.centroid.x, m.centroid.y, closed.x, closed.y, m.P.x / m.P.z,
                             m.P.y / m.P.z, j.x, j.y, j.z, cm.J_over_Pz.x, cm.J_over_Pz.y, cm.J_over_Pz.z, norm(j)});
                }
    emit(c, out, os.str());
    return kSuccess;
}

int run_density_grid(const RunConfig& c)
{
    if (c.output.empty()) throw ValidationError("density-grid needs --out (grid text path; a .pgm is written beside it)");
    std::filesystem::path pgm_path(c.output);
    if (pgm_path.extension() == ".pgm") throw ValidationError("density-grid --out must not end in .pgm");
    pgm_path.replace_extension(".pgm");

    const BeamGeometry g(c.kw0);
    const double z = z_values(c, g).front();
    const double theta = c.theta.front();
    const bool tilted = theta != 0.0;
    const int n = c.grid_points;

    std::optional<TiltFrame> frame;
    std::optional<RotationMatrix> rot;
    double cx = 0.0;
    double cy = 0.0;
    double half = c.grid_extent * g.spot_size(z);
    ModeSuperposition modes = build_modes(c);
    const double sigma = sigma_values(c).front();
    if (tilted) {
        frame.emplace(theta, c.phi.front());
        rot.emplace(rotation_matrix(*frame));
        const PlaneDomain d = tilted_domain(g, *frame, z, c.quadrature);
        cx = d.center_x;
        cy = d.center_y;
        half = c.grid_extent * g.spot_size(z / std::cos(theta)) / std::cos(theta);
    }

    std::vector<double> values(static_cast<std::size_t>(n) * n);
    detail::for_each_row(n, c.quadrature.threads, [&](int iy) {
        const double y = cy + half * (2.0 * iy / (n - 1) - 1.0);
        for (int ix = 0; ix < n; ++ix) {
            const double x = cx + half * (2.0 * ix / (n - 1) - 1.0);
            const Point3 p{x, y, z};
            values[static_cast<std::size_t>(iy) * n + ix] =
                tilted ? rotated_momentum_density(sigma, g, *rot, p).z
                       : std::norm(superposition_amplitude_and_gradient(modes, p, g).f);
        }
    });

    std::ostringstream text;
    text << "# x_lambdabar y_lambdabar pz\n";
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const double x = cx + half * (2.0 * ix / (n - 1) - 1.0);
            const double y = cy + half * (2.0 * iy / (n - 1) - 1.0);
            text << format_number(x) << ' ' << format_number(y) << ' '
                 << format_number(values[static_cast<std::size_t>(iy) * n + ix]) << '\n';
        }

    const double peak = *std::max_element(values.begin(), values.end());
    std::string pgm = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    // Top image row is the largest y.
    for (int iy = n - 1; iy >= 0; --iy)
        for (int ix = 0; ix < n; ++ix) {
            const double v = peak > 0.0 ? values[static_cast<std::size_t>(iy) * n + ix] / peak : 0.0;
            pgm.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0))));
        }

    write_file(c.output, text.str());
    write_file(pgm_path.string(), pgm);
    return kSuccess;
}

int run_verify(const RunConfig& c, std::ostream& out)
{
    const std::vector<CheckResult> results = run_invariant_suite(c.quadrature);
    std::ostringstream os;
    os << "check,measured,tolerance,passed\n";
    bool all = true;
    for (const CheckResult& r : results) {
        os << r.name << ',' << format_number(r.measured) << ',' << format_number(r.tolerance) << ','
           << (r.passed ? "true" : "false") << '\n';
        all = all && r.passed;
    }
    emit(c, out, os.str());
    return all ? kSuccess : kValidationFailure;
}

} // namespace

std::string format_number(double v)
{
    if (v == 0.0) v = 0.0; // fold -0 into 0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Experiment parse_experiment(const std::string& name)
{
    static const std::map<std::string, Experiment> names{{"moments", Experiment::moments},
                                                         {"centroid", Experiment::centroid},
                                                         {"tilt-sweep", Experiment::tilt_sweep},
                                                         {"density-grid", Experiment::density_grid},
                                                         {"verify", Experiment::verify}};
    const auto it = names.find(trim(name));
    if (it == names.end()) throw ValidationError("unknown experiment '" + name + "'");
    return it->second;
}

std::string experiment_name(Experiment e)
{
    switch (e) {
    case Experiment::moments: return "moments";
    case Experiment::centroid: return "centroid";
    case Experiment::tilt_sweep: return "tilt-sweep";
    case Experiment::density_grid: return "density-grid";
    case Experiment::verify: return "verify";
    }
    return "?";
}

double parse_length(const std::string& text, double rayleigh_range)
{
    const std::string t = trim(text);
    if (!t.empty() && (t.back() == 'L' || t.back() == 'l'))
        return parse_double(t.substr(0, t.size() - 1), "z") * rayleigh_range;
    return parse_double(t, "z");
}

void apply_config_entry(RunConfig& c, const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    if (key == "experiment")
        c.experiment = parse_experiment(value);
    else if (key == "beam.kw0")
        c.kw0 = parse_double(value, key);
    else if (key == "beam.sigma")
        c.sigma = parse_list(value, key);
    else if (key == "beam.alpha_re")
        set_component(c.alpha, false, parse_double(value, key));
    else if (key == "beam.alpha_im")
        set_component(c.alpha, true, parse_double(value, key));
    else if (key == "beam.beta_re")
        set_component(c.beta, false, parse_double(value, key));
    else if (key == "beam.beta_im")
        set_component(c.beta, true, parse_double(value, key));
    else if (key == "beam.mode")
        c.modes.push_back(parse_mode(value));
    else if (key == "frame.theta")
        c.theta = parse_list(value, key);
    else if (key == "frame.phi")
        c.phi = parse_list(value, key);
    else if (key == "frame.z") {
        c.z = split(value, ',');
        if (c.z.empty()) throw ValidationError("frame.z: list must not be empty");
    } else if (key == "quadrature.nodes")
        c.quadrature.nodes_per_axis = parse_int(value, key);
    else if (key == "quadrature.half_width_factor")
        c.quadrature.half_width_factor = parse_double(value, key);
    else if (key == "quadrature.threads") {
        const int t = parse_int(value, key);
        if (t < 0) throw ValidationError("quadrature.threads must be >= 0");
        c.quadrature.threads = static_cast<unsigned>(t);
    } else if (key == "grid.points")
        c.grid_points = parse_int(value, key);
    else if (key == "grid.extent")
        c.grid_extent = parse_double(value, key);
    else if (key == "output.path")
        c.output = trim(value);
    else
        throw ValidationError("unknown config key '" + key + "'");
}

void load_config_file(RunConfig& config, const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw IoError("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
    }
}

void validate(const RunConfig& c)
{
    if (!c.experiment) throw ValidationError("no experiment selected");
    if (*c.experiment == Experiment::verify) {
        c.quadrature.validate();
        return;
    }
    const BeamGeometry g(c.kw0);
    if (c.alpha || c.beta) {
        (void)PolarizationState(c.alpha.value_or(Complex{}), c.beta.value_or(Complex{}));
    } else {
        if (c.sigma.empty()) throw ValidationError("sigma list must not be empty");
        for (double s : c.sigma)
            if (!(s >= -1.0 && s <= 1.0)) throw ValidationError("helicity sigma must lie in [-1, 1]");
    }
    if (c.theta.empty() || c.phi.empty() || c.z.empty()) throw ValidationError("sweep lists must not be empty");
    for (double t : c.theta) (void)TiltFrame(t, 0.0);
    for (double p : c.phi) (void)TiltFrame(0.0, p);
    (void)z_values(c, g);
    for (const ModeTerm& m : c.modes)
        if (m.n < 0 || m.m < 0 || m.n > kMaxHermiteOrder || m.m > kMaxHermiteOrder)
            throw ValidationError("mode indices must lie in [0, " + std::to_string(kMaxHermiteOrder) + "]");
    (void)build_modes(c);
    c.quadrature.validate();
    if (c.grid_points < 2 || c.grid_points > 4096) throw ValidationError("grid.points must lie in [2, 4096]");
    if (!(c.grid_extent > 0.0)) throw ValidationError("grid.extent must be positive");
}

int run(const RunConfig& config, std::ostream& out)
{
    validate(config);
    switch (*config.experiment) {
    case Experiment::moments: return run_moments(config, out);
    case Experiment::centroid: return run_centroid(config, out);
    case Experiment::tilt_sweep: return run_tilt_sweep(config, out);
    case Experiment::density_grid: return run_density_grid(config);
    case Experiment::verify: return run_verify(config, out);
    }
    return kValidationFailure;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App cli{"Momenta, centroids and the geometric spin Hall shift of paraxial beams", "shel_cli"};
    cli.fallthrough();
    cli.require_subcommand(0, 1);
    for (const char* name : {"moments", "centroid", "tilt-sweep", "density-grid", "verify"}) cli.add_subcommand(name);

    std::string config_path;
    std::string kw0;
    std::vector<std::string> sigma;
    std::string alpha_re, alpha_im, beta_re, beta_im;
    std::vector<std::string> modes;
    std::vector<std::string> theta, phi, z;
    std::string nodes, half_width, threads, grid_points, grid_extent, output;

    auto list_option = [&](const char* flag, std::vector<std::string>& target, const char* help) {
        cli.add_option(flag, target, help)->allow_extra_args(false)->delimiter(',');
    };
    cli.add_option("--config", config_path, "Key-value config file; flags override its values");
    cli.add_option("--kw0", kw0, "Waist as the product k*w0");
    list_option("--sigma", sigma, "Helicity values in [-1, 1] (repeatable or comma-separated)");
    cli.add_option("--alpha-re", alpha_re, "Jones vector: Re(alpha)");
    cli.add_option("--alpha-im", alpha_im, "Jones vector: Im(alpha)");
    cli.add_option("--beta-re", beta_re, "Jones vector: Re(beta)");
    cli.add_option("--beta-im", beta_im, "Jones vector: Im(beta)");
    cli.add_option("--mode", modes, "Mode coefficient n,m,re,im (repeatable)")->allow_extra_args(false);
    list_option("--theta", theta, "Tilt angles in radians");
    list_option("--phi", phi, "Azimuths in radians");
    list_option("--z", z, "Observation planes in units of 1/k; suffix L for Rayleigh ranges");
    cli.add_option("--nodes", nodes, "Gauss-Legendre nodes per axis (odd, >= 21)");
    cli.add_option("--half-width-factor", half_width, "Integration half-width in spot sizes (>= 5)");
    cli.add_option("--threads", threads, "Worker threads (0 = all cores)");
    cli.add_option("--grid", grid_points, "density-grid: points per axis");
    cli.add_option("--extent", grid_extent, "density-grid: half-width in spot sizes");
    cli.add_option("--out", output, "Output path (CSV to stdout when omitted)");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e, out, err);
        return code == 0 ? kSuccess : kValidationFailure;
    }

    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
        return s;
    };

    try {
        RunConfig c;
        if (!config_path.empty()) load_config_file(c, config_path);
        for (const auto* sub : cli.get_subcommands()) c.experiment = parse_experiment(sub->get_name());

        const bool cli_jones = !alpha_re.empty() || !alpha_im.empty() || !beta_re.empty() || !beta_im.empty();
        if (cli_jones && !sigma.empty()) throw ValidationError("give either --sigma or the Jones vector, not both");
        if (!sigma.empty()) {
            c.alpha.reset();
            c.beta.reset();
            apply_config_entry(c, "beam.sigma", join(sigma));
        }
        if (cli_jones) {
            c.alpha.reset();
            c.beta.reset();
            const std::pair<const char*, const std::string*> parts[] = {{"beam.alpha_re", &alpha_re},
                                                                        {"beam.alpha_im", &alpha_im},
                                                                        {"beam.beta_re", &beta_re},
                                                                        {"beam.beta_im", &beta_im}};
            for (const auto& [key, val] : parts) apply_config_entry(c, key, val->empty() ? "0" : *val);
        }
        if (!kw0.empty()) apply_config_entry(c, "beam.kw0", kw0);
        if (!modes.empty()) {
            c.modes.clear();
            for (const auto& m : modes) apply_config_entry(c, "beam.mode", m);
        }
        if (!theta.empty()) apply_config_entry(c, "frame.theta", join(theta));
        if (!phi.empty()) apply_config_entry(c, "frame.phi", join(phi));
        if (!z.empty()) apply_config_entry(c, "frame.z", join(z));
        if (!nodes.empty()) apply_config_entry(c, "quadrature.nodes", nodes);
        if (!half_width.empty()) apply_config_entry(c, "quadrature.half_width_factor", half_width);
        if (!threads.empty()) apply_config_entry(c, "quadrature.threads", threads);
        if (!grid_points.empty()) apply_config_entry(c, "grid.points", grid_points);
        if (!grid_extent.empty()) apply_config_entry(c, "grid.extent", grid_extent);
        if (!output.empty()) apply_config_entry(c, "output.path", output);

        if (!c.experiment) throw ValidationError("choose a subcommand: moments, centroid, tilt-sweep, density-grid, verify");
        return run(c, out);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kValidationFailure;
    }
}

} // namespace shel::app
