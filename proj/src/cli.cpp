#include "csim/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "csim/certificate.hpp"
#include "csim/curve.hpp"
#include "csim/grid.hpp"
#include "csim/io.hpp"
#include "csim/rays.hpp"
#include "csim/similarity.hpp"

namespace csim {

namespace {

struct CommandName {
    Command command;
    const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::find_misiurewicz, "find-misiurewicz"},
    {Command::verify_similarity, "verify-similarity"},
    {Command::render_julia, "render-julia"},
    {Command::render_locus, "render-locus"},
    {Command::trace_ray, "trace-ray"},
    {Command::landing_check, "landing-check"},
    {Command::transversality, "transversality"},
};

[[noreturn]] void config_error(const std::string& field, const std::string& msg) {
    fail(ErrorKind::Config, "field '" + field + "' " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    double x = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(x)) {
        config_error(field, "expects a finite real number, got '" + text + "'");
    }
    return x;
}

long long parse_integer(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    long long x = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        config_error(field, "expects an integer, got '" + text + "'");
    }
    return x;
}

Complex parse_complex(const std::string& field, const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {parse_real(field, text), 0.0};
    return {parse_real(field, text.substr(0, comma)), parse_real(field, text.substr(comma + 1))};
}

std::vector<double> parse_real_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(field, item));
    if (out.empty()) config_error(field, "expects a comma-separated list of reals");
    return out;
}

int int_in(const std::string& field, const std::string& text, long long lo, long long hi) {
    const long long x = parse_integer(field, text);
    if (x < lo || x > hi) {
        config_error(field, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(x);
}

MisiurewiczCertificate load_certificate(const RunConfig& c) {
    if (!c.certificate) config_error("certificate", "is required for " + std::string(to_string(c.command)));
    return certificate_from_json(read_file(*c.certificate));
}

CubicMap map_from(const RunConfig& c) {
    if (c.a || c.v) {
        if (!c.a || !c.v) config_error(c.a ? "v" : "a", "must be given together with the other map coefficient");
        return {*c.a, *c.v};
    }
    if (c.certificate) return load_certificate(c).map;
    config_error("a", "or a certificate is required for " + std::string(to_string(c.command)));
}

std::filesystem::path output_path(const RunConfig& c, const std::string& name) {
    std::filesystem::create_directories(c.output_dir);
    return c.output_dir / name;
}

void print_value(std::ostream& out, const char* key, const std::string& value) {
    out << key << " " << value << "\n";
}

std::string complex_text(Complex z) { return format_double(z.real()) + " " + format_double(z.imag()); }

void cmd_find_misiurewicz(const RunConfig& c, std::ostream& out) {
    int p = c.p, ell = c.ell, m = c.m;
    Complex seed_a, seed_v;
    if (c.certificate) {
        const MisiurewiczCertificate prior = load_certificate(c);
        p = prior.p;
        ell = prior.ell;
        m = prior.m;
        seed_a = prior.map.a;
        seed_v = prior.map.v;
    } else {
        if (!c.seed_a) config_error("seed_a", "is required for find-misiurewicz");
        if (!c.seed_v) config_error("seed_v", "is required for find-misiurewicz");
        seed_a = *c.seed_a;
        seed_v = *c.seed_v;
    }
    const MisiurewiczCertificate cert = find_misiurewicz(p, ell, m, seed_a, seed_v);
    const CubicMap& f = cert.map;
    const Complex landing = iterate_n(f, f.free_critical(), static_cast<std::size_t>(ell));
    const Complex returned = iterate_n(f, landing, static_cast<std::size_t>(m));
    write_file_atomic(output_path(c, "certificate.json"), certificate_to_json(cert));
    print_value(out, "a", complex_text(f.a));
    print_value(out, "v", complex_text(f.v));
    print_value(out, "eta_residual", format_double(std::abs(eta(f.a, f.v, p))));
    print_value(out, "preperiodic_residual", format_double(std::abs(returned - landing)));
    print_value(out, "a0", complex_text(cert.a0));
    print_value(out, "lambda0", complex_text(cert.lambda0));
    print_value(out, "A0", complex_text(cert.A0));
    print_value(out, "B0", complex_text(cert.B0));
    print_value(out, "B0_error", format_double(cert.B0_error));
    print_value(out, "Q", complex_text(cert.Q));
    print_value(out, "q", complex_text(cert.q));
    print_value(out, "chart", std::string(to_string(cert.chart.kind)) + " " + format_double(cert.chart.domain_radius));
}

void cmd_verify_similarity(const RunConfig& c, std::ostream& out) {
    const MisiurewiczCertificate cert = load_certificate(c);
    std::filesystem::create_directories(c.output_dir);
    const RasterSink sink = [&](RasterMode mode, int k, const GridSet& set) {
        write_file_atomic(c.output_dir / (std::string(to_string(mode)) + "_k" + std::to_string(k) + ".pgm"),
                          to_pgm(set));
    };
    const SimilarityReport report =
        verify_main_theorem(cert, c.r, c.k_min, c.k_max, c.resolution, c.max_iter, sink);
    const std::string csv = report_to_csv(report);
    write_file_atomic(c.output_dir / "report.csv", csv);
    print_value(out, "cell_size", format_double(report.cell_size));
    out << csv;
}

void cmd_render_julia(const RunConfig& c, std::ostream& out) {
    const CubicMap f = map_from(c);
    const GridSet set = from_predicate(c.r, c.resolution, [&](Complex z) { return in_filled_julia(f, z, c.max_iter); });
    write_file_atomic(output_path(c, "julia.pgm"), to_pgm(set));
    print_value(out, "members", std::to_string(set.count()));
}

void cmd_render_locus(const RunConfig& c, std::ostream& out) {
    const MisiurewiczCertificate cert = load_certificate(c);
    if (c.r * std::numbers::sqrt2 > cert.chart.domain_radius) {
        fail(ErrorKind::ChartDomainExceeded, "locus window r * sqrt(2) exceeds the chart domain radius " +
                                                 format_double(cert.chart.domain_radius));
    }
    const GridSet set = from_predicate(c.r, c.resolution, [&](Complex t) {
        return locus_membership(chart_point(cert.chart, t), c.max_iter);
    });
    write_file_atomic(output_path(c, "locus.pgm"), to_pgm(set));
    print_value(out, "members", std::to_string(set.count()));
}

void cmd_trace_ray(const RunConfig& c, std::ostream& out) {
    if (!c.theta) config_error("theta", "is required for trace-ray");
    const CubicMap f = map_from(c);
    const RayTrace ray = trace_dynamic_ray(f, *c.theta, c.s_start, c.s_end, c.steps);
    write_file_atomic(output_path(c, "ray.csv"), ray_to_csv(ray));
    print_value(out, "landed", ray.landed ? "true" : "false");
    print_value(out, "landing_estimate", complex_text(*ray.landing_estimate));
}

void cmd_landing_check(const RunConfig& c, std::ostream& out) {
    const MisiurewiczCertificate cert = load_certificate(c);
    const Complex target = cert.map.cocritical();
    double theta = 0.0;
    if (c.theta) {
        theta = *c.theta;
        if (!verify_external_angle(cert.map, theta, target)) {
            fail(ErrorKind::NoConvergence, "ray at theta = " + format_double(theta) + " does not land at 2a");
        }
    } else {
        bool found = false;
        for (const auto& cand : external_angle_candidates(cert.map, target)) {
            if (verify_external_angle(cert.map, cand.angle, target)) {
                theta = cand.angle;
                found = true;
                break;
            }
        }
        if (!found) fail(ErrorKind::NoConvergence, "no scanned ray lands at 2a");
    }
    const LandingReport report = landing_check(cert, theta, c.mu, c.s_ladder);
    const std::string csv = landing_to_csv(report);
    write_file_atomic(output_path(c, "landing.csv"), csv);
    print_value(out, "theta", format_double(report.theta));
    print_value(out, "shrinking", report.shrinking() ? "true" : "false");
    print_value(out, "max_angle_error", format_double(report.max_angle_error()));
    out << csv;
}

void cmd_transversality(const RunConfig& c, std::ostream& out) {
    const MisiurewiczCertificate cert = load_certificate(c);
    const int w = transversality_winding(cert, c.radius, c.samples);
    write_file_atomic(output_path(c, "transversality.json"),
                      "{\n  \"radius\": " + format_double(c.radius) + ",\n  \"samples\": " +
                          std::to_string(c.samples) + ",\n  \"winding\": " + std::to_string(w) + "\n}\n");
    print_value(out, "winding", std::to_string(w));
}

}  // namespace

const char* to_string(Command c) noexcept {
    for (const auto& entry : kCommands) {
        if (entry.command == c) return entry.name;
    }
    return "find-misiurewicz";
}

Command command_from_string(const std::string& name) {
    for (const auto& entry : kCommands) {
        if (name == entry.name) return entry.command;
    }
    fail(ErrorKind::Config, "field 'command' has unknown value '" + name + "'");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "p",      "ell",    "m",          "seed_a",      "seed_v",  "a",       "v",
        "r",      "resolution", "k_min",  "k_max",       "max_iter", "mu",     "theta",
        "output_dir", "certificate", "s_start", "s_end", "steps",   "s_ladder", "radius",
        "samples",
    };
    return keys;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    const auto& keys = config_keys();
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::Config, "config line " + std::to_string(lineno) + " lacks '='");
        }
        const std::string key = trim(line.substr(0, eq));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            fail(ErrorKind::Config, "field '" + key + "' is not a known key (line " + std::to_string(lineno) + ")");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

RunConfig build_config(const std::string& command, const KeyValues& values) {
    RunConfig c;
    c.command = command_from_string(command);
    const auto& keys = config_keys();
    for (const auto& [key, value] : values) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            fail(ErrorKind::Config, "field '" + key + "' is not a known key");
        }
        if (key == "p") c.p = int_in(key, value, 1, 64);
        else if (key == "ell") c.ell = int_in(key, value, 1, 64);
        else if (key == "m") c.m = int_in(key, value, 1, 64);
        else if (key == "seed_a") c.seed_a = parse_complex(key, value);
        else if (key == "seed_v") c.seed_v = parse_complex(key, value);
        else if (key == "a") c.a = parse_complex(key, value);
        else if (key == "v") c.v = parse_complex(key, value);
        else if (key == "r") c.r = parse_real(key, value);
        else if (key == "resolution") c.resolution = static_cast<std::size_t>(int_in(key, value, 2, 1 << 14));
        else if (key == "k_min") c.k_min = int_in(key, value, 0, 10000);
        else if (key == "k_max") c.k_max = int_in(key, value, 0, 10000);
        else if (key == "max_iter") c.max_iter = static_cast<std::size_t>(int_in(key, value, 1, 100000000));
        else if (key == "mu") c.mu = int_in(key, value, 1, 1000);
        else if (key == "theta") c.theta = parse_real(key, value);
        else if (key == "output_dir") c.output_dir = value;
        else if (key == "certificate") c.certificate = value;
        else if (key == "s_start") c.s_start = parse_real(key, value);
        else if (key == "s_end") c.s_end = parse_real(key, value);
        else if (key == "steps") c.steps = int_in(key, value, 1, 100000);
        else if (key == "s_ladder") c.s_ladder = parse_real_list(key, value);
        else if (key == "radius") c.radius = parse_real(key, value);
        else if (key == "samples") c.samples = static_cast<std::size_t>(int_in(key, value, 8, 1 << 20));
    }
    if (!(c.r > 0.0)) config_error("r", "must be positive");
    if (c.k_max < c.k_min) config_error("k_max", "must be at least k_min");
    if (c.theta && (*c.theta < 0.0 || *c.theta >= 1.0)) config_error("theta", "must lie in [0, 1) turns");
    if (!(c.s_end > 0.0)) config_error("s_end", "must be positive");
    if (!(c.s_start > c.s_end)) config_error("s_start", "must exceed s_end");
    for (std::size_t i = 0; i < c.s_ladder.size(); ++i) {
        if (!(c.s_ladder[i] > 0.0) || (i > 0 && !(c.s_ladder[i] < c.s_ladder[i - 1]))) {
            config_error("s_ladder", "must be positive and strictly decreasing");
        }
    }
    if (!(c.radius > 0.0)) config_error("radius", "must be positive");
    if (c.output_dir.empty()) config_error("output_dir", "must not be empty");
    return c;
}

void run_command(const RunConfig& config, std::ostream& out) {
    switch (config.command) {
        case Command::find_misiurewicz: return cmd_find_misiurewicz(config, out);
        case Command::verify_similarity: return cmd_verify_similarity(config, out);
        case Command::render_julia: return cmd_render_julia(config, out);
        case Command::render_locus: return cmd_render_locus(config, out);
        case Command::trace_ray: return cmd_trace_ray(config, out);
        case Command::landing_check: return cmd_landing_check(config, out);
        case Command::transversality: return cmd_transversality(config, out);
    }
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ChartDomainExceeded:
        case ErrorKind::PrecisionExhausted:
            return 3;
        case ErrorKind::Config:
        case ErrorKind::InvalidArgument:
        case ErrorKind::Io:
            return 4;
        default:
            return 2;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Misiurewicz similarity experiments for the cubic family"};
    std::string command;
    std::string config_file;
    app.add_option("command", command, "find-misiurewicz | verify-similarity | render-julia | render-locus | "
                                       "trace-ray | landing-check | transversality")
        ->required();
    app.add_option("--config", config_file, "key=value configuration file");
    std::map<std::string, std::string> flags;
    for (const auto& key : config_keys()) app.add_option("--" + key, flags[key]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << "\n";
        return 4;
    }

    try {
        KeyValues values;
        if (!config_file.empty()) values = parse_key_values(read_file(config_file));
        for (const auto& key : config_keys()) {
            if (app.get_option("--" + key)->count() > 0) values[key] = flags[key];
        }
        const RunConfig config = build_config(command, values);
        run_command(config, out);
        return 0;
    } catch (const Error& e) {
        err << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::filesystem::filesystem_error& e) {
        err << "Io: " << e.what() << "\n";
        return 4;
    }
}

}  // namespace csim
