// Acceptance run: one [PASS]/[FAIL] line per criterion. Library-level checks
// call csim directly; command-level checks run the csim executable.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "csim/certificate.hpp"
#include "csim/errors.hpp"
#include "csim/grid.hpp"
#include "csim/io.hpp"
#include "csim/rays.hpp"
#include "csim/similarity.hpp"

using namespace csim;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << detail << std::endl;
    if (!ok) ++failures;
}

template <class Fn>
void guarded(int n, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(n, false, std::string("threw ") + e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

int run_cli(const std::string& cli, const std::string& args) {
    const int status = std::system((quote(cli) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file()) files[e.path().filename().string()] = read_file(e.path());
    }
    return files;
}

bool monotone_within(const std::vector<double>& d, double slack) {
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] > d[i - 1] + slack) return false;
    }
    return true;
}

double brute_force_hausdorff(const GridSet& a, const GridSet& b) {
    auto directed = [](const GridSet& x, const GridSet& y) {
        long worst = 0;
        const long n = static_cast<long>(x.resolution());
        for (long j = 0; j < n; ++j) {
            for (long i = 0; i < n; ++i) {
                if (!x.get(i, j)) continue;
                long best = std::numeric_limits<long>::max();
                for (long jj = 0; jj < n; ++jj) {
                    for (long ii = 0; ii < n; ++ii) {
                        if (y.get(ii, jj)) best = std::min(best, (i - ii) * (i - ii) + (j - jj) * (j - jj));
                    }
                }
                worst = std::max(worst, best);
            }
        }
        return worst;
    };
    return std::sqrt(double(std::max(directed(a, b), directed(b, a)))) * a.cell_size();
}

GridSet random_grid(std::mt19937_64& rng, std::size_t n, double density) {
    std::bernoulli_distribution bit(density);
    GridSet g(1.0, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) g.set(i, j, bit(rng));
    }
    if (g.empty()) g.set(n / 2, n / 2, true);
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    std::string cli;
    fs::path workdir = fs::temp_directory_path() / "csim_acceptance";
    app.add_option("--cli", cli, "path to the csim executable")->required();
    app.add_option("--workdir", workdir, "scratch directory for command outputs");
    CLI11_PARSE(app, argc, argv);

    fs::remove_all(workdir);
    fs::create_directories(workdir);
    const fs::path cert_dir = workdir / "certificate";
    const fs::path cert_path = cert_dir / "certificate.json";

    // 1
    guarded(1, [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const MisiurewiczCertificate c = find_misiurewicz(1, 1, 1, {0.45, 0.0}, {0.45, 0.0});
        const double elapsed = seconds_since(t0);
        const int code = run_cli(cli, "find-misiurewicz --p 1 --ell 1 --m 1 --seed_a 0.45 --seed_v 0.45 "
                                      "--output_dir " + quote(cert_dir.string()));
        // Direct evaluation: F(a) = v, F(-a) = 1 is fixed and F'(1) = 9/4.
        const CubicMap f = c.map;
        const double delta = std::max(std::abs(f.a - 0.5), std::abs(f.v - 0.5));
        const double orbit = std::abs(f(f.a) - f.v) + std::abs(f(f.free_critical()) - 1.0) + std::abs(f(1.0) - 1.0);
        const double lam = std::abs(f.derivative(1.0) - 2.25);
        const bool ok = code == 0 && delta <= 1e-10 && orbit <= 1e-10 && std::abs(c.a0 - 1.0) <= 1e-10 &&
                        std::abs(c.lambda0 - 2.25) <= 1e-10 && lam <= 1e-10 &&
                        std::abs(c.A0 - 2.25) <= 1e-10 && elapsed < 1.0;
        report(1, ok, "|delta| " + fmt(delta) + ", |lambda0 - 9/4| " + fmt(std::abs(c.lambda0 - 2.25)) +
                          ", |A0 - 9/4| " + fmt(std::abs(c.A0 - 2.25)) + ", " + fmt(elapsed) + " s, exit " +
                          std::to_string(code));
    });

    MisiurewiczCertificate cert;
    bool have_cert = false;
    try {
        cert = certificate_from_json(read_file(cert_path));
        have_cert = true;
    } catch (const std::exception& e) {
        std::cout << "certificate unavailable: " << e.what() << std::endl;
    }

    // 2
    guarded(2, [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const CubicMap f{{0.0, 0.0}, {0.0, 0.0}};
        const PoincareEvaluator ev(f, newton_periodic_point(f, 1, 1.0));
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Complex w = std::polar(2.0 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
            worst = std::max(worst, std::abs(ev(w) - std::exp(w)));
        }
        const double elapsed = seconds_since(t0);
        report(2, worst <= 1e-9 && elapsed < 1.0, "max |phi(w) - e^w| " + fmt(worst) + ", " + fmt(elapsed) + " s");
    });

    // 3
    guarded(3, [&] {
        if (!have_cert) return report(3, false, "no certificate");
        const PoincareEvaluator ev(cert);
        double worst = 0.0;
        for (int j = 0; j < 64; ++j) {
            const double radius = (j % 4 + 1) / 4.0;
            const Complex w = std::polar(radius, 2.0 * std::numbers::pi * j / 64.0);
            worst = std::max(worst, std::abs(ev(cert.lambda0 * w) - cert.map(ev(w))));
        }
        report(3, worst <= 1e-8, "sup residual " + fmt(worst));
    });

    // 4
    guarded(4, [&] {
        if (!have_cert) return report(4, false, "no certificate");
        double worst = 0.0;
        for (int k = 0; k <= 10; ++k) {
            const Complex closed = rho_k(cert, k);
            worst = std::max(worst, std::abs(closed - rho_k_chain_rule(cert, k)) / std::abs(closed));
        }
        report(4, worst <= 1e-9, "max relative gap " + fmt(worst));
    });

    // 5, 6, 11 share the full similarity run.
    const fs::path sim_a = workdir / "similarity_a";
    const fs::path sim_b = workdir / "similarity_b";
    const std::string sim_args = "verify-similarity --certificate " + quote(cert_path.string()) +
                                 " --r 2 --resolution 512 --max_iter 500 --k_min 1 --k_max 6 --output_dir ";
    int sim_code = -1;
    SimilarityReport sim;
    guarded(5, [&] {
        const auto t0 = std::chrono::steady_clock::now();
        sim_code = run_cli(cli, sim_args + quote(sim_a.string()));
        const double elapsed = seconds_since(t0);
        if (sim_code != 0) return report(5, false, "verify-similarity exit " + std::to_string(sim_code));
        sim = report_from_csv(read_file(sim_a / "report.csv"), 2.0, 512);
        const double cell = sim.cell_size;
        const bool ok = monotone_within(sim.d_dyn, 2.0 * cell) && sim.d_dyn.back() <= 5.0 * cell;
        std::string row;
        for (double d : sim.d_dyn) row += " " + fmt(d);
        report(5, ok, "d_dyn" + row + ", cell " + fmt(cell) + ", " + fmt(elapsed) + " s");
    });

    guarded(6, [&] {
        if (sim_code != 0) return report(6, false, "no similarity report");
        std::vector<double> par;
        int k_last = -1;
        for (std::size_t i = 0; i < sim.k_range.size(); ++i) {
            if (sim.d_par[i]) {
                par.push_back(*sim.d_par[i]);
                k_last = sim.k_range[i];
            }
        }
        const double cell = sim.cell_size;
        const bool guard_ok = k_last == sim.k_range.back() && k_last >= 4;
        // A window past the chart domain must be refused with exit 3.
        const int refused = run_cli(cli, "verify-similarity --certificate " + quote(cert_path.string()) +
                                             " --r 2 --resolution 32 --k_min 1 --k_max 2 --output_dir " +
                                             quote((workdir / "guard").string()));
        const bool ok = guard_ok && !par.empty() && monotone_within(par, 2.0 * cell) &&
                        par.back() <= 5.0 * cell && refused == 3;
        std::string row;
        for (double d : par) row += " " + fmt(d);
        report(6, ok, "d_par" + row + " (k_max " + std::to_string(k_last) + "), guard exit " +
                          std::to_string(refused));
    });

    // 7
    guarded(7, [&] {
        if (!have_cert) return report(7, false, "no certificate");
        const int w = transversality_winding(cert, 1e-3, 64);
        const int square = winding_number([](Complex t) { return t * t; }, 1e-3, 64);
        const int constant = winding_number([](Complex) { return Complex(0.7, -0.2); }, 1e-3, 64);
        report(7, w == 1 && square == 2 && constant == 0,
               "winding " + std::to_string(w) + ", t^2 " + std::to_string(square) + ", constant " +
                   std::to_string(constant));
    });

    // 8
    guarded(8, [&] {
        std::mt19937_64 rng(8);
        std::uniform_int_distribution<std::size_t> size(2, 32);
        std::uniform_real_distribution<double> density(0.01, 0.3);
        int mismatches = 0;
        for (int i = 0; i < 200; ++i) {
            const std::size_t n = size(rng);
            const GridSet a = random_grid(rng, n, density(rng));
            const GridSet b = random_grid(rng, n, density(rng));
            if (hausdorff_distance(a, b) != brute_force_hausdorff(a, b)) ++mismatches;
        }
        int property_failures = 0;
        for (int i = 0; i < 50; ++i) {
            const GridSet a = random_grid(rng, 24, 0.05);
            const GridSet b = random_grid(rng, 24, 0.05);
            const GridSet c = random_grid(rng, 24, 0.05);
            const double ab = hausdorff_distance(a, b);
            if (ab != hausdorff_distance(b, a)) ++property_failures;
            if (ab > hausdorff_distance(a, c) + hausdorff_distance(c, b) + 1e-12) ++property_failures;
            if (hausdorff_distance(a, a) != 0.0) ++property_failures;
        }
        report(8, mismatches == 0 && property_failures == 0,
               std::to_string(mismatches) + " brute-force mismatches, " + std::to_string(property_failures) +
                   " metric violations");
    });

    // 9
    guarded(9, [&] {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const CubicMap zero{{0.0, 0.0}, {0.0, 0.0}};
        double identity = 0.0;
        for (int i = 0; i < 50; ++i) {
            const Complex z = std::polar(1.5 + 8.5 * u(rng), 2.0 * std::numbers::pi * u(rng));
            identity = std::max(identity, std::abs(bottcher_coordinate(zero, z) - z));
        }
        const CubicMap f = have_cert ? cert.map : CubicMap{{0.5, 0.0}, {0.5, 0.0}};
        double potential = 0.0;
        double equation = 0.0;
        int used = 0;
        for (int i = 0; used < 50 && i < 1000; ++i) {
            const Complex z = std::polar(0.5 + 4.0 * u(rng), 2.0 * std::numbers::pi * u(rng));
            if (in_filled_julia(f, z, 500)) continue;
            Complex b;
            try {
                b = bottcher_coordinate(f, z);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::InsidePotential) continue;
                throw;
            }
            ++used;
            potential = std::max(potential, std::abs(std::log(std::abs(b)) - green_potential(f, z)));
            equation = std::max(equation, std::abs(bottcher_coordinate(f, f(z)) - b * b * b) / std::pow(std::abs(b), 3));
        }
        report(9, identity <= 1e-10 && potential <= 1e-8 && equation <= 1e-8 && used == 50,
               "|B(z) - z| " + fmt(identity) + ", potential gap " + fmt(potential) + ", functional gap " +
                   fmt(equation) + " on " + std::to_string(used) + " samples");
    });

    // 10
    guarded(10, [&] {
        if (!have_cert) return report(10, false, "no certificate");
        const Complex target = cert.map.cocritical();
        std::optional<double> theta;
        for (const AngleCandidate& c : external_angle_candidates(cert.map, target)) {
            if (verify_external_angle(cert.map, c.angle, target)) {
                theta = c.angle;
                break;
            }
        }
        if (!theta) return report(10, false, "no verified external angle of 2a");
        const LandingReport lr = landing_check(cert, *theta, 1, {1e-1, 1e-2, 1e-3, 1e-4});
        std::string row;
        for (const auto& r : lr.rows) row += " " + fmt(std::abs(r.t));
        report(10, lr.shrinking() && lr.max_angle_error() <= 1e-3,
               "theta " + fmt(*theta) + ", |t|" + row + ", angle error " + fmt(lr.max_angle_error()));
    });

    // 11
    guarded(11, [&] {
        const std::string cert_arg = " --certificate " + quote(cert_path.string());
        const std::vector<std::string> commands{
            "find-misiurewicz --seed_a 0.45 --seed_v 0.45",
            "render-julia --a 0.5 --v 0.5 --r 2 --resolution 256",
            "render-locus" + cert_arg + " --r 0.02 --resolution 128",
            "trace-ray --a 0.5 --v 0.5 --theta 0",
            "landing-check" + cert_arg,
            "transversality" + cert_arg,
        };
        int differing = 0;
        std::string detail;
        for (std::size_t i = 0; i < commands.size(); ++i) {
            std::map<std::string, std::string> runs[2];
            for (int rep = 0; rep < 2; ++rep) {
                const fs::path dir = workdir / ("determinism_" + std::to_string(i) + "_" + std::to_string(rep));
                const int code = run_cli(cli, commands[i] + " --output_dir " + quote(dir.string()));
                if (code != 0) {
                    ++differing;
                    detail += " [" + commands[i] + " exit " + std::to_string(code) + "]";
                }
                if (fs::exists(dir)) runs[rep] = snapshot(dir);
            }
            if (runs[0].empty() || runs[0] != runs[1]) {
                ++differing;
                detail += " [" + commands[i] + " differs]";
            }
        }
        int sim_b_code = sim_code == 0 ? run_cli(cli, sim_args + quote(sim_b.string())) : -1;
        const bool sim_same = sim_b_code == 0 && snapshot(sim_a) == snapshot(sim_b);
        if (!sim_same) detail += " [verify-similarity differs]";
        report(11, differing == 0 && sim_same,
               std::to_string(commands.size() + 1) + " commands run twice" + (detail.empty() ? ", identical" : detail));
    });

    return failures == 0 ? 0 : 1;
}
