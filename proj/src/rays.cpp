#include "csim/rays.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "csim/errors.hpp"
#include "csim/io.hpp"

namespace csim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxLift = 60;

double frac_turn(double x) {
    const double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

double pow3(int n) {
    double x = 1.0;
    for (int i = 0; i < n; ++i) x *= 3.0;
    return x;
}

// z pushed forward until it clears the Boettcher radius, with log B there and
// the derivative of log B(z) obtained from the chain rule.
struct Lift {
    int n = 0;
    Complex log_b;
    Complex dlog;
};

Lift lift(const CubicMap& f, Complex z, double radius, double tol) {
    Complex w = z;
    Complex d = 1.0;
    int n = 0;
    while (std::abs(w) < radius) {
        if (n >= kMaxLift) fail(ErrorKind::InsidePotential, "point does not clear the Boettcher radius");
        d *= f.derivative(w);
        w = f(w);
        ++n;
    }
    const double scale = pow3(n);
    return {n, log_bottcher_far(f, w, tol), d / (w * scale)};
}

// Argument of B at `to`, continued from `from` where it equals a_from.
double pull_argument(const CubicMap& f, Complex from, Complex to, double a_from, double radius, double tol,
                     int depth) {
    const Lift l = lift(f, to, radius, tol);
    const double scale = pow3(l.n);
    const double base = l.log_b.imag();
    const double j = std::round((a_from * scale - base) / kTwoPi);
    const double a_to = (base + kTwoPi * j) / scale;
    if (std::abs(a_to - a_from) <= std::numbers::pi / (4.0 * scale)) return a_to;
    if (depth >= 30) fail(ErrorKind::BranchAmbiguity, "argument jump persists after subdivision");
    const Complex mid = 0.5 * (from + to);
    const double a_mid = pull_argument(f, from, mid, a_from, radius, tol, depth + 1);
    return pull_argument(f, mid, to, a_mid, radius, tol, depth + 1);
}

}  // namespace

double bottcher_radius(const CubicMap& f) {
    const double a2 = std::norm(f.a);
    return std::max({f.escape_radius(), std::sqrt(12.0 * a2), std::cbrt(4.0 * std::abs(f.constant_term()))});
}

Complex log_bottcher_far(const CubicMap& f, Complex w, double tol) {
    require_finite(w, "w");
    if (std::abs(w) < bottcher_radius(f)) fail(ErrorKind::InvalidArgument, "point inside the Boettcher radius");
    Complex sum = std::log(w);
    double weight = 1.0 / 3.0;
    for (int n = 0; n < 200; ++n) {
        const Complex next = f(w);
        const Complex term = weight * std::log(next / (w * w * w));
        sum += term;
        if (std::abs(term) <= tol * std::abs(sum) || std::abs(next) > 1e100) break;
        w = next;
        weight /= 3.0;
    }
    return sum;
}

Complex bottcher_coordinate(const CubicMap& f, Complex z, double tol) {
    require_finite(z, "z");
    const double radius = bottcher_radius(f);
    if (std::abs(z) >= radius) return std::exp(log_bottcher_far(f, z, tol));

    double g = 0.0;
    try {
        g = green_potential(f, z);
    } catch (const Error&) {
        fail(ErrorKind::InsidePotential, "point does not escape");
    }
    const double critical = critical_potential(f);
    if (g < critical * (1.0 - 1e-9)) fail(ErrorKind::InsidePotential, "point lies below the critical potential");

    // Climb along the gradient of g until the radius is cleared.
    std::vector<Complex> path{z};
    Complex p = z;
    for (int step = 0;; ++step) {
        const Lift l = lift(f, p, radius, tol);
        if (l.n == 0) break;
        if (step > 100000) fail(ErrorKind::BranchAmbiguity, "gradient path does not leave the disk");
        const double slope = std::abs(l.dlog);
        if (!(slope > 0.0)) fail(ErrorKind::BranchAmbiguity, "gradient of g vanishes on the path");
        const double gp = l.log_b.real() / pow3(l.n);
        const double h = std::min(0.1 * gp / slope, 0.5 * radius);
        p += h * std::conj(l.dlog) / slope;
        path.push_back(p);
    }

    double arg = log_bottcher_far(f, path.back(), tol).imag();
    for (std::size_t i = path.size() - 1; i > 0; --i) {
        arg = pull_argument(f, path[i], path[i - 1], arg, radius, tol, 0);
    }
    const Lift l = lift(f, z, radius, tol);
    return std::exp(Complex(l.log_b.real() / pow3(l.n), arg));
}

Complex inverse_bottcher_far(const CubicMap& f, Complex target) {
    require_finite(target, "target");
    const double radius = bottcher_radius(f);
    if (std::abs(target) < std::numbers::e * radius) {
        fail(ErrorKind::InvalidArgument, "target too close to the filled Julia set");
    }
    Complex w = target;
    for (int i = 0; i < 200; ++i) {
        const Complex next = w * target / std::exp(log_bottcher_far(f, w));
        if (std::abs(next - w) <= 1e-15 * std::abs(w)) return next;
        w = next;
    }
    fail(ErrorKind::NoConvergence, "inverse Boettcher iteration did not settle");
}

namespace {

struct RayTarget {
    int n = 0;
    Complex value;
};

RayTarget ray_target(const CubicMap& f, double theta, double s) {
    const double floor_potential = std::log(bottcher_radius(f)) + 1.0;
    int n = 0;
    double potential = s;
    double angle = frac_turn(theta);
    while (potential < floor_potential) {
        if (n >= kMaxLift) fail(ErrorKind::InvalidArgument, "potential too small to trace");
        potential *= 3.0;
        angle = frac_turn(3.0 * angle);
        ++n;
    }
    return {n, inverse_bottcher_far(f, std::exp(Complex(potential, kTwoPi * angle)))};
}

// Newton on F^n(z) = target from `seed`; nullopt if it does not settle quickly.
std::optional<Complex> solve_ray_point(const CubicMap& f, const RayTarget& target, Complex seed) {
    Complex z = seed;
    for (int i = 0; i < 24; ++i) {
        const Jet j = iterate_jet(f, z, static_cast<std::size_t>(target.n));
        if (!is_finite(j.value) || !is_finite(j.derivative) || j.derivative == Complex{}) return std::nullopt;
        const Complex step = (j.value - target.value) / j.derivative;
        z -= step;
        if (!is_finite(z)) return std::nullopt;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) return z;
    }
    const Jet j = iterate_jet(f, z, static_cast<std::size_t>(target.n));
    if (std::abs(j.value - target.value) <= 1e-12 * std::abs(target.value)) return z;
    return std::nullopt;
}

// Walks the ray of angle theta from (s_from, z_from) down to s_to.
Complex descend(const CubicMap& f, double theta, double s_from, Complex z_from, double s_to) {
    const double default_ratio = std::pow(1.0 / 3.0, 1.0 / 8.0);
    double s = s_from;
    Complex z = z_from;
    double ratio = default_ratio;
    int halvings = 0;
    while (s > s_to) {
        const double next_s = std::max(s_to, s * ratio);
        const auto next = solve_ray_point(f, ray_target(f, theta, next_s), z);
        if (next) {
            s = next_s;
            z = *next;
            ratio = default_ratio;
            halvings = 0;
            continue;
        }
        if (++halvings > 40) {
            fail(ErrorKind::NewtonDivergence, "ray Newton diverged near potential " + format_double(next_s));
        }
        ratio = std::sqrt(ratio);
    }
    return z;
}

// Start of every trace: a potential where B is inverted directly.
std::pair<double, Complex> ray_anchor(const CubicMap& f, double theta, double s) {
    const double far = std::max(s, std::log(bottcher_radius(f)) + 1.0);
    return {far, ray_target(f, theta, far).value};
}

void require_angle(double theta) {
    if (!std::isfinite(theta)) fail(ErrorKind::InvalidArgument, "angle must be finite");
}

}  // namespace

Complex ray_point(const CubicMap& f, double theta, double s) {
    require_angle(theta);
    if (!(s > 0.0) || !std::isfinite(s)) fail(ErrorKind::InvalidArgument, "potential must be positive");
    const auto [far, z] = ray_anchor(f, theta, s);
    return descend(f, theta, far, z, s);
}

RayTrace trace_dynamic_ray(const CubicMap& f, double theta, double s_start, double s_end, int steps,
                           double landing_tol) {
    require_angle(theta);
    if (!(s_end > 0.0) || !(s_start > s_end) || !std::isfinite(s_start)) {
        fail(ErrorKind::InvalidArgument, "need s_start > s_end > 0");
    }
    if (steps < 1) fail(ErrorKind::InvalidArgument, "steps must be positive");
    RayTrace ray;
    ray.angle = frac_turn(theta);
    auto [s, z] = ray_anchor(f, theta, s_start);
    for (int j = 0; j <= steps; ++j) {
        const double target = j == steps ? s_end : s_start * std::pow(s_end / s_start, double(j) / steps);
        z = descend(f, theta, s, z, target);
        s = target;
        ray.samples.push_back({s, z});
    }
    const std::size_t n = ray.samples.size();
    if (n >= 3) {
        const Complex p0 = ray.samples[n - 3].point;
        const Complex p1 = ray.samples[n - 2].point;
        const Complex p2 = ray.samples[n - 1].point;
        ray.landed = std::abs(p0 - p1) <= landing_tol && std::abs(p1 - p2) <= landing_tol &&
                     std::abs(p0 - p2) <= landing_tol;
    }
    ray.landing_estimate = ray.samples.back().point;
    return ray;
}

std::string ray_to_csv(const RayTrace& ray) {
    std::string out = "s,re,im\n";
    for (const auto& sample : ray.samples) {
        out += format_double(sample.s) + "," + format_double(sample.point.real()) + "," +
               format_double(sample.point.imag()) + "\n";
    }
    return out;
}

RayTrace ray_from_csv(const std::string& csv, double angle) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "s,re,im") fail(ErrorKind::Io, "missing ray header");
    RayTrace ray;
    ray.angle = frac_turn(angle);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) fail(ErrorKind::Io, "malformed ray row");
        ray.samples.push_back({std::stod(line.substr(0, c1)),
                               {std::stod(line.substr(c1 + 1, c2 - c1 - 1)), std::stod(line.substr(c2 + 1))}});
    }
    if (!ray.samples.empty()) ray.landing_estimate = ray.samples.back().point;
    return ray;
}

double turn_distance(double x, double y) {
    const double d = frac_turn(x - y);
    return std::min(d, 1.0 - d);
}

ParameterAngle cocritical_parameter_angle(const CubicMap& f, int mu, std::optional<Complex> branch_anchor,
                                          std::size_t max_iter) {
    if (mu < 1) fail(ErrorKind::InvalidArgument, "mu must be positive");
    if (locus_membership(f, max_iter)) fail(ErrorKind::NotInEscapeRegion, "free critical point does not escape");
    const Complex b = bottcher_coordinate(f, f.cocritical());
    const double arg = std::arg(b);
    double best = arg / mu;
    if (branch_anchor) {
        const double anchor = std::arg(*branch_anchor) / kTwoPi;
        double best_distance = 2.0;
        for (int j = 0; j < mu; ++j) {
            const double candidate = (arg + kTwoPi * j) / mu;
            const double d = turn_distance(candidate / kTwoPi, anchor);
            if (d < best_distance) {
                best_distance = d;
                best = candidate;
            }
        }
    }
    return {frac_turn(best / kTwoPi), std::pow(std::abs(b), 1.0 / mu)};
}

std::vector<AngleCandidate> external_angle_candidates(const CubicMap& f, Complex target, int count,
                                                      double s_scan, std::size_t keep) {
    if (count < 3) fail(ErrorKind::InvalidArgument, "count must be at least 3");
    auto distance = [&](double theta) {
        try {
            return std::abs(ray_point(f, theta, s_scan) - target);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    std::vector<double> d(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) d[j] = distance(double(j) / count);

    std::vector<AngleCandidate> out;
    for (int j = 0; j < count; ++j) {
        const double left = d[(j + count - 1) % count];
        const double right = d[(j + 1) % count];
        if (!std::isfinite(d[j]) || d[j] > left || d[j] > right) continue;
        // Golden-section refinement on the bracketing interval.
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double lo = double(j - 1) / count;
        double hi = double(j + 1) / count;
        double x1 = hi - ratio * (hi - lo);
        double x2 = lo + ratio * (hi - lo);
        double f1 = distance(x1);
        double f2 = distance(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - ratio * (hi - lo);
                f1 = distance(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + ratio * (hi - lo);
                f2 = distance(x2);
            }
        }
        const double theta = f1 <= f2 ? x1 : x2;
        out.push_back({frac_turn(theta), std::min(f1, f2)});
    }
    std::sort(out.begin(), out.end(), [](const AngleCandidate& x, const AngleCandidate& y) {
        return x.distance < y.distance || (x.distance == y.distance && x.angle < y.angle);
    });
    if (out.size() > keep) out.resize(keep);
    return out;
}

bool verify_external_angle(const CubicMap& f, double theta, Complex target, double s_end, double tol) {
    const RayTrace ray = trace_dynamic_ray(f, theta, 1.0, s_end, 40);
    return ray.landed && std::abs(*ray.landing_estimate - target) <= tol;
}

bool LandingReport::shrinking() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(std::abs(rows[i].t) < std::abs(rows[i - 1].t))) return false;
    }
    return true;
}

double LandingReport::max_angle_error() const {
    double worst = 0.0;
    for (const auto& row : rows) worst = std::max(worst, turn_distance(row.param_angle, theta / mu));
    return worst;
}

LandingReport landing_check(const MisiurewiczCertificate& cert, double theta, int mu,
                            const std::vector<double>& s_ladder) {
    require_angle(theta);
    if (mu < 1) fail(ErrorKind::InvalidArgument, "mu must be positive");
    if (s_ladder.empty()) fail(ErrorKind::InvalidArgument, "empty potential ladder");
    for (std::size_t i = 0; i < s_ladder.size(); ++i) {
        if (!(s_ladder[i] > 0.0) || (i > 0 && !(s_ladder[i] < s_ladder[i - 1]))) {
            fail(ErrorKind::InvalidArgument, "potential ladder must be positive and strictly decreasing");
        }
    }

    LandingReport report;
    report.theta = frac_turn(theta);
    report.mu = mu;
    const double exponent = std::log(std::abs(cert.lambda0)) / std::log(3.0);
    const double domain = cert.chart.domain_radius;

    Complex t = 0.0;
    for (std::size_t i = 0; i < s_ladder.size(); ++i) {
        const double s = s_ladder[i];
        if (i > 0) t *= std::pow(s / s_ladder[i - 1], exponent);
        auto residual = [&](Complex tt) {
            const CubicMap g = chart_point(cert.chart, tt);
            return ray_point(g, report.theta, s) - g.cocritical();
        };
        bool converged = false;
        for (int it = 0; it < 60 && !converged; ++it) {
            const Complex h_t = residual(t);
            if (std::abs(h_t) <= 1e-14) break;
            const double h = 1e-6 * std::max({std::abs(t), std::abs(h_t), 1e-10});
            const Complex slope = (residual(t + h) - residual(t - h)) / (2.0 * h);
            const Complex step = h_t / slope;
            double damping = 1.0;
            bool accepted = false;
            for (int k = 0; k < 30 && !accepted; ++k, damping *= 0.5) {
                const Complex trial = t - damping * step;
                if (!is_finite(trial) || std::abs(trial) > domain) continue;
                try {
                    if (std::abs(residual(trial)) < std::abs(h_t)) {
                        converged = std::abs(trial - t) <= 1e-12 * std::abs(trial);
                        t = trial;
                        accepted = true;
                    }
                } catch (const Error&) {
                }
            }
            if (!accepted) {
                if (std::abs(t - step) > domain) {
                    fail(ErrorKind::ChartDomainExceeded, "landing solution leaves the chart domain");
                }
                fail(ErrorKind::NewtonDivergence, "landing Newton stalled at s = " + format_double(s));
            }
        }
        const CubicMap g = chart_point(cert.chart, t);
        LandingRow row;
        row.s = s;
        row.t = t;
        row.param_angle = cocritical_parameter_angle(g, mu).angle;
        row.outside_locus = !locus_membership(g, 5000);
        report.rows.push_back(row);
    }
    return report;
}

std::string landing_to_csv(const LandingReport& report) {
    std::string out = "s,t_re,t_im,param_angle\n";
    for (const auto& row : report.rows) {
        out += format_double(row.s) + "," + format_double(row.t.real()) + "," + format_double(row.t.imag()) +
               "," + format_double(row.param_angle) + "\n";
    }
    return out;
}

}  // namespace csim
