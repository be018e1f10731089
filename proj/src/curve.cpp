#include "csim/curve.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "csim/errors.hpp"

namespace csim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Orbit point together with its partials in the parameters a and v.
struct Sensitivity {
    Complex z;
    Complex d_a;
    Complex d_v;
};

Sensitivity advance(const CubicMap& f, const Sensitivity& s) {
    const Complex fp = f.derivative(s.z);
    return {f(s.z), fp * s.d_a + (6.0 * f.a * f.a - 6.0 * f.a * s.z), fp * s.d_v + 1.0};
}

Sensitivity advance_n(const CubicMap& f, Sensitivity s, int n) {
    for (int i = 0; i < n; ++i) s = advance(f, s);
    return s;
}

std::vector<int> proper_divisors(int n) {
    std::vector<int> out;
    for (int d = 1; d < n; ++d) {
        if (n % d == 0) out.push_back(d);
    }
    return out;
}

Complex unit(double turns) { return std::polar(1.0, kTwoPi * turns); }

std::vector<CubicMap> radial_path(const LocalChart& chart, Complex t, int steps) {
    std::vector<CubicMap> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) path.push_back(chart_point(chart, t * (double(i) / steps)));
    return path;
}

Complex project_onto_curve(Complex a, Complex v, int p, int max_steps, bool require) {
    for (int i = 0; i < max_steps; ++i) {
        const Complex e = eta(a, v, p);
        if (i > 0 && std::abs(e) <= 1e-3 * kChartEtaTolerance) break;
        const Complex dv = eta_gradient(a, v, p).d_v;
        if (std::abs(dv) < 1e-14) fail(ErrorKind::ProjectionFailed, "d eta/dv vanishes");
        v -= e / dv;
    }
    if (require && !(std::abs(eta(a, v, p)) <= kChartEtaTolerance)) {
        fail(ErrorKind::ProjectionFailed, "|eta| stays above 1e-9 after projection");
    }
    return v;
}

CubicMap integrate_hamiltonian(const LocalChart& chart, Complex t) {
    const int p = chart.base.period;
    Complex a = chart.base.map.a;
    Complex v = chart.base.map.v;
    if (t == Complex{}) return chart.base.map;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) / chart.integrator_step - 1e-9)));
    const Complex h = t / double(steps);
    auto field = [p](Complex aa, Complex vv) {
        const EtaGradient g = eta_gradient(aa, vv, p);
        return std::array<Complex, 2>{g.d_v, -g.d_a};
    };
    for (int i = 0; i < steps; ++i) {
        const auto k1 = field(a, v);
        const auto k2 = field(a + 0.5 * h * k1[0], v + 0.5 * h * k1[1]);
        const auto k3 = field(a + 0.5 * h * k2[0], v + 0.5 * h * k2[1]);
        const auto k4 = field(a + h * k3[0], v + h * k3[1]);
        a += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        v += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        v = project_onto_curve(a, v, p, 1, false);
    }
    v = project_onto_curve(a, v, p, 8, true);
    return {a, v};
}

// Newton residual for the Misiurewicz system and its Jacobian in (a, v).
struct SystemEval {
    std::array<Complex, 2> residual;
    std::array<std::array<Complex, 2>, 2> jacobian;
};

SystemEval misiurewicz_system(Complex a, Complex v, int p, int ell, int m) {
    const CubicMap f{a, v};
    const Sensitivity orbit_a = advance_n(f, {a, 1.0, 0.0}, p);
    const Sensitivity at_ell = advance_n(f, {-a, -1.0, 0.0}, ell);
    const Sensitivity at_ell_m = advance_n(f, at_ell, m);
    SystemEval out;
    out.residual = {orbit_a.z - a, at_ell_m.z - at_ell.z};
    out.jacobian[0] = {orbit_a.d_a - 1.0, orbit_a.d_v};
    out.jacobian[1] = {at_ell_m.d_a - at_ell.d_a, at_ell_m.d_v - at_ell.d_v};
    return out;
}

}  // namespace

Complex eta(Complex a, Complex v, int p) {
    if (p < 1) fail(ErrorKind::InvalidArgument, "period must be positive");
    return iterate_n(CubicMap{a, v}, a, static_cast<std::size_t>(p)) - a;
}

EtaGradient eta_gradient(Complex a, Complex v, int p) {
    if (p < 1) fail(ErrorKind::InvalidArgument, "period must be positive");
    const Sensitivity s = advance_n(CubicMap{a, v}, {a, 1.0, 0.0}, p);
    return {s.d_a - 1.0, s.d_v};
}

bool has_minimal_period(const CubicMap& map, int p) {
    for (int d : proper_divisors(p)) {
        if (std::abs(iterate_n(map, map.a, static_cast<std::size_t>(d)) - map.a) < kMinimalityThreshold) {
            return false;
        }
    }
    return true;
}

CurvePoint make_curve_point(const CubicMap& map, int p, double tolerance) {
    require_finite(map.a, "a");
    require_finite(map.v, "v");
    const double residual = std::abs(eta(map.a, map.v, p));
    if (residual > tolerance) {
        fail(ErrorKind::OffCurve, "|eta| = " + std::to_string(residual) + " for p = " + std::to_string(p));
    }
    if (!has_minimal_period(map, p)) {
        fail(ErrorKind::NotMinimal, "marked critical point has a period below " + std::to_string(p));
    }
    return {map, p, residual};
}

const char* to_string(ChartKind kind) noexcept {
    switch (kind) {
        case ChartKind::explicit_s1: return "explicit_s1";
        case ChartKind::explicit_s2_delta: return "explicit_s2_delta";
        case ChartKind::hamiltonian: return "hamiltonian";
    }
    return "hamiltonian";
}

ChartKind chart_kind_from_string(const std::string& name) {
    if (name == "explicit_s1") return ChartKind::explicit_s1;
    if (name == "explicit_s2_delta") return ChartKind::explicit_s2_delta;
    if (name == "hamiltonian") return ChartKind::hamiltonian;
    fail(ErrorKind::InvalidArgument, "unknown chart kind '" + name + "'");
}

LocalChart make_chart(const CurvePoint& base, ChartKind kind, double domain_radius) {
    if (!(domain_radius > 0.0)) fail(ErrorKind::InvalidArgument, "chart domain radius must be positive");
    if (kind == ChartKind::explicit_s1 && base.period != 1) {
        fail(ErrorKind::InvalidArgument, "explicit_s1 chart requires p = 1");
    }
    LocalChart chart;
    chart.base = base;
    chart.kind = kind;
    chart.domain_radius = domain_radius;
    chart.integrator_step = 1e-2 * domain_radius;
    if (kind == ChartKind::explicit_s2_delta) {
        if (base.period != 2) fail(ErrorKind::InvalidArgument, "explicit_s2_delta chart requires p = 2");
        // a = -(delta + 1/delta)/3  =>  delta^2 + 3a delta + 1 = 0.
        const Complex a = base.map.a;
        chart.delta0 = (-3.0 * a + std::sqrt(9.0 * a * a - 4.0)) / 2.0;
        s2_delta_chart(chart.delta0);
    }
    return chart;
}

CubicMap chart_point(const LocalChart& chart, Complex t) {
    require_finite(t, "t");
    if (std::abs(t) > chart.domain_radius * (1.0 + 1e-12)) {
        fail(ErrorKind::ChartDomainExceeded,
             "|t| = " + std::to_string(std::abs(t)) + " exceeds " + std::to_string(chart.domain_radius));
    }
    switch (chart.kind) {
        case ChartKind::explicit_s1:
            return {chart.base.map.a + t, chart.base.map.v + t};
        case ChartKind::explicit_s2_delta:
            return s2_delta_chart(chart.delta0 + t);
        case ChartKind::hamiltonian:
            return integrate_hamiltonian(chart, t);
    }
    return chart.base.map;
}

CubicMap s2_delta_transcription(Complex delta) {
    if (delta == Complex{}) fail(ErrorKind::InvalidArgument, "delta must be nonzero");
    const Complex s = (delta + 1.0 / delta) / 3.0;
    const Complex a = -s;
    const Complex constant = -2.0 * s * s * s - s;
    // Linear coefficient is -3 s^2 = -3 a^2; the constant is 2a^3 + v.
    return {a, constant - 2.0 * a * a * a};
}

CubicMap s2_delta_chart(Complex delta) {
    const CubicMap map = s2_delta_transcription(delta);
    const double residual = std::abs(eta(map.a, map.v, 2));
    if (residual > kChartEtaTolerance) {
        fail(ErrorKind::OffCurve, "delta-form map has |eta_2| = " + std::to_string(residual));
    }
    if (!has_minimal_period(map, 2)) {
        fail(ErrorKind::OffCurve, "delta-form map has a fixed marked critical point (lies on S_1)");
    }
    return map;
}

bool locus_membership(const CubicMap& map, std::size_t max_iter) {
    return in_filled_julia(map, map.free_critical(), max_iter);
}

LocalChart chart_for(const CubicMap& map, int p, ChartKind kind, double domain_radius) {
    return make_chart(make_curve_point(map, p), kind, domain_radius);
}

double size_chart_domain(const CurvePoint& base, ChartKind kind, const PeriodicPoint& cycle,
                         double max_radius) {
    for (double r = max_radius; r >= 1e-8; r *= 0.5) {
        bool ok = true;
        try {
            const LocalChart chart = make_chart(base, kind, r);
            for (int j = 0; j < 8 && ok; ++j) {
                const Complex t = r * unit(j / 8.0);
                const CubicMap g = chart_point(chart, t);
                if (std::abs(eta(g.a, g.v, base.period)) > kChartEtaTolerance) ok = false;
                const auto path = radial_path(chart, t, 16);
                continue_periodic_point(path, cycle);
            }
        } catch (const Error&) {
            ok = false;
        }
        if (ok) return r;
    }
    fail(ErrorKind::ContinuationFailure, "no chart radius down to 1e-8 passes the boundary checks");
}

PeriodicPoint continued_cycle_point(const MisiurewiczCertificate& cert, Complex t, int steps) {
    if (t == Complex{}) return cert.landing_point();
    try {
        const auto path = radial_path(cert.chart, t, steps);
        return continue_periodic_point(path, cert.landing_point()).back();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ChartDomainExceeded) throw;
        fail(ErrorKind::ContinuationFailure, e.what());
    }
}

Complex cocritical_offset(const MisiurewiczCertificate& cert, Complex t, int steps) {
    const CubicMap g = chart_point(cert.chart, t);
    const Complex b = iterate_n(g, g.cocritical(), static_cast<std::size_t>(cert.ell));
    return b - continued_cycle_point(cert, t, steps).location;
}

std::vector<double> default_h_ladder(double domain_radius) {
    const double h = std::min(1e-2, 0.5 * domain_radius);
    return {h, h / 2.0, h / 4.0};
}

B0Estimate compute_B0(const MisiurewiczCertificate& cert, const std::vector<double>& h_ladder) {
    if (h_ladder.empty()) fail(ErrorKind::InvalidArgument, "empty step ladder");
    B0Estimate est;
    for (double h : h_ladder) {
        if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "ladder steps must be positive");
        const Complex plus = cocritical_offset(cert, Complex{h, 0.0});
        const Complex minus = cocritical_offset(cert, Complex{-h, 0.0});
        est.central_differences.push_back((plus - minus) / (2.0 * h));
    }
    for (std::size_t i = 0; i + 1 < h_ladder.size(); ++i) {
        const double ratio = h_ladder[i] / h_ladder[i + 1];
        const double r2 = ratio * ratio;
        est.richardson.push_back((r2 * est.central_differences[i + 1] - est.central_differences[i]) / (r2 - 1.0));
    }
    if (est.richardson.size() >= 2) {
        est.value = est.richardson.back();
        est.error = std::abs(est.richardson.back() - est.richardson[est.richardson.size() - 2]);
    } else if (est.richardson.size() == 1) {
        est.value = est.richardson.back();
        est.error = std::abs(est.richardson.back() - est.central_differences.back());
    } else {
        est.value = est.central_differences.back();
        est.error = std::numeric_limits<double>::infinity();
    }
    if (std::abs(est.value) < 1e-6) {
        fail(ErrorKind::TransversalityFailure, "|B0| = " + std::to_string(std::abs(est.value)) + " below 1e-6");
    }
    return est;
}

namespace {

constexpr std::size_t kMaxWindingSamples = std::size_t{1} << 16;

// Winding of the closed polyline through `values`; nullopt when some argument
// increment exceeds pi/2 and the sampling must be refined.
std::optional<int> polyline_winding(const std::vector<Complex>& values) {
    double total = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const Complex cur = values[j];
        const Complex next = values[(j + 1) % values.size()];
        if (!is_finite(cur) || cur == Complex{}) {
            fail(ErrorKind::SamplingTooCoarse, "function vanishes or is not finite on the contour");
        }
        const double inc = std::arg(next / cur);
        if (std::abs(inc) > 0.5 * std::numbers::pi) return std::nullopt;
        total += inc;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

int winding_number(const std::function<Complex(Complex)>& f, double radius, std::size_t samples,
                   Complex center) {
    if (!(radius > 0.0) || samples < 3) fail(ErrorKind::InvalidArgument, "need radius > 0 and >= 3 samples");
    for (std::size_t n = samples; n <= kMaxWindingSamples; n *= 2) {
        std::vector<Complex> values(n);
        for (std::size_t j = 0; j < n; ++j) values[j] = f(center + radius * unit(double(j) / double(n)));
        if (auto w = polyline_winding(values)) return *w;
    }
    fail(ErrorKind::SamplingTooCoarse, "argument increments stay above pi/2");
}

int transversality_winding(const MisiurewiczCertificate& cert, double radius, std::size_t samples) {
    if (!(radius > 0.0) || samples < 3) fail(ErrorKind::InvalidArgument, "need radius > 0 and >= 3 samples");
    if (radius > cert.chart.domain_radius) {
        fail(ErrorKind::ChartDomainExceeded, "winding radius outside the chart domain");
    }
    constexpr int kRadialSteps = 16;
    for (std::size_t n = samples; n <= kMaxWindingSamples; n *= 2) {
        std::vector<CubicMap> path;
        std::vector<Complex> ts;
        for (int i = 0; i <= kRadialSteps; ++i) {
            const Complex t{radius * i / kRadialSteps, 0.0};
            path.push_back(chart_point(cert.chart, t));
        }
        for (std::size_t j = 1; j <= n; ++j) {
            const Complex t = radius * unit(double(j) / double(n));
            ts.push_back(t);
            path.push_back(chart_point(cert.chart, t));
        }
        std::vector<PeriodicPoint> cycle;
        try {
            cycle = continue_periodic_point(path, cert.landing_point());
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::BranchJumpSuspected) continue;
            fail(ErrorKind::ContinuationFailure, e.what());
        }
        const Complex start = cycle[kRadialSteps].location;
        const Complex end = cycle.back().location;
        if (std::abs(start - end) > 1e-8 * (1.0 + std::abs(start))) {
            fail(ErrorKind::ContinuationFailure, "periodic point does not return to itself around the circle");
        }
        std::vector<Complex> values(n);
        for (std::size_t j = 0; j < n; ++j) {
            const CubicMap& g = path[kRadialSteps + 1 + j];
            const Complex b = iterate_n(g, g.cocritical(), static_cast<std::size_t>(cert.ell));
            values[j] = b - cycle[kRadialSteps + 1 + j].location;
        }
        if (auto w = polyline_winding(values)) return *w;
    }
    fail(ErrorKind::SamplingTooCoarse, "argument increments stay above pi/2");
}

MisiurewiczCertificate find_misiurewicz(int p, int ell, int m, Complex seed_a, Complex seed_v,
                                        const MisiurewiczOptions& options) {
    if (p < 1 || ell < 1 || m < 1) fail(ErrorKind::InvalidArgument, "p, ell and m must be positive");
    require_finite(seed_a, "seed_a");
    require_finite(seed_v, "seed_v");
    Complex a = seed_a;
    Complex v = seed_v;
    bool converged = false;
    for (int step = 0; step <= options.max_steps; ++step) {
        const SystemEval sys = misiurewicz_system(a, v, p, ell, m);
        const double residual = std::max(std::abs(sys.residual[0]), std::abs(sys.residual[1]));
        if (!std::isfinite(residual)) break;
        if (residual < options.tol) {
            converged = true;
            break;
        }
        if (step == options.max_steps) break;
        const auto& j = sys.jacobian;
        const Complex det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if (std::abs(det) < 1e-300) fail(ErrorKind::DerivativeSingular, "singular Misiurewicz Jacobian");
        const Complex da = (j[1][1] * sys.residual[0] - j[0][1] * sys.residual[1]) / det;
        const Complex dv = (j[0][0] * sys.residual[1] - j[1][0] * sys.residual[0]) / det;
        a -= da;
        v -= dv;
    }
    if (!converged) fail(ErrorKind::NoConvergence, "Misiurewicz Newton did not reach the residual tolerance");

    const CubicMap f{a, v};
    if (!has_minimal_period(f, p)) fail(ErrorKind::NotMinimal, "marked critical point period below p");
    const Complex free_pt = f.free_critical();
    if (std::abs(iterate_n(f, free_pt, static_cast<std::size_t>(m)) - free_pt) < kMinimalityThreshold) {
        fail(ErrorKind::FreeCriticalPeriodic, "free critical point is periodic");
    }
    if (ell > 1) {
        const Complex before = iterate_n(f, free_pt, static_cast<std::size_t>(ell - 1));
        if (std::abs(iterate_n(f, before, static_cast<std::size_t>(m)) - before) < kMinimalityThreshold) {
            fail(ErrorKind::NotMinimal, "free critical orbit is already periodic after ell - 1 steps");
        }
    }
    const Complex landing = iterate_n(f, free_pt, static_cast<std::size_t>(ell));
    for (int d : proper_divisors(m)) {
        if (std::abs(iterate_n(f, landing, static_cast<std::size_t>(d)) - landing) < kMinimalityThreshold) {
            fail(ErrorKind::NotMinimal, "landing cycle has period below m");
        }
    }
    const PeriodicPoint cycle = newton_periodic_point(f, m, landing, 1e-15);
    if (!cycle.repelling()) fail(ErrorKind::NotRepelling, "|lambda0| <= 1");

    MisiurewiczCertificate cert;
    cert.map = f;
    cert.p = p;
    cert.ell = ell;
    cert.m = m;
    cert.a0 = cycle.location;
    cert.lambda0 = cycle.multiplier;
    cert.A0 = iterate_jet(f, f.cocritical(), static_cast<std::size_t>(ell)).derivative;
    if (cert.A0 == Complex{}) fail(ErrorKind::NotRepelling, "A0 vanishes");

    const CurvePoint base = make_curve_point(f, p);
    const ChartKind kind = p == 1 ? ChartKind::explicit_s1 : ChartKind::hamiltonian;
    const double radius = size_chart_domain(base, kind, cycle, options.max_domain_radius);
    cert.chart = make_chart(base, kind, radius);

    const B0Estimate b0 = compute_B0(cert, default_h_ladder(radius));
    cert.B0 = b0.value;
    cert.B0_error = b0.error;
    cert.Q = cert.A0 / cert.B0;
    cert.q = 1.0 / cert.Q;
    return cert;
}

}  // namespace csim
