#include "csim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "csim/errors.hpp"

namespace csim {

void require_finite(Complex z, const char* what) {
    if (!is_finite(z)) fail(ErrorKind::InvalidArgument, std::string(what) + " is not finite");
}

double CubicMap::escape_radius() const noexcept {
    const double bound = std::sqrt(3.0 * std::norm(a) + std::abs(constant_term()) + 2.0);
    return std::max(2.0, bound);
}

Complex eval(const CubicMap& f, Complex z) noexcept { return f(z); }

Complex eval_derivative(const CubicMap& f, Complex z) noexcept { return f.derivative(z); }

Complex iterate_n(const CubicMap& f, Complex z, std::size_t n) noexcept {
    for (std::size_t i = 0; i < n; ++i) z = f(z);
    return z;
}

Jet iterate_jet(const CubicMap& f, Complex z, std::size_t n) noexcept {
    Complex d{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        d *= f.derivative(z);
        z = f(z);
    }
    return {z, d};
}

OrbitRecord iterate(const CubicMap& f, Complex z0, std::size_t n, double escape_radius) {
    require_finite(z0, "z0");
    if (escape_radius < f.escape_radius()) {
        fail(ErrorKind::InvalidArgument, "escape radius below the guaranteed escape bound");
    }
    OrbitRecord rec;
    rec.escape_radius_used = escape_radius;
    rec.points.reserve(n + 1);
    rec.points.push_back(z0);
    const double r2 = escape_radius * escape_radius;
    if (std::norm(z0) > r2) {
        rec.escaped_at = 0;
        return rec;
    }
    Complex z = z0;
    for (std::size_t k = 0; k < n; ++k) {
        rec.derivative *= f.derivative(z);
        z = f(z);
        rec.points.push_back(z);
        if (std::norm(z) > r2) {
            rec.escaped_at = k + 1;
            break;
        }
    }
    return rec;
}

OrbitRecord iterate(const CubicMap& f, Complex z0, std::size_t n) {
    return iterate(f, z0, n, f.escape_radius());
}

std::optional<std::size_t> escape_time(const CubicMap& f, Complex z, std::size_t max_iter) {
    const double r = f.escape_radius();
    const double r2 = r * r;
    const Complex a2 = f.a * f.a;
    const Complex c = f.constant_term();
    for (std::size_t k = 0; k <= max_iter; ++k) {
        if (!(std::norm(z) <= r2)) return k;
        if (k == max_iter) break;
        z = z * (z * z - 3.0 * a2) + c;
    }
    return std::nullopt;
}

bool in_filled_julia(const CubicMap& f, Complex z, std::size_t max_iter) {
    return !escape_time(f, z, max_iter).has_value();
}

double green_potential(const CubicMap& f, Complex z, double tol, std::size_t max_iter) {
    require_finite(z, "z");
    const auto n_escape = escape_time(f, z, max_iter);
    if (!n_escape) fail(ErrorKind::NonEscapingPoint, "orbit stays bounded within the iteration budget");
    z = iterate_n(f, z, *n_escape);

    // Beyond the escape radius, g(z) = log|z| + sum_j 3^-(j+1) log|F(z_j)/z_j^3|.
    double scale = std::pow(3.0, -static_cast<double>(*n_escape));
    double g = scale * std::log(std::abs(z));
    const Complex a2 = f.a * f.a;
    const Complex c = f.constant_term();
    for (int j = 0; j < 4096; ++j) {
        const Complex inv = 1.0 / z;
        const Complex ratio = 1.0 - 3.0 * a2 * inv * inv + c * inv * inv * inv;
        scale /= 3.0;
        const double inc = scale * std::log(std::abs(ratio));
        g += inc;
        if (std::abs(inc) < 1e-3 * tol || std::abs(z) > 1e60) break;
        z = f(z);
    }
    return g;
}

double critical_potential(const CubicMap& f, std::size_t max_iter) {
    double g = 0.0;
    for (Complex c : {f.a, -f.a}) {
        if (!in_filled_julia(f, c, max_iter)) g = std::max(g, green_potential(f, c, 1e-15, max_iter));
    }
    return g;
}

namespace {

struct Jet2 {
    Complex value;
    Complex d1;
    Complex d2;
};

Jet2 iterate_jet2(const CubicMap& f, Complex z, int n) {
    Complex d1{1.0, 0.0};
    Complex d2{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const Complex fp = f.derivative(z);
        d2 = f.second_derivative(z) * d1 * d1 + fp * d2;
        d1 *= fp;
        z = f(z);
    }
    return {z, d1, d2};
}

}  // namespace

PeriodicPoint newton_periodic_point(const CubicMap& f, int m, Complex guess, double tol) {
    if (m < 1) fail(ErrorKind::InvalidArgument, "period must be positive");
    require_finite(guess, "guess");
    Complex z = guess;
    bool converged = false;
    for (int step = 0; step < kNewtonMaxSteps; ++step) {
        const Jet jet = iterate_jet(f, z, static_cast<std::size_t>(m));
        const Complex denom = jet.derivative - 1.0;
        if (std::abs(denom) < 1e-14) fail(ErrorKind::DerivativeSingular, "(F^m)' - 1 vanishes");
        const Complex dz = (jet.value - z) / denom;
        z -= dz;
        if (!is_finite(z)) break;
        if (std::abs(dz) < tol * (1.0 + std::abs(z))) {
            converged = true;
            break;
        }
    }
    if (!converged) fail(ErrorKind::NoConvergence, "Newton for period-" + std::to_string(m) + " point");
    const Jet jet = iterate_jet(f, z, static_cast<std::size_t>(m));
    const double residual = std::abs(jet.value - z);
    if (residual > tol * (1.0 + std::abs(z)) * (1.0 + std::abs(jet.derivative))) {
        fail(ErrorKind::NoConvergence, "residual " + std::to_string(residual) + " above tolerance");
    }
    return {z, m, jet.derivative};
}

std::vector<PeriodicPoint> continue_periodic_point(std::span<const CubicMap> path,
                                                   const PeriodicPoint& start, double tol) {
    std::vector<PeriodicPoint> out;
    if (path.empty()) return out;
    out.reserve(path.size());
    out.push_back(newton_periodic_point(path[0], start.period, start.location, tol));
    for (std::size_t j = 1; j < path.size(); ++j) {
        const PeriodicPoint& prev = out.back();
        const Jet2 jet = iterate_jet2(path[j - 1], prev.location, prev.period);
        const double curvature = std::abs(jet.d2);
        const double basin = curvature > 0.0 ? std::abs(prev.multiplier - 1.0) / curvature
                                             : std::numeric_limits<double>::infinity();
        PeriodicPoint next = newton_periodic_point(path[j], prev.period, prev.location, tol);
        const double correction = std::abs(next.location - prev.location);
        if (correction > 0.5 * basin) {
            fail(ErrorKind::BranchJumpSuspected,
                 "step " + std::to_string(j) + " moved " + std::to_string(correction) +
                     " against basin radius " + std::to_string(basin));
        }
        out.push_back(next);
    }
    return out;
}

}  // namespace csim
