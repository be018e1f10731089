#pragma once

// The cubic family z^3 - 3a^2 z + (2a^3 + v): evaluation, orbits, escape
// tests, the dynamic Green's function and Newton solvers for periodic points.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace csim {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Throws InvalidArgument naming `what` if `z` has a NaN or infinite part.
void require_finite(Complex z, const char* what);

/// A cubic map in normal form. `a` is the marked critical point, `v = F(a)`
/// the critical value; the free critical point is -a and 2a is its co-critical
/// point (F(2a) = F(-a)).
struct CubicMap {
    Complex a{};
    Complex v{};

    Complex constant_term() const noexcept { return 2.0 * a * a * a + v; }

    Complex operator()(Complex z) const noexcept {
        return z * z * z - 3.0 * a * a * z + constant_term();
    }

    Complex derivative(Complex z) const noexcept { return 3.0 * z * z - 3.0 * a * a; }

    Complex second_derivative(Complex z) const noexcept { return 6.0 * z; }

    Complex free_critical() const noexcept { return -a; }
    Complex cocritical() const noexcept { return 2.0 * a; }

    /// max(2, sqrt(3|a|^2 + |2a^3+v| + 2)); beyond it |F(z)| >= 2|z|.
    double escape_radius() const noexcept;

    friend bool operator==(const CubicMap&, const CubicMap&) = default;
};

Complex eval(const CubicMap& f, Complex z) noexcept;
Complex eval_derivative(const CubicMap& f, Complex z) noexcept;

/// F^n(z) with no escape test.
Complex iterate_n(const CubicMap& f, Complex z, std::size_t n) noexcept;

/// Value and derivative of F^n at z.
struct Jet {
    Complex value;
    Complex derivative;
};
Jet iterate_jet(const CubicMap& f, Complex z, std::size_t n) noexcept;

struct OrbitRecord {
    std::vector<Complex> points;
    /// (F^j)'(points[0]) where j = points.size() - 1 is the number of steps taken.
    Complex derivative{1.0, 0.0};
    std::optional<std::size_t> escaped_at;
    double escape_radius_used = 0.0;
};

/// Records z0, F(z0), ... for up to n steps, stopping at the first point with
/// modulus above `escape_radius`. The radius must be at least
/// f.escape_radius() so that a recorded escape is final.
OrbitRecord iterate(const CubicMap& f, Complex z0, std::size_t n, double escape_radius);
OrbitRecord iterate(const CubicMap& f, Complex z0, std::size_t n);

/// One-sided membership: true iff the orbit stays within the guaranteed escape
/// radius for max_iter steps. A false answer is certain.
bool in_filled_julia(const CubicMap& f, Complex z, std::size_t max_iter);

/// Number of steps after which the orbit of z leaves the escape radius, or
/// nullopt if it stays inside for max_iter steps.
std::optional<std::size_t> escape_time(const CubicMap& f, Complex z, std::size_t max_iter);

/// g_F(z) = lim 3^-n log|F^n(z)|. Throws NonEscapingPoint when the orbit does
/// not leave the escape radius within max_iter steps.
double green_potential(const CubicMap& f, Complex z, double tol = 1e-13,
                       std::size_t max_iter = 100000);

/// max(g(a), g(-a)), with non-escaping critical points counted as 0.
double critical_potential(const CubicMap& f, std::size_t max_iter = 100000);

struct PeriodicPoint {
    Complex location;
    int period = 1;
    Complex multiplier;

    bool repelling() const noexcept { return std::abs(multiplier) > 1.0; }
};

constexpr int kNewtonMaxSteps = 64;

/// Newton on F^m(z) - z from `guess`. Stops after 64 steps or when the step is
/// below tol * (1 + |z|).
PeriodicPoint newton_periodic_point(const CubicMap& f, int m, Complex guess, double tol = 1e-13);

/// Follows a period-m point along a sequence of maps, Newton-seeding each map
/// from the previous location. A step whose correction exceeds half the Newton
/// basin radius |lambda - 1| / |(F^m)''| of the previous point is rejected as
/// a suspected branch jump.
std::vector<PeriodicPoint> continue_periodic_point(std::span<const CubicMap> path,
                                                   const PeriodicPoint& start,
                                                   double tol = 1e-13);

}  // namespace csim
