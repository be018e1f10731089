#pragma once

// Boettcher coordinates, external dynamic rays, parameter angles of the
// co-critical point and numeric landing checks of parameter rays.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csim/curve.hpp"

namespace csim {

/// Radius beyond which every factor F(w)/w^3 lies within 1/2 of 1.
double bottcher_radius(const CubicMap& f);

/// log B(w) for |w| >= bottcher_radius(f) from the principal telescoping
/// product. The imaginary part is the principal argument of w plus the
/// correction series.
Complex log_bottcher_far(const CubicMap& f, Complex w, double tol = 1e-16);

/// B(z). Points closer to K_F are reached by following the gradient of g
/// outward and pulling the argument back along that path.
Complex bottcher_coordinate(const CubicMap& f, Complex z, double tol = 1e-16);

/// Inverse of B on |W| >= e * bottcher_radius(f).
Complex inverse_bottcher_far(const CubicMap& f, Complex target);

struct RaySample {
    double s = 0.0;
    Complex point;
};

struct RayTrace {
    /// In turns, reduced to [0, 1).
    double angle = 0.0;
    std::vector<RaySample> samples;
    bool landed = false;
    std::optional<Complex> landing_estimate;
};

constexpr double kLandingTol = 1e-4;

/// Samples at s_start * (s_end / s_start)^(j / steps), j = 0..steps, each the
/// point of potential s on the ray of angle theta.
RayTrace trace_dynamic_ray(const CubicMap& f, double theta, double s_start, double s_end, int steps,
                           double landing_tol = kLandingTol);

/// The single point of potential s on the ray of angle theta.
Complex ray_point(const CubicMap& f, double theta, double s);

std::string ray_to_csv(const RayTrace& ray);
RayTrace ray_from_csv(const std::string& csv, double angle);

struct ParameterAngle {
    /// In turns, reduced to [0, 1).
    double angle = 0.0;
    double modulus = 0.0;
};

/// arg of the mu-th root of B(2a) on the branch nearest branch_anchor
/// (principal if none). Throws NotInEscapeRegion when -a does not escape.
ParameterAngle cocritical_parameter_angle(const CubicMap& f, int mu,
                                          std::optional<Complex> branch_anchor = std::nullopt,
                                          std::size_t max_iter = 2000);

struct AngleCandidate {
    double angle = 0.0;
    /// Distance from the ray point at the scan potential to the target.
    double distance = 0.0;
};

/// Angles of rays passing near `target` at potential s_scan, found on a grid
/// of `count` angles and refined by golden-section search. Sorted by distance.
std::vector<AngleCandidate> external_angle_candidates(const CubicMap& f, Complex target, int count = 64,
                                                      double s_scan = 1e-3, std::size_t keep = 4);

/// Traces theta from s = 1 down to s_end and accepts it as an external angle
/// of `target` when the trace lands within `tol` of it.
bool verify_external_angle(const CubicMap& f, double theta, Complex target, double s_end = 1e-5,
                           double tol = 10.0 * kLandingTol);

struct LandingRow {
    double s = 0.0;
    Complex t;
    double param_angle = 0.0;
    bool outside_locus = false;
};

struct LandingReport {
    double theta = 0.0;
    int mu = 1;
    std::vector<LandingRow> rows;

    /// |t(s)| strictly decreasing along the ladder.
    bool shrinking() const;
    /// Largest circular distance in turns between param_angle and theta / mu.
    double max_angle_error() const;
};

/// Solves ray_point(G_t, theta, s) = 2a(t) by damped Newton in the chart
/// parameter t for every s of the (decreasing) ladder.
LandingReport landing_check(const MisiurewiczCertificate& cert, double theta, int mu,
                            const std::vector<double>& s_ladder);

std::string landing_to_csv(const LandingReport& report);

/// Circular distance between two angles in turns.
double turn_distance(double x, double y);

}  // namespace csim
