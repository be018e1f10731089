#pragma once

// The curve S_p of maps whose marked critical point a has minimal period p:
// the defining function eta, local charts, Misiurewicz certificates, the
// connectedness-locus test and the transversality constant B0.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csim/dynamics.hpp"

namespace csim {

/// eta(a, v) = F^p(a) - a for the map (a, v).
Complex eta(Complex a, Complex v, int p);

struct EtaGradient {
    Complex d_a;
    Complex d_v;
};

/// Forward-mode partials of eta, carrying both the orbit dependence and the
/// dependence of the coefficients of F on a and v.
EtaGradient eta_gradient(Complex a, Complex v, int p);

/// Residual threshold used for every minimality test.
constexpr double kMinimalityThreshold = 1e-8;
/// Bound on |eta| for every point a chart returns.
constexpr double kChartEtaTolerance = 1e-9;

struct CurvePoint {
    CubicMap map;
    int period = 1;
    double eta_residual = 0.0;
};

/// Validates that `map` lies on S_p: |eta| <= tolerance and no proper divisor
/// d of p already returns a to itself. Throws OffCurve or NotMinimal.
CurvePoint make_curve_point(const CubicMap& map, int p, double tolerance = kChartEtaTolerance);

/// True iff F^d(a) stays at least kMinimalityThreshold away from a for every
/// proper divisor d of p.
bool has_minimal_period(const CubicMap& map, int p);

enum class ChartKind { explicit_s1, explicit_s2_delta, hamiltonian };

const char* to_string(ChartKind kind) noexcept;
ChartKind chart_kind_from_string(const std::string& name);

struct LocalChart {
    CurvePoint base;
    ChartKind kind = ChartKind::hamiltonian;
    double integrator_step = 1e-3;
    double domain_radius = 0.1;
    /// Base value of delta for explicit_s2_delta charts.
    Complex delta0{};
};

/// A chart of the given kind with step 1e-2 * domain_radius.
LocalChart make_chart(const CurvePoint& base, ChartKind kind, double domain_radius);

/// The map with local parameter t. Hamiltonian charts integrate
/// da/dt = d eta/dv, dv/dt = -d eta/da with RK4 along the segment [0, t],
/// projecting v back onto eta = 0 after every step.
CubicMap chart_point(const LocalChart& chart, Complex t);

/// Literal transcription of the delta-form S_2 map with a = -(delta + 1/delta)/3.
CubicMap s2_delta_transcription(Complex delta);

/// The transcription, validated: throws OffCurve unless it lies on S_2 (eta
/// vanishes and the period of a is exactly 2).
CubicMap s2_delta_chart(Complex delta);

/// True iff the free critical point -a stays bounded for max_iter steps.
bool locus_membership(const CubicMap& map, std::size_t max_iter);

struct MisiurewiczCertificate {
    CubicMap map;
    int p = 1;
    int ell = 1;
    int m = 1;
    Complex a0;
    Complex lambda0;
    Complex A0;
    Complex B0;
    double B0_error = 0.0;
    Complex Q;
    Complex q;
    LocalChart chart;

    PeriodicPoint landing_point() const { return {a0, m, lambda0}; }
};

struct MisiurewiczOptions {
    double tol = 1e-12;
    int max_steps = 64;
    /// Largest chart radius tried when sizing the chart domain.
    double max_domain_radius = 0.1;
};

/// Solves eta(a, v) = 0, F^(ell+m)(-a) = F^ell(-a) by Newton from `seed`, then
/// verifies minimality, strict preperiodicity and repulsion, builds the chart
/// and fills A0, B0, Q = A0/B0 and q = 1/Q.
MisiurewiczCertificate find_misiurewicz(int p, int ell, int m, Complex seed_a, Complex seed_v,
                                        const MisiurewiczOptions& options = {});

/// Rebuilds a certificate's chart and derived fields from stored values, for
/// certificates read back from disk.
LocalChart chart_for(const CubicMap& map, int p, ChartKind kind, double domain_radius);

/// Halves from max_radius until eight boundary points of the chart keep
/// |eta| <= 1e-9 and the period-m point continues to each of them.
double size_chart_domain(const CurvePoint& base, ChartKind kind, const PeriodicPoint& cycle,
                         double max_radius = 0.1);

/// b(t) - s(t): the co-critical image G^ell(2a(t)) minus the continued
/// repelling point s(t), with s continued radially from t = 0 in `steps` steps.
Complex cocritical_offset(const MisiurewiczCertificate& cert, Complex t, int steps = 8);

/// The continued periodic point s(t) and its multiplier.
PeriodicPoint continued_cycle_point(const MisiurewiczCertificate& cert, Complex t, int steps = 8);

struct B0Estimate {
    Complex value;
    double error = 0.0;
    std::vector<Complex> central_differences;
    std::vector<Complex> richardson;
};

/// d/dt [b(t) - s(t)] at t = 0 from central differences over `h_ladder`
/// (decreasing) with Richardson extrapolation between consecutive rungs.
/// Throws TransversalityFailure when |B0| < 1e-6.
B0Estimate compute_B0(const MisiurewiczCertificate& cert, const std::vector<double>& h_ladder);

std::vector<double> default_h_ladder(double domain_radius);

/// Winding number of f around 0 along the circle |t - center| = radius,
/// doubling the sample count until no argument increment exceeds pi/2.
int winding_number(const std::function<Complex(Complex)>& f, double radius, std::size_t samples,
                   Complex center = {});

/// Winding number of t -> b(t) - s(t) on |t| = radius; 1 certifies a simple zero.
int transversality_winding(const MisiurewiczCertificate& cert, double radius, std::size_t samples);

}  // namespace csim
