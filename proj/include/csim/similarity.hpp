#pragma once

// Magnification scales rho_k, the rescaled sequences phi_k and Phi_k, the
// Poincare function of the landing cycle and the two Hausdorff convergence
// experiments comparing K_F and the connectedness locus with the limit model.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csim/curve.hpp"
#include "csim/grid.hpp"

namespace csim {

/// Scales below this modulus are refused (double precision floor).
constexpr double kMinScale = 1e-10;

/// 1 / (A0 lambda0^k). Throws PrecisionExhausted when |rho_k| < 1e-10.
Complex rho_k(const MisiurewiczCertificate& cert, int k);

/// 1 / (F^(ell+km))'(2a) by the chain rule along the literal orbit.
Complex rho_k_chain_rule(const MisiurewiczCertificate& cert, int k);

/// Largest k with |rho_k| >= 1e-10.
int max_precision_k(const MisiurewiczCertificate& cert);

/// Whether the rescaled parameter window |Q rho_k| r sqrt(2) fits in the chart.
bool chart_guard_passes(const MisiurewiczCertificate& cert, int k, double r);

/// Poincare function phi of a repelling cycle: phi(0) = a0, phi'(0) = 1 and
/// phi(lambda0 w) = F^m(phi(w)), evaluated as a0 + g^n(w / lambda0^n) where g
/// is F^m written in deviations from the cycle.
class PoincareEvaluator {
public:
    PoincareEvaluator(const CubicMap& map, const PeriodicPoint& cycle, double tol = 1e-11,
                      double test_radius = 2.0);
    explicit PoincareEvaluator(const MisiurewiczCertificate& cert, double tol = 1e-11,
                               double test_radius = 2.0);

    /// phi(w), enforcing that doubling the depth changes the value by at most
    /// tol * (1 + |phi(w)|). Throws NoConvergence otherwise.
    Complex operator()(Complex w) const;

    /// The depth-n approximant without the doubling check.
    Complex approximate(Complex w) const;

    /// Smallest depth n >= 1 with |w| / |lambda0|^n <= inner_radius.
    int depth(Complex w) const;

    double inner_radius() const noexcept { return inner_radius_; }
    double tol() const noexcept { return tol_; }
    const CubicMap& map() const noexcept { return map_; }
    Complex a0() const noexcept { return cycle_.front(); }
    Complex lambda0() const noexcept { return lambda_; }
    int period() const noexcept { return static_cast<int>(cycle_.size()); }

private:
    Complex evaluate(Complex w, int n) const;

    CubicMap map_;
    std::vector<Complex> cycle_;
    std::vector<Complex> cycle_derivative_;
    Complex lambda_;
    double tol_;
    double inner_radius_ = 0.1;
};

Complex poincare_eval(const PoincareEvaluator& ev, Complex w);

/// F^(ell+km)(2a + rho_k w).
Complex phi_k_eval(const MisiurewiczCertificate& cert, Complex w, int k);

/// G^(ell+km)(2a(t)) for G = chart_point(t), t = Q rho_k w.
Complex Phi_k_eval(const MisiurewiczCertificate& cert, Complex w, int k);

/// lambda(t) / lambda0 raised to the k-th power at t = Q rho_k w.
Complex multiplier_ratio_power(const MisiurewiczCertificate& cert, Complex w, int k);

enum class RasterMode { limit_model, rescaled_julia, rescaled_locus };

const char* to_string(RasterMode mode) noexcept;

/// Rasterizes one of the three sets over [-r, r]^2 and applies [.]_r.
GridSet rasterize(const MisiurewiczCertificate& cert, RasterMode mode, double r, std::size_t resolution,
                  std::optional<int> k, std::size_t max_iter);

/// Limit model with a prebuilt evaluator.
GridSet rasterize_limit_model(const PoincareEvaluator& ev, double r, std::size_t resolution,
                              std::size_t max_iter);

struct SimilarityReport {
    double r = 0.0;
    std::vector<int> k_range;
    std::vector<double> d_dyn;
    /// Empty where the chart guard excludes the parameter window for that k.
    std::vector<std::optional<double>> d_par;
    std::size_t grid_resolution = 0;
    double cell_size = 0.0;

    friend bool operator==(const SimilarityReport&, const SimilarityReport&) = default;
};

using RasterSink = std::function<void(RasterMode, int, const GridSet&)>;

/// d_dyn[k] = d([rescaled_julia]_r, [limit_model]_r) for every k;
/// d_par[k] = d([rescaled_locus]_r, [limit_model]_r) for every k passing the
/// chart guard. Throws PrecisionExhausted if some k exceeds the precision
/// floor and ChartDomainExceeded if k_max itself fails the chart guard.
SimilarityReport verify_main_theorem(const MisiurewiczCertificate& cert, double r, int k_min, int k_max,
                                     std::size_t resolution, std::size_t max_iter,
                                     const RasterSink& sink = {});

/// CSV "k,d_dyn,d_par" with 17 significant digits; missing d_par is empty.
std::string report_to_csv(const SimilarityReport& report);
/// Inverse of report_to_csv. The window radius and resolution are not part of
/// the CSV and come from the run parameters.
SimilarityReport report_from_csv(const std::string& csv, double r, std::size_t resolution);

}  // namespace csim
