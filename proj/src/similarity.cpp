#include "csim/similarity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "csim/errors.hpp"
#include "csim/io.hpp"

namespace csim {

Complex rho_k(const MisiurewiczCertificate& cert, int k) {
    if (k < 0) fail(ErrorKind::InvalidArgument, "k must be non-negative");
    Complex scale = cert.A0;
    for (int i = 0; i < k; ++i) scale *= cert.lambda0;
    const Complex rho = 1.0 / scale;
    if (!(std::abs(rho) >= kMinScale)) {
        fail(ErrorKind::PrecisionExhausted, "|rho_" + std::to_string(k) + "| below 1e-10");
    }
    return rho;
}

Complex rho_k_chain_rule(const MisiurewiczCertificate& cert, int k) {
    if (k < 0) fail(ErrorKind::InvalidArgument, "k must be non-negative");
    const auto steps = static_cast<std::size_t>(cert.ell + k * cert.m);
    return 1.0 / iterate_jet(cert.map, cert.map.cocritical(), steps).derivative;
}

int max_precision_k(const MisiurewiczCertificate& cert) {
    int k = -1;
    Complex scale = cert.A0;
    while (std::abs(1.0 / scale) >= kMinScale && k < 100000) {
        ++k;
        scale *= cert.lambda0;
    }
    return k;
}

bool chart_guard_passes(const MisiurewiczCertificate& cert, int k, double r) {
    const Complex rho = rho_k(cert, k);
    return std::abs(cert.Q * rho) * r * std::numbers::sqrt2 <= cert.chart.domain_radius;
}

PoincareEvaluator::PoincareEvaluator(const CubicMap& map, const PeriodicPoint& cycle, double tol,
                                     double test_radius)
    : map_(map), tol_(tol) {
    if (cycle.period < 1) fail(ErrorKind::InvalidArgument, "cycle period must be positive");
    require_finite(cycle.location, "cycle location");
    Complex z = cycle.location;
    lambda_ = 1.0;
    for (int j = 0; j < cycle.period; ++j) {
        cycle_.push_back(z);
        cycle_derivative_.push_back(map.derivative(z));
        lambda_ *= cycle_derivative_.back();
        z = map(z);
    }
    if (!(std::abs(lambda_) > 1.0)) fail(ErrorKind::NotRepelling, "Poincare function needs |lambda0| > 1");

    for (int halvings = 0; halvings < 200; ++halvings) {
        bool ok = true;
        for (int j = 0; j < 16 && ok; ++j) {
            const Complex w = std::polar(test_radius, 2.0 * std::numbers::pi * j / 16.0);
            const int n = depth(w);
            const Complex coarse = evaluate(w, n);
            const Complex fine = evaluate(w, 2 * n);
            ok = is_finite(coarse) && is_finite(fine) && std::abs(coarse - fine) <= tol_ * (1.0 + std::abs(fine));
        }
        if (ok) return;
        inner_radius_ *= 0.5;
    }
    fail(ErrorKind::NoConvergence, "no inner radius passes the doubling check");
}

PoincareEvaluator::PoincareEvaluator(const MisiurewiczCertificate& cert, double tol, double test_radius)
    : PoincareEvaluator(cert.map, cert.landing_point(), tol, test_radius) {}

int PoincareEvaluator::depth(Complex w) const {
    const double shrink = std::abs(lambda_);
    double x = std::abs(w) / shrink;
    int n = 1;
    while (x > inner_radius_ && n < 100000) {
        x /= shrink;
        ++n;
    }
    return n;
}

Complex PoincareEvaluator::evaluate(Complex w, int n) const {
    Complex u = w;
    for (int i = 0; i < n; ++i) u /= lambda_;
    // F(z + u) - F(z) = F'(z) u + 3 z u^2 + u^3 around each cycle point.
    for (int i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < cycle_.size(); ++j) {
            u = cycle_derivative_[j] * u + (3.0 * cycle_[j] + u) * u * u;
        }
        if (!is_finite(u)) return {std::nan(""), std::nan("")};
    }
    return cycle_.front() + u;
}

Complex PoincareEvaluator::approximate(Complex w) const { return evaluate(w, depth(w)); }

Complex PoincareEvaluator::operator()(Complex w) const {
    require_finite(w, "w");
    const int n = depth(w);
    const Complex coarse = evaluate(w, n);
    const Complex fine = evaluate(w, 2 * n);
    if (!is_finite(fine) || !is_finite(coarse) || std::abs(coarse - fine) > tol_ * (1.0 + std::abs(fine))) {
        fail(ErrorKind::NoConvergence, "doubling the Poincare depth moved the value beyond tolerance");
    }
    return fine;
}

Complex poincare_eval(const PoincareEvaluator& ev, Complex w) { return ev(w); }

Complex phi_k_eval(const MisiurewiczCertificate& cert, Complex w, int k) {
    const Complex rho = rho_k(cert, k);
    const auto steps = static_cast<std::size_t>(cert.ell + k * cert.m);
    return iterate_n(cert.map, cert.map.cocritical() + rho * w, steps);
}

Complex Phi_k_eval(const MisiurewiczCertificate& cert, Complex w, int k) {
    const Complex t = cert.Q * rho_k(cert, k) * w;
    const CubicMap g = chart_point(cert.chart, t);
    const auto steps = static_cast<std::size_t>(cert.ell + k * cert.m);
    return iterate_n(g, g.cocritical(), steps);
}

Complex multiplier_ratio_power(const MisiurewiczCertificate& cert, Complex w, int k) {
    const Complex t = cert.Q * rho_k(cert, k) * w;
    const PeriodicPoint s = continued_cycle_point(cert, t);
    return std::pow(s.multiplier / cert.lambda0, k);
}

const char* to_string(RasterMode mode) noexcept {
    switch (mode) {
        case RasterMode::limit_model: return "limit_model";
        case RasterMode::rescaled_julia: return "rescaled_julia";
        case RasterMode::rescaled_locus: return "rescaled_locus";
    }
    return "limit_model";
}

GridSet rasterize_limit_model(const PoincareEvaluator& ev, double r, std::size_t resolution,
                              std::size_t max_iter) {
    const CubicMap f = ev.map();
    return truncate_window(from_predicate(r, resolution, [&](Complex w) {
        const Complex z = ev.approximate(w);
        return is_finite(z) && in_filled_julia(f, z, max_iter);
    }));
}

GridSet rasterize(const MisiurewiczCertificate& cert, RasterMode mode, double r, std::size_t resolution,
                  std::optional<int> k, std::size_t max_iter) {
    if (mode == RasterMode::limit_model) {
        return rasterize_limit_model(PoincareEvaluator(cert), r, resolution, max_iter);
    }
    if (!k) fail(ErrorKind::InvalidArgument, "rescaled rasters need k");
    const Complex rho = rho_k(cert, *k);
    if (mode == RasterMode::rescaled_julia) {
        const Complex base = cert.map.cocritical();
        return truncate_window(from_predicate(r, resolution, [&](Complex w) {
            return in_filled_julia(cert.map, base + rho * w, max_iter);
        }));
    }
    if (!chart_guard_passes(cert, *k, r)) {
        fail(ErrorKind::ChartDomainExceeded,
             "parameter window for k = " + std::to_string(*k) + " leaves the chart domain");
    }
    const Complex scale = cert.Q * rho;
    return truncate_window(from_predicate(r, resolution, [&](Complex w) {
        return locus_membership(chart_point(cert.chart, scale * w), max_iter);
    }));
}

SimilarityReport verify_main_theorem(const MisiurewiczCertificate& cert, double r, int k_min, int k_max,
                                     std::size_t resolution, std::size_t max_iter, const RasterSink& sink) {
    if (k_min < 0 || k_max < k_min) fail(ErrorKind::InvalidArgument, "need 0 <= k_min <= k_max");
    for (int k = k_min; k <= k_max; ++k) rho_k(cert, k);
    if (!chart_guard_passes(cert, k_max, r)) {
        fail(ErrorKind::ChartDomainExceeded,
             "parameter window for k_max = " + std::to_string(k_max) + " leaves the chart domain");
    }

    SimilarityReport report;
    report.r = r;
    report.grid_resolution = resolution;
    report.cell_size = 2.0 * r / static_cast<double>(resolution);

    const GridSet limit = rasterize(cert, RasterMode::limit_model, r, resolution, std::nullopt, max_iter);
    for (int k = k_min; k <= k_max; ++k) {
        report.k_range.push_back(k);
        const GridSet julia = rasterize(cert, RasterMode::rescaled_julia, r, resolution, k, max_iter);
        report.d_dyn.push_back(hausdorff_distance(julia, limit));
        if (sink) {
            sink(RasterMode::limit_model, k, limit);
            sink(RasterMode::rescaled_julia, k, julia);
        }
        if (chart_guard_passes(cert, k, r)) {
            const GridSet locus = rasterize(cert, RasterMode::rescaled_locus, r, resolution, k, max_iter);
            report.d_par.emplace_back(hausdorff_distance(locus, limit));
            if (sink) sink(RasterMode::rescaled_locus, k, locus);
        } else {
            report.d_par.emplace_back(std::nullopt);
        }
    }
    return report;
}

std::string report_to_csv(const SimilarityReport& report) {
    std::string out = "k,d_dyn,d_par\n";
    for (std::size_t i = 0; i < report.k_range.size(); ++i) {
        out += std::to_string(report.k_range[i]) + "," + format_double(report.d_dyn[i]) + ",";
        if (report.d_par[i]) out += format_double(*report.d_par[i]);
        out += "\n";
    }
    return out;
}

SimilarityReport report_from_csv(const std::string& csv, double r, std::size_t resolution) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "k,d_dyn,d_par") fail(ErrorKind::Io, "missing report header");
    SimilarityReport report;
    report.r = r;
    report.grid_resolution = resolution;
    report.cell_size = 2.0 * r / static_cast<double>(resolution);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) fail(ErrorKind::Io, "malformed report row");
        report.k_range.push_back(std::stoi(line.substr(0, c1)));
        report.d_dyn.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
        const std::string par = line.substr(c2 + 1);
        report.d_par.push_back(par.empty() ? std::nullopt : std::optional<double>(std::stod(par)));
    }
    return report;
}

}  // namespace csim
