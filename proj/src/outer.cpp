#include "dmargin/outer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dmargin {

namespace {

constexpr double kPi = std::numbers::pi;

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
    }
}

struct SpecialPoint {
    double u;
    int depth;
};

// Empirical 16-node Gauss-Legendre error constant for the panel containing
// the log singularity; the adaptive depth below targets tolerance/4.
constexpr double kLogPanelErrorConstant = 7e-5;

int clamp_depth(double levels, int kink) {
    const int d = static_cast<int>(std::ceil(levels));
    return std::min(std::max(d, kink), 48);
}

// One full pass of the composite rule at resolution multiplier `mult`.
Complex integrate_once(Complex s, const std::function<double(double)>& phi,
                       std::span<const BoundaryFeature> features,
                       const QuadratureConfig& cfg, int mult) {
    const double a = -0.5 * kPi;
    const double b = 0.5 * kPi;
    const int n_base = cfg.panels * mult;
    const double base = (b - a) / n_base;
    const double sig = s.real();
    const double omc = s.imag();
    const double mag_s = std::abs(s);

    // Kernel concentration: distance from Im(s) to the nearest non-smooth
    // point of phi decides between the excised peak window (sharp) and a
    // dyadic panel stack at the peak (fat).
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& f : features) dist = std::min(dist, std::abs(omc - f.omega));
    const bool sharp = sig < dist / 16.0;
    // The window is capped at 4e5*sig; beyond that the atan map loses too
    // much precision in tan(v) and the u-space grading is accurate anyway.
    const double wid = std::min(dist / 2.0, 4e5 * sig);

    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n_base) + 256);
    for (int i = 0; i <= n_base; ++i)
        pts.push_back(a + (b - a) * i / n_base);

    std::vector<SpecialPoint> specials;
    const double log_target = std::max(cfg.tolerance, 1e-15) / 4.0;
    for (const auto& f : features) {
        int depth = cfg.kink_refinement;
        if (f.log_singular)
            depth = clamp_depth(
                std::log2(std::max(kLogPanelErrorConstant /
                                       (std::max(mag_s, 1e-300) * log_target),
                                   2.0)),
                cfg.kink_refinement);
        specials.push_back({std::atan(f.omega), depth});
    }
    if (!sharp) {
        const double width_u = sig / (1.0 + omc * omc);
        specials.push_back(
            {std::atan(omc),
             clamp_depth(std::log2(std::max(base / std::max(width_u / 4.0, 1e-18),
                                            2.0)),
                         cfg.kink_refinement)});
    }

    // Merge coincident special points, keeping the deeper stack.
    std::sort(specials.begin(), specials.end(),
              [](const SpecialPoint& p, const SpecialPoint& q) { return p.u < q.u; });
    std::vector<SpecialPoint> merged;
    for (const auto& sp : specials) {
        if (!merged.empty() && sp.u - merged.back().u <= 4e-16 * std::max(1.0, std::abs(sp.u)))
            merged.back().depth = std::max(merged.back().depth, sp.depth);
        else
            merged.push_back(sp);
    }

    for (std::size_t i = 0; i < merged.size(); ++i) {
        const double u = merged[i].u;
        if (!(a < u && u < b)) continue;
        double gap = std::min(u - a, b - u);
        if (i > 0) gap = std::min(gap, u - merged[i - 1].u);
        if (i + 1 < merged.size()) gap = std::min(gap, merged[i + 1].u - u);
        const double delta = std::min(0.5 * gap, base);
        if (!(delta > 0.0)) continue;
        pts.push_back(u);
        for (int k = 0; k <= merged[i].depth; ++k) {
            const double h = delta * std::pow(0.5, k);
            if (u - h > a) pts.push_back(u - h);
            if (u + h < b) pts.push_back(u + h);
        }
    }

    // The kernel varies at scale ~1/|s| in u near omega = +-inf.
    const double end_scale = 1.0 / (4.0 * (1.0 + mag_s));
    for (int k = 1; k <= 64; ++k) {
        const double h = base * std::pow(0.5, k);
        if (h <= end_scale / 4.0) break;
        pts.push_back(a + h);
        pts.push_back(b - h);
    }

    double ulo = 0.0, uhi = 0.0;
    if (sharp) {
        ulo = std::atan(omc - wid);
        uhi = std::atan(omc + wid);
        const double margin =
            32.0 * 2.3e-16 * std::max({1.0, std::abs(ulo), std::abs(uhi)});
        std::erase_if(pts, [&](double p) {
            return p > ulo - margin && p < uhi + margin;
        });
        pts.push_back(ulo);
        pts.push_back(uhi);
        // Geometric expansion outward from the window edges resolves the
        // kernel tails down to the window scale.
        const double half_w = 0.5 * (uhi - ulo);
        for (int k = 0; k < 128; ++k) {
            const double h = half_w * std::pow(2.0, 0.5 * k);
            if (h >= 2.0 * base) break;
            if (ulo - h > a) pts.push_back(ulo - h);
            if (uhi + h < b) pts.push_back(uhi + h);
        }
    }

    std::sort(pts.begin(), pts.end());
    std::vector<double> breaks;
    breaks.reserve(pts.size());
    for (double p : pts) {
        if (breaks.empty() ||
            p - breaks.back() > 4e-16 * std::max(1.0, std::abs(p)))
            breaks.push_back(p);
    }
    if (sharp) {
        // Snap the nearest surviving breakpoints to the exact window edges
        // so the window panel can be excluded by equality.
        for (double* edge : {&ulo, &uhi}) {
            auto it = std::min_element(breaks.begin(), breaks.end(),
                                       [&](double p, double q) {
                                           return std::abs(p - *edge) <
                                                  std::abs(q - *edge);
                                       });
            *it = *edge;
        }
    }

    std::vector<double> gx, gw;
    gauss_legendre(cfg.nodes_per_panel, gx, gw);

    Complex total(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i];
        const double hi = breaks[i + 1];
        if (sharp && lo == ulo && hi == uhi) continue;  // handled in v below
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        Complex acc(0.0, 0.0);
        for (std::size_t q = 0; q < gx.size(); ++q) {
            const double u = mid + half * gx[q];
            const double om = std::tan(u);
            const double ph = std::max(phi(om), 1e-300);
            const Complex kernel = (om * s + Complex(0.0, 1.0)) /
                                   (om + Complex(0.0, 1.0) * s);
            acc += gw[q] * std::log(ph) * kernel;
        }
        total += half * acc;
    }

    if (sharp) {
        // Peak window in the substitution omega = omega_c + sig * tan(v):
        // the offset omega - omega_c stays exact, and the integrand becomes
        // log(phi) * (omega s + i)(tan v - i) / (1 + omega^2) dv.
        const double tmax = wid / sig;
        const int levels = static_cast<int>(std::ceil(std::log2(tmax)));
        std::vector<double> vb;
        vb.push_back(0.0);
        for (int k = 0; k < levels; ++k) vb.push_back(std::atan(std::pow(2.0, k)));
        vb.push_back(std::atan(tmax));
        std::vector<double> vbs;
        for (double v : vb) {
            vbs.push_back(v);
            if (v != 0.0) vbs.push_back(-v);
        }
        std::sort(vbs.begin(), vbs.end());
        vbs.erase(std::unique(vbs.begin(), vbs.end(),
                              [](double p, double q) { return q - p <= 1e-16; }),
                  vbs.end());

        for (std::size_t i = 0; i + 1 < vbs.size(); ++i) {
            for (int piece = 0; piece < mult; ++piece) {
                const double lo =
                    vbs[i] + (vbs[i + 1] - vbs[i]) * piece / mult;
                const double hi =
                    vbs[i] + (vbs[i + 1] - vbs[i]) * (piece + 1) / mult;
                const double mid = 0.5 * (lo + hi);
                const double half = 0.5 * (hi - lo);
                Complex acc(0.0, 0.0);
                for (std::size_t q = 0; q < gx.size(); ++q) {
                    const double v = mid + half * gx[q];
                    const double t = std::tan(v);
                    const double om = omc + sig * t;
                    const double ph = std::max(phi(om), 1e-300);
                    acc += gw[q] * std::log(ph) *
                           (om * s + Complex(0.0, 1.0)) * Complex(t, -1.0) /
                           (1.0 + om * om);
                }
                total += half * acc;
            }
        }
    }

    return total / kPi;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (panels < 4) throw InvalidInputError("quadrature: panels must be >= 4");
    if (nodes_per_panel < 4)
        throw InvalidInputError("quadrature: nodes_per_panel must be >= 4");
    if (kink_refinement < 0)
        throw InvalidInputError("quadrature: kink_refinement must be >= 0");
    if (!(tolerance > 0.0))
        throw InvalidInputError("quadrature: tolerance must be > 0");
}

Complex log_outer(Complex s, const std::function<double(double)>& phi,
                  std::span<const BoundaryFeature> features,
                  const QuadratureConfig& quad) {
    quad.validate();
    if (!(s.real() > 0.0))
        throw InvalidInputError("outer: evaluation point must have Re(s) > 0");

    const Complex coarse = integrate_once(s, phi, features, quad, 1);
    const Complex fine = integrate_once(s, phi, features, quad, 2);
    if (!std::isfinite(fine.real()) || !std::isfinite(fine.imag()))
        throw NumericError("outer: non-finite boundary integral");
    if (!(std::abs(coarse.real() - fine.real()) <= quad.tolerance))
        throw AccuracyError(
            "outer: panel-doubling self-check missed the requested tolerance",
            coarse.real(), fine.real());
    return fine;
}

namespace {

std::vector<BoundaryFeature> weight_features(const WeightSpec& spec) {
    const auto bf = break_frequencies(spec.shift, spec.tau_bar);
    std::vector<BoundaryFeature> features{{bf.omega_plus, false},
                                          {bf.omega_minus, false}};
    const bool floor_off = spec.epsilon_floor == 0.0;
    const bool overlay_lifts_origin =
        spec.design_overlay && spec.design_overlay(0.0) > 0.0;
    features.push_back({0.0, floor_off && !overlay_lifts_origin});
    for (double omega : floor_crossings(spec))
        features.push_back({omega, false});
    return features;
}

}  // namespace

Complex evaluate_outer(Complex s, const WeightSpec& spec,
                       const QuadratureConfig& quad) {
    spec.validate();
    const detail::ShiftedPhi phi(spec);
    const auto features = weight_features(spec);
    const std::function<double(double)> phi_fn =
        [&phi](double omega) { return phi(omega); };
    return std::exp(log_outer(s, phi_fn, features, quad));
}

InterpolationData interpolation_data(const Plant& plant, const WeightSpec& spec,
                                     const QuadratureConfig& quad) {
    InterpolationData data;
    data.at_poles.reserve(plant.unstable_poles().size());
    data.at_zeros.reserve(plant.nmp_zeros().size());
    for (const auto& p : plant.unstable_poles())
        data.at_poles.push_back(evaluate_outer(p, spec, quad));
    for (const auto& z : plant.nmp_zeros())
        data.at_zeros.push_back(evaluate_outer(z, spec, quad));
    return data;
}

}  // namespace dmargin
