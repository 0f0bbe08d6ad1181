#include "dmargin/weight.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dmargin {

namespace {

constexpr double kPi = std::numbers::pi;

// arccot with range (0, pi); arccot(0) = pi/2.
double arccot(double x) { return std::atan2(1.0, x); }

void require_tau(double tau_bar) {
    if (!(tau_bar > 0.0) || !std::isfinite(tau_bar))
        throw InvalidInputError("weight: tau_bar must be positive and finite");
}

}  // namespace

Shift::Shift(Complex w0) : w0_(w0) {
    if (!std::isfinite(w0.real()) || !std::isfinite(w0.imag()))
        throw ShiftDomainError("shift: w0 must be finite");
    if (!(w0.real() < 0.5))
        throw ShiftDomainError(
            "shift: w0 must satisfy Re(w0) < 1/2 for the shifted problem to "
            "be well posed");
}

void WeightSpec::validate() const {
    require_tau(tau_bar);
    if (!(epsilon_floor >= 0.0) || !std::isfinite(epsilon_floor))
        throw InvalidInputError("weight: epsilon_floor must be >= 0 and finite");
    if (epsilon_floor != 0.0 && epsilon_floor >= 1.0)
        throw InvalidInputError(
            "weight: a floor >= 1 makes the interpolation problem infeasible "
            "at the poles");
}

double phi_baseline(double omega, double tau_bar) {
    require_tau(tau_bar);
    const double x = omega * tau_bar;
    if (std::abs(x) > kPi) return 2.0;
    return 2.0 * std::abs(std::sin(0.5 * x));
}

BreakFrequencies break_frequencies(const Shift& shift, double tau_bar) {
    require_tau(tau_bar);
    BreakFrequencies bf;
    // With the (0, pi) arccot branch omega_bar is always positive, so it is
    // always the upper break; the lower one follows from the period.
    bf.omega_bar = (2.0 / tau_bar) * arccot(-2.0 * shift.value().imag());
    bf.omega_plus = bf.omega_bar;
    bf.omega_minus = bf.omega_plus - 2.0 * kPi / tau_bar;
    return bf;
}

namespace detail {

ShiftedPhi::ShiftedPhi(const WeightSpec& spec)
    : tau_(spec.tau_bar),
      w0_(spec.shift.value()),
      plateau_distance_(0.5 - spec.shift.value().real()),
      eps_(spec.epsilon_floor),
      overlay_(spec.design_overlay ? &spec.design_overlay : nullptr) {
    spec.validate();
    const auto bf = break_frequencies(spec.shift, spec.tau_bar);
    omega_plus_ = bf.omega_plus;
    omega_minus_ = bf.omega_minus;
}

double ShiftedPhi::operator()(double omega) const {
    double phi;
    if (omega >= omega_plus_ || omega <= omega_minus_) {
        phi = 1.0 / plateau_distance_;
    } else {
        const double half = 0.5 * omega * tau_;
        const double s = std::sin(half);
        if (std::abs(s) < 1e-300) {
            phi = 0.0;  // omega = 0 limit: the distance diverges
        } else {
            const double cot = std::cos(half) / s;
            phi = 1.0 / std::abs(Complex(0.5 - w0_.real(),
                                         -0.5 * cot - w0_.imag()));
        }
    }
    if (overlay_) phi = std::max(phi, (*overlay_)(omega));
    return std::max(eps_, phi);
}

}  // namespace detail

double phi_shifted(double omega, const WeightSpec& spec) {
    return detail::ShiftedPhi(spec)(omega);
}

double phi_oracle(double omega, double tau_bar, const Shift& shift,
                  int grid_points) {
    require_tau(tau_bar);
    if (grid_points < 2)
        throw InvalidInputError("phi_oracle: grid_points must be >= 2");

    const Complex w0 = shift.value();
    const Complex one_minus_w0 = 1.0 - w0;
    const double dt = tau_bar / (grid_points - 1);
    // e^{-i omega tau} marched by incremental rotation, resynchronized
    // periodically to keep phase drift below rounding noise.
    const Complex step = std::polar(1.0, -omega * dt);
    Complex z(1.0, 0.0);
    double best = 0.0;
    for (int k = 0; k < grid_points; ++k) {
        if ((k & 4095) == 0) z = std::polar(1.0, -omega * dt * k);
        const Complex num = z - 1.0;
        const Complex den = one_minus_w0 + w0 * z;
        const double mag2_den = std::norm(den);
        if (mag2_den > 0.0) {
            const double value = std::sqrt(std::norm(num) / mag2_den);
            if (value > best) best = value;
        }
        z *= step;
    }
    return best;
}

std::vector<double> floor_crossings(const WeightSpec& spec) {
    spec.validate();
    const double eps = spec.epsilon_floor;
    if (eps == 0.0) return {};
    const double d0 = 0.5 - spec.shift.value().real();
    if (eps >= 1.0 / d0) return {};  // floor dominates everywhere

    // On the cotangent branch phi = eps iff
    // cot(omega*tau/2) = -2 Im(w0) +- 2 sqrt(eps^-2 - d0^2).
    const double r = 2.0 * std::sqrt(1.0 / (eps * eps) - d0 * d0);
    const double im2 = -2.0 * spec.shift.value().imag();
    const double positive_side = (2.0 / spec.tau_bar) * arccot(im2 + r);
    const double negative_side =
        (2.0 / spec.tau_bar) * (arccot(im2 - r) - kPi);
    return {negative_side, positive_side};
}

}  // namespace dmargin
