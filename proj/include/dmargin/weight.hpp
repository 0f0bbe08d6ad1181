#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "dmargin/errors.hpp"
#include "dmargin/plant.hpp"

namespace dmargin {

/// The complex recentering parameter w0 of the complementary sensitivity.
/// Valid iff Re(w0) < 1/2, strictly; construction enforces this.
class Shift {
  public:
    Shift() = default;  // w0 = 0, the unshifted baseline
    explicit Shift(Complex w0);

    Complex value() const { return w0_; }

  private:
    Complex w0_{0.0, 0.0};
};

/// Frequencies where the shifted weight switches between its cotangent
/// branch and its plateau. omega_plus - omega_minus == 2*pi/tau_bar.
struct BreakFrequencies {
    double omega_bar;
    double omega_plus;
    double omega_minus;
};

/// Full parameterization of the boundary weight phi(omega).
struct WeightSpec {
    double tau_bar = 1.0;  ///< delay horizon, seconds; > 0
    Shift shift;
    /// Optional lower floor on phi; must be < 1 when nonzero, otherwise the
    /// interpolation problem with T(p_j) = 1 cannot be feasible.
    double epsilon_floor = 0.0;
    /// Optional design overlay: phi is replaced by max(phi, overlay(omega))
    /// before the floor is applied. Must be nonnegative and bounded.
    std::function<double(double)> design_overlay;

    void validate() const;
};

/// Unshifted weight 2|sin(tau_bar*omega/2)|, clipped to its plateau value 2
/// for |omega*tau_bar| > pi. Range [0, 2].
double phi_baseline(double omega, double tau_bar);

/// Break frequencies of the shifted weight. The arccot branch is fixed to
/// (0, pi), so omega_bar always lands in (0, 2*pi/tau_bar) and becomes
/// omega_plus; omega_minus follows from the 2*pi/tau_bar offset.
BreakFrequencies break_frequencies(const Shift& shift, double tau_bar);

/// Shifted weight in closed form: 1/(0.5 - Re(w0)) on the plateaus
/// (omega >= omega_plus or omega <= omega_minus) and
/// 1/|0.5 - 0.5i*cot(omega*tau_bar/2) - w0| between the breaks, with the
/// omega = 0 limit equal to 0. Design overlay and epsilon floor, when
/// configured, are applied on top (floor outermost).
double phi_shifted(double omega, const WeightSpec& spec);

/// Brute-force evaluation of the weight as the maximum of
/// |(e^{-i*tau*omega} - 1) / (1 - w0 + w0*e^{-i*tau*omega})|
/// over a uniform grid of grid_points samples of tau in [0, tau_bar].
/// Independent of the closed form; used as its oracle.
double phi_oracle(double omega, double tau_bar, const Shift& shift,
                  int grid_points);

/// Frequencies where the closed-form weight crosses the epsilon floor
/// (empty when no floor is active or the floor dominates everywhere).
/// These are derivative kinks of the effective weight.
std::vector<double> floor_crossings(const WeightSpec& spec);

namespace detail {

/// Precomputed closed-form evaluator for hot loops; skips per-call
/// validation and break-frequency recomputation.
class ShiftedPhi {
  public:
    explicit ShiftedPhi(const WeightSpec& spec);
    double operator()(double omega) const;

  private:
    double tau_;
    Complex w0_;
    double plateau_distance_;
    double omega_plus_;
    double omega_minus_;
    double eps_;
    const std::function<double(double)>* overlay_;
};

}  // namespace detail

}  // namespace dmargin
