#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "dmargin/outer.hpp"

using dmargin::BoundaryFeature;
using dmargin::Complex;
using dmargin::QuadratureConfig;
using dmargin::Shift;
using dmargin::WeightSpec;

namespace {

constexpr double kPi = std::numbers::pi;

WeightSpec make_spec(double tau, Complex w0, double eps = 0.0) {
    WeightSpec spec;
    spec.tau_bar = tau;
    spec.shift = Shift(w0);
    spec.epsilon_floor = eps;
    return spec;
}

}  // namespace

TEST_CASE("constant boundary modulus gives a constant outer function") {
    // the floor dominates the whole shifted weight for strongly negative w0
    const auto spec = make_spec(1.0, Complex(-10, 0), 0.5);
    for (Complex s : {Complex(1, 0), Complex(0.3, 2), Complex(5, -3),
                      Complex(1e-4, 100), Complex(1e-4, 0.011)}) {
        const Complex w = dmargin::evaluate_outer(s, spec);
        CHECK(std::abs(std::abs(w) - 0.5) / 0.5 <= 1e-10);
    }
}

TEST_CASE("known outer function s/(s+1)") {
    // |i w / (i w + 1)| = |w| / sqrt(1 + w^2)
    const auto phi = [](double om) {
        return std::abs(om) / std::sqrt(1.0 + om * om);
    };
    const std::vector<BoundaryFeature> features{{0.0, true}};
    QuadratureConfig quad;
    quad.tolerance = 1e-10;
    for (Complex s : {Complex(1, 0), Complex(0.5, 0), Complex(2, 3),
                      Complex(0.1, 0), Complex(1, 1), Complex(1e-4, 10)}) {
        const Complex w = std::exp(dmargin::log_outer(s, phi, features, quad));
        const Complex exact = s / (s + 1.0);
        CHECK(std::abs(w - exact) / std::abs(exact) <= 1e-9);
    }
}

TEST_CASE("boundary modulus is recovered near the axis") {
    QuadratureConfig quad;
    quad.tolerance = 1e-4;  // near-boundary peaks need only the 1% target
    for (Complex w0 : {Complex(0, 0), Complex(-10, 0), Complex(-1, 0.5)}) {
        const auto spec = make_spec(1.0, w0);
        const auto breaks = dmargin::break_frequencies(spec.shift, spec.tau_bar);
        for (double om : {0.05, 0.9, 2.4, 17.0, 333.0}) {
            if (std::abs(om - breaks.omega_plus) < 0.15) continue;
            const double phi = dmargin::phi_shifted(om, spec);
            const Complex w =
                dmargin::evaluate_outer(Complex(1e-4, om), spec, quad);
            CHECK(std::abs(std::abs(w) - phi) / phi <= 0.01);
        }
    }
}

TEST_CASE("conjugate symmetry for even weights") {
    const auto spec = make_spec(2.0, Complex(-1, 0));
    const Complex p(0.6, 1.3);
    const Complex wp = dmargin::evaluate_outer(p, spec);
    const Complex wc = dmargin::evaluate_outer(std::conj(p), spec);
    CHECK(std::abs(wc - std::conj(wp)) / std::abs(wp) <= 1e-9);

    const Complex wr = dmargin::evaluate_outer(Complex(1.7, 0), spec);
    CHECK(std::abs(wr.imag()) <= 1e-10 * std::abs(wr));
}

TEST_CASE("scaling the modulus scales the outer function") {
    const auto spec = make_spec(1.0, Complex(-0.3, 0.1));
    const dmargin::detail::ShiftedPhi phi(spec);
    const auto breaks = dmargin::break_frequencies(spec.shift, spec.tau_bar);
    const std::vector<BoundaryFeature> features{
        {breaks.omega_plus, false}, {breaks.omega_minus, false}, {0.0, true}};
    const double c = 3.7;
    const auto phi1 = [&phi](double om) { return phi(om); };
    const auto phic = [&phi, c](double om) { return c * phi(om); };
    for (Complex s : {Complex(0.8, 0), Complex(0.4, 1.1)}) {
        const Complex w1 = std::exp(dmargin::log_outer(s, phi1, features));
        const Complex wc = std::exp(dmargin::log_outer(s, phic, features));
        CHECK(std::abs(wc - c * w1) / std::abs(c * w1) <= 1e-10);
    }
}

TEST_CASE("|W| at a real point is nondecreasing in tau_bar") {
    double prev = 0.0;
    for (double tau : {0.3, 0.6, 1.2, 2.4, 4.8}) {
        const double mag =
            std::abs(dmargin::evaluate_outer(Complex(2, 0), make_spec(tau, Complex(-1, 0))));
        CHECK(mag >= prev - 1e-12);
        prev = mag;
    }
}

TEST_CASE("vanishing delay horizon sends the outer values to zero") {
    const auto spec = make_spec(1e-6, Complex(0, 0));
    CHECK(std::abs(dmargin::evaluate_outer(Complex(1, 0), spec)) < 1e-4);
}

TEST_CASE("evaluation domain is the open right half plane") {
    const auto spec = make_spec(1.0, Complex(0, 0));
    CHECK_THROWS_AS(dmargin::evaluate_outer(Complex(0, 1), spec),
                    dmargin::InvalidInputError);
    CHECK_THROWS_AS(dmargin::evaluate_outer(Complex(-1, 0), spec),
                    dmargin::InvalidInputError);
}

TEST_CASE("self-check reports both estimates on failure") {
    // a discontinuous overlay away from every declared feature defeats the
    // panel-doubling check
    auto spec = make_spec(1.0, Complex(0, 0));
    spec.design_overlay = [](double om) {
        return (om > 1.23456 && om < 1.23461) ? 40.0 : 0.0;
    };
    try {
        dmargin::evaluate_outer(Complex(1, 0), spec);
        // the spike is narrow enough that missing it entirely is also
        // possible; only a disagreement must raise
    } catch (const dmargin::AccuracyError& e) {
        CHECK(e.coarse_estimate() != e.fine_estimate());
    }
}

TEST_CASE("interpolation data covers all nodes") {
    const auto plant = dmargin::Plant::from_nodes(
        {Complex(0.5, 1.0), Complex(0.5, -1.0)}, {Complex(3, 0)});
    const auto spec = make_spec(1.0, Complex(0, 0));
    const auto data = dmargin::interpolation_data(plant, spec);
    REQUIRE(data.at_poles.size() == 2);
    REQUIRE(data.at_zeros.size() == 1);
    // conjugate nodes carry conjugate values for an even weight
    CHECK(std::abs(data.at_poles[0] - std::conj(data.at_poles[1])) /
              std::abs(data.at_poles[0]) <=
          1e-9);
    // zero-location values are evaluated even though w0 = 0 discards them
    CHECK(std::abs(data.at_zeros[0]) > 0.0);
    CHECK(std::isfinite(data.at_zeros[0].real()));
}

TEST_CASE("quadrature config validation") {
    QuadratureConfig quad;
    quad.panels = 2;
    CHECK_THROWS_AS(quad.validate(), dmargin::InvalidInputError);
    quad = {};
    quad.nodes_per_panel = 2;
    CHECK_THROWS_AS(quad.validate(), dmargin::InvalidInputError);
    quad = {};
    quad.tolerance = 0.0;
    CHECK_THROWS_AS(quad.validate(), dmargin::InvalidInputError);
}
