#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dmargin/weight.hpp"

using dmargin::Complex;
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

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
    return grid;
}

}  // namespace

TEST_CASE("shift validity") {
    CHECK_NOTHROW(Shift(Complex(0.499, 5.0)));
    CHECK_NOTHROW(Shift(Complex(-100.0, 0.0)));
    CHECK_THROWS_AS(Shift(Complex(0.5, 0.0)), dmargin::ShiftDomainError);
    CHECK_THROWS_AS(Shift(Complex(1.0, -2.0)), dmargin::ShiftDomainError);
}

TEST_CASE("weight spec validity") {
    CHECK_THROWS_AS(make_spec(0.0, Complex(0, 0)).validate(),
                    dmargin::InvalidInputError);
    CHECK_THROWS_AS(make_spec(1.0, Complex(0, 0), 1.0).validate(),
                    dmargin::InvalidInputError);
    CHECK_NOTHROW(make_spec(1.0, Complex(0, 0), 0.5).validate());
}

TEST_CASE("baseline weight") {
    CHECK(dmargin::phi_baseline(0.0, 1.0) == 0.0);
    CHECK(dmargin::phi_baseline(kPi, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(dmargin::phi_baseline(10.0 * kPi, 1.0) == 2.0);
    CHECK(dmargin::phi_baseline(-10.0 * kPi, 1.0) == 2.0);
    CHECK_THROWS_AS(dmargin::phi_baseline(1.0, 0.0), dmargin::InvalidInputError);
}

TEST_CASE("break frequencies") {
    const auto a = dmargin::break_frequencies(Shift(Complex(-10, 0)), 1.0);
    CHECK(a.omega_plus == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(a.omega_minus == doctest::Approx(-kPi).epsilon(1e-15));
    CHECK(a.omega_bar == a.omega_plus);

    const auto b = dmargin::break_frequencies(Shift(Complex(0, 0)), 2.0);
    CHECK(b.omega_plus == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(b.omega_minus == doctest::Approx(-kPi / 2).epsilon(1e-15));

    const auto c = dmargin::break_frequencies(Shift(Complex(0, -1)), 1.0);
    CHECK(c.omega_bar == doctest::Approx(2.0 * std::atan(0.5)).epsilon(1e-12));
    CHECK(c.omega_bar == doctest::Approx(0.92730).epsilon(1e-5));
    CHECK(c.omega_minus ==
          doctest::Approx(c.omega_bar - 2 * kPi).epsilon(1e-12));
    // spacing is exact
    CHECK(c.omega_plus - c.omega_minus == doctest::Approx(2 * kPi).epsilon(1e-15));
}

TEST_CASE("shifted weight closed form") {
    const auto spec = make_spec(1.0, Complex(-10, 0));
    CHECK(dmargin::phi_shifted(100.0, spec) ==
          doctest::Approx(1.0 / 10.5).epsilon(1e-15));
    CHECK(dmargin::phi_shifted(kPi, make_spec(1.0, Complex(0, 0))) ==
          doctest::Approx(2.0).epsilon(1e-15));
    CHECK(dmargin::phi_shifted(0.0, make_spec(3.0, Complex(-1, 0.5))) == 0.0);
}

TEST_CASE("shifted weight reduces to the baseline at w0 = 0") {
    for (double tau : {0.5, 1.0, 5.0}) {
        const auto spec = make_spec(tau, Complex(0, 0));
        for (double om : log_grid(1e-3 / tau, 1e3 / tau, 200)) {
            const double a = dmargin::phi_shifted(om, spec);
            const double b = dmargin::phi_baseline(om, tau);
            CHECK(std::abs(a - b) <= 1e-12);
        }
    }
}

TEST_CASE("shifted weight matches the brute-force oracle") {
    const Shift w0(Complex(-10, 0));
    const auto spec = make_spec(1.0, Complex(-10, 0));
    for (double om : {0.1, 0.7, 2.0, 3.0, 8.0, 40.0}) {
        const double closed = dmargin::phi_shifted(om, spec);
        const double oracle = dmargin::phi_oracle(om, 1.0, w0, 10001);
        CHECK(std::abs(closed - oracle) / oracle <= 1e-5);
    }
}

TEST_CASE("oracle basics") {
    CHECK(dmargin::phi_oracle(0.0, 1.0, Shift(Complex(0, 0)), 101) == 0.0);
    CHECK(dmargin::phi_oracle(kPi, 1.0, Shift(Complex(0, 0)), 10001) ==
          doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(dmargin::phi_oracle(1.0, 1.0, Shift(Complex(0, 0)), 1),
                    dmargin::InvalidInputError);
}

TEST_CASE("oracle is nondecreasing under nested grid refinement") {
    const Shift w0(Complex(-1, 0.5));
    for (double om : {0.3, 1.1, 2.7, 6.4}) {
        const double a = dmargin::phi_oracle(om, 2.0, w0, 101);
        const double b = dmargin::phi_oracle(om, 2.0, w0, 1001);
        const double c = dmargin::phi_oracle(om, 2.0, w0, 10001);
        CHECK(a <= b + 1e-15);
        CHECK(b <= c + 1e-15);
    }
}

TEST_CASE("weight is pointwise nondecreasing in tau_bar") {
    for (Complex w0 : {Complex(0, 0), Complex(-3, 0), Complex(0.3, -0.4)}) {
        for (double om : {-7.0, -0.9, 0.13, 1.0, 4.5, 30.0}) {
            double prev = 0.0;
            for (double tau : {0.2, 0.5, 1.0, 2.0, 8.0}) {
                const double phi = dmargin::phi_shifted(om, make_spec(tau, w0));
                CHECK(phi >= prev - 1e-12);
                prev = phi;
            }
        }
    }
}

TEST_CASE("weight is bounded by its plateau value") {
    for (Complex w0 : {Complex(0, 0), Complex(-10, 0), Complex(0.4, 1.0)}) {
        const double plateau = 1.0 / (0.5 - w0.real());
        const auto spec = make_spec(1.7, w0);
        for (double om : log_grid(1e-4, 1e4, 400))
            CHECK(dmargin::phi_shifted(om, spec) <= plateau * (1 + 1e-14));
    }
}

TEST_CASE("even symmetry holds for real shifts only") {
    const auto real_spec = make_spec(1.3, Complex(-2, 0));
    for (double om : {0.1, 0.9, 2.2, 11.0})
        CHECK(dmargin::phi_shifted(om, real_spec) ==
              doctest::Approx(dmargin::phi_shifted(-om, real_spec))
                  .epsilon(1e-14));

    const auto complex_spec = make_spec(1.3, Complex(-1, 0.5));
    CHECK(std::abs(dmargin::phi_shifted(1.0, complex_spec) -
                   dmargin::phi_shifted(-1.0, complex_spec)) > 1e-3);
}

TEST_CASE("epsilon floor and design overlay") {
    auto spec = make_spec(1.0, Complex(0, 0), 0.25);
    CHECK(dmargin::phi_shifted(0.0, spec) == 0.25);
    CHECK(dmargin::phi_shifted(kPi, spec) == doctest::Approx(2.0));

    const auto crossings = dmargin::floor_crossings(spec);
    REQUIRE(crossings.size() == 2);
    CHECK(crossings[0] < 0.0);
    CHECK(crossings[1] > 0.0);
    for (double om : crossings)
        CHECK(dmargin::phi_shifted(om, spec) ==
              doctest::Approx(0.25).epsilon(1e-12));
    // inside the crossings the floor is active
    CHECK(dmargin::phi_shifted(0.5 * crossings[1], spec) == 0.25);

    // floor above the plateau freezes the weight to a constant
    auto const_spec = make_spec(1.0, Complex(-10, 0), 0.5);
    CHECK(dmargin::floor_crossings(const_spec).empty());
    for (double om : {0.0, 0.3, 5.0, 500.0})
        CHECK(dmargin::phi_shifted(om, const_spec) == 0.5);

    // overlay applies before the floor
    auto overlay_spec = make_spec(1.0, Complex(0, 0), 0.1);
    overlay_spec.design_overlay = [](double om) {
        return std::abs(om) < 2.0 ? 0.05 : 3.0;
    };
    CHECK(dmargin::phi_shifted(0.0, overlay_spec) == 0.1);   // floor wins
    CHECK(dmargin::phi_shifted(50.0, overlay_spec) == 3.0);  // overlay wins
}

TEST_CASE("floor crossings with an asymmetric shift") {
    auto spec = make_spec(2.0, Complex(-1, 0.7), 0.3);
    const auto crossings = dmargin::floor_crossings(spec);
    REQUIRE(crossings.size() == 2);
    for (double om : crossings)
        CHECK(dmargin::phi_shifted(om, spec) ==
              doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::abs(crossings[0]) != doctest::Approx(crossings[1]).epsilon(1e-6));
}
