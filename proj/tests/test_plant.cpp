#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dmargin/plant.hpp"

using dmargin::Complex;

namespace {

// Monic polynomial coefficients from roots, scaled by lead.
std::vector<double> poly_from_roots(const std::vector<Complex>& roots,
                                    double lead) {
    std::vector<Complex> c{1.0};
    for (const auto& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= c[i] * r;
        }
        c = std::move(next);
    }
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = lead * c[i].real();
    return out;
}

}  // namespace

TEST_CASE("roots of linear and monomial polynomials") {
    auto r1 = dmargin::roots_of_polynomial(std::vector<double>{1.0, -0.1081});
    REQUIRE(r1.size() == 1);
    CHECK(r1[0].real() == doctest::Approx(0.1081).epsilon(1e-12));
    CHECK(r1[0].imag() == 0.0);

    auto r2 = dmargin::roots_of_polynomial(std::vector<double>{1.0, 0.0});
    REQUIRE(r2.size() == 1);
    CHECK(std::abs(r2[0]) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("quadratic with positive coefficients has left-half-plane roots") {
    auto roots =
        dmargin::roots_of_polynomial(std::vector<double>{1.0, 0.2981, 0.06281});
    REQUIRE(roots.size() == 2);
    for (const auto& r : roots) CHECK(r.real() < 0.0);
}

TEST_CASE("roots reconstruct their polynomial") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mag(0.2, 3.0);
    std::uniform_real_distribution<double> ang(0.1, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> roots;
        const int pairs = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < pairs; ++i) {
            const Complex r = std::polar(mag(rng), ang(rng));
            roots.push_back(r);
            roots.push_back(std::conj(r));
        }
        roots.emplace_back(-mag(rng), 0.0);
        const auto coeffs = poly_from_roots(roots, 2.5);
        auto computed = dmargin::roots_of_polynomial(coeffs);
        const auto rebuilt = poly_from_roots(computed, coeffs[0]);
        REQUIRE(rebuilt.size() == coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            CHECK(rebuilt[i] ==
                  doctest::Approx(coeffs[i]).epsilon(1e-8).scale(
                      std::abs(coeffs[0])));
    }
}

TEST_CASE("root finding input errors") {
    CHECK_THROWS_AS(dmargin::roots_of_polynomial(std::vector<double>{}),
                    dmargin::InvalidInputError);
    CHECK_THROWS_AS(
        dmargin::roots_of_polynomial(std::vector<double>{0.0, 0.0}),
        dmargin::InvalidInputError);
    CHECK_THROWS_AS(
        dmargin::roots_of_polynomial(std::vector<double>{0.0, 1.0}),
        dmargin::InvalidInputError);
}

TEST_CASE("classify one-pole-one-zero plant") {
    const auto plant = dmargin::classify_plant(std::vector<double>{1.0, -2.0},
                                               std::vector<double>{1.0, -1.0});
    REQUIRE(plant.unstable_poles().size() == 1);
    REQUIRE(plant.nmp_zeros().size() == 1);
    CHECK(plant.unstable_poles()[0].real() == doctest::Approx(1.0));
    CHECK(plant.nmp_zeros()[0].real() == doctest::Approx(2.0));
    CHECK(plant.source().has_value());
}

TEST_CASE("classify the third-order example system") {
    // 0.1 (0.1 s - 1)(s + 0.1659) / ((s - 0.1081)(s^2 + 0.2981 s + 0.06281))
    const std::vector<double> num{0.01, -0.098341, -0.0016590};
    const std::vector<double> den{1.0, 0.19, 0.03058539, -0.0067897561};
    const auto plant = dmargin::classify_plant(num, den);
    REQUIRE(plant.unstable_poles().size() == 1);
    REQUIRE(plant.nmp_zeros().size() == 1);
    CHECK(plant.unstable_poles()[0].real() ==
          doctest::Approx(0.1081).epsilon(1e-6));
    CHECK(plant.nmp_zeros()[0].real() == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("stable plant signals instead of constructing") {
    CHECK_THROWS_AS(dmargin::classify_plant(std::vector<double>{1.0},
                                            std::vector<double>{1.0, 1.0}),
                    dmargin::StablePlantError);
}

TEST_CASE("imaginary-axis roots are rejected") {
    // pole at the origin
    CHECK_THROWS_AS(dmargin::classify_plant(std::vector<double>{1.0},
                                            std::vector<double>{1.0, 0.0}),
                    dmargin::ImaginaryAxisError);
    // zeros at +-i
    CHECK_THROWS_AS(
        dmargin::classify_plant(std::vector<double>{1.0, 0.0, 1.0},
                                std::vector<double>{1.0, -1.0, 1.0, -1.0}),
        dmargin::ImaginaryAxisError);
}

TEST_CASE("coincident nodes are rejected") {
    // double unstable pole
    CHECK_THROWS_AS(dmargin::classify_plant(std::vector<double>{1.0},
                                            std::vector<double>{1.0, -2.0, 1.0}),
                    dmargin::MultiplicityError);
    // pole-zero collision
    CHECK_THROWS_AS(dmargin::classify_plant(std::vector<double>{1.0, -1.0},
                                            std::vector<double>{1.0, -1.0}),
                    dmargin::MultiplicityError);
}

TEST_CASE("improper transfer functions are rejected") {
    CHECK_THROWS_AS(dmargin::classify_plant(std::vector<double>{1.0, 0.0, 0.0},
                                            std::vector<double>{1.0, -1.0}),
                    dmargin::InvalidInputError);
}

TEST_CASE("classification is invariant under coefficient scaling") {
    const std::vector<double> num{1.0, -2.0};
    const std::vector<double> den{1.0, -0.3, -0.1};
    const auto a = dmargin::classify_plant(num, den);
    std::vector<double> num_scaled, den_scaled;
    for (double c : num) num_scaled.push_back(-7.25 * c);
    for (double c : den) den_scaled.push_back(-7.25 * c);
    const auto b = dmargin::classify_plant(num_scaled, den_scaled);
    REQUIRE(a.unstable_poles().size() == b.unstable_poles().size());
    REQUIRE(a.nmp_zeros().size() == b.nmp_zeros().size());
    for (std::size_t i = 0; i < a.unstable_poles().size(); ++i)
        CHECK(std::abs(a.unstable_poles()[i] - b.unstable_poles()[i]) < 1e-12);
    for (std::size_t i = 0; i < a.nmp_zeros().size(); ++i)
        CHECK(std::abs(a.nmp_zeros()[i] - b.nmp_zeros()[i]) < 1e-12);
}

TEST_CASE("conjugate closure for real coefficients") {
    // denominator with an unstable conjugate pair: s^2 - s + 1
    const auto plant =
        dmargin::classify_plant(std::vector<double>{1.0},
                                std::vector<double>{1.0, -1.0, 1.0});
    REQUIRE(plant.unstable_poles().size() == 2);
    CHECK(plant.unstable_poles()[0] == std::conj(plant.unstable_poles()[1]));
}

TEST_CASE("direct node construction validates") {
    const auto plant = dmargin::Plant::from_nodes(
        {Complex(0.5, 1.0), Complex(0.5, -1.0)}, {Complex(2.0, 0.0)});
    CHECK(plant.node_count() == 3);
    CHECK(!plant.source().has_value());

    CHECK_THROWS_AS(dmargin::Plant::from_nodes({}, {Complex(1.0, 0.0)}),
                    dmargin::StablePlantError);
    CHECK_THROWS_AS(dmargin::Plant::from_nodes({Complex(0.0, 1.0)}, {}),
                    dmargin::ImaginaryAxisError);
    CHECK_THROWS_AS(dmargin::Plant::from_nodes({Complex(-1.0, 0.0)}, {}),
                    dmargin::InvalidInputError);
    CHECK_THROWS_AS(
        dmargin::Plant::from_nodes({Complex(1.0, 0.0), Complex(1.0, 0.0)}, {}),
        dmargin::MultiplicityError);
}
