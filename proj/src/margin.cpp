#include "dmargin/margin.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace dmargin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRelativeTolDefault = 1e-4;
constexpr int kMaxDoublings = 10;

double resolve_tol(double tol, double tau_upper) {
    if (tol > 0.0) return tol;
    return kRelativeTolDefault * tau_upper;
}

// Index-sharded parallel loop; results must be written by index so the
// outcome does not depend on scheduling.
void parallel_for(int jobs, std::size_t count,
                  const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    unsigned n_workers = jobs > 0 ? static_cast<unsigned>(jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(count));
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) {
        workers.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    body(i);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

double initial_upper_bound(const Plant& plant) {
    double max_mag = 0.0;
    for (const auto& p : plant.unstable_poles())
        max_mag = std::max(max_mag, std::abs(p));
    return 2.0 * kPi / max_mag;
}

double middleton_upper_bound(double r, double theta) {
    if (!(r > 0.0))
        throw InvalidInputError("middleton_upper_bound: r must be > 0");
    if (!(theta >= 0.0 && theta <= 0.5 * kPi))
        throw InvalidInputError(
            "middleton_upper_bound: theta must lie in [0, pi/2]");
    const double st = std::sin(theta);
    return (kPi * st + 2.0 * std::max(std::cos(theta), theta * st)) / r;
}

MarginResult bisect_margin(const MarginQuery& query) {
    query.quad.validate();

    double tau_plus = query.tau_upper_init.value_or(initial_upper_bound(query.plant));
    if (!(tau_plus > 0.0))
        throw InvalidInputError("bisect_margin: upper bound must be > 0");
    const double tol = resolve_tol(query.tol, tau_plus);

    auto feasible = [&](double tau) {
        return feasibility_at(tau, query.plant, query.shift, query.quad,
                              query.pd_tolerance, query.epsilon_floor);
    };

    MarginResult result;
    result.shift_used = query.shift.value();

    double tau_minus = 0.0;
    std::optional<FeasibilityCertificate> cert_minus;

    // The standard initial bound can fail to bracket for shifted weights;
    // verify it and grow by doubling when needed.
    FeasibilityCertificate upper_cert = feasible(tau_plus);
    if (upper_cert.is_feasible) {
        result.initial_upper_not_binding = true;
        int doublings = 0;
        while (upper_cert.is_feasible && doublings < kMaxDoublings) {
            tau_minus = tau_plus;
            cert_minus = upper_cert;
            tau_plus *= 2.0;
            upper_cert = feasible(tau_plus);
            ++doublings;
        }
        if (upper_cert.is_feasible) {
            result.tau_lower_bound = tau_plus;
            result.final_certificate = upper_cert;
            result.bracket = {tau_plus, tau_plus};
            result.diagnostic =
                "feasible at the doubling cap; bound is not bracketed";
            return result;
        }
    }

    while (tau_plus - tau_minus > tol) {
        const double tau_mid = 0.5 * (tau_plus + tau_minus);
        const FeasibilityCertificate cert = feasible(tau_mid);
        if (cert.is_feasible) {
            tau_minus = tau_mid;
            cert_minus = cert;
        } else {
            tau_plus = tau_mid;
        }
        ++result.iterations;
    }

    result.tau_lower_bound = tau_minus;
    result.bracket = {tau_minus, tau_plus};
    if (cert_minus) {
        result.final_certificate = *cert_minus;
    } else {
        result.final_certificate.matrix_dimension = query.plant.node_count();
        result.diagnostic =
            "infeasible at delays below tol (shift too aggressive or "
            "numerical failure)";
    }
    return result;
}

std::vector<Complex> default_shift_grid() {
    std::vector<Complex> grid;
    for (int k = 0;; ++k) {
        const double w0 = -1.5 + 0.02 * k;
        if (w0 > 0.48 + 1e-12) break;
        grid.emplace_back(w0, 0.0);
    }
    return grid;
}

GridSearchResult grid_search_shift(const Plant& plant,
                                   std::span<const Complex> shift_grid,
                                   double tol, const QuadratureConfig& quad,
                                   double pd_tolerance, double epsilon_floor,
                                   int jobs) {
    if (shift_grid.empty())
        throw InvalidInputError("grid_search_shift: empty shift grid");
    // Validate the whole grid before spending any work.
    for (const auto& w0 : shift_grid) Shift check(w0);

    GridSearchResult result;
    result.all.resize(shift_grid.size());
    parallel_for(jobs, shift_grid.size(), [&](std::size_t i) {
        MarginQuery query{plant, Shift(shift_grid[i]), tol, std::nullopt, quad,
                          pd_tolerance, epsilon_floor};
        result.all[i] = bisect_margin(query);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.all.size(); ++i) {
        const double bound = result.all[i].tau_lower_bound;
        const double best_bound = result.all[best].tau_lower_bound;
        if (bound > best_bound ||
            (bound == best_bound && std::abs(result.all[i].shift_used) <
                                        std::abs(result.all[best].shift_used)))
            best = i;
    }
    result.best = result.all[best];
    return result;
}

Plant make_family_plant(const SweepRequest& request, double parameter) {
    switch (request.family) {
        case PlantFamily::OnePoleOneZero:
            return Plant::from_nodes({Complex(parameter, 0.0)},
                                     {Complex(request.fixed_zero, 0.0)});
        case PlantFamily::TwoRealPoles:
            return Plant::from_nodes({Complex(request.fixed_pole, 0.0),
                                      Complex(parameter, 0.0)},
                                     {});
        case PlantFamily::ComplexPairZero: {
            const Complex pole = std::polar(request.pole_radius, request.pole_angle);
            return Plant::from_nodes({pole, std::conj(pole)},
                                     {Complex(parameter, 0.0)});
        }
    }
    throw InvalidInputError("sweep: unknown plant family");
}

double family_upper_bound(const SweepRequest& request, double parameter) {
    switch (request.family) {
        case PlantFamily::OnePoleOneZero:
            // One real pole, one real zero beyond it: 2/p - 2/z is the tight
            // closed-form ceiling. For p >= z no closed-form bound is known.
            if (parameter < request.fixed_zero)
                return 2.0 / parameter - 2.0 / request.fixed_zero;
            return std::numeric_limits<double>::quiet_NaN();
        case PlantFamily::TwoRealPoles:
            // Two distinct real poles are not covered by the closed form.
            return std::numeric_limits<double>::quiet_NaN();
        case PlantFamily::ComplexPairZero:
            // The pole-pair bound stays valid with an extra zero, which can
            // only shrink the achievable margin.
            return middleton_upper_bound(request.pole_radius, request.pole_angle);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<SweepRow> sweep(const SweepRequest& request, int jobs) {
    if (request.parameters.empty())
        throw InvalidInputError("sweep: no parameter values");
    if (request.shift_grid.empty())
        throw InvalidInputError("sweep: empty shift grid");
    request.quad.validate();
    for (const auto& w0 : request.shift_grid) Shift check(w0);

    std::vector<SweepRow> rows;
    if (request.best_only) {
        rows.resize(request.parameters.size());
        parallel_for(jobs, rows.size(), [&](std::size_t i) {
            const double parameter = request.parameters[i];
            const Plant plant = make_family_plant(request, parameter);
            const auto search = grid_search_shift(
                plant, request.shift_grid, request.tol, request.quad,
                request.pd_tolerance, request.epsilon_floor, 1);
            rows[i] = {parameter, search.best.shift_used,
                       search.best.tau_lower_bound,
                       family_upper_bound(request, parameter),
                       search.best.iterations};
        });
    } else {
        rows.resize(request.parameters.size() * request.shift_grid.size());
        parallel_for(jobs, rows.size(), [&](std::size_t i) {
            const std::size_t pi = i / request.shift_grid.size();
            const std::size_t si = i % request.shift_grid.size();
            const double parameter = request.parameters[pi];
            const Plant plant = make_family_plant(request, parameter);
            MarginQuery query{plant, Shift(request.shift_grid[si]), request.tol,
                              std::nullopt, request.quad, request.pd_tolerance,
                              request.epsilon_floor};
            const MarginResult r = bisect_margin(query);
            rows[i] = {parameter, r.shift_used, r.tau_lower_bound,
                       family_upper_bound(request, parameter), r.iterations};
        });
    }
    return rows;
}

}  // namespace dmargin
