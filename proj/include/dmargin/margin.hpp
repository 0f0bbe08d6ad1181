#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dmargin/pick.hpp"
#include "dmargin/plant.hpp"
#include "dmargin/weight.hpp"

namespace dmargin {

/// One bisection request: plant, shift, bisection width and quadrature.
struct MarginQuery {
    Plant plant;
    Shift shift;
    /// Bisection terminates when the bracket width drops below tol
    /// (seconds). <= 0 selects the default 1e-4 * initial upper bound.
    double tol = 0.0;
    /// Override for the initial upper bound 2*pi / max_j |p_j|.
    std::optional<double> tau_upper_init;
    QuadratureConfig quad;
    double pd_tolerance = kDefaultPdTol;
    double epsilon_floor = 0.0;
};

struct MarginResult {
    double tau_lower_bound = 0.0;  ///< certified lower bound, seconds
    Complex shift_used{0.0, 0.0};
    int iterations = 0;  ///< bisection steps taken
    /// Certificate at the feasible end of the final bracket (trivial when
    /// tau_lower_bound == 0).
    FeasibilityCertificate final_certificate;
    std::pair<double, double> bracket{0.0, 0.0};  ///< final (tau-, tau+)
    /// Set when the initial upper bound was found feasible and had to be
    /// grown by doubling before bisection.
    bool initial_upper_not_binding = false;
    /// Nonempty on degenerate outcomes (infeasible below tol, cap reached).
    std::string diagnostic;
};

/// Initial bisection upper bound 2*pi / max_j |p_j|, valid since the delay
/// margin of any plant with an unstable pole cannot exceed it.
double initial_upper_bound(const Plant& plant);

/// Closed-form upper bound (1/r) * (pi*sin(theta) + 2*max{cos(theta),
/// theta*sin(theta)}) on the maximum delay margin of a plant with unstable
/// poles at r*e^{+-i*theta}. Tight for one real unstable pole (theta = 0)
/// and for exactly one conjugate pair. Requires theta in [0, pi/2].
double middleton_upper_bound(double r, double theta);

/// Bisection over the delay horizon (feasible => raise tau-, infeasible =>
/// lower tau+) until the bracket is narrower than tol; returns tau- with its
/// feasibility certificate. If the initial upper bound turns out feasible it
/// is doubled, up to 2^10 times, before bisecting.
MarginResult bisect_margin(const MarginQuery& query);

struct GridSearchResult {
    MarginResult best;
    std::vector<MarginResult> all;  ///< one result per grid point, in order
};

/// Run bisect_margin for every shift in the grid; best is the largest lower
/// bound, ties broken by smaller |w0|. Grid points are independent and are
/// distributed over `jobs` workers (0 = all hardware threads); results are
/// gathered by index so the outcome is independent of scheduling.
GridSearchResult grid_search_shift(const Plant& plant,
                                   std::span<const Complex> shift_grid,
                                   double tol, const QuadratureConfig& quad,
                                   double pd_tolerance = kDefaultPdTol,
                                   double epsilon_floor = 0.0, int jobs = 1);

/// Default shift grid: real w0 from -1.5 to 0.48 in steps of 0.02.
std::vector<Complex> default_shift_grid();

/// The parameterized example families used by the sweep runner.
enum class PlantFamily {
    OnePoleOneZero,   ///< (s - z) / (s - p); parameter p, fixed zero z
    TwoRealPoles,     ///< 1 / ((s - p1)(s - p2)); parameter p2, fixed p1
    ComplexPairZero,  ///< (s - z) / ((s - r e^{i th})(s - r e^{-i th}));
                      ///< parameter z, fixed (r, theta)
};

struct SweepRequest {
    PlantFamily family = PlantFamily::OnePoleOneZero;
    double fixed_zero = 2.0;    ///< OnePoleOneZero: the zero z
    double fixed_pole = 0.2;    ///< TwoRealPoles: the fixed pole p1
    double pole_radius = 1.0;   ///< ComplexPairZero: r
    double pole_angle = 0.785398163397448279;  ///< ComplexPairZero: theta
    std::vector<double> parameters;            ///< swept parameter values
    std::vector<Complex> shift_grid;
    /// "best": one row per parameter with the grid-best shift;
    /// "all": one row per (parameter, shift) pair.
    bool best_only = true;
    double tol = 0.0;  ///< absolute bisection width; <= 0 selects default
    QuadratureConfig quad;
    double pd_tolerance = kDefaultPdTol;
    double epsilon_floor = 0.0;
};

struct SweepRow {
    double parameter = 0.0;
    Complex shift{0.0, 0.0};
    double lower_bound = 0.0;
    /// Closed-form upper bound where one applies to the family; NaN
    /// otherwise.
    double upper_bound = 0.0;
    int iterations = 0;
};

/// Plant for one member of a sweep family.
Plant make_family_plant(const SweepRequest& request, double parameter);

/// Closed-form upper bound associated with a family member, or NaN when none
/// of the known bounds applies.
double family_upper_bound(const SweepRequest& request, double parameter);

/// Run the sweep; rows are computed independently across `jobs` workers and
/// gathered by index (deterministic output order).
std::vector<SweepRow> sweep(const SweepRequest& request, int jobs = 1);

}  // namespace dmargin
