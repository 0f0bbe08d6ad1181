#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dmargin/plant.hpp"
#include "dmargin/weight.hpp"

namespace dmargin {

/// Composite Gauss-Legendre configuration for the boundary integral. The
/// integral is evaluated twice, at `panels` and `2*panels` base panels; the
/// two log|W| estimates must agree to `tolerance` or AccuracyError is
/// raised. `kink_refinement` sets the minimum dyadic panel-splitting depth
/// around the weight's break frequencies and the omega = 0 singularity (the
/// depth at the singularity deepens automatically with the tolerance).
struct QuadratureConfig {
    int panels = 64;
    int nodes_per_panel = 16;
    int kink_refinement = 8;
    double tolerance = 1e-8;

    void validate() const;
};

/// A frequency at which the boundary modulus is not smooth. log_singular
/// marks points where phi vanishes (log phi has an integrable -inf
/// singularity); plain entries are derivative kinks.
struct BoundaryFeature {
    double omega;
    bool log_singular = false;
};

/// log W(s) for the outer function W with boundary modulus phi, via the
/// Poisson-type representation on the right half plane. The integration
/// variable is u = atan(omega); panels are forced to break at the u-images
/// of the listed features, refined dyadically around them, and the
/// evaluation point's kernel concentration near the boundary is handled by
/// a dedicated peak-adapted window. Self-checked by panel doubling.
///
/// phi must be positive a.e. and is clamped below at 1e-300 before taking
/// logs. Requires Re(s) > 0.
Complex log_outer(Complex s, const std::function<double(double)>& phi,
                  std::span<const BoundaryFeature> features,
                  const QuadratureConfig& quad = {});

/// The outer function of the spec'd weight: exp of the self-checked
/// quadrature of the boundary integral. Finite and nonzero for every
/// Re(s) > 0.
Complex evaluate_outer(Complex s, const WeightSpec& spec,
                       const QuadratureConfig& quad = {});

/// Outer-function values at every plant node.
struct InterpolationData {
    std::vector<Complex> at_poles;
    std::vector<Complex> at_zeros;
};

InterpolationData interpolation_data(const Plant& plant, const WeightSpec& spec,
                                     const QuadratureConfig& quad = {});

}  // namespace dmargin
