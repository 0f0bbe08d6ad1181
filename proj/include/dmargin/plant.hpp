#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dmargin/errors.hpp"

namespace dmargin {

using Complex = std::complex<double>;

/// Default tolerance separating genuine imaginary-axis roots from rounding
/// noise. Interpreted relative to the largest root magnitude.
inline constexpr double kDefaultAxisTol = 1e-9;

/// A SISO LTI plant reduced to the data that drives the interpolation
/// conditions: its unstable poles and nonminimum-phase zeros. All nodes lie
/// strictly in the open right half plane and are pairwise distinct. Immutable
/// after construction and safe to share across threads.
class Plant {
  public:
    /// Build a plant directly from pole/zero lists. This is the canonical
    /// path for parameterized plant families; no root finding is involved.
    static Plant from_nodes(std::vector<Complex> unstable_poles,
                            std::vector<Complex> nmp_zeros,
                            double axis_tol = kDefaultAxisTol);

    const std::vector<Complex>& unstable_poles() const { return poles_; }
    const std::vector<Complex>& nmp_zeros() const { return zeros_; }

    /// Transfer-function coefficients (numerator, denominator; descending
    /// powers of s) when the plant was extracted from one.
    const std::optional<std::pair<std::vector<double>, std::vector<double>>>&
    source() const {
        return source_;
    }

    int node_count() const {
        return static_cast<int>(poles_.size() + zeros_.size());
    }

  private:
    friend Plant classify_plant(std::span<const double>, std::span<const double>,
                                double);
    Plant() = default;

    std::vector<Complex> poles_;
    std::vector<Complex> zeros_;
    std::optional<std::pair<std::vector<double>, std::vector<double>>> source_;
};

/// All roots (with numerical multiplicity) of the real polynomial with the
/// given coefficients in descending powers, via companion-matrix
/// eigenvalues. Each root is validated against the backward-error bound
/// |p(r)| <= tol * sum_k |c_k| |r|^k; a violation raises NumericError.
/// Results are sorted by real part, then imaginary part.
///
/// Conditioning degrades for degrees much beyond ~20; inputs in that range
/// should be treated with suspicion even when the residual check passes.
std::vector<Complex> roots_of_polynomial(std::span<const double> coeffs,
                                         double tol = 1e-8);

/// Extract a Plant from transfer-function coefficients (descending powers).
/// Denominator roots with Re > 0 become unstable poles, numerator roots with
/// Re > 0 nonminimum-phase zeros; left-half-plane roots are discarded.
///
/// Throws ImaginaryAxisError if any root lies within axis_tol (relative to
/// the largest root magnitude) of the imaginary axis, StablePlantError if no
/// unstable pole exists (the margin is then trivially infinite), and
/// MultiplicityError on coincident nodes.
Plant classify_plant(std::span<const double> num, std::span<const double> den,
                     double axis_tol = kDefaultAxisTol);

}  // namespace dmargin
