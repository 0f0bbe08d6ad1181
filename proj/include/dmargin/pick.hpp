#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dmargin/outer.hpp"
#include "dmargin/plant.hpp"
#include "dmargin/weight.hpp"

namespace dmargin {

/// Relative positive-definiteness tolerance: a Pick matrix counts as
/// feasible iff its smallest eigenvalue exceeds this fraction of the largest
/// diagonal entry.
inline constexpr double kDefaultPdTol = 1e-10;

/// Nodes and target values of the Nevanlinna-Pick problem. Nodes are the
/// plant's poles followed by its zeros; all have Re > 0 and are pairwise
/// distinct.
struct PickProblem {
    PickProblem(std::vector<Complex> nodes, std::vector<Complex> values);

    std::vector<Complex> nodes;
    std::vector<Complex> values;
};

struct FeasibilityCertificate {
    bool is_feasible = false;
    double min_eigenvalue = 0.0;  ///< smallest eigenvalue of the Pick matrix
    int matrix_dimension = 0;
};

/// Assemble the interpolation data of the shifted problem:
/// value (1 - w0) * W(p_j) at each pole and -w0 * W(z_j) at each zero.
/// With w0 = 0 the zero-node values vanish, recovering the baseline problem.
PickProblem interpolation_values(const Plant& plant, const Shift& shift,
                                 std::span<const Complex> w_at_poles,
                                 std::span<const Complex> w_at_zeros);

/// Pick matrix [(1 - w_j conj(w_k)) / (v_j + conj(v_k))], symmetrized so the
/// result is exactly Hermitian.
Eigen::MatrixXcd build_pick_matrix(const PickProblem& problem);

/// Positive-definiteness decision via full Hermitian eigendecomposition; the
/// minimum eigenvalue doubles as a feasibility margin for diagnostics.
/// Input must be Hermitian (only the lower triangle is read).
FeasibilityCertificate is_feasible(const Eigen::MatrixXcd& matrix,
                                   double pd_tolerance = kDefaultPdTol);

/// Full feasibility pipeline for one delay horizon: weight -> outer values
/// at all nodes -> interpolation values -> Pick matrix -> eigenvalue test.
FeasibilityCertificate feasibility_at(double tau_bar, const Plant& plant,
                                      const Shift& shift,
                                      const QuadratureConfig& quad = {},
                                      double pd_tolerance = kDefaultPdTol,
                                      double epsilon_floor = 0.0);

}  // namespace dmargin
