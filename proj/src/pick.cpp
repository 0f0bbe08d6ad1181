#include "dmargin/pick.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace dmargin {

PickProblem::PickProblem(std::vector<Complex> nodes_in,
                         std::vector<Complex> values_in)
    : nodes(std::move(nodes_in)), values(std::move(values_in)) {
    if (nodes.size() != values.size())
        throw InvalidInputError("pick: node and value counts differ");
    if (nodes.empty()) throw InvalidInputError("pick: empty problem");
    for (const auto& v : nodes)
        if (!(v.real() > 0.0))
            throw InvalidInputError("pick: nodes must have Re > 0");
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j])
                throw InvalidInputError("pick: coincident nodes");
}

PickProblem interpolation_values(const Plant& plant, const Shift& shift,
                                 std::span<const Complex> w_at_poles,
                                 std::span<const Complex> w_at_zeros) {
    if (w_at_poles.size() != plant.unstable_poles().size() ||
        w_at_zeros.size() != plant.nmp_zeros().size())
        throw InvalidInputError(
            "pick: outer-function value counts do not match the plant");

    const Complex w0 = shift.value();
    std::vector<Complex> nodes;
    std::vector<Complex> values;
    nodes.reserve(plant.unstable_poles().size() + plant.nmp_zeros().size());
    values.reserve(nodes.capacity());
    for (std::size_t i = 0; i < w_at_poles.size(); ++i) {
        nodes.push_back(plant.unstable_poles()[i]);
        values.push_back((1.0 - w0) * w_at_poles[i]);
    }
    for (std::size_t i = 0; i < w_at_zeros.size(); ++i) {
        nodes.push_back(plant.nmp_zeros()[i]);
        values.push_back(-w0 * w_at_zeros[i]);
    }
    return PickProblem(std::move(nodes), std::move(values));
}

Eigen::MatrixXcd build_pick_matrix(const PickProblem& problem) {
    const auto n = static_cast<Eigen::Index>(problem.nodes.size());
    Eigen::MatrixXcd pick(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const Complex& vj = problem.nodes[static_cast<std::size_t>(j)];
            const Complex& vk = problem.nodes[static_cast<std::size_t>(k)];
            const Complex& wj = problem.values[static_cast<std::size_t>(j)];
            const Complex& wk = problem.values[static_cast<std::size_t>(k)];
            pick(j, k) = (1.0 - wj * std::conj(wk)) / (vj + std::conj(vk));
        }
    }
    // Fold rounding residue back onto the Hermitian part.
    pick = 0.5 * (pick + pick.adjoint()).eval();
    return pick;
}

FeasibilityCertificate is_feasible(const Eigen::MatrixXcd& matrix,
                                   double pd_tolerance) {
    if (!matrix.allFinite())
        throw NumericError("pick: non-finite Pick matrix entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("pick: Hermitian eigendecomposition failed");

    FeasibilityCertificate cert;
    cert.matrix_dimension = static_cast<int>(matrix.rows());
    cert.min_eigenvalue = solver.eigenvalues().minCoeff();
    const double scale = std::max(matrix.diagonal().real().maxCoeff(), 0.0);
    cert.is_feasible = cert.min_eigenvalue > pd_tolerance * scale;
    return cert;
}

FeasibilityCertificate feasibility_at(double tau_bar, const Plant& plant,
                                      const Shift& shift,
                                      const QuadratureConfig& quad,
                                      double pd_tolerance,
                                      double epsilon_floor) {
    WeightSpec spec;
    spec.tau_bar = tau_bar;
    spec.shift = shift;
    spec.epsilon_floor = epsilon_floor;
    const auto data = interpolation_data(plant, spec, quad);
    const auto problem =
        interpolation_values(plant, shift, data.at_poles, data.at_zeros);
    return is_feasible(build_pick_matrix(problem), pd_tolerance);
}

}  // namespace dmargin
