#include "dmargin/plant.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace dmargin {

namespace {

std::vector<double> trim_leading_zeros(std::span<const double> coeffs) {
    std::size_t first = 0;
    while (first < coeffs.size() && coeffs[first] == 0.0) ++first;
    return {coeffs.begin() + static_cast<std::ptrdiff_t>(first), coeffs.end()};
}

// Backward-error residual scale sum_k |c_k| |r|^(deg-k).
double residual_scale(std::span<const double> coeffs, const Complex& root) {
    const double mag = std::abs(root);
    double scale = 0.0;
    for (double c : coeffs) scale = scale * mag + std::abs(c);
    return scale;
}

Complex horner(std::span<const double> coeffs, const Complex& s) {
    Complex value(0.0, 0.0);
    for (double c : coeffs) value = value * s + c;
    return value;
}

void sort_nodes(std::vector<Complex>& nodes) {
    std::sort(nodes.begin(), nodes.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

double max_magnitude(const std::vector<Complex>& nodes) {
    double m = 0.0;
    for (const auto& n : nodes) m = std::max(m, std::abs(n));
    return m;
}

void check_distinct(const std::vector<Complex>& nodes, double abs_tol) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (std::abs(nodes[i] - nodes[j]) <= abs_tol)
                throw MultiplicityError(
                    "plant: coincident poles/zeros; repeated interpolation "
                    "nodes are unsupported");
}

}  // namespace

std::vector<Complex> roots_of_polynomial(std::span<const double> coeffs,
                                         double tol) {
    if (coeffs.empty())
        throw InvalidInputError("roots_of_polynomial: empty coefficient list");
    if (std::all_of(coeffs.begin(), coeffs.end(),
                    [](double c) { return c == 0.0; }))
        throw InvalidInputError("roots_of_polynomial: all coefficients zero");
    if (coeffs[0] == 0.0)
        throw InvalidInputError(
            "roots_of_polynomial: leading coefficient is zero");
    for (double c : coeffs)
        if (!std::isfinite(c))
            throw InvalidInputError(
                "roots_of_polynomial: non-finite coefficient");

    const int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree == 0) return {};

    // Monic companion matrix; real Schur keeps conjugate pairs exact.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i)
        companion(i, degree - 1) = -coeffs[static_cast<std::size_t>(degree - i)] / coeffs[0];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
        throw NumericError("roots_of_polynomial: eigenvalue iteration failed");

    std::vector<Complex> roots(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    sort_nodes(roots);

    for (const auto& r : roots) {
        const double residual = std::abs(horner(coeffs, r));
        if (!(residual <= tol * residual_scale(coeffs, r)))
            throw NumericError(
                "roots_of_polynomial: root residual exceeds tolerance "
                "(ill-conditioned polynomial)");
    }
    return roots;
}

Plant Plant::from_nodes(std::vector<Complex> unstable_poles,
                        std::vector<Complex> nmp_zeros, double axis_tol) {
    if (unstable_poles.empty())
        throw StablePlantError(
            "plant: no unstable pole; the delay margin is trivially infinite");

    double scale = std::max(max_magnitude(unstable_poles), max_magnitude(nmp_zeros));
    const double abs_tol = axis_tol * std::max(1.0, scale);

    auto check_rhp = [&](const std::vector<Complex>& nodes, const char* kind) {
        for (const auto& n : nodes) {
            if (!std::isfinite(n.real()) || !std::isfinite(n.imag()))
                throw InvalidInputError(std::string("plant: non-finite ") + kind);
            if (std::abs(n.real()) <= abs_tol)
                throw ImaginaryAxisError(
                    std::string("plant: ") + kind +
                    " on the imaginary axis; nodes must lie strictly in the "
                    "open right half plane");
            if (n.real() < 0.0)
                throw InvalidInputError(std::string("plant: ") + kind +
                                        " has negative real part");
        }
    };
    check_rhp(unstable_poles, "pole");
    check_rhp(nmp_zeros, "zero");

    sort_nodes(unstable_poles);
    sort_nodes(nmp_zeros);

    std::vector<Complex> all = unstable_poles;
    all.insert(all.end(), nmp_zeros.begin(), nmp_zeros.end());
    check_distinct(all, abs_tol);

    Plant plant;
    plant.poles_ = std::move(unstable_poles);
    plant.zeros_ = std::move(nmp_zeros);
    return plant;
}

Plant classify_plant(std::span<const double> num, std::span<const double> den,
                     double axis_tol) {
    const std::vector<double> n = trim_leading_zeros(num);
    const std::vector<double> d = trim_leading_zeros(den);
    if (n.empty() || d.empty())
        throw InvalidInputError("classify_plant: zero numerator or denominator");
    if (n.size() > d.size())
        throw InvalidInputError(
            "classify_plant: improper transfer function (deg num > deg den)");

    const auto num_roots = roots_of_polynomial(n);
    const auto den_roots = roots_of_polynomial(d);

    double scale = 0.0;
    for (const auto& r : num_roots) scale = std::max(scale, std::abs(r));
    for (const auto& r : den_roots) scale = std::max(scale, std::abs(r));
    const double abs_tol = axis_tol * std::max(1.0, scale);

    auto split_rhp = [&](const std::vector<Complex>& roots, const char* kind) {
        std::vector<Complex> rhp;
        for (const auto& r : roots) {
            if (std::abs(r.real()) <= abs_tol)
                throw ImaginaryAxisError(
                    std::string("classify_plant: ") + kind +
                    " root on the imaginary axis (|Re| <= axis_tol)");
            if (r.real() > 0.0) rhp.push_back(r);
        }
        return rhp;
    };

    std::vector<Complex> poles = split_rhp(den_roots, "denominator");
    std::vector<Complex> zeros = split_rhp(num_roots, "numerator");
    if (poles.empty())
        throw StablePlantError(
            "classify_plant: plant is stable; the delay margin is trivially "
            "infinite");

    std::vector<Complex> all = poles;
    all.insert(all.end(), zeros.begin(), zeros.end());
    check_distinct(all, abs_tol);

    Plant plant;
    plant.poles_ = std::move(poles);
    plant.zeros_ = std::move(zeros);
    plant.source_ = std::make_pair(n, d);
    return plant;
}

}  // namespace dmargin
