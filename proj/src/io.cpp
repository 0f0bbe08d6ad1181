#include "dmargin/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace dmargin {

namespace {

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("io: cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInputError("io: JSON parse error in " + path + ": " +
                                e.what());
    }
    return j;
}

std::vector<Complex> parse_complex_list(const json& j, const std::string& key) {
    if (!j.is_array())
        throw InvalidInputError("io: \"" + key +
                                "\" must be an array of [re, im] pairs");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2 ||
            !entry[0].is_number() || !entry[1].is_number())
            throw InvalidInputError("io: entries of \"" + key +
                                    "\" must be [re, im] pairs");
        out.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return out;
}

std::vector<double> parse_real_list(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty())
        throw InvalidInputError("io: \"" + key +
                                "\" must be a non-empty number array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& entry : j) {
        if (!entry.is_number())
            throw InvalidInputError("io: entries of \"" + key +
                                    "\" must be numbers");
        out.push_back(entry.get<double>());
    }
    return out;
}

}  // namespace

Plant load_plant(const json& j, double axis_tol) {
    if (!j.is_object()) throw InvalidInputError("io: plant must be an object");
    const bool has_nodes = j.contains("poles") || j.contains("zeros");
    const bool has_coeffs = j.contains("num") || j.contains("den");
    if (has_nodes && has_coeffs)
        throw InvalidInputError(
            "io: plant mixes the pole/zero form with the num/den form; use "
            "exactly one");
    if (has_nodes) {
        if (!j.contains("poles"))
            throw InvalidInputError("io: pole/zero plant needs \"poles\"");
        auto poles = parse_complex_list(j.at("poles"), "poles");
        std::vector<Complex> zeros;
        if (j.contains("zeros"))
            zeros = parse_complex_list(j.at("zeros"), "zeros");
        return Plant::from_nodes(std::move(poles), std::move(zeros), axis_tol);
    }
    if (has_coeffs) {
        if (!j.contains("num") || !j.contains("den"))
            throw InvalidInputError(
                "io: coefficient plant needs both \"num\" and \"den\"");
        const auto num = parse_real_list(j.at("num"), "num");
        const auto den = parse_real_list(j.at("den"), "den");
        return classify_plant(num, den, axis_tol);
    }
    throw InvalidInputError(
        "io: plant needs either \"poles\"/\"zeros\" or \"num\"/\"den\"");
}

Plant load_plant_file(const std::string& path, double axis_tol) {
    return load_plant(load_json_file(path), axis_tol);
}

namespace {

std::vector<double> parse_parameter_grid(const json& j) {
    if (j.is_array()) return parse_real_list(j, "parameters");
    if (j.is_object()) {
        const double start = j.at("start").get<double>();
        const double stop = j.at("stop").get<double>();
        const int count = j.at("count").get<int>();
        if (count < 1)
            throw InvalidInputError("io: parameter count must be >= 1");
        std::vector<double> values(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            values[static_cast<std::size_t>(i)] =
                count == 1 ? start : start + (stop - start) * i / (count - 1);
        return values;
    }
    throw InvalidInputError(
        "io: \"parameters\" must be an array or {start, stop, count}");
}

std::vector<Complex> parse_shift_grid(const json& j) {
    if (j.is_object()) {
        const double start = j.at("start").get<double>();
        const double step = j.at("step").get<double>();
        const double stop = j.at("stop").get<double>();
        if (!(step > 0.0)) throw InvalidInputError("io: shift step must be > 0");
        std::vector<Complex> grid;
        for (int k = 0;; ++k) {
            const double w0 = start + step * k;
            if (w0 > stop + 1e-12 * std::max(1.0, std::abs(stop))) break;
            grid.emplace_back(w0, 0.0);
        }
        if (grid.empty()) throw InvalidInputError("io: empty shift grid");
        return grid;
    }
    if (j.is_array()) {
        if (j.empty()) throw InvalidInputError("io: empty shift grid");
        std::vector<Complex> grid;
        grid.reserve(j.size());
        for (const auto& entry : j) {
            if (entry.is_number()) {
                grid.emplace_back(entry.get<double>(), 0.0);
            } else if (entry.is_array() && entry.size() == 2 &&
                       entry[0].is_number() && entry[1].is_number()) {
                grid.emplace_back(entry[0].get<double>(), entry[1].get<double>());
            } else {
                throw InvalidInputError(
                    "io: shift entries must be numbers or [re, im] pairs");
            }
        }
        return grid;
    }
    throw InvalidInputError(
        "io: \"shifts\" must be an array or {start, step, stop}");
}

QuadratureConfig parse_quad(const json& j) {
    QuadratureConfig quad;
    if (j.contains("panels")) quad.panels = j.at("panels").get<int>();
    if (j.contains("nodes_per_panel"))
        quad.nodes_per_panel = j.at("nodes_per_panel").get<int>();
    if (j.contains("kink_refinement"))
        quad.kink_refinement = j.at("kink_refinement").get<int>();
    if (j.contains("tolerance")) quad.tolerance = j.at("tolerance").get<double>();
    quad.validate();
    return quad;
}

}  // namespace

SweepRequest load_experiment(const json& j) {
    if (!j.is_object())
        throw InvalidInputError("io: experiment must be an object");
    SweepRequest request;

    const std::string family = j.at("family").get<std::string>();
    if (family == "one_pole_one_zero") {
        request.family = PlantFamily::OnePoleOneZero;
        request.fixed_zero = j.at("zero").get<double>();
    } else if (family == "two_real_poles") {
        request.family = PlantFamily::TwoRealPoles;
        request.fixed_pole = j.at("pole1").get<double>();
    } else if (family == "complex_pair_zero") {
        request.family = PlantFamily::ComplexPairZero;
        request.pole_radius = j.at("radius").get<double>();
        request.pole_angle = j.at("angle").get<double>();
    } else {
        throw InvalidInputError("io: unknown plant family \"" + family + "\"");
    }

    request.parameters = parse_parameter_grid(j.at("parameters"));
    request.shift_grid = parse_shift_grid(j.at("shifts"));
    if (j.contains("mode")) {
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "best")
            request.best_only = true;
        else if (mode == "all")
            request.best_only = false;
        else
            throw InvalidInputError("io: mode must be \"best\" or \"all\"");
    }
    if (j.contains("tol")) request.tol = j.at("tol").get<double>();
    if (j.contains("quad")) request.quad = parse_quad(j.at("quad"));
    if (j.contains("pd_tolerance"))
        request.pd_tolerance = j.at("pd_tolerance").get<double>();
    if (j.contains("epsilon_floor"))
        request.epsilon_floor = j.at("epsilon_floor").get<double>();
    return request;
}

SweepRequest load_experiment_file(const std::string& path) {
    return load_experiment(load_json_file(path));
}

json certificate_to_json(double tau, const FeasibilityCertificate& cert) {
    return json{{"tau", tau},
                {"feasible", cert.is_feasible},
                {"min_eig", cert.min_eigenvalue},
                {"dim", cert.matrix_dimension}};
}

json margin_result_to_json(const MarginResult& result) {
    json j{{"tau_lower_bound", result.tau_lower_bound},
           {"w0", {result.shift_used.real(), result.shift_used.imag()}},
           {"iterations", result.iterations},
           {"bracket", {result.bracket.first, result.bracket.second}},
           {"certificate", certificate_to_json(result.tau_lower_bound,
                                               result.final_certificate)},
           {"initial_upper_not_binding", result.initial_upper_not_binding}};
    if (!result.diagnostic.empty()) j["diagnostic"] = result.diagnostic;
    return j;
}

json sweep_rows_to_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json entry{{"param", row.parameter},
                   {"w0", {row.shift.real(), row.shift.imag()}},
                   {"lower_bound", row.lower_bound},
                   {"iterations", row.iterations}};
        if (std::isnan(row.upper_bound))
            entry["upper_bound"] = nullptr;
        else
            entry["upper_bound"] = row.upper_bound;
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "param,w0_re,w0_im,lower_bound,upper_bound,iterations\n";
    for (const auto& row : rows) {
        out << format_number(row.parameter) << ','
            << format_number(row.shift.real()) << ','
            << format_number(row.shift.imag()) << ','
            << format_number(row.lower_bound) << ','
            << format_number(row.upper_bound) << ',' << row.iterations << '\n';
    }
}

void write_weight_csv(std::ostream& out, const std::vector<double>& omegas,
                      const std::vector<double>& phis) {
    out << "omega,phi\n";
    for (std::size_t i = 0; i < omegas.size(); ++i)
        out << format_number(omegas[i]) << ',' << format_number(phis[i]) << '\n';
}

void write_outer_csv(std::ostream& out, const std::vector<double>& omegas,
                     const std::vector<double>& magnitudes) {
    out << "omega,abs_w\n";
    for (std::size_t i = 0; i < omegas.size(); ++i)
        out << format_number(omegas[i]) << ','
            << format_number(magnitudes[i]) << '\n';
}

}  // namespace dmargin
