// Command-line front end: margin queries, parameter sweeps, the closed-form
// upper bound, and weight/outer-function dumps for figure reproduction.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dmargin/io.hpp"
#include "dmargin/margin.hpp"
#include "dmargin/outer.hpp"
#include "dmargin/pick.hpp"
#include "dmargin/plant.hpp"
#include "dmargin/weight.hpp"

namespace {

using dmargin::Complex;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;
constexpr int kExitInfeasibleAtZero = 4;

Complex parse_complex(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw dmargin::InvalidInputError("empty complex literal");

    auto parse_real = [](const std::string& str) {
        if (str.empty() || str == "+") return 1.0;
        if (str == "-") return -1.0;
        std::size_t used = 0;
        double value = std::stod(str, &used);
        if (used != str.size())
            throw dmargin::InvalidInputError("bad number: \"" + str + "\"");
        return value;
    };

    if (t.back() == 'i' || t.back() == 'I') {
        const std::string body = t.substr(0, t.size() - 1);
        // split at the sign that separates real and imaginary parts
        for (std::size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') &&
                body[k - 1] != 'e' && body[k - 1] != 'E') {
                return {parse_real(body.substr(0, k)),
                        parse_real(body.substr(k))};
            }
        }
        return {0.0, parse_real(body)};
    }
    return {parse_real(t), 0.0};
}

std::vector<Complex> parse_shift_range(const std::string& text) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw dmargin::InvalidInputError(
            "shift grid must be \"start:step:stop\"");
    const double start = std::stod(text.substr(0, first));
    const double step = std::stod(text.substr(first + 1, second - first - 1));
    const double stop = std::stod(text.substr(second + 1));
    if (!(step > 0.0))
        throw dmargin::InvalidInputError("shift grid step must be > 0");
    std::vector<Complex> grid;
    for (int k = 0;; ++k) {
        const double w0 = start + step * k;
        if (w0 > stop + 1e-12 * std::max(1.0, std::abs(stop))) break;
        grid.emplace_back(w0, 0.0);
    }
    if (grid.empty()) throw dmargin::InvalidInputError("empty shift grid");
    return grid;
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_)
                throw dmargin::InvalidInputError("cannot open output file: " +
                                                 path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::vector<double> make_grid(double lo, double hi, int points, bool log_spacing) {
    if (points < 2) throw dmargin::InvalidInputError("need at least 2 points");
    if (!(hi > lo)) throw dmargin::InvalidInputError("omega-max must exceed omega-min");
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (log_spacing) {
        if (!(lo > 0.0))
            throw dmargin::InvalidInputError(
                "log spacing requires omega-min > 0");
        const double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i < points; ++i)
            grid[static_cast<std::size_t>(i)] =
                std::exp(llo + (lhi - llo) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i)
            grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    }
    return grid;
}

struct QuadFlags {
    dmargin::QuadratureConfig config;
    void attach(CLI::App* cmd) {
        cmd->add_option("--quad-panels", config.panels,
                        "base quadrature panels");
        cmd->add_option("--quad-nodes", config.nodes_per_panel,
                        "Gauss-Legendre nodes per panel");
        cmd->add_option("--quad-kink", config.kink_refinement,
                        "dyadic refinement depth at weight kinks");
        cmd->add_option("--quad-tol", config.tolerance,
                        "quadrature self-check tolerance");
    }
};

int run_margin(const std::string& plant_path, const std::string& w0_text,
               const std::string& w0_grid_text, double tol, double axis_tol,
               double pd_tol, double eps_floor, const QuadFlags& quad,
               int jobs, const std::string& out_path) {
    Output out(out_path);
    dmargin::Plant plant = [&] {
        try {
            return dmargin::load_plant_file(plant_path, axis_tol);
        } catch (const dmargin::StablePlantError&) {
            throw;  // handled by caller for the infinite-margin report
        }
    }();

    if (!w0_grid_text.empty()) {
        const auto grid = parse_shift_range(w0_grid_text);
        const auto search = dmargin::grid_search_shift(
            plant, grid, tol, quad.config, pd_tol, eps_floor, jobs);
        json all = json::array();
        for (const auto& r : search.all)
            all.push_back(dmargin::margin_result_to_json(r));
        json j{{"best", dmargin::margin_result_to_json(search.best)},
               {"all", std::move(all)}};
        out.stream() << j.dump(2) << '\n';
        return search.best.tau_lower_bound == 0.0 &&
                       !search.best.diagnostic.empty()
                   ? kExitInfeasibleAtZero
                   : kExitOk;
    }

    dmargin::MarginQuery query{plant,
                               dmargin::Shift(parse_complex(w0_text)),
                               tol,
                               std::nullopt,
                               quad.config,
                               pd_tol,
                               eps_floor};
    const auto result = dmargin::bisect_margin(query);
    out.stream() << dmargin::margin_result_to_json(result).dump(2) << '\n';
    return result.tau_lower_bound == 0.0 && !result.diagnostic.empty()
               ? kExitInfeasibleAtZero
               : kExitOk;
}

int run_sweep(const std::string& experiment_path, const std::string& format,
              int jobs, const std::string& out_path) {
    Output out(out_path);
    const auto request = dmargin::load_experiment_file(experiment_path);
    const auto rows = dmargin::sweep(request, jobs);
    if (format == "json")
        out.stream() << dmargin::sweep_rows_to_json(rows).dump(2) << '\n';
    else
        dmargin::write_sweep_csv(out.stream(), rows);
    return kExitOk;
}

int run_upper(double r, double theta, const std::string& out_path) {
    Output out(out_path);
    out.stream() << dmargin::format_number(
                        dmargin::middleton_upper_bound(r, theta))
                 << '\n';
    return kExitOk;
}

int run_weight_dump(double tau, const std::string& w0_text, double eps_floor,
                    double omega_min, double omega_max, int points,
                    bool log_spacing, const std::string& out_path) {
    Output out(out_path);
    dmargin::WeightSpec spec;
    spec.tau_bar = tau;
    spec.shift = dmargin::Shift(parse_complex(w0_text));
    spec.epsilon_floor = eps_floor;
    const auto omegas = make_grid(omega_min, omega_max, points, log_spacing);
    std::vector<double> phis(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i)
        phis[i] = dmargin::phi_shifted(omegas[i], spec);
    dmargin::write_weight_csv(out.stream(), omegas, phis);
    return kExitOk;
}

int run_outer_dump(double tau, const std::string& w0_text, double eps_floor,
                   double sigma, double omega_min, double omega_max,
                   int points, bool log_spacing, const QuadFlags& quad,
                   const std::string& out_path) {
    Output out(out_path);
    dmargin::WeightSpec spec;
    spec.tau_bar = tau;
    spec.shift = dmargin::Shift(parse_complex(w0_text));
    spec.epsilon_floor = eps_floor;
    const auto omegas = make_grid(omega_min, omega_max, points, log_spacing);
    std::vector<double> mags(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i)
        mags[i] = std::abs(dmargin::evaluate_outer(Complex(sigma, omegas[i]),
                                                   spec, quad.config));
    dmargin::write_outer_csv(out.stream(), omegas, mags);
    return kExitOk;
}

void emit_error(const std::string& type, const std::string& message) {
    std::cout << json{{"error", {{"type", type}, {"message", message}}}}.dump(2)
              << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "delay-margin lower bounds for unstable SISO LTI plants via "
        "analytic interpolation"};
    app.require_subcommand(1);

    // margin
    auto* margin_cmd = app.add_subcommand(
        "margin", "certified lower bound on the maximum delay margin");
    std::string plant_path, w0_text = "0", w0_grid_text, out_path;
    double tol = 0.0, axis_tol = dmargin::kDefaultAxisTol;
    double pd_tol = dmargin::kDefaultPdTol, eps_floor = 0.0;
    int jobs = 0;
    QuadFlags margin_quad;
    margin_cmd->add_option("--plant", plant_path, "plant description JSON")
        ->required();
    margin_cmd->add_option("--w0", w0_text,
                           "shift, e.g. \"-10\" or \"-1+0.5i\" (Re < 1/2)");
    margin_cmd->add_option("--w0-grid", w0_grid_text,
                           "real shift grid \"start:step:stop\"");
    margin_cmd->add_option("--tol", tol,
                           "bisection width in seconds (default: 1e-4 of the "
                           "initial upper bound)");
    margin_cmd->add_option("--axis-tol", axis_tol,
                           "imaginary-axis tolerance for plant ingestion");
    margin_cmd->add_option("--pd-tol", pd_tol,
                           "relative positive-definiteness tolerance");
    margin_cmd->add_option("--epsilon-floor", eps_floor,
                           "lower floor on the boundary weight");
    margin_cmd->add_option("--jobs", jobs,
                           "workers for --w0-grid (0 = all cores)");
    margin_cmd->add_option("--out", out_path, "output path (default stdout)");
    margin_quad.attach(margin_cmd);

    // sweep
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "parameter sweep over a plant family from an experiment file");
    std::string experiment_path, sweep_out, sweep_format = "csv";
    int sweep_jobs = 0;
    sweep_cmd->add_option("--experiment", experiment_path, "experiment JSON")
        ->required();
    sweep_cmd->add_option("--format", sweep_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--jobs", sweep_jobs, "workers (0 = all cores)");
    sweep_cmd->add_option("--out", sweep_out, "output path (default stdout)");

    // upper
    auto* upper_cmd = app.add_subcommand(
        "upper", "closed-form delay-margin upper bound for poles r*e^{+-i*theta}");
    double upper_r = 1.0, upper_theta = 0.0;
    std::string upper_out;
    upper_cmd->add_option("--r", upper_r, "pole radius")->required();
    upper_cmd->add_option("--theta", upper_theta, "pole angle in [0, pi/2]")
        ->required();
    upper_cmd->add_option("--out", upper_out, "output path (default stdout)");

    // weight-dump
    auto* weight_cmd =
        app.add_subcommand("weight-dump", "CSV rows omega,phi of the weight");
    double wd_tau = 1.0, wd_eps = 0.0, wd_min = -20.0, wd_max = 20.0;
    int wd_points = 2001;
    bool wd_log = false;
    std::string wd_w0 = "0", wd_out;
    weight_cmd->add_option("--tau", wd_tau, "delay horizon tau")->required();
    weight_cmd->add_option("--w0", wd_w0, "shift");
    weight_cmd->add_option("--epsilon-floor", wd_eps, "weight floor");
    weight_cmd->add_option("--omega-min", wd_min, "grid start");
    weight_cmd->add_option("--omega-max", wd_max, "grid stop");
    weight_cmd->add_option("--points", wd_points, "grid size");
    weight_cmd->add_flag("--log-spacing", wd_log, "log-spaced grid");
    weight_cmd->add_option("--out", wd_out, "output path (default stdout)");

    // outer-dump
    auto* outer_cmd = app.add_subcommand(
        "outer-dump", "CSV rows omega,abs_w of |W(sigma + i*omega)|");
    double od_tau = 1.0, od_eps = 0.0, od_sigma = 1e-4;
    double od_min = 1e-3, od_max = 1e3;
    int od_points = 200;
    bool od_log = true;
    std::string od_w0 = "0", od_out;
    QuadFlags outer_quad;
    outer_quad.config.tolerance = 1e-4;  // near-boundary evaluation target
    outer_cmd->add_option("--tau", od_tau, "delay horizon tau")->required();
    outer_cmd->add_option("--w0", od_w0, "shift");
    outer_cmd->add_option("--epsilon-floor", od_eps, "weight floor");
    outer_cmd->add_option("--sigma", od_sigma, "distance from the axis");
    outer_cmd->add_option("--omega-min", od_min, "grid start");
    outer_cmd->add_option("--omega-max", od_max, "grid stop");
    outer_cmd->add_option("--points", od_points, "grid size");
    outer_cmd->add_flag("--log-spacing,!--linear-spacing", od_log,
                        "log-spaced grid (default)");
    outer_cmd->add_option("--out", od_out, "output path (default stdout)");
    outer_quad.attach(outer_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        emit_error("cli", e.what());
        return kExitInputError;
    }

    try {
        if (app.got_subcommand(margin_cmd))
            return run_margin(plant_path, w0_text, w0_grid_text, tol, axis_tol,
                              pd_tol, eps_floor, margin_quad, jobs, out_path);
        if (app.got_subcommand(sweep_cmd))
            return run_sweep(experiment_path, sweep_format, sweep_jobs,
                             sweep_out);
        if (app.got_subcommand(upper_cmd))
            return run_upper(upper_r, upper_theta, upper_out);
        if (app.got_subcommand(weight_cmd))
            return run_weight_dump(wd_tau, wd_w0, wd_eps, wd_min, wd_max,
                                   wd_points, wd_log, wd_out);
        if (app.got_subcommand(outer_cmd))
            return run_outer_dump(od_tau, od_w0, od_eps, od_sigma, od_min,
                                  od_max, od_points, od_log, outer_quad,
                                  od_out);
    } catch (const dmargin::StablePlantError& e) {
        std::cout << json{{"stable_plant", true},
                          {"tau_lower_bound", nullptr},
                          {"note",
                           "plant has no unstable pole; any delay is "
                           "tolerated (the margin is infinite)"}}
                         .dump(2)
                  << '\n';
        return kExitOk;
    } catch (const dmargin::AccuracyError& e) {
        emit_error("accuracy", e.what());
        return kExitNumericalError;
    } catch (const dmargin::NumericError& e) {
        emit_error("numeric", e.what());
        return kExitNumericalError;
    } catch (const dmargin::InvalidInputError& e) {
        emit_error("input", e.what());
        return kExitInputError;
    } catch (const dmargin::Error& e) {
        emit_error("error", e.what());
        return kExitInputError;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return kExitNumericalError;
    }
    return kExitOk;
}
