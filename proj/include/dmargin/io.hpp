#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dmargin/margin.hpp"
#include "dmargin/pick.hpp"
#include "dmargin/plant.hpp"

namespace dmargin {

/// Parse a plant description. Exactly one of two JSON forms:
///   {"poles": [[re, im], ...], "zeros": [[re, im], ...]}
///   {"num": [c_k, ..., c_0], "den": [d_k, ..., d_0]}
/// Mixing keys from both forms is an error.
Plant load_plant(const nlohmann::json& j, double axis_tol = kDefaultAxisTol);
Plant load_plant_file(const std::string& path,
                      double axis_tol = kDefaultAxisTol);

/// Parse a sweep experiment description (family, fixed parameters,
/// parameter grid, shift grid, tolerances, quadrature overrides).
SweepRequest load_experiment(const nlohmann::json& j);
SweepRequest load_experiment_file(const std::string& path);

nlohmann::json certificate_to_json(double tau,
                                   const FeasibilityCertificate& cert);
nlohmann::json margin_result_to_json(const MarginResult& result);
nlohmann::json sweep_rows_to_json(const std::vector<SweepRow>& rows);

/// CSV with header "param,w0_re,w0_im,lower_bound,upper_bound,iterations";
/// numbers printed with 12 significant digits, NaN as "nan".
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// "omega,phi" rows for weight plots.
void write_weight_csv(std::ostream& out, const std::vector<double>& omegas,
                      const std::vector<double>& phis);

/// "omega,abs_w" rows for outer-function diagnostics.
void write_outer_csv(std::ostream& out, const std::vector<double>& omegas,
                     const std::vector<double>& magnitudes);

/// One number formatted with 12 significant digits ("nan" for NaN).
std::string format_number(double value);

}  // namespace dmargin
