#pragma once

// Subcommands behind the command-line tool. Each returns a process exit
// code: 0 success, 1 solver failure, 2 input error.

#include "spallsim/scenario.hpp"
#include "spallsim/transport.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spallsim {

inline constexpr int exit_ok = 0;
inline constexpr int exit_solver_failure = 1;
inline constexpr int exit_input_error = 2;

/// Built-in name or path to a scenario file.
Scenario resolve_scenario(const std::string& name_or_path);

/// Inclusive grid "min:max:step".
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    static GridSpec parse(const std::string& text);
    std::vector<double> values() const;
};

struct RunCommand {
    std::string scenario;
    std::optional<double> dt;
    std::optional<double> gamma;
    std::optional<double> output_every;
    std::optional<std::vector<double>> probes;
    std::string out;  // time series path; "-" for stdout; empty for <scenario>.csv
};

struct PropsCommand {
    std::string scenario = "kalifa_ptm1";
    GridSpec theta{293.15, 1273.15, 20.0};
    GridSpec rh{0.2, 1.0, 0.2};
    std::string out = "-";
};

struct FluxCommand {
    std::string scenario = "kalifa_ptm1";
    GridSpec theta{293.15, 773.15, 10.0};
    GridSpec rh{0.0, 0.95, 0.05};
    double P_a = constants::atmospheric_pressure;
    FluxAnalysisParams params;
    std::string out = "-";
};

struct FluxMapRow {
    double theta;
    double rh;
    FluxBreakdown flux;
};

std::vector<FluxMapRow> flux_map(const MaterialParams& material, const FluxCommand& cmd);

/// Path of the final-state profile written next to a time series file.
std::string profile_path(const std::string& series_path);

int cmd_run(const RunCommand& cmd, std::ostream& log);
int cmd_props(const PropsCommand& cmd, std::ostream& log);
int cmd_flux_analysis(const FluxCommand& cmd, std::ostream& log);

} // namespace spallsim
