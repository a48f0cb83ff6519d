#pragma once

// Driving a scenario to completion and writing the recorded series.

#include "spallsim/solver.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spallsim {

inline constexpr int time_series_schema = 1;

struct TimeSeriesRow {
    double t = 0.0;
    double ell = 0.0;
    double max_F = 0.0;
    double max_P = 0.0;
    double total_moisture = 0.0;  // kg m^-2
    double mass_loss = 0.0;       // fraction of the initial moisture
    std::vector<double> probe_theta;  // NaN once the gauge is spalled off
    std::vector<double> probe_P;
};

struct TimeSeries {
    std::string scenario_name;
    SolverSettings settings;
    double output_every = 0.0;
    std::vector<double> probe_depths;
    std::vector<std::optional<double>> probe_removed_at;
    std::vector<TimeSeriesRow> rows;
    State final_state;
    Grading grading;

    double initial_moisture = 0.0;
    double released_water = 0.0;
    double max_P = 0.0;  // over every step
    double max_F = 0.0;  // over every step
    long newton_iterations = 0;
    int halved_steps = 0;
    long steps = 0;
};

struct RunOptions {
    std::function<void(const State&, const StepReport&)> on_step;
    const SourceTerms* sources = nullptr;
};

/// Runs the scenario for round(duration / dt) steps. Throws SolverFailure
/// when a step cannot be completed.
TimeSeries run(const Scenario& scenario, const RunOptions& options = {});

/// Probe position in the current mesh coordinates: gauges are fixed in the
/// material at depth d below the original heated face.
double probe_position(const Scenario& scenario, double depth);

void write_csv(std::ostream& out, const TimeSeries& series);
void write_profile(std::ostream& out, const State& state, const Grading& grading);

std::string format_number(double v);

} // namespace spallsim
