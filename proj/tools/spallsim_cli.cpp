#include "spallsim/cli_commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace spallsim;

int main(int argc, char** argv) {
    CLI::App app{"1D hygro-thermal simulator for heated concrete walls with spalling"};
    app.require_subcommand(1);

    RunCommand run_cmd;
    double dt = 0.0, gamma = 0.0, every = 0.0;
    std::vector<double> probes;
    auto* run = app.add_subcommand("run", "run a scenario and write its time series");
    run->add_option("--scenario", run_cmd.scenario, "built-in name or scenario file")->required();
    auto* dt_opt = run->add_option("--dt", dt, "time step [s]");
    auto* gamma_opt = run->add_option("--gamma", gamma, "characteristic spalling time [s]");
    auto* every_opt = run->add_option("--output-every", every, "output interval [s]");
    auto* probes_opt = run->add_option("--probes", probes, "probe depths from the heated face [m]")
                           ->delimiter(',');
    run->add_option("--out", run_cmd.out, "time series CSV path, '-' for stdout");

    PropsCommand props_cmd;
    std::string props_theta, props_rh;
    auto* props = app.add_subcommand("props", "tabulate material properties");
    props->add_option("--scenario", props_cmd.scenario, "scenario providing the material");
    props->add_option("--theta", props_theta, "temperature grid min:max:step [K]");
    props->add_option("--rh", props_rh, "relative humidity grid min:max:step");
    props->add_option("--out", props_cmd.out, "output CSV path, '-' for stdout");

    FluxCommand flux_cmd;
    std::string flux_theta, flux_rh;
    auto* flux = app.add_subcommand("flux-analysis", "moisture flux mechanism map");
    flux->add_option("--scenario", flux_cmd.scenario, "scenario providing the material");
    flux->add_option("--theta", flux_theta, "temperature grid min:max:step [K]");
    flux->add_option("--rh", flux_rh, "relative humidity grid min:max:step");
    flux->add_option("--pa", flux_cmd.P_a, "dry air pressure [Pa]");
    flux->add_option("--out", flux_cmd.out, "output CSV path, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (*run) {
            if (*dt_opt) run_cmd.dt = dt;
            if (*gamma_opt) run_cmd.gamma = gamma;
            if (*every_opt) run_cmd.output_every = every;
            if (*probes_opt) run_cmd.probes = probes;
            return cmd_run(run_cmd, std::cerr);
        }
        if (*props) {
            if (!props_theta.empty()) props_cmd.theta = GridSpec::parse(props_theta);
            if (!props_rh.empty()) props_cmd.rh = GridSpec::parse(props_rh);
            return cmd_props(props_cmd, std::cerr);
        }
        if (!flux_theta.empty()) flux_cmd.theta = GridSpec::parse(flux_theta);
        if (!flux_rh.empty()) flux_cmd.rh = GridSpec::parse(flux_rh);
        return cmd_flux_analysis(flux_cmd, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}
