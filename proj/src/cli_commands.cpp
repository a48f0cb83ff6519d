#include "spallsim/cli_commands.hpp"

#include "spallsim/mechanics.hpp"
#include "spallsim/time_series.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace spallsim {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

template <class F>
double or_nan(F&& f) {
    try {
        return f();
    } catch (const std::exception&) {
        return nan;
    }
}

// Writes to a file, or stdout for "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path == "-") return;
        file_.open(path);
        if (!file_) throw ScenarioError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

} // namespace

Scenario resolve_scenario(const std::string& name_or_path) {
    for (auto& s : builtin_scenarios())
        if (s.name == name_or_path) return s;
    if (std::filesystem::exists(name_or_path)) return load_scenario_file(name_or_path);
    throw ScenarioError("'" + name_or_path + "' is neither a built-in scenario nor a readable file");
}

GridSpec GridSpec::parse(const std::string& text) {
    GridSpec g;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> g.min >> c1 >> g.max >> c2 >> g.step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
        throw ScenarioError("grid must be min:max:step, got '" + text + "'");
    if (!(g.step > 0.0) || g.max < g.min) throw ScenarioError("grid needs step > 0 and max >= min");
    return g;
}

std::vector<double> GridSpec::values() const {
    std::vector<double> v;
    const long n = std::lround(std::floor((max - min) / step + 1e-9));
    for (long k = 0; k <= n; ++k) v.push_back(min + k * step);
    return v;
}

std::string profile_path(const std::string& series_path) {
    std::filesystem::path p(series_path);
    const std::string stem = p.stem().string();
    return (p.parent_path() / (stem + "_profile.csv")).string();
}

int cmd_run(const RunCommand& cmd, std::ostream& log) {
    Scenario sc;
    try {
        sc = resolve_scenario(cmd.scenario);
        if (cmd.dt) sc.solver.dt = *cmd.dt;
        if (cmd.gamma) sc.solver.gamma = *cmd.gamma;
        if (cmd.output_every) sc.output_every = *cmd.output_every;
        if (cmd.probes) sc.probe_depths = *cmd.probes;
        const ValidationReport vr = validate(sc);
        if (!vr.ok()) {
            for (const auto& f : vr.findings) log << "error: " << f << "\n";
            return exit_input_error;
        }
        log << "scenario " << sc.name << ": initial saturation S_w0 = " << format_number(vr.S_w0) << "\n";
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_input_error;
    }

    const std::string out = cmd.out.empty() ? sc.name + ".csv" : cmd.out;
    TimeSeries ts;
    try {
        ts = run(sc);
    } catch (const SolverFailure& e) {
        log << "solver failure: " << e.what() << "\n";
        return exit_solver_failure;
    } catch (const DomainError& e) {
        log << "solver failure: " << e.what() << "\n";
        return exit_solver_failure;
    }

    try {
        Output series(out);
        write_csv(series.stream(), ts);
        if (out != "-") {
            Output profile(profile_path(out));
            write_profile(profile.stream(), ts.final_state, ts.grading);
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    log << "done: " << ts.steps << " steps, removed depth " << format_number(sc.ell0 - ts.final_state.ell)
        << " m, max F " << format_number(ts.max_F) << ", max P " << format_number(ts.max_P) << " Pa\n";
    return exit_ok;
}

int cmd_props(const PropsCommand& cmd, std::ostream& log) {
    try {
        const Scenario sc = resolve_scenario(cmd.scenario);
        const MaterialParams& p = sc.material;
        Output output(cmd.out);
        std::ostream& o = output.stream();
        o << "# spallsim material properties\n# schema = 1\n# scenario = " << sc.name << "\n";
        o << "theta_K,RH,P_Pa,P_s_Pa,rho_w,rho_v,porosity,eta_w,S_w,K_rw,K_rg,mu_w,mu_g,"
             "lambda_d,lambda_c,cp_s,h_e,m_d_eq,f_c_Pa,eps_c1,eps_cu1,f_t_Pa,E_c_Pa,nu,eps_theta,"
             "sigma_ht_Pa,sigma_tm_Pa,F,D\n";
        for (double theta : cmd.theta.values()) {
            for (double rh : cmd.rh.values()) {
                const double Ps = saturation_vapour_pressure(theta);
                const FluidState s{std::max(rh * Ps, 1.0), theta};
                const Sorption so = sorption(p, s);
                const RelativePermeabilities kr = relative_permeabilities(p, s);
                const Viscosities mu = viscosities(s);
                const std::vector<double> row{
                    theta, rh, s.P, Ps,
                    or_nan([&] { return water_density(theta, p.theta_cr); }),
                    vapour_density(s), porosity(p, theta), so.eta_w, so.S_w, kr.K_rw, kr.K_rg,
                    mu.mu_w, mu.mu_g, dry_thermal_conductivity(p, theta), thermal_conductivity(p, s),
                    heat_capacities(theta, p.theta_cr).cp_s, enthalpies(theta, p.theta_cr).h_e,
                    dehydration_equilibrium(p, theta),
                    or_nan([&] { return strength_parameters(theta, p).f_c; }),
                    or_nan([&] { return strength_parameters(theta, p).eps_c1; }),
                    or_nan([&] { return strength_parameters(theta, p).eps_cu1; }),
                    tensile_strength(theta, p.f_t_ref),
                    or_nan([&] { return elastic_properties(theta, p).E_c; }),
                    poisson_ratio(theta),
                    or_nan([&] { return free_thermal_strain(theta, p.concrete_class.aggregate); }),
                    hygro_thermal_stress(p, s),
                    or_nan([&] { return thermo_mechanical_stress(p, theta); }),
                    or_nan([&] { return failure_function(p, s); }),
                    or_nan([&] { return damage(p, s).D; })};
                for (std::size_t k = 0; k < row.size(); ++k) o << (k ? "," : "") << format_number(row[k]);
                o << "\n";
            }
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_ok;
}

std::vector<FluxMapRow> flux_map(const MaterialParams& material, const FluxCommand& cmd) {
    std::vector<FluxMapRow> rows;
    for (double theta : cmd.theta.values())
        for (double rh : cmd.rh.values()) {
            const double P_v = rh * saturation_vapour_pressure(theta);
            rows.push_back({theta, rh, flux_decomposition(material, cmd.params, P_v, cmd.P_a, theta)});
        }
    return rows;
}

int cmd_flux_analysis(const FluxCommand& cmd, std::ostream& log) {
    try {
        const Scenario sc = resolve_scenario(cmd.scenario);
        const auto rows = flux_map(sc.material, cmd);
        Output output(cmd.out);
        std::ostream& o = output.stream();
        o << "# spallsim moisture flux mechanisms per unit vapour pressure gradient\n";
        o << "# schema = 1\n# scenario = " << sc.name << "\n# P_a_Pa = " << format_number(cmd.P_a) << "\n";
        o << "theta_K,RH,vapour_flow,vapour_diffusion,liquid_water_flow,adsorbed_water_diffusion,dominant\n";
        for (const auto& r : rows) {
            o << format_number(r.theta) << ',' << format_number(r.rh);
            for (double v : r.flux.parts()) o << ',' << format_number(v);
            o << ',' << to_string(r.flux.dominant()) << "\n";
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_ok;
}

} // namespace spallsim
