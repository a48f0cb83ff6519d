#include "spallsim/mechanics.hpp"
#include "spallsim/scenario.hpp"
#include "spallsim/time_series.hpp"
#include "spallsim/transport.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

namespace py = pybind11;
using namespace spallsim;

namespace {

// Accepts a built-in name, a config file path or config text.
Scenario resolve(const std::string& source) {
    for (const auto& s : builtin_scenarios())
        if (s.name == source) return s;
    if (source.find('\n') == std::string::npos && std::filesystem::exists(source)) return load_scenario_file(source);
    return load_scenario(source);
}

py::dict summarise(const TimeSeries& ts) {
    py::list rows;
    for (const auto& r : ts.rows) {
        py::dict d;
        d["t"] = r.t;
        d["ell"] = r.ell;
        d["max_F"] = r.max_F;
        d["max_P"] = r.max_P;
        d["total_moisture"] = r.total_moisture;
        d["mass_loss"] = r.mass_loss;
        d["probe_theta"] = r.probe_theta;
        d["probe_P"] = r.probe_P;
        rows.append(d);
    }
    py::dict out;
    out["scenario"] = ts.scenario_name;
    out["probe_depths"] = ts.probe_depths;
    out["probe_removed_at"] = ts.probe_removed_at;
    out["rows"] = rows;
    out["max_F"] = ts.max_F;
    out["max_P"] = ts.max_P;
    out["steps"] = ts.steps;
    out["final_ell"] = ts.final_state.ell;
    out["final_theta"] = ts.final_state.theta;
    out["final_P"] = ts.final_state.P;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

    m.def("saturation_vapour_pressure", &saturation_vapour_pressure, py::arg("theta"));

    m.def("builtin_scenarios", [] {
        std::vector<std::string> names;
        for (const auto& s : builtin_scenarios()) names.push_back(s.name);
        return names;
    });

    m.def("serialize_scenario", [](const std::string& source) { return serialize(resolve(source)); }, py::arg("scenario"));
    m.def("load_scenario", [](const std::string& source) { return resolve(source).name; }, py::arg("scenario"),
          "Parses a scenario and returns its name; raises ScenarioError on bad input.");

    m.def("validate", [](const std::string& source) {
        const auto r = validate(resolve(source));
        py::dict d;
        d["ok"] = r.ok();
        d["findings"] = r.findings;
        d["S_w0"] = r.S_w0;
        d["m0"] = r.m0;
        return d;
    }, py::arg("scenario"));

    m.def("moisture_content", [](const std::string& source, double P, double theta) {
        return moisture_content(resolve(source).material, {P, theta});
    }, py::arg("scenario"), py::arg("P"), py::arg("theta"));

    m.def("failure_function", [](const std::string& source, double P, double theta) {
        return failure_function(resolve(source).material, {P, theta});
    }, py::arg("scenario"), py::arg("P"), py::arg("theta"));

    m.def("flux_decomposition", [](const std::string& source, double theta, double rh) {
        const double P_v = rh * saturation_vapour_pressure(theta);
        const auto f = flux_decomposition(resolve(source).material, {}, P_v, constants::atmospheric_pressure, theta);
        py::dict d;
        d["vapour_flow"] = f.vapour_flow;
        d["vapour_diffusion"] = f.vapour_diffusion;
        d["liquid_water_flow"] = f.liquid_water_flow;
        d["adsorbed_water_diffusion"] = f.adsorbed_water_diffusion;
        d["dominant"] = to_string(f.dominant());
        return d;
    }, py::arg("scenario"), py::arg("theta"), py::arg("rh"));

    m.def("run", [](const std::string& source, std::optional<double> duration, std::optional<double> dt,
                    std::optional<double> gamma, std::optional<double> output_every) {
        Scenario s = resolve(source);
        if (duration) s.duration = *duration;
        if (dt) s.solver.dt = *dt;
        if (gamma) s.solver.gamma = *gamma;
        if (output_every) s.output_every = *output_every;
        const auto report = validate(s);
        if (!report.ok()) throw ScenarioError(report.findings.front());
        TimeSeries ts;
        {
            py::gil_scoped_release release;
            ts = run(s);
        }
        return summarise(ts);
    }, py::arg("scenario"), py::arg("duration") = py::none(), py::arg("dt") = py::none(),
       py::arg("gamma") = py::none(), py::arg("output_every") = py::none());
}
