#include "spallsim/time_series.hpp"

#include "spallsim/mechanics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace spallsim {

std::string format_number(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

double probe_position(const Scenario& scenario, double depth) { return scenario.ell0 - depth; }

namespace {

constexpr double spalled = std::numeric_limits<double>::quiet_NaN();

TimeSeriesRow record(const Scenario& sc, const State& st, TimeSeries& ts) {
    const Mesh1D mesh = build_mesh(st.ell, sc.grading);
    TimeSeriesRow row;
    row.t = st.t;
    row.ell = st.ell;
    const auto F = failure_field(sc.material, st);
    row.max_F = *std::max_element(F.begin(), F.end());
    row.max_P = *std::max_element(st.P.begin(), st.P.end());
    row.total_moisture = integrate(mesh, st.m);
    row.mass_loss = (ts.initial_moisture + ts.released_water - row.total_moisture) / ts.initial_moisture;
    for (std::size_t k = 0; k < sc.probe_depths.size(); ++k) {
        const double x = probe_position(sc, sc.probe_depths[k]);
        if (x > st.ell) {
            if (!ts.probe_removed_at[k]) ts.probe_removed_at[k] = st.t;
            row.probe_theta.push_back(spalled);
            row.probe_P.push_back(spalled);
        } else {
            row.probe_theta.push_back(interpolate(mesh, st.theta, x));
            row.probe_P.push_back(interpolate(mesh, st.P, x));
        }
    }
    return row;
}

} // namespace

TimeSeries run(const Scenario& sc, const RunOptions& options) {
    const ValidationReport vr = validate(sc);
    if (!vr.ok()) throw ScenarioError("invalid scenario: " + vr.findings.front());

    TimeSeries ts;
    ts.scenario_name = sc.name;
    ts.settings = sc.solver;
    ts.output_every = sc.output_every;
    ts.probe_depths = sc.probe_depths;
    ts.probe_removed_at.assign(sc.probe_depths.size(), std::nullopt);
    ts.grading = sc.grading;

    State st = initial_state(sc);
    ts.initial_moisture = integrate(build_mesh(st.ell, sc.grading), st.m);
    ts.rows.push_back(record(sc, st, ts));
    ts.max_P = ts.rows.back().max_P;
    ts.max_F = ts.rows.back().max_F;

    const long steps = std::lround(sc.duration / sc.solver.dt);
    long next_output = 1;
    for (long n = 1; n <= steps; ++n) {
        const StepReport rep = advance(st, sc, options.sources);
        st.t = n * sc.solver.dt;
        ts.released_water += rep.released_water;
        ts.newton_iterations += rep.newton_iterations;
        ts.halved_steps += rep.halved ? 1 : 0;
        ts.max_F = std::max(ts.max_F, rep.max_F);
        ts.max_P = std::max(ts.max_P, *std::max_element(st.P.begin(), st.P.end()));
        ++ts.steps;
        if (options.on_step) options.on_step(st, rep);

        const bool due = st.t >= next_output * sc.output_every - 1e-9 * sc.solver.dt;
        if (due || n == steps) {
            ts.rows.push_back(record(sc, st, ts));
            ts.max_F = std::max(ts.max_F, ts.rows.back().max_F);
            while (next_output * sc.output_every <= st.t + 1e-9 * sc.solver.dt) ++next_output;
        }
    }
    ts.final_state = std::move(st);
    return ts;
}

void write_csv(std::ostream& out, const TimeSeries& ts) {
    out << "# spallsim time series\n";
    out << "# schema = " << time_series_schema << "\n";
    out << "# scenario = " << ts.scenario_name << "\n";
    out << "# dt_s = " << format_number(ts.settings.dt) << "\n";
    out << "# gamma_s = " << format_number(ts.settings.gamma) << "\n";
    out << "# output_every_s = " << format_number(ts.output_every) << "\n";
    out << "# probe_depths_m =";
    for (double d : ts.probe_depths) out << " " << format_number(d);
    out << "\n# probe_removed_at_s =";
    for (const auto& r : ts.probe_removed_at) out << " " << (r ? format_number(*r) : std::string("-"));
    out << "\n# spalled_probe_value = NaN\n";

    out << "t_s,ell_m,max_F,max_P_Pa,total_moisture_kg_m2,mass_loss_fraction";
    auto label = [](double d) { return format_number(std::round(d * 1e4) / 10.0) + "mm"; };
    for (double d : ts.probe_depths) out << ",theta_" << label(d) << "_K";
    for (double d : ts.probe_depths) out << ",P_" << label(d) << "_Pa";
    out << "\n";
    for (const auto& r : ts.rows) {
        out << format_number(r.t) << ',' << format_number(r.ell) << ',' << format_number(r.max_F) << ','
            << format_number(r.max_P) << ',' << format_number(r.total_moisture) << ','
            << format_number(r.mass_loss);
        for (double v : r.probe_theta) out << ',' << format_number(v);
        for (double v : r.probe_P) out << ',' << format_number(v);
        out << "\n";
    }
}

void write_profile(std::ostream& out, const State& st, const Grading& grading) {
    const Mesh1D mesh = build_mesh(st.ell, grading);
    out << "# spallsim profile\n";
    out << "# schema = " << time_series_schema << "\n";
    out << "# t_s = " << format_number(st.t) << "\n";
    out << "x_m,P_Pa,theta_K,m_kg_m3,m_d_kg_m3\n";
    for (std::size_t i = 0; i < mesh.nodes(); ++i)
        out << format_number(mesh.x[i]) << ',' << format_number(st.P[i]) << ','
            << format_number(st.theta[i]) << ',' << format_number(st.m[i]) << ','
            << format_number(st.m_d[i]) << "\n";
}

} // namespace spallsim
