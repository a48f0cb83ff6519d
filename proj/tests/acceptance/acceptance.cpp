// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "spallsim/cli_commands.hpp"
#include "spallsim/mechanics.hpp"
#include "spallsim/time_series.hpp"
#include "spallsim/transport.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace spallsim;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& what, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s - %s (%s)\n", id, o.pass ? "PASS" : "FAIL", what.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PeakTrack {
    std::vector<double> depth;  // from the current heated face
    bool interior = true;
};

// Full run recording the pore-pressure peak position every `every` seconds.
TimeSeries run_tracking_peak(const Scenario& sc, double every, PeakTrack& track) {
    RunOptions opt;
    opt.on_step = [&](const State& st, const StepReport&) {
        const double k = st.t / every;
        if (std::abs(k - std::round(k)) > 1e-9 || st.t < every) return;
        const auto it = std::max_element(st.P.begin(), st.P.end());
        const std::size_t i = static_cast<std::size_t>(it - st.P.begin());
        if (i == 0 || i + 1 == st.P.size()) track.interior = false;
        track.depth.push_back(st.ell - build_mesh(st.ell, sc.grading).x[i]);
    };
    return run(sc, opt);
}

bool mass_loss_monotone(const TimeSeries& ts) {
    for (std::size_t i = 1; i < ts.rows.size(); ++i)
        if (ts.rows[i].mass_loss < ts.rows[i - 1].mass_loss - 1e-12) return false;
    return true;
}

bool migrates(const PeakTrack& t) {
    if (t.depth.size() < 2 || !t.interior) return false;
    for (std::size_t i = 1; i < t.depth.size(); ++i)
        if (t.depth[i] < t.depth[i - 1] - 1e-12) return false;
    return t.depth.back() > t.depth.front();
}

// Manufactured steady solution on (0, ell): both fields have zero slope at
// the faces, and the boundary ambient values equal the exact face values so
// the exact solution satisfies the Robin conditions.
struct Manufactured {
    MaterialParams p;
    double ell = 0.1;

    double theta(double x) const { return 330.0 + 25.0 * std::cos(std::numbers::pi * x / ell); }
    double rh(double x) const { return 0.6 + 0.2 * std::cos(std::numbers::pi * x / ell); }
    double P(double x) const { return rh(x) * saturation_vapour_pressure(theta(x)); }

    double d(const std::function<double(double)>& f, double x) const {
        const double h = 1e-5 * ell;
        return (f(x + h) - f(x - h)) / (2 * h);
    }

    TransportCoefficients coeffs(double x) const {
        const double P_ = P(x), T = theta(x);
        const double D = damage(p, {P_, std::clamp(T, mechanics_theta_min, mechanics_theta_max)}).D;
        return transport_coefficients(p, {P_, T}, D);
    }

    double moisture_flux(double x) const {
        const auto c = coeffs(x).moisture;
        return c.K_mP * d([this](double y) { return P(y); }, x) + c.K_mtheta * d([this](double y) { return theta(y); }, x);
    }

    double energy_flux(double x) const {
        const auto c = coeffs(x).energy;
        return c.K_thetatheta * d([this](double y) { return theta(y); }, x) +
               c.K_thetaP * d([this](double y) { return P(y); }, x);
    }

    double moisture_source(double x) const {
        return -d([this](double y) { return moisture_flux(y); }, x);
    }

    double energy_source(double x) const {
        const auto c = coeffs(x).energy;
        const double dT = d([this](double y) { return theta(y); }, x);
        const double dP = d([this](double y) { return P(y); }, x);
        return -d([this](double y) { return energy_flux(y); }, x) - (c.C_thetaP * dP + c.C_thetatheta * dT) * dT;
    }
};

// Max nodal error (relative to the field amplitude) of the discrete steady
// state for element counts (n, n, 2n).
double mms_error(const Manufactured& mf, int n) {
    Scenario sc = kalifa_ptm1();
    sc.material = mf.p;
    sc.ell0 = mf.ell;
    sc.grading = {n, n, 2 * n};
    sc.solver.spalling = false;
    sc.solver.dehydration = false;
    sc.solver.dt = 1e9;
    sc.solver.newton_tol = 1e-12;
    for (auto [side, x] : {std::pair{&sc.unexposed, 0.0}, std::pair{&sc.exposed, mf.ell}}) {
        side->theta_inf = FireCurve::constant(mf.theta(x));
        side->P_inf = mf.P(x);
    }
    const Mesh1D mesh = build_mesh(mf.ell, sc.grading);
    State st;
    st.ell = mf.ell;
    for (double x : mesh.x) {
        st.theta.push_back(mf.theta(x));
        st.P.push_back(mf.P(x));
        st.m.push_back(moisture_content(mf.p, {mf.P(x), mf.theta(x)}));
        st.m_d.push_back(0.0);
    }
    SourceTerms src;
    src.moisture = [&](double x, double) { return mf.moisture_source(x); };
    src.energy = [&](double x, double) { return mf.energy_source(x); };
    for (int k = 0; k < 40; ++k) {
        const State before = st;
        advance(st, sc, &src);
        double change = 0.0;
        for (std::size_t i = 0; i < st.nodes(); ++i)
            change = std::max({change, std::abs(st.theta[i] - before.theta[i]) / 25.0,
                               std::abs(st.P[i] - before.P[i]) / st.P[i]});
        if (change < 1e-13) break;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < mesh.nodes(); ++i) {
        const double x = mesh.x[i];
        err = std::max(err, std::abs(st.theta[i] - mf.theta(x)) / 25.0);
        err = std::max(err, std::abs(st.P[i] - mf.P(x)) / mf.P(x));
    }
    return err;
}

} // namespace

int main() {
    TimeSeries ptm1, ptm2;
    PeakTrack track1, track2;

    report(1, "PTM1 full run keeps max F < 1 at every step", [&]() -> Outcome {
        const auto t0 = std::chrono::steady_clock::now();
        ptm1 = run_tracking_peak(kalifa_ptm1(), 1200.0, track1);
        const double secs = seconds_since(t0);
        return {ptm1.max_F < 1.0 && secs < 300.0,
                "max F " + fmt(ptm1.max_F) + ", " + std::to_string(ptm1.steps) + " steps in " + fmt(secs, 3) + " s"};
    });

    report(2, "PTM2 full run keeps max F < 1 at every step", [&]() -> Outcome {
        const auto t0 = std::chrono::steady_clock::now();
        ptm2 = run_tracking_peak(mindeguia_ptm2(), 1200.0, track2);
        const double secs = seconds_since(t0);
        return {ptm2.max_F < 1.0 && secs < 300.0,
                "max F " + fmt(ptm2.max_F) + ", " + std::to_string(ptm2.steps) + " steps in " + fmt(secs, 3) + " s"};
    });

    double peak_P_default = 0.0;
    report(3, "spalling depth in [0.080, 0.105] m over dt x gamma grid", [&]() -> Outcome {
        bool ok = true;
        double lo = 1.0, hi = 0.0;
        for (double dt : {1.0, 0.5, 0.1})
            for (double gamma : {1.0, 10.0, 100.0}) {
                Scenario sc = mindeguia_spalling();
                sc.solver.dt = dt;
                sc.solver.gamma = gamma;
                sc.output_every = 60.0;
                const TimeSeries ts = run(sc);
                const double depth = sc.ell0 - ts.final_state.ell;
                lo = std::min(lo, depth);
                hi = std::max(hi, depth);
                ok = ok && depth >= 0.080 && depth <= 0.105;
                if (dt == 1.0 && gamma == 10.0) peak_P_default = ts.max_P;
            }
        return {ok, "removed depth range " + fmt(lo) + " .. " + fmt(hi) + " m"};
    });

    report(4, "spalling run peak pore pressure in [1.75, 3.25] MPa", [&]() -> Outcome {
        if (peak_P_default == 0.0) peak_P_default = run(mindeguia_spalling()).max_P;
        return {peak_P_default >= 1.75e6 && peak_P_default <= 3.25e6, "max P " + fmt(peak_P_default / 1e6) + " MPa"};
    });

    report(5, "interior pressure peak migrates inward; mass loss monotone", [&]() -> Outcome {
        const bool a = migrates(track1) && migrates(track2);
        const bool b = mass_loss_monotone(ptm1) && mass_loss_monotone(ptm2);
        return {a && b, "PTM1 peak depth " + fmt(track1.depth.front()) + " -> " + fmt(track1.depth.back()) +
                            " m, PTM2 " + fmt(track2.depth.front()) + " -> " + fmt(track2.depth.back()) +
                            " m, mass loss monotone " + (b ? "yes" : "no")};
    });

    report(6, "closed insulated isothermal domain conserves moisture to 0.1% over 1000 steps", [&]() -> Outcome {
        Scenario sc = kalifa_ptm1();
        sc.material.K_ref = 1e-16;
        for (BoundarySpec* b : {&sc.unexposed, &sc.exposed}) {
            b->alpha_c = b->beta_c = b->e_sigma = 0.0;
            b->theta_inf = FireCurve::constant(sc.theta0);
        }
        sc.solver.spalling = false;
        sc.solver.dehydration = false;
        State st = initial_state(sc);
        Mesh1D mesh = build_mesh(st.ell, sc.grading);
        const double Ps = saturation_vapour_pressure(sc.theta0);
        for (std::size_t i = 0; i < st.nodes(); ++i) {
            st.P[i] = Ps * (0.5 + 0.4 * mesh.x[i] / st.ell);
            st.m[i] = moisture_content(sc.material, {st.P[i], st.theta[i]});
        }
        const std::vector<double> P_start = st.P;
        const double m0 = integrate(mesh, st.m);
        for (int n = 0; n < 1000; ++n) advance(st, sc);
        const double drift = std::abs(integrate(mesh, st.m) - m0) / m0;
        double moved = 0.0;
        for (std::size_t i = 0; i < st.nodes(); ++i) moved = std::max(moved, std::abs(st.P[i] - P_start[i]));
        return {drift < 1e-3 && moved > 0.0, "relative drift " + fmt(drift) + ", max |dP| " + fmt(moved) + " Pa"};
    });

    report(7, "materials property suite", [&]() -> Outcome {
        const MaterialParams p = kalifa_ptm1().material;
        const double Ps = saturation_vapour_pressure(373.15), he = enthalpies(373.15).h_e;
        bool ok = std::abs(Ps - 101.4e3) / 101.4e3 < 0.005 && std::abs(he - 2.256e6) / 2.256e6 < 0.005;
        double worst = 0.0;
        for (double t : {293.15, 373.15, 473.15, 573.15}) {
            const double ps = saturation_vapour_pressure(t);
            for (double knot : {0.96, 1.0}) {
                const double P = knot * ps;
                const double l = sorption_derivatives(p, {P * (1 - 1e-12), t}).deta_dP;
                const double r = sorption_derivatives(p, {P * (1 + 1e-12), t}).deta_dP;
                const double scale = std::abs(sorption_derivatives(p, {0.95 * ps, t}).deta_dP);
                worst = std::max(worst, std::abs(l - r) / scale);
            }
        }
        ok = ok && worst < 1e-6;
        for (double phi : {0.05, 0.1, 0.2}) {
            const auto dry = relative_permeabilities_from_saturation(0.0, phi);
            const auto wet = relative_permeabilities_from_saturation(1.0, phi);
            ok = ok && dry.K_rw == 0.0 && dry.K_rg == 1.0 && wet.K_rw == 1.0 && wet.K_rg == 0.0;
        }
        return {ok, "P_s(373.15) " + fmt(Ps, 6) + " Pa, h_e(373.15) " + fmt(he, 6) +
                        " J/kg, knot slope mismatch " + fmt(worst)};
    });

    report(8, "failure surface identities and general/specialised agreement", [&]() -> Outcome {
        const MaterialParams p = kalifa_ptm1().material;
        double worst_id = 0.0;
        for (double t : {293.15, 473.15, 673.15}) {
            const double fc = strength_parameters(t, p).f_c, ft = tensile_strength(t, p.f_t_ref);
            worst_id = std::max(worst_id, std::abs(failure_function(0.0, 0.0, fc, ft, p.e_F)));
            worst_id = std::max(worst_id, std::abs(failure_function(ft, 0.0, fc, ft, p.e_F) - 1.0));
        }
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> T(293.15, 1373.15), RH(0.05, 1.0);
        double worst_mw = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double t = T(rng);
            const double P = RH(rng) * saturation_vapour_pressure(std::min(t, 640.0)) * (t > 640.0 ? 10.0 : 1.0);
            const auto s = stresses(p, {P, t});
            const double fc = strength_parameters(t, p).f_c, ft = tensile_strength(t, p.f_t_ref);
            const double a = menetrey_willam(s.sigma_ht, s.sigma_tm, s.sigma_tm, fc, ft, p.e_F);
            const double b = failure_function(s.sigma_ht, s.sigma_tm, fc, ft, p.e_F);
            worst_mw = std::max(worst_mw, std::abs(a - b) / std::max(1.0, std::abs(b)));
        }
        return {worst_id <= 1e-9 && worst_mw <= 1e-12,
                "identity error " + fmt(worst_id) + ", max disagreement " + fmt(worst_mw)};
    });

    report(9, "discretisation: dt halving, mesh doubling, manufactured-solution order", [&]() -> Outcome {
        Scenario base = kalifa_ptm1();
        base.duration = 3600.0;
        base.output_every = 3600.0;
        Scenario half = base;
        half.solver.dt = 0.5;
        const auto a = run(base).rows.back(), b = run(half).rows.back();
        double dt_change = 0.0;
        for (std::size_t k = 0; k < a.probe_theta.size(); ++k)
            dt_change = std::max(dt_change, std::abs(a.probe_theta[k] - b.probe_theta[k]) / a.probe_theta[k]);

        Scenario fine = kalifa_ptm1();
        fine.grading = {60, 60, 120};
        const TimeSeries tf = run(fine);
        double mesh_change = 0.0;
        for (std::size_t k = 0; k < fine.probe_depths.size(); ++k) {
            double pc = 0.0, pf = 0.0;
            for (const auto& r : ptm1.rows) pc = std::max(pc, r.probe_P[k]);
            for (const auto& r : tf.rows) pf = std::max(pf, r.probe_P[k]);
            mesh_change = std::max(mesh_change, std::abs(pf - pc) / pc);
        }

        Manufactured mf;
        mf.p = kalifa_ptm1().material;
        mf.p.concrete_class = {StrengthClass::NSC, Aggregate::siliceous};
        const double e1 = mms_error(mf, 8), e2 = mms_error(mf, 16), e3 = mms_error(mf, 32);
        const double order = std::log2(e2 / e3);
        return {dt_change < 0.01 && mesh_change < 0.02 && order >= 1.9,
                "probe theta change " + fmt(dt_change) + ", probe P peak change " + fmt(mesh_change) +
                    ", errors " + fmt(e1) + " " + fmt(e2) + " " + fmt(e3) + ", order " + fmt(order, 3)};
    });

    report(10, "flux map: vapour flow dominant for theta >= 523.15 K, RH >= 0.2", [&]() -> Outcome {
        const FluxCommand cmd;
        const auto rows = flux_map(kalifa_ptm1().material, cmd);
        int checked = 0, wrong = 0;
        for (const auto& r : rows) {
            if (r.theta < 523.15 - 1e-9 || r.rh < 0.2 - 1e-9) continue;
            ++checked;
            if (r.flux.dominant() != FluxMechanism::vapour_flow) ++wrong;
        }
        return {checked > 0 && wrong == 0,
                std::to_string(checked) + " grid points checked, " + std::to_string(wrong) + " not vapour_flow"};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
