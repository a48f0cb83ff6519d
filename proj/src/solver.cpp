#include "spallsim/solver.hpp"

#include "spallsim/mechanics.hpp"
#include "spallsim/transport.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace spallsim {

namespace {

constexpr int comp_m = 0;
constexpr int comp_theta = 1;
constexpr int comp_P = 2;

const double gauss_xi[2] = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};

double clamp_mechanics(double theta) {
    return std::clamp(theta, mechanics_theta_min, mechanics_theta_max);
}

} // namespace

// Mesh and state ----------------------------------------------------------------------

Mesh1D build_mesh(double ell, const Grading& g) {
    if (!(ell > 0.0)) throw std::invalid_argument("build_mesh: length must be positive");
    if (g.n1 < 1 || g.n2 < 1 || g.n3 < 1)
        throw std::invalid_argument("build_mesh: element counts must be at least 1");
    Mesh1D mesh;
    mesh.grading = g;
    mesh.x.reserve(static_cast<std::size_t>(g.n1 + g.n2 + g.n3 + 1));
    const double bounds[4] = {0.0, 0.5 * ell, 0.75 * ell, ell};
    const int counts[3] = {g.n1, g.n2, g.n3};
    mesh.x.push_back(0.0);
    for (int z = 0; z < 3; ++z) {
        const double h = (bounds[z + 1] - bounds[z]) / counts[z];
        for (int k = 1; k < counts[z]; ++k) mesh.x.push_back(bounds[z] + k * h);
        mesh.x.push_back(bounds[z + 1]);
    }
    return mesh;
}

State initial_state(const Scenario& s) {
    const Mesh1D mesh = build_mesh(s.ell0, s.grading);
    const std::size_t n = mesh.nodes();
    const double m0 = moisture_content(s.material, {s.P0, s.theta0});
    State st;
    st.m.assign(n, m0);
    st.theta.assign(n, s.theta0);
    st.P.assign(n, s.P0);
    st.m_d.assign(n, 0.0);
    st.ell = s.ell0;
    st.t = 0.0;
    return st;
}

double interpolate(const Mesh1D& mesh, const std::vector<double>& field, double x) {
    const auto& xs = mesh.x;
    if (x <= xs.front()) return field.front();
    if (x >= xs.back()) return field.back();
    const auto hi = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(hi - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return field[j - 1] + w * (field[j] - field[j - 1]);
}

double integrate(const Mesh1D& mesh, const std::vector<double>& field) {
    double sum = 0.0;
    for (std::size_t e = 0; e < mesh.elements(); ++e)
        sum += 0.5 * (mesh.x[e + 1] - mesh.x[e]) * (field[e] + field[e + 1]);
    return sum;
}

// Band matrix -------------------------------------------------------------------------------

BandMatrix::BandMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

bool BandMatrix::in_band(std::size_t i, std::size_t j) const {
    const auto d = static_cast<long>(i) - static_cast<long>(j);
    return i < n_ && j < n_ && d <= kl_ && -d <= ku_;
}

double BandMatrix::operator()(std::size_t i, std::size_t j) const {
    if (!in_band(i, j)) return 0.0;
    return ab_[static_cast<std::size_t>(kl_ + ku_ + static_cast<long>(i) - static_cast<long>(j)) +
               j * static_cast<std::size_t>(ldab_)];
}

double& BandMatrix::at(std::size_t i, std::size_t j) {
    if (!in_band(i, j)) throw std::out_of_range("BandMatrix: entry outside band");
    return ab_[static_cast<std::size_t>(kl_ + ku_ + static_cast<long>(i) - static_cast<long>(j)) +
               j * static_cast<std::size_t>(ldab_)];
}

std::vector<double> BandMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t i0 = j > static_cast<std::size_t>(ku_) ? j - ku_ : 0;
        const std::size_t i1 = std::min(n_ - 1, j + static_cast<std::size_t>(kl_));
        for (std::size_t i = i0; i <= i1; ++i) y[i] += (*this)(i, j) * x[j];
    }
    return y;
}

BandMatrix& BandMatrix::axpy(double a, const BandMatrix& other) {
    if (other.n_ != n_ || other.kl_ != kl_ || other.ku_ != ku_)
        throw std::invalid_argument("BandMatrix::axpy: shape mismatch");
    for (std::size_t k = 0; k < ab_.size(); ++k) ab_[k] += a * other.ab_[k];
    return *this;
}

std::vector<double> BandMatrix::solve(std::vector<double> b) const {
    std::vector<double> lu = ab_;
    std::vector<lapack_int> ipiv(n_);
    const lapack_int info =
        LAPACKE_dgbsv(LAPACK_COL_MAJOR, static_cast<lapack_int>(n_), kl_, ku_, 1, lu.data(), ldab_,
                      ipiv.data(), b.data(), static_cast<lapack_int>(n_));
    if (info != 0) throw SolverFailure("banded solve failed (info " + std::to_string(info) + ")");
    return b;
}

// Assembly ------------------------------------------------------------------------------------

StepSystem::StepSystem(const Scenario& scenario, const Mesh1D& mesh, const State& state_n,
                       const std::vector<double>& dehydration_rate, double t_next, double dt,
                       const SourceTerms* sources)
    : material_(scenario.material),
      scenario_(scenario),
      t_next_(t_next),
      dt_(dt) {
    const std::size_t nn = mesh.nodes();
    if (state_n.nodes() != nn) throw std::invalid_argument("StepSystem: state does not match mesh");
    const std::size_t N = dofs_per_node * nn;
    M_ = BandMatrix(N, band_width, band_width);
    K_ = BandMatrix(N, band_width, band_width);
    f_fixed_.assign(N, 0.0);
    x_n_.resize(N);
    for (std::size_t i = 0; i < nn; ++i) {
        x_n_[dof(i, comp_m)] = state_n.m[i];
        x_n_[dof(i, comp_theta)] = state_n.theta[i];
        x_n_[dof(i, comp_P)] = state_n.P[i];
    }
    const double h_d = enthalpies(state_n.theta[0], material_.theta_cr).h_d;

    for (std::size_t e = 0; e < mesh.elements(); ++e) {
        const std::size_t a = e, b = e + 1;
        const double h = mesh.x[b] - mesh.x[a];
        if (!(h > 0.0)) throw std::invalid_argument("StepSystem: zero-length element");
        const double dN[2] = {-1.0 / h, 1.0 / h};
        const double dP = (state_n.P[b] - state_n.P[a]) / h;
        const double dT = (state_n.theta[b] - state_n.theta[a]) / h;
        const std::size_t nodes[2] = {a, b};

        for (double xi : gauss_xi) {
            const double s = 0.5 * (1.0 + xi);
            const double N[2] = {1.0 - s, s};
            const double w = 0.5 * h;
            const double P = N[0] * state_n.P[a] + N[1] * state_n.P[b];
            const double T = N[0] * state_n.theta[a] + N[1] * state_n.theta[b];
            const double md_rate = N[0] * dehydration_rate[a] + N[1] * dehydration_rate[b];
            const FluidState fs{P, T};
            const double D = damage(material_, {P, clamp_mechanics(T)}).D;
            const TransportCoefficients c = transport_coefficients(material_, fs, D);
            const auto& mc = c.moisture;
            const auto& ec = c.energy;
            const double convective = (ec.C_thetaP * dP + ec.C_thetatheta * dT) * dT;

            double src_m = 0.0, src_T = 0.0;
            if (sources) {
                const double xg = N[0] * mesh.x[a] + N[1] * mesh.x[b];
                if (sources->moisture) src_m = sources->moisture(xg, t_next);
                if (sources->energy) src_T = sources->energy(xg, t_next);
            }

            for (int i = 0; i < 2; ++i) {
                const std::size_t ri_m = dof(nodes[i], comp_m);
                const std::size_t ri_T = dof(nodes[i], comp_theta);
                f_fixed_[ri_m] -= w * (md_rate + src_m) * N[i];
                f_fixed_[ri_T] += w * (h_d * md_rate - convective - src_T) * N[i];
                for (int j = 0; j < 2; ++j) {
                    const double NN = w * N[i] * N[j];
                    const double BB = w * dN[i] * dN[j];
                    M_.add(ri_m, dof(nodes[j], comp_m), NN);
                    M_.add(ri_T, dof(nodes[j], comp_theta), ec.M_thetatheta * NN);
                    M_.add(ri_T, dof(nodes[j], comp_P), ec.M_thetaP * NN);
                    K_.add(ri_m, dof(nodes[j], comp_theta), mc.K_mtheta * BB);
                    K_.add(ri_m, dof(nodes[j], comp_P), mc.K_mP * BB);
                    K_.add(ri_T, dof(nodes[j], comp_theta), ec.K_thetatheta * BB);
                    K_.add(ri_T, dof(nodes[j], comp_P), ec.K_thetaP * BB);
                }
            }
        }
    }
}

void StepSystem::boundary(const std::vector<double>& x, std::size_t node, const BoundarySpec& b,
                          std::vector<double>& f) const {
    const double T = x[dof(node, comp_theta)];
    const double P = x[dof(node, comp_P)];
    const double T_inf = b.theta_inf(t_next_);
    f[dof(node, comp_m)] += b.beta_c * (vapour_density({P, T}) - vapour_density({b.P_inf, T_inf}));
    f[dof(node, comp_theta)] += b.alpha_c * (T - T_inf) + b.e_sigma * (std::pow(T, 4) - std::pow(T_inf, 4));
}

std::vector<double> StepSystem::nonlinear(const std::vector<double>& x) const {
    std::vector<double> f = f_fixed_;
    const std::size_t nn = x.size() / dofs_per_node;
    for (std::size_t i = 0; i < nn; ++i) {
        const double P = x[dof(i, comp_P)];
        if (!(P > 0.0)) throw DomainError("non-positive pore pressure");
        f[dof(i, comp_P)] = x[dof(i, comp_m)] - moisture_content(material_, {P, x[dof(i, comp_theta)]});
    }
    boundary(x, 0, scenario_.unexposed, f);
    boundary(x, nn - 1, scenario_.exposed, f);
    return f;
}

std::vector<double> StepSystem::residual(const std::vector<double>& x) const {
    std::vector<double> dx(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) dx[k] = (x[k] - x_n_[k]) / dt_;
    std::vector<double> r = M_.multiply(dx);
    const std::vector<double> kx = K_.multiply(x);
    const std::vector<double> f = nonlinear(x);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += kx[k] + f[k];
    return r;
}

BandMatrix StepSystem::jacobian(const std::vector<double>& x, bool finite_difference) const {
    BandMatrix J = K_;
    J.axpy(1.0 / dt_, M_);
    const std::size_t nn = x.size() / dofs_per_node;

    if (finite_difference) {
        // f couples unknowns of the same node only, so all nodes of one
        // component can be perturbed together.
        const std::vector<double> f0 = nonlinear(x);
        for (int c = 0; c < dofs_per_node; ++c) {
            std::vector<double> xp = x;
            std::vector<double> step(nn);
            for (std::size_t i = 0; i < nn; ++i) {
                const double v = x[dof(i, c)];
                step[i] = 1e-7 * std::max(std::abs(v), 1.0);
                xp[dof(i, c)] = v + step[i];
            }
            const std::vector<double> f1 = nonlinear(xp);
            for (std::size_t i = 0; i < nn; ++i)
                for (int r = 0; r < dofs_per_node; ++r) {
                    const double d = (f1[dof(i, r)] - f0[dof(i, r)]) / step[i];
                    if (d != 0.0) J.add(dof(i, r), dof(i, c), d);
                }
        }
        return J;
    }

    for (std::size_t i = 0; i < nn; ++i) {
        const FluidState s{x[dof(i, comp_P)], x[dof(i, comp_theta)]};
        const MoistureContentDerivatives md = moisture_content_derivatives(material_, s);
        J.add(dof(i, comp_P), dof(i, comp_m), 1.0);
        J.add(dof(i, comp_P), dof(i, comp_theta), -md.dm_dtheta);
        J.add(dof(i, comp_P), dof(i, comp_P), -md.dm_dP);
    }
    auto boundary_jac = [&](std::size_t node, const BoundarySpec& b) {
        const double T = x[dof(node, comp_theta)];
        const double P = x[dof(node, comp_P)];
        const double k = constants::molar_mass_water / constants::gas_constant;
        J.add(dof(node, comp_m), dof(node, comp_P), b.beta_c * k / T);
        J.add(dof(node, comp_m), dof(node, comp_theta), -b.beta_c * k * P / (T * T));
        J.add(dof(node, comp_theta), dof(node, comp_theta), b.alpha_c + 4.0 * b.e_sigma * T * T * T);
    };
    boundary_jac(0, scenario_.unexposed);
    boundary_jac(nn - 1, scenario_.exposed);
    return J;
}

// Newton ------------------------------------------------------------------------------------

NewtonResult solve_nonlinear(const StepSystem& system, std::vector<double> x0,
                             const SolverSettings& settings) {
    NewtonResult out;
    const std::size_t n = x0.size();
    const std::size_t nn = n / dofs_per_node;

    // Typical magnitude of each unknown, used to make the residual norm
    // dimensionless.
    double scale[dofs_per_node] = {1.0, 1.0, constants::atmospheric_pressure};
    for (std::size_t i = 0; i < nn; ++i)
        for (int c = 0; c < dofs_per_node; ++c)
            scale[c] = std::max(scale[c], std::abs(system.x_n()[dof(i, c)]));

    auto scaled_norm = [&](const std::vector<double>& r, const std::vector<double>& row_max) {
        double norm = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (row_max[k] > 0.0) norm = std::max(norm, std::abs(r[k]) / row_max[k]);
        return norm;
    };

    std::vector<double> x = std::move(x0);
    std::vector<double> r;
    try {
        r = system.residual(x);
    } catch (const DomainError&) {
        out.x = x;
        return out;
    }

    double norm0 = -1.0;
    for (int it = 0; it < settings.newton_max_iter; ++it) {
        BandMatrix J;
        try {
            J = system.jacobian(x, settings.fd_jacobian);
        } catch (const DomainError&) {
            break;
        }
        // Column scaling by unknown magnitude, row scaling by the largest
        // scaled entry.
        std::vector<double> row_max(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double cs = scale[j % dofs_per_node];
            for (std::size_t i = j > band_width ? j - band_width : 0; i <= std::min(n - 1, j + band_width); ++i) {
                const double v = J(i, j) * cs;
                J.at(i, j) = v;
                row_max[i] = std::max(row_max[i], std::abs(v));
            }
        }
        if (norm0 < 0.0) {
            norm0 = scaled_norm(r, row_max);
            out.residual_history.push_back(norm0);
            if (norm0 <= settings.newton_tol) {
                out.converged = true;
                break;
            }
        }
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double rs = row_max[i] > 0.0 ? 1.0 / row_max[i] : 1.0;
            rhs[i] = -r[i] * rs;
            for (std::size_t j = i > band_width ? i - band_width : 0; j <= std::min(n - 1, i + band_width); ++j)
                J.at(i, j) *= rs;
        }
        std::vector<double> y;
        try {
            y = J.solve(rhs);
        } catch (const SolverFailure&) {
            break;
        }
        std::vector<double> dx(n);
        for (std::size_t k = 0; k < n; ++k) dx[k] = y[k] * scale[k % dofs_per_node];

        // Keep the pore pressure positive.
        double alpha = 1.0;
        for (std::size_t i = 0; i < nn; ++i) {
            const double P = x[dof(i, comp_P)], dP = dx[dof(i, comp_P)];
            if (P + dP < 0.5 * P) alpha = std::min(alpha, 0.5 * P / -dP);
        }
        for (std::size_t k = 0; k < n; ++k) x[k] += alpha * dx[k];
        ++out.iterations;

        try {
            r = system.residual(x);
        } catch (const DomainError&) {
            break;
        }
        const double norm = scaled_norm(r, row_max);
        out.residual_history.push_back(norm);
        double step = 0.0;
        for (std::size_t k = 0; k < n; ++k) step = std::max(step, std::abs(alpha * y[k]));
        if (norm <= settings.newton_tol * (1.0 + norm0) || (alpha == 1.0 && step <= 1e-13)) {
            out.converged = true;
            break;
        }
    }
    out.x = std::move(x);
    return out;
}

// Dehydration, spalling, remeshing ---------------------------------------------------------

std::vector<double> step_dehydration(const MaterialParams& p, const State& state_n, double dt) {
    std::vector<double> out(state_n.nodes());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = state_n.m_d[i] -
                 dt / p.tau * (state_n.m_d[i] - dehydration_equilibrium(p, state_n.theta[i]));
    return out;
}

double step_spalling(double ell, double max_F, double dt, double gamma) {
    return ell / (1.0 + dt / gamma * std::max(max_F - 1.0, 0.0));
}

std::vector<double> failure_field(const MaterialParams& p, const State& state) {
    std::vector<double> F(state.nodes());
    for (std::size_t i = 0; i < F.size(); ++i)
        F[i] = failure_function(p, {state.P[i], clamp_mechanics(state.theta[i])});
    return F;
}

State remesh_and_project(const State& state, const Grading& g, double ell_new) {
    if (!(ell_new > 0.0)) throw std::invalid_argument("remesh_and_project: length must be positive");
    if (ell_new > state.ell * (1.0 + 1e-12))
        throw std::invalid_argument("remesh_and_project: wall cannot grow");
    const Mesh1D old_mesh = build_mesh(state.ell, g);
    if (old_mesh.nodes() != state.nodes())
        throw std::invalid_argument("remesh_and_project: state does not match grading");
    const Mesh1D mesh = build_mesh(ell_new, g);
    State out;
    out.ell = ell_new;
    out.t = state.t;
    auto project = [&](const std::vector<double>& f) {
        std::vector<double> v(mesh.nodes());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = interpolate(old_mesh, f, mesh.x[i]);
        return v;
    };
    out.m = project(state.m);
    out.theta = project(state.theta);
    out.P = project(state.P);
    out.m_d = project(state.m_d);
    return out;
}

// Time step ---------------------------------------------------------------------------------

namespace {

bool implicit_step(State& state, const Scenario& sc, double dt, const SourceTerms* sources,
                   StepReport& report) {
    const Mesh1D mesh = build_mesh(state.ell, sc.grading);
    std::vector<double> md_next = state.m_d;
    if (sc.solver.dehydration) md_next = step_dehydration(sc.material, state, dt);
    std::vector<double> rate(md_next.size());
    for (std::size_t i = 0; i < rate.size(); ++i) rate[i] = (md_next[i] - state.m_d[i]) / dt;

    const StepSystem system(sc, mesh, state, rate, state.t + dt, dt, sources);
    NewtonResult nr = solve_nonlinear(system, system.x_n(), sc.solver);
    report.newton_iterations += nr.iterations;
    report.residual_history.insert(report.residual_history.end(), nr.residual_history.begin(),
                                   nr.residual_history.end());
    if (!nr.residual_history.empty()) report.residual = nr.residual_history.back();
    if (!nr.converged) return false;

    std::vector<double> released(rate.size());
    for (std::size_t i = 0; i < rate.size(); ++i) released[i] = md_next[i] - state.m_d[i];
    report.released_water += integrate(mesh, released);

    for (std::size_t i = 0; i < state.nodes(); ++i) {
        state.m[i] = nr.x[dof(i, comp_m)];
        state.theta[i] = nr.x[dof(i, comp_theta)];
        state.P[i] = nr.x[dof(i, comp_P)];
    }
    state.m_d = std::move(md_next);
    state.t += dt;
    return true;
}

} // namespace

StepReport advance(State& state, const Scenario& scenario, const SourceTerms* sources) {
    const double dt = scenario.solver.dt;
    StepReport report;
    report.dt = dt;

    if (scenario.solver.spalling) {
        const std::vector<double> F = failure_field(scenario.material, state);
        report.max_F = *std::max_element(F.begin(), F.end());
        const double ell_new = step_spalling(state.ell, report.max_F, dt, scenario.solver.gamma);
        if (ell_new < state.ell) state = remesh_and_project(state, scenario.grading, ell_new);
    }
    report.ell = state.ell;

    State trial = state;
    if (!implicit_step(trial, scenario, dt, sources, report)) {
        report.halved = true;
        report.released_water = 0.0;
        trial = state;
        for (int half = 0; half < 2; ++half)
            if (!implicit_step(trial, scenario, 0.5 * dt, sources, report))
                throw SolverFailure("Newton iteration failed at t = " + std::to_string(state.t) +
                                    " s even with a halved time step");
        trial.t = state.t + dt;
    }
    state = std::move(trial);
    return report;
}

} // namespace spallsim
