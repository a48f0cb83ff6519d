#pragma once

// Finite element discretisation of the coupled moisture/energy balances on a
// shrinking 1D wall, semi-implicit time stepping and the spalling update.
//
// Unknowns are interleaved per node as [m_i, theta_i, P_i].

#include "spallsim/scenario.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace spallsim {

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Mesh1D {
    std::vector<double> x;
    Grading grading;

    std::size_t nodes() const { return x.size(); }
    std::size_t elements() const { return x.size() - 1; }
    double length() const { return x.back(); }
};

Mesh1D build_mesh(double ell, const Grading& g);

struct State {
    std::vector<double> m;      // kg m^-3
    std::vector<double> theta;  // K
    std::vector<double> P;      // Pa
    std::vector<double> m_d;    // kg m^-3
    double ell = 0.0;
    double t = 0.0;

    std::size_t nodes() const { return theta.size(); }
};

State initial_state(const Scenario& s);

/// Square band matrix in LAPACK general band storage (room for LU fill-in).
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(std::size_t n, int kl, int ku);

    std::size_t size() const { return n_; }
    int kl() const { return kl_; }
    int ku() const { return ku_; }
    bool in_band(std::size_t i, std::size_t j) const;

    double operator()(std::size_t i, std::size_t j) const;
    double& at(std::size_t i, std::size_t j);
    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    std::vector<double> multiply(const std::vector<double>& x) const;
    BandMatrix& axpy(double a, const BandMatrix& other);

    /// Solves A y = b by banded LU with partial pivoting.
    std::vector<double> solve(std::vector<double> b) const;

private:
    std::size_t n_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    int ldab_ = 1;
    std::vector<double> ab_;
};

inline constexpr int dofs_per_node = 3;
inline constexpr int band_width = 5;

inline std::size_t dof(std::size_t node, int component) {
    return dofs_per_node * node + static_cast<std::size_t>(component);
}

/// Optional volumetric sources added to the moisture and energy balances,
/// used for manufactured-solution tests.
struct SourceTerms {
    std::function<double(double x, double t)> moisture;
    std::function<double(double x, double t)> energy;
};

/// Discrete system (1/dt) M (x - x_n) + K x + f(x) = 0 of one time step.
class StepSystem {
public:
    StepSystem(const Scenario& scenario, const Mesh1D& mesh, const State& state_n,
               const std::vector<double>& dehydration_rate, double t_next, double dt,
               const SourceTerms* sources = nullptr);

    const BandMatrix& M() const { return M_; }
    const BandMatrix& K() const { return K_; }
    const std::vector<double>& x_n() const { return x_n_; }
    double dt() const { return dt_; }
    std::size_t size() const { return x_n_.size(); }

    std::vector<double> nonlinear(const std::vector<double>& x) const;
    std::vector<double> residual(const std::vector<double>& x) const;
    BandMatrix jacobian(const std::vector<double>& x, bool finite_difference) const;

private:
    void boundary(const std::vector<double>& x, std::size_t node, const BoundarySpec& b,
                  std::vector<double>& f) const;

    const MaterialParams& material_;
    const Scenario& scenario_;
    double t_next_;
    double dt_;
    BandMatrix M_;
    BandMatrix K_;
    std::vector<double> f_fixed_;
    std::vector<double> x_n_;
};

struct NewtonResult {
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history;  // scaled residual norms, initial first
    std::vector<double> x;
};

NewtonResult solve_nonlinear(const StepSystem& system, std::vector<double> x0,
                             const SolverSettings& settings);

/// Explicit relaxation of the dehydrated water mass towards equilibrium.
std::vector<double> step_dehydration(const MaterialParams& p, const State& state_n, double dt);

/// ell_{n+1} = ell_n / (1 + dt/gamma [max_F - 1]^+).
double step_spalling(double ell, double max_F, double dt, double gamma);

/// Nodal failure function, temperatures clamped into the mechanics range.
std::vector<double> failure_field(const MaterialParams& p, const State& state);

/// Moves the fields onto a graded mesh on (0, ell_new) by linear
/// interpolation of the old profiles; material beyond ell_new is dropped.
State remesh_and_project(const State& state, const Grading& g, double ell_new);

/// Linear interpolation of a nodal field at x.
double interpolate(const Mesh1D& mesh, const std::vector<double>& field, double x);

/// Integral of a nodal field over the mesh.
double integrate(const Mesh1D& mesh, const std::vector<double>& field);

struct StepReport {
    int newton_iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
    double max_F = 0.0;
    double ell = 0.0;
    double dt = 0.0;
    bool halved = false;
    double released_water = 0.0;  // kg m^-2 released by dehydration this step
};

/// One time step. On Newton failure the step is retried once as two half
/// steps; a second failure raises SolverFailure.
StepReport advance(State& state, const Scenario& scenario, const SourceTerms* sources = nullptr);

} // namespace spallsim
