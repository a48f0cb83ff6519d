#pragma once

// Boundary and initial data of a heated wall, ambient temperature curves and
// the built-in validation cases. The exposed face is x = ell, the unexposed
// face is x = 0.

#include "spallsim/materials.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace spallsim {

class FireCurve {
public:
    enum class Kind { constant, ramp_plateau, iso834 };

    FireCurve() = default;

    static FireCurve constant(double theta);
    /// Linear rise by ramp_rise over ramp_time, then a slower linear rise by
    /// plateau_rise over plateau_time, then constant.
    static FireCurve ramp_plateau(double theta0, double ramp_rise, double ramp_time,
                                  double plateau_rise, double plateau_time);
    /// theta0 + 345 log10(8 t + 1), t in minutes.
    static FireCurve iso834(double theta0);

    /// Parses "constant(293.15)", "iso834(293.15)" or
    /// "ramp_plateau(293.15, 410, 300, 35, 21300)".
    static FireCurve parse(const std::string& text);

    double operator()(double t) const;
    std::string to_string() const;

    Kind kind() const { return kind_; }
    const std::vector<double>& parameters() const { return params_; }

    friend bool operator==(const FireCurve&, const FireCurve&) = default;

private:
    FireCurve(Kind k, std::vector<double> params);

    Kind kind_ = Kind::constant;
    std::vector<double> params_{constants::zero_celsius + 20.0};
};

double fire_curve_value(const FireCurve& curve, double t);

struct BoundarySpec {
    FireCurve theta_inf;
    double P_inf = 0.0;     // Pa
    double alpha_c = 0.0;   // W m^-2 K^-1
    double e_sigma = 0.0;   // W m^-2 K^-4
    double beta_c = 0.0;    // m s^-1

    friend bool operator==(const BoundarySpec&, const BoundarySpec&) = default;
};

/// Element counts on (0, ell/2), (ell/2, 3 ell/4) and (3 ell/4, ell).
struct Grading {
    int n1 = 30;
    int n2 = 30;
    int n3 = 60;

    friend bool operator==(const Grading&, const Grading&) = default;
};

struct SolverSettings {
    double dt = 1.0;             // s
    double gamma = 10.0;         // s, characteristic spalling time
    double newton_tol = 1e-8;
    int newton_max_iter = 30;
    bool fd_jacobian = true;
    bool spalling = true;
    bool dehydration = true;

    friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

struct Scenario {
    std::string name;
    MaterialParams material;
    BoundarySpec unexposed;
    BoundarySpec exposed;
    double P0 = 0.0;
    double theta0 = 293.15;
    double ell0 = 0.0;
    Grading grading;
    SolverSettings solver;
    double duration = 0.0;                 // s
    std::vector<double> probe_depths;      // m, from the initial heated face
    double output_every = 10.0;            // s

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Scenario kalifa_ptm1();
Scenario mindeguia_ptm2();
Scenario mindeguia_spalling();
std::vector<Scenario> builtin_scenarios();

/// Built-in lookup by name; throws ScenarioError for unknown names.
Scenario builtin_scenario(const std::string& name);

Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
std::string serialize(const Scenario& s);

struct ValidationReport {
    std::vector<std::string> findings;
    double S_w0 = 0.0;  // initial liquid saturation implied by (P0, theta0)
    double m0 = 0.0;    // initial moisture content, kg m^-3

    bool ok() const { return findings.empty(); }
};

ValidationReport validate(const Scenario& s);

} // namespace spallsim
