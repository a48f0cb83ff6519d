#include "spallsim/materials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace spallsim {

namespace {

using constants::gas_constant;
using constants::molar_mass_air;
using constants::molar_mass_water;

constexpr double pole_temperature = 37.58;
constexpr double pole_guard = 50.0;

// Liquid water density polynomials in degrees Celsius.
constexpr std::array<double, 6> density_a{4.8863e-7,   -1.6528e-9,  1.8621e-12,
                                          2.4266e-13,  -1.5996e-15, 3.3703e-18};
constexpr std::array<double, 6> density_b{1.0213e3,  -7.7377e-1, 8.7696e-3,
                                          -9.2118e-5, 3.3534e-7,  -4.4034e-10};
constexpr double density_pressure_shift = -1.0e7;

// Sorption isotherm.
constexpr double sorption_theta_ref = 298.15;
constexpr double knot_low = 0.96;
constexpr double knot_high = 1.00;
constexpr double knot_width = knot_high - knot_low;
constexpr double sorption_shape = 22.34 * (sorption_theta_ref - 263.15) * (sorption_theta_ref - 263.15);

double polynomial(const std::array<double, 6>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double polynomial_derivative(const std::array<double, 6>& c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size() - 1; i >= 1; --i) acc = acc * x + static_cast<double>(i) * c[i];
    return acc;
}

// d m / d theta of the sorption exponent.
double sorption_exponent_derivative(double theta) {
    const double s = theta - 263.15;
    const double denom = sorption_shape + s * s;
    return -2.0 * s * sorption_shape / (denom * denom);
}

// Power-law branch eta = (c / rho_w) (x h)^(1/m), x = phi(298.15) rho_w(298.15) / c.
struct PowerBranch {
    double eta;
    double deta_dh;
    double deta_dtheta;  // at fixed relative humidity
};

PowerBranch power_branch(const MaterialParams& p, double theta, double h) {
    const double x = porosity(p, sorption_theta_ref) *
                     water_density(sorption_theta_ref, p.theta_cr) / p.cement;
    const double rho_w = water_density(theta, p.theta_cr);
    const double m = sorption_exponent(theta);
    const double u = 1.0 / m;
    const double base = x * h;
    const double eta = p.cement / rho_w * std::pow(base, u);
    const double du = -sorption_exponent_derivative(theta) / (m * m);
    PowerBranch out;
    out.eta = eta;
    out.deta_dh = h > 0.0 ? u * eta / h : 0.0;
    out.deta_dtheta =
        eta * (-water_density_derivative(theta) / rho_w + (base > 0.0 ? du * std::log(base) : 0.0));
    return out;
}

} // namespace

std::string to_string(Aggregate a) {
    return a == Aggregate::siliceous ? "siliceous" : "calcareous";
}

std::string to_string(StrengthClass s) {
    switch (s) {
        case StrengthClass::NSC: return "NSC";
        case StrengthClass::HSC1: return "HSC1";
        case StrengthClass::HSC2: return "HSC2";
        case StrengthClass::HSC3: return "HSC3";
    }
    return "NSC";
}

Aggregate parse_aggregate(const std::string& text) {
    if (text == "siliceous") return Aggregate::siliceous;
    if (text == "calcareous") return Aggregate::calcareous;
    throw std::invalid_argument("unknown aggregate '" + text + "'");
}

StrengthClass parse_strength_class(const std::string& text) {
    if (text == "NSC") return StrengthClass::NSC;
    if (text == "HSC1") return StrengthClass::HSC1;
    if (text == "HSC2") return StrengthClass::HSC2;
    if (text == "HSC3") return StrengthClass::HSC3;
    throw std::invalid_argument("unknown strength class '" + text + "'");
}

void validate(const MaterialParams& p) {
    std::vector<std::string> issues;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0)) issues.push_back(std::string(name) + " must be positive");
    };
    positive(p.f_c_ref, "f_c_ref");
    positive(p.f_t_ref, "f_t_ref");
    positive(p.cement, "cement");
    positive(p.theta_ref, "theta_ref");
    positive(p.rho_s, "rho_s");
    positive(p.lambda_d_ref, "lambda_d_ref");
    positive(p.K_ref, "K_ref");
    positive(p.tau, "tau");
    positive(p.m_eq_378, "m_eq_378");
    positive(p.theta_cr, "theta_cr");
    if (!(p.phi_ref > 0.0 && p.phi_ref < 1.0)) issues.emplace_back("phi_ref must lie in (0, 1)");
    if (!(p.A_phi >= 0.0)) issues.emplace_back("A_phi must be non-negative");
    if (!(p.e_F > 0.5 && p.e_F <= 1.0)) issues.emplace_back("e_F must lie in (0.5, 1]");
    if (issues.empty()) return;
    std::ostringstream msg;
    msg << "invalid material parameters:";
    for (const auto& i : issues) msg << "\n  - " << i;
    throw std::invalid_argument(msg.str());
}

double saturation_vapour_pressure(double theta) {
    if (!(theta > pole_temperature + pole_guard))
        throw DomainError("saturation_vapour_pressure: temperature too close to the pole");
    return std::exp(23.5771 - 4042.9 / (theta - pole_temperature));
}

double saturation_vapour_pressure_derivative(double theta) {
    const double d = theta - pole_temperature;
    return saturation_vapour_pressure(theta) * 4042.9 / (d * d);
}

double vapour_density(const FluidState& s) {
    return s.P * molar_mass_water / (s.theta * gas_constant);
}

double water_density(double theta, double theta_cr) {
    if (theta > theta_cr) throw DomainError("water_density: no liquid phase above theta_cr");
    const double t = theta - constants::zero_celsius;
    return polynomial(density_a, t) * density_pressure_shift + polynomial(density_b, t);
}

double water_density_derivative(double theta) {
    const double t = theta - constants::zero_celsius;
    return polynomial_derivative(density_a, t) * density_pressure_shift +
           polynomial_derivative(density_b, t);
}

double dry_air_pressure(double P) {
    return std::max(constants::atmospheric_pressure - P, 0.0);
}

double dry_air_density(const FluidState& s) {
    return dry_air_pressure(s.P) * molar_mass_air / (s.theta * gas_constant);
}

CapillaryPressure capillary_pressure(const MaterialParams& p, const FluidState& s) {
    if (!(s.P > 0.0)) throw DomainError("capillary_pressure: pore pressure must be positive");
    if (s.theta > p.theta_cr) return {0.0, 0.0, 0.0};
    const bool clamped = s.P < 1.0;
    const double P = clamped ? 1.0 : s.P;
    const double Ps = saturation_vapour_pressure(s.theta);
    const double rho_w = water_density(s.theta, p.theta_cr);
    const double drho_w = water_density_derivative(s.theta);
    const double ln_h = std::log(P / Ps);
    const double coef = gas_constant / molar_mass_water;
    CapillaryPressure out;
    out.Pc = -rho_w * s.theta * coef * ln_h;
    out.dPc_dP = clamped ? 0.0 : -rho_w * s.theta * coef / P;
    out.dPc_dtheta = -coef * ((drho_w * s.theta + rho_w) * ln_h -
                              rho_w * s.theta * saturation_vapour_pressure_derivative(s.theta) / Ps);
    return out;
}

double gas_viscosity(double P_v, double P_a, double theta) {
    constexpr double theta0 = 273.15;
    const double dt = theta - theta0;
    const double mu_gv = 8.85e-6 + 3.53e-8 * dt;
    const double mu_ga = 17.17e-6 + 4.73e-8 * dt + 2.22e-11 * dt * dt;
    const double frac = P_a > 0.0 ? std::pow(P_a / (P_v + P_a), 0.608) : 0.0;
    return mu_gv + (mu_ga - mu_gv) * frac;
}

Viscosities viscosities(const FluidState& s) {
    if (!(s.theta > 229.0)) throw DomainError("viscosities: temperature must exceed 229 K");
    return {0.6612 * std::pow(s.theta - 229.0, -1.532),
            gas_viscosity(s.P, dry_air_pressure(s.P), s.theta)};
}

namespace {
constexpr double porosity_min = 1e-4;
constexpr double porosity_max = 0.99;
} // namespace

double porosity(const MaterialParams& p, double theta) {
    return std::clamp(p.phi_ref + p.A_phi * (theta - p.theta_ref), porosity_min, porosity_max);
}

double porosity_derivative(const MaterialParams& p, double theta) {
    const double raw = p.phi_ref + p.A_phi * (theta - p.theta_ref);
    return (raw > porosity_min && raw < porosity_max) ? p.A_phi : 0.0;
}

double sorption_exponent(double theta) {
    const double s = theta - 263.15;
    return 1.04 - s * s / (sorption_shape + s * s);
}

SorptionDerivatives sorption_derivatives(const MaterialParams& p, const FluidState& s) {
    if (s.theta > p.theta_cr) return {0.0, 0.0, 0.0};
    const double Ps = saturation_vapour_pressure(s.theta);
    const double dPs = saturation_vapour_pressure_derivative(s.theta);
    const double h = s.P / Ps;
    const double phi = porosity(p, s.theta);
    const double dphi = porosity_derivative(p, s.theta);

    double eta = 0.0;
    double deta_dh = 0.0;
    double deta_dtheta_h = 0.0;

    if (h <= knot_low) {
        const PowerBranch b = power_branch(p, s.theta, h);
        eta = b.eta;
        deta_dh = b.deta_dh;
        deta_dtheta_h = b.deta_dtheta;
    } else if (h < knot_high) {
        // Cubic Hermite bridge: matches the power law value and slope at the
        // lower knot, phi with zero slope at the upper knot.
        const PowerBranch b = power_branch(p, s.theta, knot_low);
        const double m = sorption_exponent(s.theta);
        const double u = 1.0 / m;
        const double du = -sorption_exponent_derivative(s.theta) / (m * m);
        const double e0 = b.eta, e1 = phi;
        const double d0 = u * e0 / knot_low, d1 = 0.0;
        const double de0 = b.deta_dtheta, de1 = dphi;
        const double dd0 = (du * e0 + u * de0) / knot_low, dd1 = 0.0;

        const double w = knot_width;
        const double xi0 = e0, xi1 = d0;
        const double xi2 = 3.0 * (e1 - e0) / (w * w) - (2.0 * d0 + d1) / w;
        const double xi3 = 2.0 * (e0 - e1) / (w * w * w) + (d0 + d1) / (w * w);
        const double dxi0 = de0, dxi1 = dd0;
        const double dxi2 = 3.0 * (de1 - de0) / (w * w) - (2.0 * dd0 + dd1) / w;
        const double dxi3 = 2.0 * (de0 - de1) / (w * w * w) + (dd0 + dd1) / (w * w);

        const double z = h - knot_low;
        eta = xi0 + z * (xi1 + z * (xi2 + z * xi3));
        deta_dh = xi1 + z * (2.0 * xi2 + z * 3.0 * xi3);
        deta_dtheta_h = dxi0 + z * (dxi1 + z * (dxi2 + z * dxi3));
    } else {
        eta = phi;
        deta_dh = 0.0;
        deta_dtheta_h = dphi;
    }

    if (eta < 0.0) return {0.0, 0.0, 0.0};
    if (eta > phi) return {phi, 0.0, dphi};

    // h = P / Ps(theta): dh/dP = 1/Ps, dh/dtheta = -h Ps'/Ps.
    return {eta, deta_dh / Ps, deta_dtheta_h - deta_dh * h * dPs / Ps};
}

Sorption sorption(const MaterialParams& p, const FluidState& s) {
    const double eta = sorption_derivatives(p, s).eta_w;
    const double phi = porosity(p, s.theta);
    return {eta, std::clamp(eta / phi, 0.0, 1.0)};
}

RelativePermeabilities relative_permeabilities_from_saturation(double S_w, double phi) {
    const double psi = 0.05 - 22.5 * phi;
    const double base = std::pow(10.0, psi);
    const double S = std::clamp(S_w, 0.0, 1.0);
    const double K_rg = std::pow(10.0, S * psi) - base * S;
    const double K_rw = std::pow(10.0, (1.0 - S) * psi) - base * (1.0 - S);
    return {std::clamp(K_rw, 0.0, 1.0), std::clamp(K_rg, 0.0, 1.0)};
}

RelativePermeabilities relative_permeabilities(const MaterialParams& p, const FluidState& s) {
    return relative_permeabilities_from_saturation(sorption(p, s).S_w, porosity(p, s.theta));
}

double intrinsic_permeability(const MaterialParams& p, double damage) {
    if (!(damage >= 0.0 && damage <= 1.0))
        throw DomainError("intrinsic_permeability: damage must lie in [0, 1]");
    return p.K_ref * std::pow(10.0, 4.0 * damage);
}

double dry_thermal_conductivity(const MaterialParams& p, double theta) {
    const double raw = p.lambda_d_ref * (1.0 + p.A_lambda * (theta - p.theta_ref));
    return std::max(raw, 0.1 * p.lambda_d_ref);
}

double thermal_conductivity(const MaterialParams& p, const FluidState& s) {
    const double lambda_d = dry_thermal_conductivity(p, s.theta);
    if (s.theta > p.theta_cr) return lambda_d;
    const double phi = porosity(p, s.theta);
    const double S_w = sorption(p, s).S_w;
    return lambda_d *
           (1.0 + 4.0 * phi * water_density(s.theta, p.theta_cr) * S_w / ((1.0 - phi) * p.rho_s));
}

double liquid_water_heat_capacity(double theta, double theta_cr) {
    if (theta > theta_cr) throw DomainError("liquid_water_heat_capacity: above theta_cr");
    constexpr double a = 1.08542631988638;
    constexpr double b = 31.4447657616636;
    return (2.4768 * theta + 3368.2) + std::pow(a * theta / 513.15, b);
}

HeatCapacities heat_capacities(double theta, double theta_cr) {
    HeatCapacities out;
    if (theta <= theta_cr) out.cp_w = liquid_water_heat_capacity(theta, theta_cr);

    if (theta <= theta_cr) {
        constexpr double a = 1.13771502228162;
        constexpr double b = 29.4435287521143;
        out.cp_v = (7.1399 * theta - 443.0) + std::pow(a * theta / 513.15, b);
    } else {
        out.cp_v = 45821.01;
    }

    constexpr double a = -9.84936701814735e-8;
    constexpr double b = 3.56436257769861e-4;
    constexpr double c = -1.21617923987757e-1;
    constexpr double d = 1.01250255216324e3;
    out.cp_a = ((a * theta + b) * theta + c) * theta + d;

    const double t = (theta - constants::zero_celsius) / 120.0;
    out.cp_s = 900.0 + 80.0 * t - 4.0 * t * t;
    return out;
}

Enthalpies enthalpies(double theta, double theta_cr) {
    const double h_e = theta <= theta_cr ? 2.672e5 * std::pow(theta_cr - theta, 0.38) : 0.0;
    return {h_e, 2400.0e3};
}

double evaporation_enthalpy_derivative(double theta, double theta_cr) {
    if (theta > theta_cr) return 0.0;
    const double gap = std::max(theta_cr - theta, 1.0);
    return -0.38 * 2.672e5 * std::pow(gap, -0.62);
}

double dehydration_equilibrium(const MaterialParams& p, double theta) {
    auto stage = [theta](double fraction, double onset, double width) {
        if (theta <= onset) return 0.0;
        return fraction * (1.0 - std::exp(-(theta - onset) / width));
    };
    return p.m_eq_378 * (stage(0.075, 378.15, 200.0) + stage(0.02, 673.15, 10.0) +
                         stage(0.015, 813.15, 5.0));
}

MixtureHeatCapacity mixture_heat_capacity(const MaterialParams& p, const FluidState& s) {
    const double phi = porosity(p, s.theta);
    const double S_w = sorption(p, s).S_w;
    const HeatCapacities cp = heat_capacities(s.theta, p.theta_cr);
    const double rho_v = vapour_density(s);
    const double rho_a = dry_air_density(s);
    const double eta_w = phi * S_w;
    const double eta_g = phi * (1.0 - S_w);
    const double eta_s = 1.0 - phi;

    double rho_cp = (cp.cp_v * rho_v + cp.cp_a * rho_a) * eta_g + cp.cp_s * p.rho_s * eta_s;
    double rho = (rho_v + rho_a) * eta_g + p.rho_s * eta_s;
    if (cp.cp_w && eta_w > 0.0) {
        const double rho_w = water_density(s.theta, p.theta_cr);
        rho_cp += *cp.cp_w * rho_w * eta_w;
        rho += rho_w * eta_w;
    }
    return {rho_cp, rho};
}

} // namespace spallsim
