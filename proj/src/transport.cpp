#include "spallsim/transport.hpp"

#include <algorithm>
#include <cmath>

namespace spallsim {

namespace {

using constants::gas_constant;
using constants::molar_mass_air;
using constants::molar_mass_water;

bool has_liquid(const MaterialParams& p, double theta) { return theta <= p.theta_cr; }

} // namespace

double moisture_content(const MaterialParams& p, const FluidState& s) {
    return moisture_content_derivatives(p, s).m;
}

MoistureContentDerivatives moisture_content_derivatives(const MaterialParams& p,
                                                        const FluidState& s) {
    const VapourStorage v = vapour_storage(p, s);
    if (!has_liquid(p, s.theta)) return {v.value, v.d_dP, v.d_dtheta};
    const SorptionDerivatives sd = sorption_derivatives(p, s);
    const double rho_w = water_density(s.theta, p.theta_cr);
    return {sd.eta_w * rho_w + v.value, sd.deta_dP * rho_w + v.d_dP,
            sd.deta_dtheta * rho_w + sd.eta_w * water_density_derivative(s.theta) + v.d_dtheta};
}

VapourStorage vapour_storage(const MaterialParams& p, const FluidState& s) {
    const SorptionDerivatives sd = sorption_derivatives(p, s);
    const double phi = porosity(p, s.theta);
    const double eta_v = std::max(phi - sd.eta_w, 0.0);
    const double rho_v = vapour_density(s);
    const double drho_dP = molar_mass_water / (s.theta * gas_constant);
    return {eta_v * rho_v, -sd.deta_dP * rho_v + eta_v * drho_dP,
            (porosity_derivative(p, s.theta) - sd.deta_dtheta) * rho_v - eta_v * rho_v / s.theta};
}

TransportCoefficients transport_coefficients(const MaterialParams& p, const FluidState& s,
                                             double D) {
    const double K = intrinsic_permeability(p, D);
    const Viscosities mu = viscosities(s);
    const double phi = porosity(p, s.theta);
    const double S_w = sorption(p, s).S_w;
    const RelativePermeabilities kr = relative_permeabilities_from_saturation(S_w, phi);
    const double rho_v = vapour_density(s);
    const double rho_a = dry_air_density(s);
    const VapourStorage vs = vapour_storage(p, s);
    const HeatCapacities cp = heat_capacities(s.theta, p.theta_cr);
    const double h_e = enthalpies(s.theta, p.theta_cr).h_e;
    const double dh_e = evaporation_enthalpy_derivative(s.theta, p.theta_cr);

    const double gas = K * kr.K_rg / mu.mu_g;
    double liquid_P = 0.0;      // rho_w K K_rw / mu_w (1 - dPc/dP)
    double liquid_theta = 0.0;  // -rho_w K K_rw / mu_w dPc/dtheta
    double cp_w = 0.0;
    if (has_liquid(p, s.theta) && kr.K_rw > 0.0) {
        const CapillaryPressure pc = capillary_pressure(p, s);
        const double liq = water_density(s.theta, p.theta_cr) * K * kr.K_rw / mu.mu_w;
        liquid_P = liq * (1.0 - pc.dPc_dP);
        liquid_theta = -liq * pc.dPc_dtheta;
        cp_w = cp.cp_w.value_or(0.0);
    }

    TransportCoefficients out;
    out.moisture.K_mP = liquid_P + rho_v * gas;
    out.moisture.K_mtheta = liquid_theta;

    auto& e = out.energy;
    e.M_thetaP = h_e * vs.d_dP;
    e.M_thetatheta = mixture_heat_capacity(p, s).rho_cp + h_e * vs.d_dtheta;
    e.K_thetaP = h_e * rho_v * gas;
    e.K_thetatheta = thermal_conductivity(p, s);
    e.C_thetaP = cp_w * liquid_P + ((cp.cp_v - dh_e) * rho_v + cp.cp_a * rho_a) * gas;
    e.C_thetatheta = cp_w * liquid_theta;
    return out;
}

MoistureCoefficients moisture_coefficients(const MaterialParams& p, const FluidState& s, double D) {
    return transport_coefficients(p, s, D).moisture;
}

EnergyCoefficients energy_coefficients(const MaterialParams& p, const FluidState& s, double D) {
    return transport_coefficients(p, s, D).energy;
}

std::string to_string(FluxMechanism m) {
    switch (m) {
        case FluxMechanism::vapour_flow: return "vapour_flow";
        case FluxMechanism::vapour_diffusion: return "vapour_diffusion";
        case FluxMechanism::liquid_water_flow: return "liquid_water_flow";
        case FluxMechanism::adsorbed_water_diffusion: return "adsorbed_water_diffusion";
    }
    return "vapour_flow";
}

double FluxBreakdown::total() const {
    return vapour_flow + vapour_diffusion + liquid_water_flow + adsorbed_water_diffusion;
}

std::array<double, 4> FluxBreakdown::parts() const {
    return {vapour_flow, vapour_diffusion, liquid_water_flow, adsorbed_water_diffusion};
}

FluxMechanism FluxBreakdown::dominant() const {
    const auto v = parts();
    const auto it = std::max_element(v.begin(), v.end());
    return static_cast<FluxMechanism>(it - v.begin());
}

FluxBreakdown flux_decomposition(const MaterialParams& p, const FluxAnalysisParams& fa,
                                 double P_v, double P_a, double theta) {
    if (!(theta > 0.0) || P_v < 0.0 || P_a < 0.0)
        throw std::invalid_argument("flux_decomposition: inputs must be positive");
    const FluidState s{std::max(P_v, 1.0), theta};
    const double P_g = s.P + P_a;
    const double phi = porosity(p, theta);
    const SorptionDerivatives sd = sorption_derivatives(p, s);
    const double S_w = std::clamp(sd.eta_w / phi, 0.0, 1.0);
    const double dS_dP = sd.deta_dP / phi;
    const RelativePermeabilities kr = relative_permeabilities_from_saturation(S_w, phi);

    const double K = fa.K0 * std::pow(10.0, fa.A_T * (theta - fa.theta0)) *
                     std::pow(P_g / constants::atmospheric_pressure, fa.A_P);
    const double mu_g = gas_viscosity(s.P, P_a, theta);
    const double rho_v = vapour_density(s);

    FluxBreakdown out;
    out.vapour_flow = rho_v * K * kr.K_rg / mu_g;

    const double D_eff = phi * (1.0 - S_w) * fa.tortuosity * fa.D_v0 *
                         std::pow(theta / constants::zero_celsius, fa.A_v) *
                         (constants::atmospheric_pressure / P_g);
    out.vapour_diffusion = molar_mass_air * molar_mass_water * P_a /
                           (theta * gas_constant * (s.P * molar_mass_water + P_a * molar_mass_air)) *
                           D_eff;

    if (has_liquid(p, theta) && S_w > 0.0) {
        // Bound water saturation: all water is adsorbed up to the solid
        // saturation point, capillary water above it.
        const double S_B = std::min(S_w, fa.S_ssp);
        const double rho_w = water_density(theta, p.theta_cr);
        if (S_w > fa.S_ssp) {
            const CapillaryPressure pc = capillary_pressure(p, s);
            const double w = (1.0 - S_B / S_w) * rho_w * K * kr.K_rw / viscosities(s).mu_w;
            out.liquid_water_flow = std::abs(w * (1.0 - pc.dPc_dP));
            out.liquid_water_flow_theta = std::abs(w * pc.dPc_dtheta);
        } else {
            const double D_B = fa.D_b0 * std::exp(-2.08 * (S_w / fa.S_ssp) * (theta / fa.D_b_theta_ref));
            const double dS_dtheta =
                (sd.deta_dtheta - S_w * porosity_derivative(p, theta)) / phi;
            out.adsorbed_water_diffusion = std::abs(rho_w * D_B * dS_dP);
            out.adsorbed_water_diffusion_theta = std::abs(rho_w * D_B * dS_dtheta);
        }
    }
    return out;
}

} // namespace spallsim
