#pragma once

// Coefficients of the moisture and energy balances written in terms of the
// pore pressure P and temperature theta, plus a breakdown of the moisture
// flux into its transport mechanisms.

#include "spallsim/materials.hpp"

#include <array>
#include <string>

namespace spallsim {

/// m = eta_w rho_w + eta_v rho_v.
double moisture_content(const MaterialParams& p, const FluidState& s);

struct MoistureContentDerivatives {
    double m;
    double dm_dP;
    double dm_dtheta;
};

MoistureContentDerivatives moisture_content_derivatives(const MaterialParams& p,
                                                        const FluidState& s);

/// eta_v rho_v and its partial derivatives.
struct VapourStorage {
    double value;
    double d_dP;
    double d_dtheta;
};

VapourStorage vapour_storage(const MaterialParams& p, const FluidState& s);

struct MoistureCoefficients {
    double K_mP;
    double K_mtheta;
};

struct EnergyCoefficients {
    double M_thetaP;
    double M_thetatheta;
    double K_thetaP;
    double K_thetatheta;
    double C_thetaP;
    double C_thetatheta;
};

struct TransportCoefficients {
    MoistureCoefficients moisture;
    EnergyCoefficients energy;
};

/// Both coefficient sets at once; D is the damage entering the permeability.
TransportCoefficients transport_coefficients(const MaterialParams& p, const FluidState& s,
                                             double D);
MoistureCoefficients moisture_coefficients(const MaterialParams& p, const FluidState& s, double D);
EnergyCoefficients energy_coefficients(const MaterialParams& p, const FluidState& s, double D);

// Flux mechanism analysis ----------------------------------------------------------------

/// Parameters used only by the flux breakdown: intrinsic permeability,
/// effective vapour diffusivity and adsorbed water diffusion.
struct FluxAnalysisParams {
    double S_ssp = 0.55;          // solid saturation point
    double D_b0 = 1.57e-11;       // m^2 s^-1, adsorbed water diffusivity at reference
    double D_b_theta_ref = 295.0; // K
    double D_v0 = 2.58e-5;        // m^2 s^-1, vapour diffusivity in air at 273.15 K
    double A_v = 1.667;
    double tortuosity = 0.5;
    double K0 = 3.0e-18;          // m^2
    double A_T = 0.005;           // K^-1
    double A_P = 0.368;
    double theta0 = 293.15;
};

enum class FluxMechanism { vapour_flow, vapour_diffusion, liquid_water_flow, adsorbed_water_diffusion };

std::string to_string(FluxMechanism m);

/// Magnitudes of the coefficients multiplying grad P_v for each mechanism.
struct FluxBreakdown {
    double vapour_flow = 0.0;
    double vapour_diffusion = 0.0;
    double liquid_water_flow = 0.0;
    double adsorbed_water_diffusion = 0.0;
    // Coefficients multiplying grad theta.
    double liquid_water_flow_theta = 0.0;
    double adsorbed_water_diffusion_theta = 0.0;

    double total() const;
    std::array<double, 4> parts() const;
    FluxMechanism dominant() const;
};

FluxBreakdown flux_decomposition(const MaterialParams& p, const FluxAnalysisParams& fa,
                                 double P_v, double P_a, double theta);

} // namespace spallsim
