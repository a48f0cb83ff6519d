#pragma once

// Temperature and pressure dependent properties of moist concrete and of its
// fluid phases. Every function here is pure; SI units throughout, absolute
// temperature in kelvin at the interface.

#include <optional>
#include <stdexcept>
#include <string>

namespace spallsim {

/// Raised when a property is requested outside the range where its
/// closed form is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace constants {
inline constexpr double gas_constant = 8.3145;          // J mol^-1 K^-1
inline constexpr double molar_mass_water = 0.018016;    // kg mol^-1
inline constexpr double molar_mass_air = 0.028965;      // kg mol^-1
inline constexpr double stefan_boltzmann = 5.67e-8;     // W m^-2 K^-4
inline constexpr double atmospheric_pressure = 101325.0;
inline constexpr double zero_celsius = 273.15;
inline constexpr double critical_temperature = 647.3;   // K
} // namespace constants

/// Vapour pore pressure and absolute temperature at a material point.
struct FluidState {
    double P;      // Pa
    double theta;  // K
};

enum class Aggregate { siliceous, calcareous };

/// Strength class in the fire-design sense: normal strength concrete or one
/// of the three high strength classes.
enum class StrengthClass { NSC, HSC1, HSC2, HSC3 };

struct ConcreteClass {
    StrengthClass strength = StrengthClass::NSC;
    Aggregate aggregate = Aggregate::siliceous;

    friend bool operator==(const ConcreteClass&, const ConcreteClass&) = default;
};

std::string to_string(Aggregate a);
std::string to_string(StrengthClass s);
Aggregate parse_aggregate(const std::string& text);
StrengthClass parse_strength_class(const std::string& text);

/// Scenario specific material constants.
struct MaterialParams {
    double f_c_ref = 0.0;        // Pa, compressive strength at ambient
    double f_t_ref = 0.0;        // Pa, tensile strength at ambient
    double cement = 0.0;         // kg m^-3 of concrete
    double theta_ref = 293.15;   // K, reference for porosity and conductivity
    double phi_ref = 0.0;
    double A_phi = 0.0;          // K^-1
    double rho_s = 0.0;          // kg m^-3
    double lambda_d_ref = 0.0;   // W m^-1 K^-1
    double A_lambda = 0.0;       // K^-1, may be negative
    double K_ref = 0.0;          // m^2
    ConcreteClass concrete_class;
    double e_F = 0.505;
    double tau = 10800.0;        // s, dehydration relaxation time
    double m_eq_378 = 210.0;     // kg m^-3
    double theta_cr = constants::critical_temperature;

    friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

/// Throws std::invalid_argument listing every violated invariant.
void validate(const MaterialParams& p);

// Saturation pressure and fluid densities -------------------------------------------

double saturation_vapour_pressure(double theta);
double saturation_vapour_pressure_derivative(double theta);

double vapour_density(const FluidState& s);

/// Liquid water density; domain error above theta_cr.
double water_density(double theta, double theta_cr = constants::critical_temperature);
double water_density_derivative(double theta);

/// Dry air partial pressure, P_atm - P floored at zero.
double dry_air_pressure(double P);
double dry_air_density(const FluidState& s);

struct CapillaryPressure {
    double Pc;
    double dPc_dP;
    double dPc_dtheta;
};

CapillaryPressure capillary_pressure(const MaterialParams& p, const FluidState& s);

struct Viscosities {
    double mu_w;
    double mu_g;
};

Viscosities viscosities(const FluidState& s);

/// Gas mixture viscosity with an explicit dry air partial pressure.
double gas_viscosity(double P_v, double P_a, double theta);

// Pore structure and sorption -------------------------------------------------------

double porosity(const MaterialParams& p, double theta);
double porosity_derivative(const MaterialParams& p, double theta);

struct Sorption {
    double eta_w;  // volume fraction of liquid water
    double S_w;    // degree of saturation
};

Sorption sorption(const MaterialParams& p, const FluidState& s);

/// Sorption exponent m(theta) of the power-law branch.
double sorption_exponent(double theta);

/// Liquid volume fraction with its partial derivatives with respect to pore
/// pressure and temperature.
struct SorptionDerivatives {
    double eta_w;
    double deta_dP;
    double deta_dtheta;
};

SorptionDerivatives sorption_derivatives(const MaterialParams& p, const FluidState& s);

struct RelativePermeabilities {
    double K_rw;
    double K_rg;
};

RelativePermeabilities relative_permeabilities(const MaterialParams& p, const FluidState& s);
RelativePermeabilities relative_permeabilities_from_saturation(double S_w, double phi);

double intrinsic_permeability(const MaterialParams& p, double damage);

// Thermal properties --------------------------------------------------------------------

double dry_thermal_conductivity(const MaterialParams& p, double theta);
double thermal_conductivity(const MaterialParams& p, const FluidState& s);

struct HeatCapacities {
    std::optional<double> cp_w;  // empty above theta_cr
    double cp_v;
    double cp_a;
    double cp_s;
};

HeatCapacities heat_capacities(double theta, double theta_cr = constants::critical_temperature);
double liquid_water_heat_capacity(double theta, double theta_cr = constants::critical_temperature);

struct Enthalpies {
    double h_e;  // evaporation
    double h_d;  // dehydration
};

Enthalpies enthalpies(double theta, double theta_cr = constants::critical_temperature);

/// d h_e / d theta. The singular slope at theta_cr is evaluated no closer
/// than one kelvin below it.
double evaporation_enthalpy_derivative(double theta,
                                       double theta_cr = constants::critical_temperature);

double dehydration_equilibrium(const MaterialParams& p, double theta);

struct MixtureHeatCapacity {
    double rho_cp;        // J m^-3 K^-1
    double rho_apparent;  // kg m^-3
};

MixtureHeatCapacity mixture_heat_capacity(const MaterialParams& p, const FluidState& s);

} // namespace spallsim
