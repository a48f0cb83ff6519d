#pragma once

// Strength and stiffness of heated concrete, the stresses entering the failure
// check and the failure function itself. Stresses are positive in tension.

#include "spallsim/materials.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace spallsim {

inline constexpr double mechanics_theta_min = 293.15;
inline constexpr double mechanics_theta_max = 1473.15;

struct StrengthRow {
    double theta_C;
    double k_c;
    double eps_c1;
    double eps_cu1;
};

struct StrengthParameters {
    double f_c;      // Pa
    double eps_c1;   // strain at peak stress, positive magnitude
    double eps_cu1;  // ultimate strain, positive magnitude
};

/// Reduction tables for compressive strength and strains, loaded from the
/// bundled text file (see data/eurocode_tables.txt for the format).
class StrengthTables {
public:
    /// Tables compiled into the library; verified once on first use.
    static const StrengthTables& builtin();

    /// Parses table text. With verify_checksum the FNV-1a digest of the text
    /// must equal builtin_checksum().
    static StrengthTables parse(std::string_view text, bool verify_checksum = false);

    static std::uint64_t builtin_checksum();
    static std::uint64_t checksum(std::string_view text);

    int version() const { return version_; }
    const std::vector<StrengthRow>& rows(const std::string& section) const;
    const std::vector<StrengthRow>& rows(ConcreteClass c) const;

    /// Interpolated k_c, eps_c1, eps_cu1 at theta [K]. Domain error outside
    /// the tabulated range.
    StrengthRow at(double theta, ConcreteClass c) const;

private:
    int version_ = 0;
    std::map<std::string, std::vector<StrengthRow>> sections_;
};

std::string table_section(ConcreteClass c);

double free_thermal_strain(double theta, Aggregate aggregate);

StrengthParameters strength_parameters(double theta, const MaterialParams& p);

/// Eurocode compressive branch; eps_m must be <= 0.
double compressive_stress(double eps_m, double theta, const MaterialParams& p);

double tensile_strength(double theta, double f_t_ref);

/// f_c_ref in MPa, result in Pa.
double reference_tensile_strength(double f_c_ref_MPa);

struct ElasticProperties {
    double E_c;
    double nu;
};

double poisson_ratio(double theta);
ElasticProperties elastic_properties(double theta, const MaterialParams& p);

struct StressState {
    double sigma_ht;
    double sigma_tm;
};

double hygro_thermal_stress(const MaterialParams& p, const FluidState& s);
double thermo_mechanical_stress(const MaterialParams& p, double theta);
StressState stresses(const MaterialParams& p, const FluidState& s);

/// Three-parameter failure surface in Haigh-Westergaard coordinates.
double menetrey_willam(double sigma1, double sigma2, double sigma3, double f_c, double f_t,
                       double e_F);

/// Failure function specialised to sigma_1 = sigma_ht, sigma_2 = sigma_3 = sigma_tm.
double failure_function(double sigma_ht, double sigma_tm, double f_c, double f_t, double e_F);
double failure_function(const MaterialParams& p, const FluidState& s);

struct Damage {
    double D;
    double D_m;
    double D_theta;
};

double thermal_damage(const MaterialParams& p, double theta);
Damage damage(const MaterialParams& p, const FluidState& s);

} // namespace spallsim
