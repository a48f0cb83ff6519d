#include "spallsim/mechanics.hpp"
#include "spallsim/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace spallsim;

namespace {

MaterialParams kalifa() { return kalifa_ptm1().material; }
MaterialParams mindeguia() { return mindeguia_ptm2().material; }

MaterialParams with_class(StrengthClass s, Aggregate a) {
    auto p = kalifa();
    p.concrete_class = {s, a};
    return p;
}

} // namespace

TEST(ThermalStrain, Oracles) {
    EXPECT_LT(std::abs(free_thermal_strain(293.15, Aggregate::siliceous)), 5e-7);
    EXPECT_LT(std::abs(free_thermal_strain(293.15, Aggregate::calcareous)), 5e-7);
    EXPECT_EQ(free_thermal_strain(1000.0, Aggregate::siliceous), 14e-3);
    EXPECT_EQ(free_thermal_strain(1100.0, Aggregate::calcareous), 12e-3);
    EXPECT_THROW(free_thermal_strain(280.0, Aggregate::siliceous), DomainError);
    EXPECT_THROW(free_thermal_strain(1500.0, Aggregate::calcareous), DomainError);
}

TEST(ThermalStrain, NonNegative) {
    for (double t = 293.15; t <= 1473.15; t += 5.0) {
        EXPECT_GE(free_thermal_strain(t, Aggregate::siliceous), -5e-7);
        EXPECT_GE(free_thermal_strain(t, Aggregate::calcareous), -5e-7);
    }
}

TEST(StrengthTables, BuiltinChecksumAndVersion) {
    const auto& t = StrengthTables::builtin();
    EXPECT_EQ(t.version(), 1);
    EXPECT_EQ(StrengthTables::builtin_checksum(), 0x6bd137799c6263c5ULL);
}

TEST(StrengthTables, MidTableRows) {
    const auto& t = StrengthTables::builtin();
    EXPECT_DOUBLE_EQ(t.at(873.15, {StrengthClass::NSC, Aggregate::siliceous}).k_c, 0.45);
    EXPECT_DOUBLE_EQ(t.at(873.15, {StrengthClass::NSC, Aggregate::calcareous}).k_c, 0.60);
    EXPECT_DOUBLE_EQ(t.at(373.15, {StrengthClass::HSC1, Aggregate::siliceous}).k_c, 0.90);
    EXPECT_DOUBLE_EQ(t.at(673.15, {StrengthClass::HSC2, Aggregate::siliceous}).k_c, 0.75);
    EXPECT_DOUBLE_EQ(t.at(473.15, {StrengthClass::HSC3, Aggregate::siliceous}).k_c, 0.70);
    EXPECT_DOUBLE_EQ(t.at(773.15, {StrengthClass::NSC, Aggregate::siliceous}).eps_c1, 0.015);
    EXPECT_NEAR(t.at(823.15, {StrengthClass::NSC, Aggregate::siliceous}).k_c, 0.525, 1e-12);
}

TEST(StrengthTables, Monotone) {
    for (const char* sec : {"NSC-siliceous", "NSC-calcareous", "HSC1", "HSC2", "HSC3"}) {
        const auto& rows = StrengthTables::builtin().rows(std::string(sec));
        ASSERT_FALSE(rows.empty());
        EXPECT_EQ(rows.front().theta_C, 20.0);
        EXPECT_EQ(rows.front().k_c, 1.0);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            EXPECT_GT(rows[i].theta_C, rows[i - 1].theta_C) << sec;
            EXPECT_LE(rows[i].k_c, rows[i - 1].k_c) << sec;
        }
    }
}

TEST(StrengthTables, ParseRejectsBadInput) {
    std::ifstream in(SPALLSIM_DATA_DIR "/eurocode_tables.txt");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    ASSERT_NO_THROW(StrengthTables::parse(text, true));

    auto replaced = [&](const std::string& from, const std::string& to) {
        std::string t = text;
        const auto pos = t.find(from);
        EXPECT_NE(pos, std::string::npos) << from;
        return t.replace(pos, from.size(), to);
    };
    EXPECT_THROW(StrengthTables::parse(replaced("300   0.85  0.0070", "300   0.99  0.0070")), std::invalid_argument);
    EXPECT_THROW(StrengthTables::parse(replaced("300   0.85  0.0070", "150   0.85  0.0070")), std::invalid_argument);
    EXPECT_THROW(StrengthTables::parse(replaced("version 1", "version 2")), std::invalid_argument);
    EXPECT_THROW(StrengthTables::parse(replaced("400   0.75  0.0100  0.0300", "400   0.75  0.0100")),
                 std::invalid_argument);
    EXPECT_THROW(StrengthTables::parse(replaced("[HSC3]", "[HSC4]")), std::invalid_argument);
    EXPECT_THROW(StrengthTables::parse(replaced("0.0475", "0.0476"), true), std::invalid_argument);
}

TEST(StrengthParameters, AmbientAndRange) {
    for (auto s : {StrengthClass::NSC, StrengthClass::HSC1, StrengthClass::HSC2, StrengthClass::HSC3})
        for (auto a : {Aggregate::siliceous, Aggregate::calcareous}) {
            const auto p = with_class(s, a);
            EXPECT_DOUBLE_EQ(strength_parameters(293.15, p).f_c, p.f_c_ref);
        }
    EXPECT_THROW(strength_parameters(280.0, kalifa()), DomainError);
    EXPECT_THROW(strength_parameters(1500.0, kalifa()), DomainError);
}

TEST(CompressiveStress, Branches) {
    const auto p = kalifa();
    const double t = 573.15;
    const auto sp = strength_parameters(t, p);
    EXPECT_EQ(compressive_stress(0.0, t, p), 0.0);
    EXPECT_NEAR(compressive_stress(-sp.eps_c1, t, p), -sp.f_c, 1e-6 * sp.f_c);
    EXPECT_EQ(compressive_stress(-sp.eps_cu1, t, p), 0.0);
    EXPECT_EQ(compressive_stress(-1.5 * sp.eps_cu1, t, p), 0.0);
    EXPECT_THROW(compressive_stress(1e-4, t, p), std::invalid_argument);
}

TEST(TensileStrength, Branches) {
    EXPECT_EQ(tensile_strength(300.0, 4.9e6), 4.9e6);
    EXPECT_EQ(tensile_strength(373.15, 4.9e6), 4.9e6);
    EXPECT_EQ(tensile_strength(1500.0, 4.9e6), 0.0);
    double prev = 4.9e6;
    for (double t = 293.15; t < 1500.0; t += 10.0) {
        const double v = tensile_strength(t, 4.9e6);
        EXPECT_LE(v, prev);
        prev = v;
    }
    EXPECT_NEAR(reference_tensile_strength(91.8), 4.9193e6, 1e2);
    EXPECT_NEAR(reference_tensile_strength(91.8), 4.9e6, 0.05e6);
}

TEST(Elastic, Poisson) {
    EXPECT_DOUBLE_EQ(poisson_ratio(293.15), 0.2);
    EXPECT_DOUBLE_EQ(poisson_ratio(873.15), 0.7);
    EXPECT_DOUBLE_EQ(poisson_ratio(1000.0), 0.7);
    EXPECT_NEAR(poisson_ratio(583.15), 0.45, 1e-12);
}

TEST(Elastic, Modulus) {
    const auto p = kalifa();
    const auto sp = strength_parameters(293.15, p);
    EXPECT_DOUBLE_EQ(elastic_properties(293.15, p).E_c, 1.5 * sp.f_c / sp.eps_c1);
    for (double t = 293.15; t < 1400.0; t += 50.0) EXPECT_GT(elastic_properties(t, p).E_c, 0.0);
}

TEST(Stresses, HygroThermal) {
    const auto p = kalifa();
    EXPECT_EQ(hygro_thermal_stress(p, {0.0, 293.15}), 0.0);
    EXPECT_NEAR(hygro_thermal_stress(p, {1e6, 293.15}), 8.97e4, 1e-6);
    auto q = p;
    q.phi_ref = 0.1;
    EXPECT_NEAR(hygro_thermal_stress(q, {2.5e6, 293.15}), 2.5e5, 1e-6);
}

TEST(Stresses, ThermoMechanical) {
    const auto p = kalifa();
    EXPECT_NEAR(thermo_mechanical_stress(p, 293.15), 0.0, 1e-3 * p.f_c_ref);
    const double t = 473.15;
    const double expected = compressive_stress(-free_thermal_strain(t, p.concrete_class.aggregate), t, p) /
                            (1.0 - poisson_ratio(t));
    EXPECT_DOUBLE_EQ(thermo_mechanical_stress(p, t), expected);
    for (double th = 293.15; th <= 1473.15; th += 10.0) EXPECT_LE(thermo_mechanical_stress(p, th), 0.0);
}

TEST(FailureSurface, SurfaceIdentities) {
    const auto p = kalifa();
    for (double t : {293.15, 473.15, 673.15}) {
        const double fc = strength_parameters(t, p).f_c, ft = tensile_strength(t, p.f_t_ref);
        EXPECT_NEAR(failure_function(0.0, 0.0, fc, ft, p.e_F), 0.0, 1e-9);
        EXPECT_NEAR(failure_function(ft, 0.0, fc, ft, p.e_F), 1.0, 1e-9);
        EXPECT_NEAR(menetrey_willam(0.0, 0.0, 0.0, fc, ft, p.e_F), 0.0, 1e-9);
        EXPECT_NEAR(menetrey_willam(ft, 0.0, 0.0, fc, ft, p.e_F), 1.0, 1e-6);
    }
}

TEST(FailureSurface, GeneralFormReducesToSpecialised) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> fc(20e6, 100e6), ratio(0.03, 0.12), ht(0.0, 5e6), tm(-60e6, 0.0),
        eF(0.501, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double f_c = fc(rng), f_t = ratio(rng) * f_c, s1 = ht(rng), s2 = tm(rng), e = eF(rng);
        const double a = menetrey_willam(s1, s2, s2, f_c, f_t, e);
        const double b = failure_function(s1, s2, f_c, f_t, e);
        ASSERT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(b))) << k;
    }
}

TEST(FailureSurface, IncreasingInTension) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ht(0.0, 5e6), tm(-60e6, 0.0);
    for (int k = 0; k < 200; ++k) {
        const double s1 = ht(rng), s2 = tm(rng), h = 1e3;
        EXPECT_GT(failure_function(s1 + h, s2, 80e6, 4.5e6, 0.505), failure_function(s1, s2, 80e6, 4.5e6, 0.505));
    }
}

TEST(FailureSurface, HydrostaticStateIsFinite) {
    EXPECT_TRUE(std::isfinite(menetrey_willam(-1e6, -1e6, -1e6, 50e6, 4e6, 0.6)));
    EXPECT_TRUE(std::isfinite(menetrey_willam(1e6, 1e6, 1e6, 50e6, 4e6, 0.6)));
}

TEST(FailureSurface, DegradedMaterialRejected) {
    EXPECT_THROW(failure_function(1e5, -1e6, 50e6, 0.0, 0.505), DomainError);
}

TEST(FailureSurface, MaterialOverload) {
    const auto p = mindeguia();
    const FluidState s{2e6, 500.0};
    const auto st = stresses(p, s);
    EXPECT_DOUBLE_EQ(failure_function(p, s), failure_function(st.sigma_ht, st.sigma_tm,
                                                               strength_parameters(500.0, p).f_c,
                                                               tensile_strength(500.0, p.f_t_ref), p.e_F));
}

TEST(Damage, Combination) {
    const auto p = kalifa();
    EXPECT_NEAR(thermal_damage(p, 293.15), 0.0, 1e-12);
    const auto d0 = damage(p, {1000.0, 293.15});
    EXPECT_NEAR(d0.D, d0.D_m, 1e-12);
    for (double t = 293.15; t < 1400.0; t += 25.0)
        for (double P : {1e3, 1e5, 1e6, 3e6}) {
            const auto d = damage(p, {P, t});
            ASSERT_GE(d.D, 0.0);
            ASSERT_LE(d.D, 1.0);
            ASSERT_GE(d.D_m, 0.0);
            ASSERT_LE(d.D_m, 1.0);
            ASSERT_GE(d.D_theta, 0.0);
            ASSERT_LE(d.D_theta, 1.0);
            ASSERT_GE(d.D + 1e-15, std::max(d.D_m, d.D_theta));
        }
}
