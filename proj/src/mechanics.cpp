#include "spallsim/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spallsim {

namespace detail {
extern const std::string_view eurocode_tables_text;
}

namespace {

constexpr std::uint64_t builtin_tables_checksum = 0x6bd137799c6263c5ULL;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void table_error(int line, const std::string& what) {
    throw std::invalid_argument("strength tables, line " + std::to_string(line) + ": " + what);
}

void check_section(const std::string& name, const std::vector<StrengthRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("strength tables: section [" + name + "] too short");
    if (rows.front().theta_C != 20.0 || rows.front().k_c != 1.0)
        throw std::invalid_argument("strength tables: section [" + name + "] must start at 20 C with k_c = 1");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].theta_C > rows[i - 1].theta_C))
            throw std::invalid_argument("strength tables: [" + name + "] temperatures not increasing");
        if (rows[i].k_c > rows[i - 1].k_c)
            throw std::invalid_argument("strength tables: [" + name + "] k_c increases with temperature");
    }
    for (const auto& r : rows)
        if (r.k_c < 0.0 || r.eps_c1 <= 0.0 || r.eps_cu1 <= r.eps_c1)
            throw std::invalid_argument("strength tables: [" + name + "] invalid row");
}

} // namespace

std::uint64_t StrengthTables::checksum(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t StrengthTables::builtin_checksum() { return builtin_tables_checksum; }

StrengthTables StrengthTables::parse(std::string_view text, bool verify_checksum) {
    if (verify_checksum && checksum(text) != builtin_tables_checksum)
        throw std::invalid_argument("strength tables: checksum mismatch");

    StrengthTables out;
    std::string current;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') table_error(lineno, "unterminated section header");
            current = line.substr(1, line.size() - 2);
            if (out.sections_.count(current)) table_error(lineno, "duplicate section " + current);
            out.sections_[current];
            continue;
        }
        std::istringstream fields(line);
        if (line.rfind("version", 0) == 0) {
            std::string key;
            if (!(fields >> key >> out.version_)) table_error(lineno, "bad version line");
            continue;
        }
        if (current.empty()) table_error(lineno, "data row outside a section");
        StrengthRow r{};
        std::string extra;
        if (!(fields >> r.theta_C >> r.k_c >> r.eps_c1 >> r.eps_cu1) || (fields >> extra))
            table_error(lineno, "expected four numbers");
        out.sections_[current].push_back(r);
    }
    if (out.version_ != 1) throw std::invalid_argument("strength tables: unsupported version");
    for (const auto& [name, rows] : out.sections_) check_section(name, rows);
    for (auto cls : {StrengthClass::NSC, StrengthClass::HSC1, StrengthClass::HSC2, StrengthClass::HSC3})
        for (auto agg : {Aggregate::siliceous, Aggregate::calcareous})
            if (!out.sections_.count(table_section({cls, agg})))
                throw std::invalid_argument("strength tables: missing section [" +
                                            table_section({cls, agg}) + "]");
    return out;
}

const StrengthTables& StrengthTables::builtin() {
    static const StrengthTables tables = parse(detail::eurocode_tables_text, true);
    return tables;
}

std::string table_section(ConcreteClass c) {
    if (c.strength == StrengthClass::NSC) return "NSC-" + to_string(c.aggregate);
    return to_string(c.strength);
}

const std::vector<StrengthRow>& StrengthTables::rows(const std::string& section) const {
    auto it = sections_.find(section);
    if (it == sections_.end()) throw std::out_of_range("no strength table [" + section + "]");
    return it->second;
}

const std::vector<StrengthRow>& StrengthTables::rows(ConcreteClass c) const {
    return rows(table_section(c));
}

StrengthRow StrengthTables::at(double theta, ConcreteClass c) const {
    const auto& t = rows(c);
    const double tc = theta - constants::zero_celsius;
    constexpr double slack = 1e-9;
    if (tc < t.front().theta_C - slack || tc > t.back().theta_C + slack)
        throw DomainError("strength tables: temperature outside tabulated range");
    const double x = std::clamp(tc, t.front().theta_C, t.back().theta_C);
    auto hi = std::upper_bound(t.begin(), t.end(), x,
                               [](double v, const StrengthRow& r) { return v < r.theta_C; });
    if (hi == t.end()) return t.back();
    auto lo = hi - 1;
    const double w = (x - lo->theta_C) / (hi->theta_C - lo->theta_C);
    auto lerp = [w](double a, double b) { return a + w * (b - a); };
    return {x, lerp(lo->k_c, hi->k_c), lerp(lo->eps_c1, hi->eps_c1), lerp(lo->eps_cu1, hi->eps_cu1)};
}

double free_thermal_strain(double theta, Aggregate aggregate) {
    if (theta < mechanics_theta_min || theta > mechanics_theta_max)
        throw DomainError("free_thermal_strain: temperature outside [293.15, 1473.15] K");
    const double t = theta - constants::zero_celsius;
    if (aggregate == Aggregate::siliceous) {
        if (theta > 973.15) return 14e-3;
        return -1.8e-4 + 9e-6 * t + 2.3e-11 * t * t * t;
    }
    if (theta > 1078.15) return 12e-3;
    return -1.2e-4 + 6e-6 * t + 1.4e-11 * t * t * t;
}

StrengthParameters strength_parameters(double theta, const MaterialParams& p) {
    const StrengthRow r = StrengthTables::builtin().at(theta, p.concrete_class);
    return {r.k_c * p.f_c_ref, r.eps_c1, r.eps_cu1};
}

double compressive_stress(double eps_m, double theta, const MaterialParams& p) {
    if (eps_m > 0.0) throw std::invalid_argument("compressive_stress: strain must be <= 0");
    const StrengthParameters s = strength_parameters(theta, p);
    if (eps_m <= -s.eps_cu1) return 0.0;
    // Signed peak strain: compression is negative.
    const double e1 = -s.eps_c1;
    const double ratio = eps_m / e1;
    return -3.0 * eps_m * s.f_c / (e1 * (2.0 + ratio * ratio * ratio));
}

double tensile_strength(double theta, double f_t_ref) {
    if (theta <= 373.15) return f_t_ref;
    if (theta <= 823.15) return f_t_ref * (873.15 - theta) / 500.0;
    if (theta <= 1473.15) return f_t_ref * (1473.15 - theta) / 6500.0;
    return 0.0;
}

double reference_tensile_strength(double f_c_ref_MPa) {
    return 2.12 * std::log(1.0 + f_c_ref_MPa / 10.0) * 1e6;
}

double poisson_ratio(double theta) {
    if (theta <= 293.15) return 0.2;
    if (theta <= 873.15) return 0.2 + 0.5 * (theta - 293.15) / 580.0;
    return 0.7;
}

ElasticProperties elastic_properties(double theta, const MaterialParams& p) {
    const StrengthParameters s = strength_parameters(theta, p);
    return {3.0 * s.f_c / (2.0 * s.eps_c1), poisson_ratio(theta)};
}

double hygro_thermal_stress(const MaterialParams& p, const FluidState& s) {
    return s.P * porosity(p, s.theta);
}

double thermo_mechanical_stress(const MaterialParams& p, double theta) {
    const double eps_m = -free_thermal_strain(theta, p.concrete_class.aggregate);
    return compressive_stress(std::min(eps_m, 0.0), theta, p) / (1.0 - poisson_ratio(theta));
}

StressState stresses(const MaterialParams& p, const FluidState& s) {
    return {hygro_thermal_stress(p, s), thermo_mechanical_stress(p, s.theta)};
}

double menetrey_willam(double sigma1, double sigma2, double sigma3, double f_c, double f_t,
                       double e_F) {
    if (!(f_c > 0.0 && f_t > 0.0)) throw DomainError("menetrey_willam: strengths must be positive");
    if (!(e_F > 0.5 && e_F <= 1.0)) throw std::invalid_argument("menetrey_willam: e_F outside (0.5, 1]");

    const double xi = (sigma1 + sigma2 + sigma3) / std::sqrt(3.0);
    const double mean = (sigma1 + sigma2 + sigma3) / 3.0;
    const double s1 = sigma1 - mean, s2 = sigma2 - mean, s3 = sigma3 - mean;
    const double d12 = sigma1 - sigma2, d23 = sigma2 - sigma3, d31 = sigma3 - sigma1;
    const double J2 = (d12 * d12 + d23 * d23 + d31 * d31) / 6.0;
    const double J3 = s1 * s2 * s3;
    const double rho = std::sqrt(2.0 * J2);

    double r;
    if (rho == 0.0) {
        r = 1.0 / e_F;
    } else {
        const double c3 = std::clamp(1.5 * std::sqrt(3.0) * J3 / std::pow(J2, 1.5), -1.0, 1.0);
        const double c = std::cos(std::acos(c3) / 3.0);
        const double a = 1.0 - e_F * e_F;
        const double b = 2.0 * e_F - 1.0;
        r = (4.0 * a * c * c + b * b) /
            (2.0 * a * c + b * std::sqrt(4.0 * a * c * c + 5.0 * e_F * e_F - 4.0 * e_F));
    }

    const double first = std::sqrt(1.5) * rho / f_c;
    const double m = 3.0 * (f_c * f_c - f_t * f_t) / (f_c * f_t) * e_F / (e_F + 1.0);
    return first * first + m * (rho / (std::sqrt(6.0) * f_c) * r + xi / (std::sqrt(3.0) * f_c));
}

double failure_function(double sigma_ht, double sigma_tm, double f_c, double f_t, double e_F) {
    if (!(f_c > 0.0 && f_t > 0.0)) throw DomainError("failure_function: strengths must be positive");
    const double a = (sigma_ht - sigma_tm) / f_c;
    return a * a + (f_c * f_c - f_t * f_t) / (f_c * f_c * f_t) *
                       (sigma_ht + (2.0 * e_F - 1.0) / (e_F + 1.0) * sigma_tm);
}

double failure_function(const MaterialParams& p, const FluidState& s) {
    const StressState st = stresses(p, s);
    const double f_c = strength_parameters(s.theta, p).f_c;
    const double f_t = tensile_strength(s.theta, p.f_t_ref);
    if (!(f_t > 0.0)) throw DomainError("failure_function: tensile strength exhausted");
    return failure_function(st.sigma_ht, st.sigma_tm, f_c, f_t, p.e_F);
}

double thermal_damage(const MaterialParams& p, double theta) {
    const double E_ref = elastic_properties(mechanics_theta_min, p).E_c;
    const double E = elastic_properties(theta, p).E_c;
    const double f_c = strength_parameters(theta, p).f_c;
    const double f_t = tensile_strength(theta, p.f_t_ref);
    const double D = 1.0 - (E / E_ref + f_c / p.f_c_ref + f_t / p.f_t_ref) / 3.0;
    return std::clamp(D, 0.0, 1.0);
}

Damage damage(const MaterialParams& p, const FluidState& s) {
    const double D_theta = thermal_damage(p, s.theta);
    const double F = tensile_strength(s.theta, p.f_t_ref) > 0.0 ? failure_function(p, s) : 1.0;
    const double D_m = std::clamp(F, 0.0, 1.0);
    return {std::clamp(D_m + D_theta - D_m * D_theta, 0.0, 1.0), D_m, D_theta};
}

} // namespace spallsim
