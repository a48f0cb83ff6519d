#include "spallsim/scenario.hpp"

#include "spallsim/mechanics.hpp"
#include "spallsim/transport.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace spallsim {

namespace {

constexpr int config_version = 1;
constexpr double emissivity_sb = 0.7 * constants::stefan_boltzmann;

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* first = t.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
    return ec == std::errc{} && ptr == t.data() + t.size();
}

std::vector<double> split_numbers(const std::string& text, char sep) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (item.empty()) continue;
        double v;
        if (!parse_number(item, v)) throw ScenarioError("not a number: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace

// Fire curves -------------------------------------------------------------------------

FireCurve::FireCurve(Kind k, std::vector<double> params) : kind_(k), params_(std::move(params)) {}

FireCurve FireCurve::constant(double theta) { return {Kind::constant, {theta}}; }

FireCurve FireCurve::ramp_plateau(double theta0, double ramp_rise, double ramp_time,
                                  double plateau_rise, double plateau_time) {
    if (!(ramp_time > 0.0 && plateau_time > 0.0))
        throw ScenarioError("ramp_plateau: durations must be positive");
    return {Kind::ramp_plateau, {theta0, ramp_rise, ramp_time, plateau_rise, plateau_time}};
}

FireCurve FireCurve::iso834(double theta0) { return {Kind::iso834, {theta0}}; }

FireCurve FireCurve::parse(const std::string& text) {
    const std::string t = trim(text);
    const auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw ScenarioError("fire curve must look like kind(args): '" + t + "'");
    const std::string kind = trim(t.substr(0, open));
    const std::vector<double> args = split_numbers(t.substr(open + 1, t.size() - open - 2), ',');
    auto expect = [&](std::size_t n) {
        if (args.size() != n)
            throw ScenarioError(kind + " expects " + std::to_string(n) + " argument(s)");
    };
    if (kind == "constant") {
        expect(1);
        return constant(args[0]);
    }
    if (kind == "iso834") {
        expect(1);
        return iso834(args[0]);
    }
    if (kind == "ramp_plateau") {
        expect(5);
        return ramp_plateau(args[0], args[1], args[2], args[3], args[4]);
    }
    throw ScenarioError("unknown fire curve '" + kind + "'");
}

double FireCurve::operator()(double t) const {
    t = std::max(t, 0.0);
    switch (kind_) {
        case Kind::constant: return params_[0];
        case Kind::iso834: return params_[0] + 345.0 * std::log10(8.0 * t / 60.0 + 1.0);
        case Kind::ramp_plateau: {
            const double theta0 = params_[0], rise = params_[1], t_r = params_[2];
            const double plateau_rise = params_[3], t_p = params_[4];
            if (t <= t_r) return theta0 + t * rise / t_r;
            return theta0 + rise + std::min(t - t_r, t_p) * plateau_rise / t_p;
        }
    }
    return params_[0];
}

std::string FireCurve::to_string() const {
    std::string out;
    switch (kind_) {
        case Kind::constant: out = "constant("; break;
        case Kind::iso834: out = "iso834("; break;
        case Kind::ramp_plateau: out = "ramp_plateau("; break;
    }
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (i) out += ", ";
        out += format_double(params_[i]);
    }
    return out + ")";
}

double fire_curve_value(const FireCurve& curve, double t) { return curve(t); }

// Built-in cases ---------------------------------------------------------------------------

namespace {

BoundarySpec unexposed_side(double P0, double theta0) {
    return {FireCurve::constant(theta0), P0, 4.0, emissivity_sb, 0.009};
}

BoundarySpec exposed_side(double P0, FireCurve curve, double alpha_c) {
    return {std::move(curve), P0, alpha_c, emissivity_sb, 0.019};
}

MaterialParams mindeguia_material() {
    MaterialParams m;
    m.f_c_ref = 61e6;
    m.f_t_ref = 3.76e6;
    m.cement = 550.0;
    m.phi_ref = 0.1027;
    m.A_phi = 1.0624e-4;
    m.rho_s = 2660.0;
    m.lambda_d_ref = 2.0153;
    m.A_lambda = -9.8533e-4;
    m.K_ref = 4.0e-20;
    m.concrete_class = {StrengthClass::HSC1, Aggregate::calcareous};
    return m;
}

const std::vector<double> default_probes{0.010, 0.020, 0.030, 0.040, 0.050};

} // namespace

Scenario kalifa_ptm1() {
    Scenario s;
    s.name = "kalifa_ptm1";
    auto& m = s.material;
    m.f_c_ref = 91.8e6;
    m.f_t_ref = 4.9e6;
    m.cement = 414.8;
    m.phi_ref = 0.0897;
    m.A_phi = 2.4457e-5;
    m.rho_s = 2660.0;
    m.lambda_d_ref = 1.9759;
    m.A_lambda = -6.4215e-4;
    m.K_ref = 1.3e-20;
    m.concrete_class = {StrengthClass::HSC2, Aggregate::calcareous};
    s.P0 = 1903.9;
    s.theta0 = 293.15;
    s.ell0 = 0.12;
    s.grading = {30, 30, 60};
    s.unexposed = unexposed_side(s.P0, s.theta0);
    s.exposed = exposed_side(s.P0, FireCurve::ramp_plateau(293.15, 410.0, 300.0, 35.0, 21300.0), 20.0);
    s.solver.dt = 1.0;
    s.solver.gamma = 10.0;
    s.duration = 6.0 * 3600.0;
    s.probe_depths = default_probes;
    return s;
}

Scenario mindeguia_ptm2() {
    Scenario s;
    s.name = "mindeguia_ptm2";
    s.material = mindeguia_material();
    s.P0 = 1919.4;
    s.theta0 = 293.15;
    s.ell0 = 0.12;
    s.grading = {30, 30, 60};
    s.unexposed = unexposed_side(s.P0, s.theta0);
    s.exposed = exposed_side(s.P0, FireCurve::ramp_plateau(293.15, 380.0, 300.0, 50.0, 17700.0), 20.0);
    s.solver.dt = 1.0;
    s.solver.gamma = 10.0;
    s.duration = 5.0 * 3600.0;
    s.probe_depths = default_probes;
    return s;
}

Scenario mindeguia_spalling() {
    Scenario s;
    s.name = "mindeguia_spalling";
    s.material = mindeguia_material();
    s.P0 = 1919.4;
    s.theta0 = 293.15;
    s.ell0 = 0.15;
    s.grading = {40, 40, 80};
    s.unexposed = unexposed_side(s.P0, s.theta0);
    s.exposed = exposed_side(s.P0, FireCurve::iso834(293.15), 25.0);
    s.solver.dt = 1.0;
    s.solver.gamma = 10.0;
    s.duration = 3600.0;
    s.probe_depths = default_probes;
    return s;
}

std::vector<Scenario> builtin_scenarios() { return {kalifa_ptm1(), mindeguia_ptm2(), mindeguia_spalling()}; }

Scenario builtin_scenario(const std::string& name) {
    for (auto& s : builtin_scenarios())
        if (s.name == name) return s;
    throw ScenarioError("unknown built-in scenario '" + name + "'");
}

// Configuration text -------------------------------------------------------------------

namespace {

struct Entry {
    std::string value;
    int line;
};

class Config {
public:
    explicit Config(const std::string& text) {
        std::istringstream in(text);
        std::string raw, section;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            const auto hash = raw.find('#');
            const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(lineno, "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!known_sections().count(section)) fail(lineno, "unknown section [" + section + "]");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty()) fail(lineno, "empty key");
            const std::string full = section.empty() ? key : section + "." + key;
            if (!known_keys().count(full)) fail(lineno, "unknown key '" + full + "'");
            if (entries_.count(full)) fail(lineno, "duplicate key '" + full + "'");
            entries_[full] = {trim(line.substr(eq + 1)), lineno};
        }
    }

    [[noreturn]] static void fail(int line, const std::string& what) {
        throw ScenarioError("line " + std::to_string(line) + ": " + what);
    }

    const Entry& entry(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ScenarioError("missing key '" + key + "'");
        used_.insert(key);
        return it->second;
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string text(const std::string& key) { return entry(key).value; }

    double number(const std::string& key) {
        const Entry& e = entry(key);
        double v;
        if (!parse_number(e.value, v)) fail(e.line, "'" + key + "' is not a number: '" + e.value + "'");
        return v;
    }

    int integer(const std::string& key) {
        const double v = number(key);
        if (v != std::floor(v)) fail(entry(key).line, "'" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key) {
        const Entry& e = entry(key);
        if (e.value == "true") return true;
        if (e.value == "false") return false;
        fail(e.line, "'" + key + "' must be true or false, got '" + e.value + "'");
    }

    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
    int integer_or(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }
    bool boolean_or(const std::string& key, bool fallback) { return has(key) ? boolean(key) : fallback; }

    template <class F>
    auto parsed(const std::string& key, F&& f) {
        const Entry& e = entry(key);
        try {
            return f(e.value);
        } catch (const std::exception& ex) {
            fail(e.line, "'" + key + "': " + ex.what());
        }
    }

    void reject_unused() const {
        for (const auto& [k, e] : entries_)
            if (!used_.count(k)) fail(e.line, "unknown key '" + k + "'");
    }

private:
    static const std::set<std::string>& known_sections() {
        static const std::set<std::string> s{"material", "initial", "mesh", "boundary.unexposed",
                                             "boundary.exposed", "solver", "output"};
        return s;
    }

    static const std::set<std::string>& known_keys() {
        static const std::set<std::string> k{
            "version", "name",
            "material.f_c_ref", "material.f_t_ref", "material.cement", "material.theta_ref",
            "material.phi_ref", "material.A_phi", "material.rho_s", "material.lambda_d_ref",
            "material.A_lambda", "material.K_ref", "material.strength_class", "material.aggregate",
            "material.e_F", "material.tau", "material.m_eq_378", "material.theta_cr",
            "initial.P0", "initial.theta0", "initial.ell0", "mesh.grading",
            "boundary.unexposed.theta_inf", "boundary.unexposed.P_inf", "boundary.unexposed.alpha_c",
            "boundary.unexposed.e_sigma", "boundary.unexposed.beta_c",
            "boundary.exposed.theta_inf", "boundary.exposed.P_inf", "boundary.exposed.alpha_c",
            "boundary.exposed.e_sigma", "boundary.exposed.beta_c",
            "solver.dt", "solver.gamma", "solver.newton_tol", "solver.newton_max_iter",
            "solver.fd_jacobian", "solver.spalling", "solver.dehydration", "solver.duration",
            "output.probes", "output.output_every"};
        return k;
    }

    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

BoundarySpec read_boundary(Config& c, const std::string& side) {
    const std::string p = "boundary." + side + ".";
    BoundarySpec b;
    b.theta_inf = c.parsed(p + "theta_inf", [](const std::string& v) { return FireCurve::parse(v); });
    b.P_inf = c.number(p + "P_inf");
    b.alpha_c = c.number(p + "alpha_c");
    b.e_sigma = c.number(p + "e_sigma");
    b.beta_c = c.number(p + "beta_c");
    return b;
}

void write_boundary(std::ostream& o, const std::string& side, const BoundarySpec& b) {
    o << "\n[boundary." << side << "]\n";
    o << "theta_inf = " << b.theta_inf.to_string() << "\n";
    o << "P_inf = " << format_double(b.P_inf) << "\n";
    o << "alpha_c = " << format_double(b.alpha_c) << "\n";
    o << "e_sigma = " << format_double(b.e_sigma) << "\n";
    o << "beta_c = " << format_double(b.beta_c) << "\n";
}

} // namespace

Scenario load_scenario(const std::string& text) {
    Config c(text);
    if (c.integer("version") != config_version)
        throw ScenarioError("unsupported scenario version (expected " + std::to_string(config_version) + ")");

    Scenario s;
    s.name = c.text("name");
    auto& m = s.material;
    m.f_c_ref = c.number("material.f_c_ref");
    m.f_t_ref = c.number("material.f_t_ref");
    m.cement = c.number("material.cement");
    m.theta_ref = c.number_or("material.theta_ref", m.theta_ref);
    m.phi_ref = c.number("material.phi_ref");
    m.A_phi = c.number("material.A_phi");
    m.rho_s = c.number("material.rho_s");
    m.lambda_d_ref = c.number("material.lambda_d_ref");
    m.A_lambda = c.number("material.A_lambda");
    m.K_ref = c.number("material.K_ref");
    m.concrete_class.strength =
        c.parsed("material.strength_class", [](const std::string& v) { return parse_strength_class(v); });
    m.concrete_class.aggregate =
        c.parsed("material.aggregate", [](const std::string& v) { return parse_aggregate(v); });
    m.e_F = c.number_or("material.e_F", m.e_F);
    m.tau = c.number_or("material.tau", m.tau);
    m.m_eq_378 = c.number_or("material.m_eq_378", m.m_eq_378);
    m.theta_cr = c.number_or("material.theta_cr", m.theta_cr);

    s.P0 = c.number("initial.P0");
    s.theta0 = c.number("initial.theta0");
    s.ell0 = c.number("initial.ell0");

    const auto g = c.parsed("mesh.grading", [](const std::string& v) { return split_numbers(v, ' '); });
    if (g.size() != 3) throw ScenarioError("mesh.grading needs three element counts");
    s.grading = {static_cast<int>(g[0]), static_cast<int>(g[1]), static_cast<int>(g[2])};

    s.unexposed = read_boundary(c, "unexposed");
    s.exposed = read_boundary(c, "exposed");

    s.solver.dt = c.number("solver.dt");
    s.solver.gamma = c.number("solver.gamma");
    s.solver.newton_tol = c.number_or("solver.newton_tol", s.solver.newton_tol);
    s.solver.newton_max_iter = c.integer_or("solver.newton_max_iter", s.solver.newton_max_iter);
    s.solver.fd_jacobian = c.boolean_or("solver.fd_jacobian", s.solver.fd_jacobian);
    s.solver.spalling = c.boolean_or("solver.spalling", s.solver.spalling);
    s.solver.dehydration = c.boolean_or("solver.dehydration", s.solver.dehydration);
    s.duration = c.number("solver.duration");

    if (c.has("output.probes"))
        s.probe_depths = c.parsed("output.probes", [](const std::string& v) { return split_numbers(v, ' '); });
    s.output_every = c.number_or("output.output_every", s.output_every);
    c.reject_unused();
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return load_scenario(ss.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

std::string serialize(const Scenario& s) {
    std::ostringstream o;
    auto num = [&](const char* k, double v) { o << k << " = " << format_double(v) << "\n"; };
    o << "# spallsim scenario\n";
    o << "version = " << config_version << "\n";
    o << "name = " << s.name << "\n";
    const auto& m = s.material;
    o << "\n[material]\n";
    num("f_c_ref", m.f_c_ref);
    num("f_t_ref", m.f_t_ref);
    num("cement", m.cement);
    num("theta_ref", m.theta_ref);
    num("phi_ref", m.phi_ref);
    num("A_phi", m.A_phi);
    num("rho_s", m.rho_s);
    num("lambda_d_ref", m.lambda_d_ref);
    num("A_lambda", m.A_lambda);
    num("K_ref", m.K_ref);
    o << "strength_class = " << to_string(m.concrete_class.strength) << "\n";
    o << "aggregate = " << to_string(m.concrete_class.aggregate) << "\n";
    num("e_F", m.e_F);
    num("tau", m.tau);
    num("m_eq_378", m.m_eq_378);
    num("theta_cr", m.theta_cr);

    o << "\n[initial]\n";
    num("P0", s.P0);
    num("theta0", s.theta0);
    num("ell0", s.ell0);

    o << "\n[mesh]\n";
    o << "grading = " << s.grading.n1 << " " << s.grading.n2 << " " << s.grading.n3 << "\n";

    write_boundary(o, "unexposed", s.unexposed);
    write_boundary(o, "exposed", s.exposed);

    o << "\n[solver]\n";
    num("dt", s.solver.dt);
    num("gamma", s.solver.gamma);
    num("newton_tol", s.solver.newton_tol);
    o << "newton_max_iter = " << s.solver.newton_max_iter << "\n";
    o << "fd_jacobian = " << (s.solver.fd_jacobian ? "true" : "false") << "\n";
    o << "spalling = " << (s.solver.spalling ? "true" : "false") << "\n";
    o << "dehydration = " << (s.solver.dehydration ? "true" : "false") << "\n";
    num("duration", s.duration);

    o << "\n[output]\n";
    o << "probes =";
    for (double d : s.probe_depths) o << " " << format_double(d);
    o << "\n";
    num("output_every", s.output_every);
    return o.str();
}

ValidationReport validate(const Scenario& s) {
    ValidationReport r;
    try {
        spallsim::validate(s.material);
    } catch (const std::invalid_argument& e) {
        r.findings.emplace_back(e.what());
    }
    if (s.name.empty()) r.findings.emplace_back("name is empty");
    if (!(s.P0 > 0.0)) r.findings.emplace_back("P0 must be positive");
    if (!(s.theta0 >= 273.15)) r.findings.emplace_back("theta0 must be at least 273.15 K");
    if (!(s.ell0 > 0.0)) r.findings.emplace_back("ell0 must be positive");
    if (s.grading.n1 < 1 || s.grading.n2 < 1 || s.grading.n3 < 1)
        r.findings.emplace_back("grading counts must be at least 1");
    for (const auto* side : {&s.unexposed, &s.exposed}) {
        const char* name = side == &s.unexposed ? "unexposed" : "exposed";
        if (side->alpha_c < 0.0 || side->beta_c < 0.0 || side->e_sigma < 0.0)
            r.findings.emplace_back(std::string(name) + ": alpha_c, beta_c, e_sigma must be >= 0");
        if (!(side->P_inf > 0.0)) r.findings.emplace_back(std::string(name) + ": P_inf must be positive");
        if (side->theta_inf(0.0) < 273.15)
            r.findings.emplace_back(std::string(name) + ": ambient temperature below 273.15 K");
    }
    if (!(s.solver.dt > 0.0)) r.findings.emplace_back("dt must be positive");
    if (!(s.solver.gamma > 0.0)) r.findings.emplace_back("gamma must be positive");
    if (!(s.solver.newton_tol > 0.0)) r.findings.emplace_back("newton_tol must be positive");
    if (s.solver.newton_max_iter < 1) r.findings.emplace_back("newton_max_iter must be >= 1");
    if (!(s.duration >= 0.0)) r.findings.emplace_back("duration must be >= 0");
    if (!(s.output_every > 0.0)) r.findings.emplace_back("output_every must be positive");
    for (double d : s.probe_depths)
        if (!(d > 0.0 && d < s.ell0))
            r.findings.emplace_back("probe depth " + format_double(d) + " outside (0, ell0)");

    if (r.ok()) {
        const FluidState init{s.P0, s.theta0};
        r.S_w0 = sorption(s.material, init).S_w;
        r.m0 = moisture_content(s.material, init);
    }
    return r;
}

} // namespace spallsim
