#include "dispatchsim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>

#include "dispatchsim/csv.hpp"
#include "dispatchsim/error.hpp"

namespace dispatchsim {
namespace {

double to_double(const std::string& v) {
    const std::string t = csv::trim(v);
    double x = 0.0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc{} || p != t.data() + t.size() || t.empty()) {
        throw Error(ErrorCode::ParseError, "not a number: '" + t + "'");
    }
    return x;
}

std::uint64_t to_u64(const std::string& v) {
    const std::string t = csv::trim(v);
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc{} || p != t.data() + t.size() || t.empty()) {
        throw Error(ErrorCode::ParseError, "not an unsigned integer: '" + t + "'");
    }
    return x;
}

bool to_bool(const std::string& v) {
    const std::string t = csv::trim(v);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw Error(ErrorCode::ParseError, "not a boolean: '" + t + "'");
}

std::vector<double> to_list(const std::string& v) {
    std::vector<double> out;
    for (const auto& item : csv::split(v, ',')) out.push_back(to_double(item));
    if (out.empty()) throw Error(ErrorCode::ParseError, "empty list");
    return out;
}

Polynomial to_poly(const std::string& v) { return Polynomial(to_list(v)); }

PrefilterKind to_prefilter(const std::string& v) {
    const std::string t = csv::trim(v);
    if (t == "none") return PrefilterKind::None;
    if (t == "lead") return PrefilterKind::Lead;
    if (t == "inverse") return PrefilterKind::Inverse;
    throw Error(ErrorCode::ParseError, "unknown prefilter '" + t + "' (none, lead, inverse)");
}

using Setter = std::function<void(Scenario&, const std::string&)>;

struct Entry {
    ScenarioKey key;
    Setter set;
};

void add_load_keys(std::vector<Entry>& e, const char* prefix, LoadClassParams SystemConfig::*member) {
    const std::string p = prefix;
    auto load = [member](Scenario& s) -> LoadClassParams& { return s.system.*member; };
    // Key names must outlive the table; they are interned in a static set.
    static std::set<std::string> names;
    auto name = [&](const char* suffix) { return names.insert(p + suffix).first->c_str(); };
    e.push_back({{name("_omega_n"), "rad/s, aggregate natural frequency"},
                 [load](Scenario& s, const std::string& v) { load(s).omega_n = to_double(v); }});
    e.push_back({{name("_zeta"), "aggregate damping ratio"},
                 [load](Scenario& s, const std::string& v) { load(s).zeta = to_double(v); }});
    e.push_back({{name("_prefilter"), "none | lead | inverse"},
                 [load](Scenario& s, const std::string& v) { load(s).prefilter.kind = to_prefilter(v); }});
    e.push_back({{name("_lead_tau"), "s, lead time constant"},
                 [load](Scenario& s, const std::string& v) { load(s).prefilter.lead.tau = to_double(v); }});
    e.push_back({{name("_lead_alpha"), "lead pole/zero ratio in (0, 1)"},
                 [load](Scenario& s, const std::string& v) { load(s).prefilter.lead.alpha = to_double(v); }});
    e.push_back({{name("_inverse_alpha"), "inverse design offset in [0, 1)"},
                 [load](Scenario& s, const std::string& v) { load(s).prefilter.inverse_alpha = to_double(v); }});
    e.push_back({{name("_ideal"), "bool, replace the filtered load by 1"},
                 [load](Scenario& s, const std::string& v) { load(s).ideal = to_bool(v); }});
}

const std::vector<Entry>& table() {
    static const std::vector<Entry> entries = [] {
        std::vector<Entry> e;
        e.push_back({{"grid_num", "ascending coefficients of the grid numerator"},
                     [](Scenario& s, const std::string& v) { s.system.grid.num = to_poly(v); }});
        e.push_back({{"grid_den", "ascending coefficients of the grid denominator"},
                     [](Scenario& s, const std::string& v) { s.system.grid.den = to_poly(v); }});
        add_load_keys(e, "pools", &SystemConfig::pools);
        add_load_keys(e, "tcls", &SystemConfig::tcls);
        e.push_back({{"design", "TCL design shortcut: none | lead | inverse | ideal-tcl"},
                     [](Scenario& s, const std::string& v) {
                         s.system = with_design(s.system, parse_design(csv::trim(v)));
                     }});
        e.push_back({{"rho", "TCL share in [0, 1]"},
                     [](Scenario& s, const std::string& v) { s.system.rho = to_double(v); }});
        e.push_back({{"omega_co", "rad/s, actuator low-pass cut-off"},
                     [](Scenario& s, const std::string& v) { s.system.omega_co = to_double(v); }});
        e.push_back({{"allow_omega_co_above_cap", "bool, lift the 0.013 rad/s cap"},
                     [](Scenario& s, const std::string& v) { s.system.allow_omega_co_above_cap = to_bool(v); }});
        e.push_back({{"hp_cutoff", "rad/s, TCL high-pass cut-off"},
                     [](Scenario& s, const std::string& v) { s.system.hp_cutoff = to_double(v); }});
        e.push_back({{"lp_zeta", "actuator low-pass damping"},
                     [](Scenario& s, const std::string& v) { s.system.lp_zeta = to_double(v); }});
        e.push_back({{"hp_zeta", "TCL high-pass damping"},
                     [](Scenario& s, const std::string& v) { s.system.hp_zeta = to_double(v); }});
        e.push_back({{"compensator_beta", "rad/s, PI zero"},
                     [](Scenario& s, const std::string& v) { s.system.compensator_beta = to_double(v); }});
        e.push_back({{"crossover_target", "rad/s, calibrated crossover"},
                     [](Scenario& s, const std::string& v) { s.system.crossover_target = to_double(v); }});
        e.push_back({{"fixed_K", "bool, calibrate K with H = 1"},
                     [](Scenario& s, const std::string& v) { s.system.fixed_K = to_bool(v); }});
        e.push_back({{"rho_grid", "list, sweep values of rho"},
                     [](Scenario& s, const std::string& v) { s.rho_grid = to_list(v); }});
        e.push_back({{"omega_co_grid", "list, rad/s, sweep values of omega_co"},
                     [](Scenario& s, const std::string& v) { s.omega_co_grid = to_list(v); }});
        e.push_back({{"designs", "list of designs for sweeps"},
                     [](Scenario& s, const std::string& v) {
                         s.designs.clear();
                         for (const auto& d : csv::split(v, ',')) s.designs.push_back(parse_design(csv::trim(d)));
                     }});
        e.push_back({{"disturbance_csv", "path; empty selects the synthetic disturbance"},
                     [](Scenario& s, const std::string& v) { s.disturbance_csv = csv::trim(v); }});
        e.push_back({{"time_column", "header name or index"},
                     [](Scenario& s, const std::string& v) { s.disturbance_columns.time_column = csv::trim(v); }});
        e.push_back({{"value_column", "header name or index"},
                     [](Scenario& s, const std::string& v) { s.disturbance_columns.value_column = csv::trim(v); }});
        e.push_back({{"ingest_dt", "s, resampling period on ingest"},
                     [](Scenario& s, const std::string& v) { s.disturbance_columns.dt = to_double(v); }});
        e.push_back({{"seed", "u64, synthetic disturbance seed"},
                     [](Scenario& s, const std::string& v) { s.seed = to_u64(v); }});
        e.push_back({{"synthetic_samples", "samples of synthetic disturbance"},
                     [](Scenario& s, const std::string& v) { s.synthetic_samples = to_u64(v); }});
        e.push_back({{"synthetic_omega_n", "rad/s, synthetic resonance"},
                     [](Scenario& s, const std::string& v) { s.synthetic.omega_n = to_double(v); }});
        e.push_back({{"synthetic_zeta", "synthetic damping"},
                     [](Scenario& s, const std::string& v) { s.synthetic.zeta = to_double(v); }});
        e.push_back({{"synthetic_std_mw", "MW, synthetic standard deviation"},
                     [](Scenario& s, const std::string& v) { s.synthetic.std_mw = to_double(v); }});
        e.push_back({{"synthetic_dt", "s, synthetic sample period"},
                     [](Scenario& s, const std::string& v) { s.synthetic.dt = to_double(v); }});
        e.push_back({{"sim_dt", "s, simulation step"},
                     [](Scenario& s, const std::string& v) { s.sim_dt = to_double(v); }});
        e.push_back({{"psd_method", "ar | welch"},
                     [](Scenario& s, const std::string& v) {
                         const std::string t = csv::trim(v);
                         if (t == "ar") {
                             s.psd_method = PsdMethod::AR;
                         } else if (t == "welch") {
                             s.psd_method = PsdMethod::Welch;
                         } else {
                             throw Error(ErrorCode::ParseError, "unknown psd_method '" + t + "' (ar, welch)");
                         }
                     }});
        e.push_back({{"ar_order", "AR model order"},
                     [](Scenario& s, const std::string& v) { s.ar_order = to_u64(v); }});
        e.push_back({{"welch_segment", "samples per Welch segment"},
                     [](Scenario& s, const std::string& v) { s.welch_segment = to_u64(v); }});
        e.push_back({{"bode_omega_min", "rad/s"},
                     [](Scenario& s, const std::string& v) { s.bode_omega_min = to_double(v); }});
        e.push_back({{"bode_omega_max", "rad/s"},
                     [](Scenario& s, const std::string& v) { s.bode_omega_max = to_double(v); }});
        e.push_back({{"bode_points_per_decade", "grid density"},
                     [](Scenario& s, const std::string& v) {
                         s.bode_points_per_decade = static_cast<int>(to_u64(v));
                     }});
        e.push_back({{"lp_cutoff", "rad/s, decomposition low-pass"},
                     [](Scenario& s, const std::string& v) { s.lp_cutoff = to_double(v); }});
        e.push_back({{"decompose_hp_cutoff", "rad/s, decomposition high-pass"},
                     [](Scenario& s, const std::string& v) { s.decompose_hp_cutoff = to_double(v); }});
        e.push_back({{"omega0", "rad/s, heterogeneity probe frequency"},
                     [](Scenario& s, const std::string& v) { s.omega0 = to_double(v); }});
        e.push_back({{"phi_b", "list, degrees, heterogeneity phases"},
                     [](Scenario& s, const std::string& v) { s.phi_b_deg = to_list(v); }});
        return e;
    }();
    return entries;
}

}  // namespace

const std::vector<ScenarioKey>& scenario_keys() {
    static const std::vector<ScenarioKey> keys = [] {
        std::vector<ScenarioKey> k;
        for (const auto& e : table()) k.push_back(e.key);
        return k;
    }();
    return keys;
}

Scenario parse_scenario(std::istream& in, Scenario base) {
    std::map<std::string, const Entry*, std::less<>> lookup;
    for (const auto& e : table()) lookup.emplace(e.key.name, &e);

    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = csv::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = csv::trim(text.substr(0, eq));
        const std::string value = text.substr(eq + 1);
        const auto it = lookup.find(key);
        if (it == lookup.end()) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": repeated key '" + key + "'");
        }
        try {
            it->second->set(base, value);
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(line_no) + " (" + key + "): " + e.what());
        }
    }
    base.system.validate();
    return base;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open scenario " + path.string());
    return parse_scenario(in);
}

}  // namespace dispatchsim
