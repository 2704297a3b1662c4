#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dispatchsim/models.hpp"
#include "dispatchsim/signal.hpp"

namespace dispatchsim {

enum class PsdMethod { AR, Welch };

/// A SystemConfig plus the settings of the command-line drivers.
///
/// Files hold one `key = value` per line; `#` starts a comment. Lists are
/// comma-separated. Every key is optional, unknown or repeated keys are
/// errors. Keys and units are listed in `scenario_keys()`.
struct Scenario {
    SystemConfig system;

    std::vector<double> rho_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> omega_co_grid{0.001, 0.003, 0.005, 0.007};
    std::vector<Design> designs{Design::Lead};

    std::string disturbance_csv;       // empty: synthetic disturbance
    ColumnSpec disturbance_columns;
    std::optional<std::uint64_t> seed;
    std::size_t synthetic_samples = 2016;  // one week at 300 s
    SyntheticReserveParams synthetic;

    double sim_dt = 60.0;              // s
    PsdMethod psd_method = PsdMethod::AR;
    std::size_t ar_order = 24;
    std::size_t welch_segment = 256;   // samples

    double bode_omega_min = 1e-6;      // rad/s
    double bode_omega_max = 10.0;      // rad/s
    int bode_points_per_decade = 50;

    double lp_cutoff = 2e-5;           // rad/s, decomposition low-pass
    double decompose_hp_cutoff = 5e-3; // rad/s, decomposition high-pass

    double omega0 = 0.01;              // rad/s, heterogeneity probe
    std::vector<double> phi_b_deg{0.0, 45.0, 90.0, 135.0, 180.0};
};

struct ScenarioKey {
    const char* name;
    const char* help;
};

const std::vector<ScenarioKey>& scenario_keys();

/// Throws ParseError (with the line number) or InvalidArgument.
Scenario parse_scenario(std::istream& in, Scenario base = {});
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace dispatchsim
