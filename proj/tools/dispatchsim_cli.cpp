#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "dispatchsim/analysis.hpp"
#include "dispatchsim/config.hpp"
#include "dispatchsim/csv.hpp"
#include "dispatchsim/error.hpp"
#include "dispatchsim/simulate.hpp"
#include "dispatchsim/spectral.hpp"

namespace fs = std::filesystem;
using namespace dispatchsim;

namespace {

struct Common {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned workers = 1;
};

Scenario scenario_of(const Common& c) {
    Scenario s = c.scenario.empty() ? Scenario{} : load_scenario(c.scenario);
    if (c.seed) s.seed = c.seed;
    return s;
}

// Writes to the --out file, or to stdout when none is given.
template <typename F>
void emit(const std::string& out, F&& write) {
    if (out.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream f = csv::open_output(out);
    write(f);
}

fs::path out_dir(const std::string& out) {
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "--out <directory> is required");
    fs::create_directories(out);
    return out;
}

Signal disturbance(const Scenario& s, const std::string& csv_override) {
    const std::string path = csv_override.empty() ? s.disturbance_csv : csv_override;
    if (!path.empty()) return ingest_csv(path, s.disturbance_columns);
    if (!s.seed) throw Error(ErrorCode::InvalidArgument, "--seed is required when no disturbance CSV is given");
    return synthetic_reserves(s.synthetic_samples, *s.seed, s.synthetic);
}

PsdMethodSpec psd_method(const Scenario& s) {
    if (s.psd_method == PsdMethod::AR) return PsdMethodSpec::ar(s.ar_order);
    return PsdMethodSpec::welch(s.welch_segment, s.welch_segment / 2);
}

TransferFunction select_tf(const std::string& name, const SystemConfig& cfg) {
    if (name == "Gp") return grid_model(cfg.grid);
    const LoopAnalysis a = analyze_loop(cfg);
    if (name == "Gc") return a.model.G_c;
    if (name == "H") return a.model.actuators.H;
    if (name == "HB") return a.model.actuators.H_B;
    if (name == "L") return a.L;
    if (name == "S") return a.S;
    if (name == "YD") return a.YoverD;
    if (name == "UaD") return a.UaOverD;
    throw Error(ErrorCode::InvalidArgument, "unknown transfer function '" + name + "'");
}

void add_common(CLI::App* cmd, Common& c, bool with_seed, bool with_workers) {
    cmd->add_option("--scenario", c.scenario, "Scenario file (key = value)")->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output path");
    if (with_seed) cmd->add_option("--seed", c.seed, "Seed of the synthetic disturbance");
    if (with_workers) cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Demand-dispatch grid regulation analysis"};
    app.require_subcommand(1);
    Common common;

    auto* bode = app.add_subcommand("bode", "Frequency response of one loop transfer function");
    std::string tf_name = "L";
    add_common(bode, common, false, false);
    bode->add_option("--tf", tf_name, "Gp | Gc | H | HB | L | S | YD | UaD")
        ->check(CLI::IsMember({"Gp", "Gc", "H", "HB", "L", "S", "YD", "UaD"}));
    std::optional<double> rho_override;
    std::optional<double> omega_co_override;
    bode->add_option("--rho", rho_override, "Override the scenario rho");
    bode->add_option("--omega-co", omega_co_override, "Override the scenario omega_co (rad/s)");

    auto* sweep = app.add_subcommand("cost-sweep", "Mean-square cost J over rho x omega_co");
    add_common(sweep, common, true, true);
    std::vector<std::string> design_names;
    std::string sweep_disturbance;
    sweep->add_option("--design", design_names, "none | lead | inverse | ideal-tcl (repeatable)");
    sweep->add_option("--disturbance", sweep_disturbance, "Disturbance CSV");

    auto* sim = app.add_subcommand("simulate", "Disturbance rejection in the time domain");
    add_common(sim, common, true, false);
    std::string sim_disturbance;
    sim->add_option("--disturbance", sim_disturbance, "Disturbance CSV");

    auto* dec = app.add_subcommand("decompose", "Split a reserve signal into three frequency bands");
    add_common(dec, common, true, false);
    std::string dec_input;
    std::optional<double> lp_cut;
    std::optional<double> hp_cut;
    dec->add_option("--input", dec_input, "Reserve CSV (synthetic when omitted)");
    dec->add_option("--lp-cutoff", lp_cut, "rad/s");
    dec->add_option("--hp-cutoff", hp_cut, "rad/s");

    auto* margin = app.add_subcommand("margin", "Closed-loop verdict and margins at rho = 1");
    add_common(margin, common, false, false);
    std::vector<std::string> margin_designs;
    margin->add_option("--design", margin_designs, "none | lead | inverse | ideal-tcl (repeatable)");

    auto* psd = app.add_subcommand("psd", "Disturbance power spectral density");
    add_common(psd, common, true, false);
    std::string psd_disturbance;
    psd->add_option("--disturbance", psd_disturbance, "Disturbance CSV");

    auto* het = app.add_subcommand("heterogeneity", "Single-frequency heterogeneity cost k0(rho)");
    add_common(het, common, false, false);

    auto* keys = app.add_subcommand("scenario-keys", "List the keys accepted in scenario files");

    CLI11_PARSE(app, argc, argv);

    try {
        Scenario s = scenario_of(common);
        auto designs_of = [&](const std::vector<std::string>& names) {
            std::vector<Design> d;
            for (const auto& n : names) d.push_back(parse_design(n));
            return d.empty() ? s.designs : d;
        };

        if (*bode) {
            SystemConfig cfg = s.system;
            if (rho_override) cfg.rho = *rho_override;
            if (omega_co_override) cfg.omega_co = *omega_co_override;
            const auto points = bode_data(select_tf(tf_name, cfg), s.bode_omega_min, s.bode_omega_max,
                                          s.bode_points_per_decade);
            emit(common.out, [&](std::ostream& o) { write_bode_csv(o, points); });
        } else if (*sweep) {
            const PsdEstimate p = estimate_psd(disturbance(s, sweep_disturbance), psd_method(s));
            std::vector<CostCell> cells;
            for (Design d : designs_of(design_names)) {
                const auto part = cost_sweep(with_design(s.system, d), s.rho_grid, s.omega_co_grid, p, common.workers);
                cells.insert(cells.end(), part.begin(), part.end());
            }
            emit(common.out, [&](std::ostream& o) { write_sweep_csv(o, cells); });
        } else if (*sim) {
            const fs::path dir = out_dir(common.out);
            const SimResult r = simulate_closed_loop(s.system, disturbance(s, sim_disturbance), {s.sim_dt});
            write_signal_csv(dir / "Y.csv", r.Y);
            write_signal_csv(dir / "U.csv", r.U);
            write_signal_csv(dir / "Ua.csv", r.U_a);
            std::ofstream f = csv::open_output(dir / "summary.csv");
            csv::Writer w(f);
            w.header({"verdict", "diverged", "rms_Y_MW", "rms_U_MW", "rms_Ua_MW"});
            w.field(to_string(r.verdict)).field(r.diverged ? "true" : "false").field(r.rms_Y).field(r.rms_U).field(r.rms_Ua);
            w.end_row();
            fmt::print("verdict={} diverged={} rms_Y={:.6g} MW rms_U={:.6g} MW rms_Ua={:.6g} MW\n", to_string(r.verdict),
                       r.diverged, r.rms_Y, r.rms_U, r.rms_Ua);
        } else if (*dec) {
            const fs::path dir = out_dir(common.out);
            const Signal u = disturbance(s, dec_input);
            const BandDecomposition b = decompose_reserves(u, lp_cut.value_or(s.lp_cutoff), hp_cut.value_or(s.decompose_hp_cutoff));
            write_signal_csv(dir / "U_lp.csv", b.U_lp);
            write_signal_csv(dir / "U_mp.csv", b.U_mp);
            write_signal_csv(dir / "U_hp.csv", b.U_hp);
        } else if (*margin) {
            std::vector<std::pair<Design, MarginRow>> rows;
            for (Design d : designs_of(margin_designs)) {
                for (const auto& r : stability_boundary(s.system, d, s.omega_co_grid)) rows.emplace_back(d, r);
            }
            emit(common.out, [&](std::ostream& o) {
                csv::Writer w(o);
                w.header({"design", "omega_co_rad_s", "verdict", "max_real_part", "M_S", "vector_margin"});
                for (const auto& [d, r] : rows) {
                    w.field(to_string(d)).field(r.omega_co).field(to_string(r.verdict)).field(r.max_real_part);
                    w.field(r.M_S).field(r.vector_margin).end_row();
                }
            });
        } else if (*psd) {
            const PsdEstimate p = estimate_psd(disturbance(s, psd_disturbance), psd_method(s));
            emit(common.out, [&](std::ostream& o) { write_psd_csv(o, p); });
        } else if (*het) {
            const TransferFunction la = perfect_loop(s.system);
            std::vector<HeterogeneityCurve> curves;
            for (double phi : s.phi_b_deg) curves.push_back(heterogeneity_cost(la, s.omega0, phi, s.rho_grid));
            emit(common.out, [&](std::ostream& o) { write_heterogeneity_csv(o, curves); });
        } else if (*keys) {
            for (const auto& k : scenario_keys()) fmt::print("{:<26} {}\n", k.name, k.help);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
