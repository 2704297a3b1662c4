#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <vector>

#include "dispatchsim/analysis.hpp"
#include "dispatchsim/config.hpp"
#include "dispatchsim/error.hpp"
#include "dispatchsim/filters.hpp"
#include "dispatchsim/simulate.hpp"
#include "dispatchsim/spectral.hpp"

namespace py = pybind11;
using namespace dispatchsim;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

Signal to_signal(const Array& values, double dt) { return Signal({values.data(), values.data() + values.size()}, dt); }

Polynomial to_poly(const std::vector<double>& c) { return Polynomial(c); }

py::dict bode_dict(const std::vector<FreqPoint>& pts) {
    std::vector<double> w, mag, ph;
    for (const auto& p : pts) {
        w.push_back(p.omega);
        mag.push_back(p.magnitude_db);
        ph.push_back(p.phase_deg);
    }
    py::dict d;
    d["omega"] = to_array(w);
    d["magnitude_db"] = to_array(mag);
    d["phase_deg"] = to_array(ph);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Demand-dispatch control analysis core";

    static py::exception<Error> error(m, "DispatchError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    py::enum_<StabilityVerdict>(m, "StabilityVerdict")
        .value("Stable", StabilityVerdict::Stable)
        .value("Marginal", StabilityVerdict::Marginal)
        .value("Unstable", StabilityVerdict::Unstable);

    py::enum_<Design>(m, "Design")
        .value("NoPrefilter", Design::None)
        .value("Lead", Design::Lead)
        .value("Inverse", Design::Inverse)
        .value("IdealTcl", Design::IdealTcl);

    py::class_<TransferFunction>(m, "TransferFunction")
        .def(py::init<>())
        .def(py::init([](const std::vector<double>& num, const std::vector<double>& den) {
                 return TransferFunction(to_poly(num), to_poly(den));
             }),
             py::arg("num"), py::arg("den"), "Ascending coefficients in s.")
        .def_property_readonly("num", [](const TransferFunction& t) { return t.num().coeffs(); })
        .def_property_readonly("den", [](const TransferFunction& t) { return t.den().coeffs(); })
        .def("at", &TransferFunction::at, py::arg("omega"))
        .def("__call__", [](const TransferFunction& t, Complex s) { return t(s); })
        .def("__add__", [](const TransferFunction& a, const TransferFunction& b) { return a + b; })
        .def("__mul__", [](const TransferFunction& a, const TransferFunction& b) { return a * b; })
        .def("__mul__", [](const TransferFunction& a, double k) { return a * k; })
        .def("__rmul__", [](const TransferFunction& a, double k) { return a * k; });

    m.def("feedback", &tf_feedback, py::arg("forward"));
    m.def("poles", [](const TransferFunction& t) { return poles(t).roots; });
    m.def("zeros", [](const TransferFunction& t) { return zeros(t).roots; });
    m.def("is_stable", &is_stable);
    m.def("dc_gain", &dc_gain);
    m.def("freq_response", [](const TransferFunction& t, const Array& w) {
        const auto pts = eval_freq(t, std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
        std::vector<Complex> out;
        for (const auto& p : pts) out.push_back(p.value);
        return out;
    });
    m.def(
        "bode",
        [](const TransferFunction& t, double lo, double hi, int ppd) { return bode_dict(bode_data(t, lo, hi, ppd)); },
        py::arg("tf"), py::arg("omega_min") = 1e-6, py::arg("omega_max") = 10.0, py::arg("points_per_decade") = 50);

    m.def("butterworth_lowpass", [](double wc, double zeta) { return butterworth2_lowpass({wc, zeta}); },
          py::arg("omega_c"), py::arg("zeta") = std::numbers::sqrt2 / 2.0);
    m.def("butterworth_highpass", [](double wc, double zeta) { return butterworth2_highpass({wc, zeta}); },
          py::arg("omega_c"), py::arg("zeta") = std::numbers::sqrt2 / 2.0);
    m.def("lead", [](double tau, double alpha) { return lead2({tau, alpha}); }, py::arg("tau"), py::arg("alpha"));
    m.def("inverse_prefilter", &inverse_prefilter, py::arg("alpha"), py::arg("load"));
    m.def("ercot_grid", &ercot_grid);

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("rho", &SystemConfig::rho)
        .def_readwrite("omega_co", &SystemConfig::omega_co)
        .def_readwrite("allow_omega_co_above_cap", &SystemConfig::allow_omega_co_above_cap)
        .def_readwrite("hp_cutoff", &SystemConfig::hp_cutoff)
        .def_readwrite("compensator_beta", &SystemConfig::compensator_beta)
        .def_readwrite("crossover_target", &SystemConfig::crossover_target)
        .def_readwrite("fixed_K", &SystemConfig::fixed_K)
        .def("validate", &SystemConfig::validate)
        .def("with_design", [](const SystemConfig& c, Design d) { return with_design(c, d); });

    m.def("lead_preset", &lead_preset);
    m.def("inverse_preset", &inverse_preset);
    m.def("no_prefilter_preset", &no_prefilter_preset);
    m.def("ideal_tcl_preset", &ideal_tcl_preset);
    m.def("load_scenario", [](const std::string& path) { return load_scenario(path).system; }, py::arg("path"),
          "System configuration of a scenario file.");

    m.def("loop_tf", &loop_tf);
    m.def("perfect_loop", &perfect_loop);

    py::class_<LoopAnalysis>(m, "LoopAnalysis")
        .def_readonly("L", &LoopAnalysis::L)
        .def_readonly("S", &LoopAnalysis::S)
        .def_readonly("YoverD", &LoopAnalysis::YoverD)
        .def_readonly("UoverD", &LoopAnalysis::UoverD)
        .def_readonly("UaOverD", &LoopAnalysis::UaOverD)
        .def_property_readonly("K", [](const LoopAnalysis& a) { return a.model.K; })
        .def_property_readonly("closed_loop_poles", [](const LoopAnalysis& a) { return a.closed_loop.roots; })
        .def_readonly("verdict", &LoopAnalysis::verdict)
        .def_readonly("max_real_part", &LoopAnalysis::max_real_part)
        .def_readonly("M_S", &LoopAnalysis::M_S)
        .def_readonly("M_a", &LoopAnalysis::M_a)
        .def_readonly("vector_margin", &LoopAnalysis::vector_margin)
        .def_readonly("omega_peak_S", &LoopAnalysis::omega_peak_S);
    m.def("analyze_loop", &analyze_loop, py::arg("config"));

    m.def(
        "heterogeneity_cost",
        [](const TransferFunction& la, double w0, double phi, const std::vector<double>& grid) {
            const HeterogeneityCurve c = heterogeneity_cost(la, w0, phi, grid);
            py::dict d;
            d["rho"] = to_array(c.rho_grid);
            d["k0"] = to_array(c.k0_values);
            d["slope_at_1"] = c.slope_at_1;
            return d;
        },
        py::arg("L_a"), py::arg("omega0"), py::arg("phi_B_deg"), py::arg("rho_grid"));

    py::class_<PsdEstimate>(m, "PsdEstimate")
        .def_property_readonly("omega", [](const PsdEstimate& p) { return to_array(p.omegas); })
        .def_property_readonly("density", [](const PsdEstimate& p) { return to_array(p.density); })
        .def_readonly("nyquist", &PsdEstimate::nyquist)
        .def_readonly("variance", &PsdEstimate::variance)
        .def("at", &PsdEstimate::at);
    m.def(
        "estimate_psd",
        [](const Array& x, double dt, const std::string& method, std::size_t order, std::size_t segment) {
            if (method != "ar" && method != "welch") throw Error(ErrorCode::InvalidArgument, "method is ar or welch");
            const PsdMethodSpec spec = method == "welch" ? PsdMethodSpec::welch(segment, segment / 2)
                                                         : PsdMethodSpec::ar(order);
            return estimate_psd(to_signal(x, dt), spec);
        },
        py::arg("x"), py::arg("dt"), py::arg("method") = "ar", py::arg("ar_order") = 24, py::arg("segment") = 256);
    m.def("mean_square_cost", &mean_square_cost, py::arg("psd"), py::arg("tf"));
    m.def(
        "cost_sweep",
        [](const SystemConfig& base, const std::vector<double>& rho, const std::vector<double>& wco,
           const PsdEstimate& psd, unsigned workers) {
            std::vector<py::dict> rows;
            for (const auto& c : cost_sweep(base, rho, wco, psd, workers)) {
                py::dict d;
                d["design"] = c.design;
                d["rho"] = c.rho;
                d["omega_co"] = c.omega_co;
                d["J"] = c.J;
                d["stable"] = c.stable;
                rows.push_back(std::move(d));
            }
            return rows;
        },
        py::arg("config"), py::arg("rho_grid"), py::arg("omega_co_grid"), py::arg("psd"), py::arg("workers") = 1);

    m.def(
        "synthetic_reserves",
        [](std::size_t n, std::uint64_t seed) { return to_array(synthetic_reserves(n, seed).values()); },
        py::arg("samples"), py::arg("seed"), "Synthetic reserve trace, 300 s samples, MW.");

    m.def(
        "simulate",
        [](const SystemConfig& cfg, const Array& d, double d_dt, double sim_dt) {
            const SimResult r = simulate_closed_loop(cfg, to_signal(d, d_dt), {sim_dt});
            py::dict out;
            out["dt"] = r.Y.dt();
            out["Y"] = to_array(r.Y.values());
            out["U"] = to_array(r.U.values());
            out["U_a"] = to_array(r.U_a.values());
            out["verdict"] = r.verdict;
            out["diverged"] = r.diverged;
            out["rms_Y"] = r.rms_Y;
            out["rms_U"] = r.rms_U;
            out["rms_Ua"] = r.rms_Ua;
            return out;
        },
        py::arg("config"), py::arg("disturbance"), py::arg("dt") = 300.0, py::arg("sim_dt") = 60.0);

    m.def(
        "stability_boundary",
        [](Design design, const std::vector<double>& grid) {
            std::vector<py::dict> rows;
            for (const auto& r : stability_boundary({}, design, grid)) {
                py::dict d;
                d["omega_co"] = r.omega_co;
                d["verdict"] = r.verdict;
                d["max_real_part"] = r.max_real_part;
                d["M_S"] = r.M_S;
                d["vector_margin"] = r.vector_margin;
                rows.push_back(std::move(d));
            }
            return rows;
        },
        py::arg("design"), py::arg("omega_co_grid"));

    m.def(
        "decompose_reserves",
        [](const Array& u, double dt, double lp, double hp) {
            const BandDecomposition b = decompose_reserves(to_signal(u, dt), lp, hp);
            return py::make_tuple(to_array(b.U_lp.values()), to_array(b.U_mp.values()), to_array(b.U_hp.values()));
        },
        py::arg("U_r"), py::arg("dt"), py::arg("lp_cutoff") = 2e-5, py::arg("hp_cutoff") = 5e-3);
}
