#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ksns/experiment.hpp"
#include "ksns/operators.hpp"
#include "ksns/plots.hpp"
#include "ksns/transforms.hpp"
#include "ksns/verify.hpp"

namespace py = pybind11;
using namespace ksns;

namespace {

BasisTag tag_from(const std::string& s) {
    if (s == "cos") return BasisTag::CosY;
    if (s == "sin") return BasisTag::SinY;
    throw std::invalid_argument("tag must be 'cos' or 'sin'");
}

SpectralField field_from_values(py::array_t<double, py::array::c_style | py::array::forcecast> v,
                                const std::string& tag) {
    if (v.ndim() != 2) throw std::invalid_argument("expected a 2-d (n1, n2) array");
    const Grid grid(static_cast<int>(v.shape(0)), static_cast<int>(v.shape(1)));
    return to_spectral(std::span<const double>(v.data(), static_cast<size_t>(v.size())), grid,
                       tag_from(tag));
}

py::array_t<double> values_from_field(const SpectralField& f) {
    const auto vals = to_physical(f);
    py::array_t<double> out({f.grid().n1, f.grid().n2});
    std::copy(vals.begin(), vals.end(), out.mutable_data());
    return out;
}

py::dict outcome_dict(const RunOutcome& o) {
    py::dict d;
    d["kind"] = std::string(to_string(o.kind));
    d["t_final"] = o.t_final;
    d["reason"] = o.reason;
    d["metric"] = o.metric;
    d["value"] = o.value;
    return d;
}

py::dict series_dict(const std::vector<DiagnosticsRecord>& series) {
    auto col = [&](double DiagnosticsRecord::* f) {
        std::vector<double> v(series.size());
        for (size_t i = 0; i < series.size(); ++i) v[i] = series[i].*f;
        return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
    };
    py::dict d;
    d["t"] = col(&DiagnosticsRecord::t);
    d["mass"] = col(&DiagnosticsRecord::mass);
    d["rho_m"] = col(&DiagnosticsRecord::rho_m);
    d["min_rho"] = col(&DiagnosticsRecord::min_rho);
    d["rho_inf"] = col(&DiagnosticsRecord::rho_inf);
    d["E2"] = col(&DiagnosticsRecord::E2);
    d["grad_rho_sq"] = col(&DiagnosticsRecord::grad_rho_sq);
    d["Ebar"] = col(&DiagnosticsRecord::Ebar);
    d["Etilde"] = col(&DiagnosticsRecord::Etilde);
    d["mix_sq"] = col(&DiagnosticsRecord::mix_sq);
    d["h1neg_sq"] = col(&DiagnosticsRecord::h1neg_sq);
    d["u_l2_sq"] = col(&DiagnosticsRecord::u_l2_sq);
    d["grad_u_sq"] = col(&DiagnosticsRecord::grad_u_sq);
    d["u_inf"] = col(&DiagnosticsRecord::u_inf);
    d["res_ks_energy"] = col(&DiagnosticsRecord::res_ks_energy);
    d["res_ns_energy"] = col(&DiagnosticsRecord::res_ns_energy);
    d["res_static_identity"] = col(&DiagnosticsRecord::res_static_identity);
    d["res_hessian_identity"] = col(&DiagnosticsRecord::res_hessian_identity);
    d["dt"] = col(&DiagnosticsRecord::dt);
    d["tail_frac"] = col(&DiagnosticsRecord::tail_frac);
    d["moment_x2"] = col(&DiagnosticsRecord::moment_x2);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pseudo-spectral Keller-Segel / buoyant-flow channel simulator";

    py::register_exception<ConfigError>(m, "ConfigError");

    m.def(
        "run",
        [](const std::string& config_text) {
            const RunResult res = run_trajectory(parse_run_config(config_text));
            py::dict d;
            d["outcome"] = outcome_dict(res.outcome);
            d["series"] = series_dict(res.series);
            d["rho"] = values_from_field(res.final_state.density.field);
            return d;
        },
        py::arg("config_text"),
        "Integrate one trajectory from INI config text; returns outcome, the "
        "diagnostics series as arrays, and the final density on the grid.");

    m.def(
        "run_to_dir",
        [](const std::string& config_text, const std::string& out_dir) {
            return outcome_dict(run_single(parse_run_config(config_text), out_dir));
        },
        py::arg("config_text"), py::arg("out_dir"),
        "run + write diagnostics.csv, final.ckpt, outcome.json under out_dir.");

    m.def(
        "emit_plots",
        [](const std::vector<std::string>& csvs, const std::string& out_dir) {
            return ksns::emit_plots(csvs, out_dir);
        },
        py::arg("csv_paths"), py::arg("out_dir"), "Render SVG plots from CSV artifacts.");

    m.def(
        "verify",
        []() {
            py::list out;
            for (const auto& c : run_verify()) {
                py::dict d;
                d["name"] = c.name;
                d["pass"] = c.pass;
                d["value"] = c.value;
                d["tolerance"] = c.tolerance;
                d["detail"] = c.detail;
                out.append(d);
            }
            return out;
        },
        "Run the built-in correctness suite; returns one record per check.");

    // low-level numerics on (n1, n2) grids of point values
    m.def(
        "laplacian",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v,
           const std::string& tag) { return values_from_field(laplacian(field_from_values(v, tag))); },
        py::arg("values"), py::arg("tag") = "cos",
        "Laplacian of grid values in the tagged x2 basis ('cos' or 'sin').");

    m.def(
        "solve_poisson",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v,
           const std::string& tag) {
            const SpectralField f = field_from_values(v, tag);
            return values_from_field(tag_from(tag) == BasisTag::CosY ? inv_laplace_neumann(f)
                                                                     : inv_laplace_dirichlet(f, 1));
        },
        py::arg("values"), py::arg("tag") = "cos",
        "Apply (-Laplace)^{-1} with Neumann ('cos') or Dirichlet ('sin') walls.");

    m.def(
        "roundtrip",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> v,
           const std::string& tag) { return values_from_field(field_from_values(v, tag)); },
        py::arg("values"), py::arg("tag") = "cos",
        "Project grid values through the spectral basis and back.");
}
