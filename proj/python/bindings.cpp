#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "debtgame/cli.hpp"
#include "debtgame/equilibrium.hpp"

namespace py = pybind11;
using namespace debtgame;

namespace {

RawParams raw_from_kwargs(const py::kwargs& kwargs) {
    RawParams raw = reference_params();
    for (const auto& [key, value] : kwargs) set_param(raw, py::cast<std::string>(key), py::cast<double>(value));
    return raw;
}

py::dict raw_to_dict(const RawParams& raw) {
    py::dict out;
    for (const char* key : {"r", "g", "sigma", "rho", "lambda", "alpha", "kappa", "m", "c1", "c2"})
        out[key] = get_param(raw, key);
    return out;
}

ModelParams validated(const py::dict& params) {
    RawParams raw = reference_params();
    for (const auto& [key, value] : params) set_param(raw, py::cast<std::string>(key), py::cast<double>(value));
    return validate_params(raw);
}

QuadratureSettings quadrature(double abs_tol, double rel_tol) {
    QuadratureSettings q;
    q.abs_tol = abs_tol;
    q.rel_tol = rel_tol;
    return q;
}

py::dict outcome_dict(const NashOutcome& n) {
    py::dict out;
    out["tag"] = to_string(n.tag);
    out["regime"] = to_string(n.regime.tag);
    out["a_star"] = n.a_star;
    out["b_star"] = n.b_star;
    out["a_bar"] = n.a_bar;
    out["b0"] = n.b0;
    out["qtilde"] = n.qtilde;
    out["F_resid"] = n.F_resid;
    out["G_resid"] = n.G_resid;
    return out;
}

// runs a CLI command on a JSON config string and returns (exit code, stdout, stderr)
template <class Cmd>
py::tuple run_command(Cmd cmd, const std::string& config_text) {
    std::ostringstream out, err;
    int code;
    {
        py::gil_scoped_release release;
        code = cmd(parse_config(config_text), out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Debt ceiling game between a government and a legislator";

    // held for the interpreter lifetime, the translator outlives module teardown
    static PyObject* error_type = PyErr_NewException("debtgame._core.DebtgameError", PyExc_RuntimeError, nullptr);
    m.attr("DebtgameError") = py::handle(error_type);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    m.def("reference_params", [] { return raw_to_dict(reference_params()); },
          "Reference parameter set as a dict.");
    m.def("params", [](const py::kwargs& kw) { return raw_to_dict(raw_from_kwargs(kw)); },
          "Reference parameters with keyword overrides.");
    m.def("validate", [](const py::dict& p) { validated(p); },
          "Raises DebtgameError when an assumption fails.");
    m.def("regime", [](const py::dict& p) {
        const Regime r = classify_regime(validated(p));
        return py::make_tuple(to_string(r.tag), r.margin);
    });
    m.def("regime_boundary", [](const py::dict& p) {
        RawParams raw = reference_params();
        for (const auto& [key, value] : p) set_param(raw, py::cast<std::string>(key), py::cast<double>(value));
        return regime_boundary(raw);
    });
    m.def("char_roots", [](const py::dict& p, double discount) {
        const RootPair r = char_roots(validated(p), discount);
        return py::make_tuple(r.pos, r.neg);
    }, py::arg("params"), py::arg("discount"));

    m.def("std_normal_cdf", &std_normal_cdf);
    m.def("H", [](double x, const py::dict& p, double abs_tol, double rel_tol) {
        return H(x, validated(p), quadrature(abs_tol, rel_tol));
    }, py::arg("x"), py::arg("params"), py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-10);

    m.def("F", [](double a, double b, const py::dict& p) { return F(a, b, validated(p)); });
    m.def("G", [](double a, double b, const py::dict& p) { return G(a, b, validated(p)); });
    m.def("a_of_b", [](double b, const py::dict& p) { return solve_a_of_b(b, validated(p)).a_of_b(); },
          "Government best-response threshold to a ceiling b.");
    m.def("b_of_a", [](double a, const py::dict& p) { return solve_b_of_a(a, validated(p)).b_of_a(); },
          "Legislator best-response ceiling to a threshold a.");
    m.def("a_bar", [](const py::dict& p) { return abar(validated(p)).a_bar(); });
    m.def("b0", [](const py::dict& p) { return b0(validated(p)); });
    m.def("qtilde", [](const py::dict& p) { return qtilde(validated(p)).value; });
    m.def("U1", [](double x, double b, const py::dict& p) { return U1(x, b, validated(p)); });
    m.def("U2", [](double x, double a, const py::dict& p) { return U2(x, a, validated(p)); });

    m.def("solve_nash", [](const py::dict& p, double cap_factor) {
        NashSettings settings;
        settings.cap_factor = cap_factor;
        settings.build_values = false;
        const ModelParams params = validated(p);
        NashOutcome n;
        {
            py::gil_scoped_release release;
            n = solve_nash(params, settings);
        }
        return outcome_dict(n);
    }, py::arg("params"), py::arg("cap_factor") = 1e6);

    m.def("simulate", [](const py::dict& p, double x0, double a, std::optional<double> b, std::int64_t n_paths,
                         double dt, std::uint64_t seed, double horizon) {
        SimConfig sim;
        sim.x0 = x0;
        sim.a = a;
        sim.b = b;
        sim.n_paths = n_paths;
        sim.dt = dt;
        sim.seed = seed;
        sim.horizon = horizon;
        const ModelParams params = validated(p);
        CostPair c;
        {
            py::gil_scoped_release release;
            c = simulate_cost_pair(sim, params);
        }
        py::dict out;
        out["gov_mean"] = c.gov.mean;
        out["gov_se"] = c.gov.std_error;
        out["leg_mean"] = c.leg.mean;
        out["leg_se"] = c.leg.std_error;
        out["horizon"] = c.gov.horizon;
        return out;
    }, py::arg("params"), py::arg("x0"), py::arg("a"), py::arg("b") = py::none(), py::arg("n_paths") = 10000,
       py::arg("dt") = 1e-3, py::arg("seed") = 20240601, py::arg("horizon") = 0.0,
       "Discounted costs of the band [a, b] started at x0, by Monte Carlo.");

    m.def("sweep", [](const std::string& config_text) {
        std::ostringstream out, err;
        const AppConfig config = parse_config(config_text);
        int code;
        {
            py::gil_scoped_release release;
            code = cmd_sweep(config, "", out, err);
        }
        if (code != 0) throw Error(ErrorKind::Config, err.str());
        return out.str();
    }, "Sweep CSV for a JSON config string with a sweep section.");

    m.def("run_check", [](const std::string& t) { return run_command(cmd_check, t); });
    m.def("run_roots", [](const std::string& t) { return run_command(cmd_roots, t); });
    m.def("run_nash", [](const std::string& t) { return run_command(cmd_nash, t); });
}
