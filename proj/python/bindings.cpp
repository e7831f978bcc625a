// Python bindings. Matrices cross the boundary as nested lists of floats (or
// decimal strings, parsed at full working precision); reports come back as
// plain dicts built from the library's JSON layout.

#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include "embedlog/embedlog.hpp"

namespace py = pybind11;
using namespace embedlog;
using Real = Extended;

namespace {

Real to_real(const py::handle& h) {
    if (py::isinstance<py::str>(h)) return parse_decimal<Real>(h.cast<std::string>());
    return Real(h.cast<double>());
}

RMat4<Real> to_matrix(const py::sequence& rows) {
    if (py::len(rows) != 4) throw Error(ErrorCode::ParseError, "expected 4 rows");
    RMat4<Real> m;
    for (std::size_t i = 0; i < 4; ++i) {
        py::sequence row = rows[i];
        if (py::len(row) != 4) throw Error(ErrorCode::ParseError, "row " + std::to_string(i + 1) + " needs 4 entries");
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = to_real(row[j]);
    }
    return m;
}

std::vector<std::vector<double>> from_matrix(const RMat4<Real>& m) {
    std::vector<std::vector<double>> out(4, std::vector<double>(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) out[i][j] = to_double(m(i, j));
    return out;
}

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

Tolerances tolerances(const std::string& spec) { return spec.empty() ? Tolerances{} : Tolerances::parse(spec); }

Vec6<Real> to_vec6(const std::vector<double>& v) {
    if (v.size() != 6) throw Error(ErrorCode::InvalidArgument, "v needs 6 components");
    Vec6<Real> out;
    for (std::size_t i = 0; i < 6; ++i) out[i] = Real(v[i]);
    return out;
}

PerturbationDelta<Real> to_delta(const std::vector<double>& d, double kappa) {
    if (d.size() != 12) throw Error(ErrorCode::InvalidArgument, "delta needs 12 components");
    PerturbationDelta<Real> out;
    out.kappa = kappa;
    for (std::size_t i = 0; i < 12; ++i) out.delta[i] = Real(d[i]);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Embeddability of 4x4 Markov matrices (extended-precision core)";

    // Instances carry the failed guard's name in `.code`.
    static py::handle error_cls = py::exception<Error>(m, "EmbedlogError", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_cls)(e.what());
            exc.attr("code") = std::string(error_name(e.code()));
            PyErr_SetObject(error_cls.ptr(), exc.ptr());
        }
    });

    m.attr("SCHEMA_VERSION") = kSchemaVersion;

    m.def(
        "classify",
        [](const py::sequence& rows, const std::string& tol) {
            const Tolerances t = tolerances(tol);
            return to_python(report_json(classify(validate_markov(to_matrix(rows), t), t)));
        },
        py::arg("matrix"), py::arg("tol") = "");

    m.def(
        "branch_log",
        [](const py::sequence& rows, std::int64_t k, const std::string& tol) {
            const Tolerances t = tolerances(tol);
            return from_matrix(branch_log(eigendecompose_markov(to_matrix(rows), t), k, t).log);
        },
        py::arg("matrix"), py::arg("k"), py::arg("tol") = "");

    m.def(
        "eigenvalues",
        [](const py::sequence& rows, const std::string& tol) {
            const auto s = eigendecompose_markov(to_matrix(rows), tolerances(tol));
            std::vector<std::complex<double>> out;
            for (const auto& z : s.eigenvalues) out.emplace_back(to_double(z.re), to_double(z.im));
            return out;
        },
        py::arg("matrix"), py::arg("tol") = "");

    m.def("expm", [](const py::sequence& rows) { return from_matrix(expm(to_matrix(rows))); }, py::arg("q"));

    m.def(
        "build_example",
        [](std::int64_t l) {
            const auto fi = build_example<Real>(l);
            py::dict d;
            d["l"] = l;
            d["matrix"] = from_matrix(fi.m.matrix());
            d["matrix_text"] = format_matrix(fi.m.matrix(), MatrixFormat::Json, 60);
            d["generator"] = from_matrix(fi.expected_generator.matrix());
            return d;
        },
        py::arg("l"));

    m.def("closed_form_log", [](std::int64_t l, std::int64_t k) { return from_matrix(closed_form_log<Real>(l, k)); },
          py::arg("l"), py::arg("k"));

    m.def(
        "build_q",
        [](double theta, const std::vector<double>& v) {
            return from_matrix(build_q(GeneratorParams<Real>{Real(theta), to_vec6(v)}));
        },
        py::arg("theta"), py::arg("v"));

    m.def("variety_residual", [](const std::vector<double>& v) { return to_double(variety_residual(to_vec6(v))); },
          py::arg("v"));

    m.def(
        "q_spectrum",
        [](double theta, const std::vector<double>& v) {
            std::vector<std::complex<double>> out;
            for (const auto& z : q_spectrum(GeneratorParams<Real>{Real(theta), to_vec6(v)}))
                out.emplace_back(to_double(z.re), to_double(z.im));
            return out;
        },
        py::arg("theta"), py::arg("v"));

    m.def(
        "cone_check",
        [](double theta, const std::vector<double>& v, std::int64_t k) {
            const ConeVerdict c = cone_check(GeneratorParams<Real>{Real(theta), to_vec6(v)}, k);
            py::dict d;
            d["in_P_theta"] = c.in_P_theta;
            d["in_C1"] = c.in_C1;
            d["in_C2"] = c.in_C2;
            d["violated"] = c.violated;
            d["binding"] = c.binding;
            return d;
        },
        py::arg("theta"), py::arg("v"), py::arg("k"));

    m.def(
        "sample_interior",
        [](double theta, std::int64_t k, const std::vector<double>& w, double shift) {
            if (w.size() != 3) throw Error(ErrorCode::InvalidArgument, "weights needs 3 components");
            const auto p = sample_interior<Real>(Real(theta), k, {Real(w[0]), Real(w[1]), Real(w[2])}, Real(shift));
            std::vector<double> v;
            for (const auto& x : p.v) v.push_back(to_double(x));
            return v;
        },
        py::arg("theta"), py::arg("k"), py::arg("weights"), py::arg("shift") = 0.0);

    m.def(
        "build_perturbed",
        [](std::int64_t l, const std::vector<double>& delta, double kappa) {
            return from_matrix(build_perturbed(l, to_delta(delta, kappa)).matrix());
        },
        py::arg("l"), py::arg("delta"), py::arg("kappa") = 1e-3);

    m.def(
        "perturbed_roundtrip",
        [](std::int64_t l, const std::vector<double>& delta, double kappa) {
            const auto d = to_delta(delta, kappa);
            const auto back = recover_delta(l, build_perturbed(l, d), kappa);
            std::vector<double> out;
            for (const auto& x : back.delta) out.push_back(to_double(x));
            return out;
        },
        py::arg("l"), py::arg("delta"), py::arg("kappa") = 1e-3,
        "Builds M_delta at full precision and recovers delta from it.");

    m.def(
        "certify_witness",
        [](std::int64_t l, const std::vector<double>& delta, double kappa) {
            const auto w = certify_witness(l, to_delta(delta, kappa));
            py::dict d;
            d["generators"] = w.report.generators;
            d["generator_min"] = to_double(w.margins.generator_min);
            d["lower_violation"] = to_double(w.margins.lower_violation);
            d["upper_violation"] = to_double(w.margins.upper_violation);
            d["radius"] = to_double(w.margins.radius);
            return d;
        },
        py::arg("l"), py::arg("delta"), py::arg("kappa") = 1e-3);

    m.def("validated_kappa", [](std::int64_t l, double kappa) { return validated_kappa(l, kappa); }, py::arg("l"),
          py::arg("kappa") = 1e-3);
}
