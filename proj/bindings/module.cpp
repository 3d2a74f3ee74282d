#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "excprime/analysis.hpp"
#include "excprime/arith.hpp"
#include "excprime/classifier.hpp"
#include "excprime/errors.hpp"

namespace py = pybind11;
using namespace excprime;

namespace {

py::object py_int(const Int& v) {
    return py::reinterpret_steal<py::object>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

Int int_from(py::handle h) { return Int(py::str(h).cast<std::string>()); }

analysis::CurveSpec curve_from(py::handle obj) {
    if (py::isinstance<py::str>(obj)) return analysis::parse_curve_spec(obj.cast<std::string>());
    if (py::isinstance<py::sequence>(obj) && !py::isinstance<py::dict>(obj)) {
        py::sequence seq = obj.cast<py::sequence>();
        if (seq.size() != 5) throw input_error("bindings", "ainvs must have five entries");
        analysis::CurveSpec spec;
        for (std::size_t i = 0; i < 5; i++) spec.ainvs[i] = int_from(seq[i]);
        return spec;
    }
    // dict: round-trip through JSON
    py::module_ jsonmod = py::module_::import("json");
    std::string text = jsonmod.attr("dumps")(obj).cast<std::string>();
    return analysis::parse_curve_spec(text);
}

py::object json_to_py(const analysis::json& j) {
    py::module_ jsonmod = py::module_::import("json");
    return jsonmod.attr("loads")(j.dump());
}

Curve build_from(py::handle obj) {
    analysis::CurveSpec spec = curve_from(obj);
    return build_curve(spec.ainvs[0], spec.ainvs[1], spec.ainvs[2], spec.ainvs[3], spec.ainvs[4]);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exceptional-prime scanner core";

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<internal_error>(m, "InternalError", PyExc_RuntimeError);

    m.def("kronecker", &arith::kronecker, py::arg("a"), py::arg("n"),
          "full Kronecker symbol (a/n)");

    m.def(
        "curve_invariants",
        [](py::object curve) {
            Curve e = build_from(curve);
            py::dict d;
            d["c4"] = py_int(e.c4);
            d["c6"] = py_int(e.c6);
            d["disc"] = py_int(e.disc);
            d["j_num"] = py_int(e.j_num);
            d["j_den"] = py_int(e.j_den);
            return d;
        },
        py::arg("curve"), "c4, c6, discriminant and j-invariant of a curve");

    m.def(
        "count_points",
        [](py::object curve, std::uint64_t p) {
            FrobeniusRecord r = count_points(build_from(curve), p);
            return py::make_tuple(r.p, r.a_p);
        },
        py::arg("curve"), py::arg("p"), "trace of Frobenius (p, a_p) at a good prime");

    m.def(
        "trace_table",
        [](py::object curve, std::uint64_t bound, unsigned jobs) {
            EngineOptions opts;
            opts.jobs = jobs;
            TraceTable t = build_trace_table(build_from(curve), bound, opts);
            py::list out;
            for (const auto& r : t.records) out.append(py::make_tuple(r.p, r.a_p));
            return out;
        },
        py::arg("curve"), py::arg("bound"), py::arg("jobs") = 1,
        "list of (p, a_p) over the good primes up to the bound");

    m.def(
        "adams12",
        [](py::object a, py::object q) {
            FrobPoly f = adams12(make_frob_poly(int_from(a), int_from(q)));
            return py::make_tuple(py_int(f.trace), py_int(f.norm));
        },
        py::arg("trace"), py::arg("norm"),
        "twelfth Adams operation on x^2 - a x + q, as (s12, q^12)");

    m.def(
        "analyze",
        [](py::object curve, std::uint64_t trace_bound, py::object scan_bound, unsigned jobs,
           py::object cache_dir) {
            analysis::AnalysisConfig config;
            config.curve = curve_from(curve);
            config.trace_bound = trace_bound;
            if (!scan_bound.is_none()) config.scan_bound = scan_bound.cast<std::uint64_t>();
            config.jobs = jobs;
            if (!cache_dir.is_none()) config.cache_dir = cache_dir.cast<std::string>();
            return json_to_py(analysis::run_analysis(config));
        },
        py::arg("curve"), py::arg("trace_bound") = 10000, py::arg("scan_bound") = py::none(),
        py::arg("jobs") = 1, py::arg("cache_dir") = py::none(),
        "full analysis report as a dict");

    m.def(
        "compare",
        [](py::object a, py::object b, std::uint64_t bound, const std::string& mode) {
            std::optional<CompareMode> m2;
            if (mode == "plain") m2 = CompareMode::Plain;
            else if (mode == "adams12") m2 = CompareMode::Adams12;
            else if (mode != "both") throw input_error("bindings", "mode must be plain/adams12/both");
            return json_to_py(
                analysis::run_compare(curve_from(a), curve_from(b), m2, bound, 1, std::nullopt));
        },
        py::arg("curve_a"), py::arg("curve_b"), py::arg("bound") = 1000, py::arg("mode") = "both",
        "distinguishing-prime report for two curves");

    m.def(
        "bounds_report",
        [](py::object field, py::object profile, py::object conductor_norm, unsigned additive_count,
           std::uint64_t prime) {
            analysis::BoundsRequest req;
            py::module_ jsonmod = py::module_::import("json");
            if (!field.is_none())
                req.field = analysis::parse_field_invariants(
                    analysis::json::parse(jsonmod.attr("dumps")(field).cast<std::string>()));
            if (!profile.is_none()) {
                req.profile = analysis::parse_constants_profile(
                    analysis::json::parse(jsonmod.attr("dumps")(profile).cast<std::string>()));
                req.profile_supplied = true;
            }
            req.conductor_norm = Real(py::str(conductor_norm).cast<std::string>());
            req.additive_count = additive_count;
            req.unexceptional_prime = prime;
            return json_to_py(analysis::run_bounds(req));
        },
        py::arg("field") = py::none(), py::arg("profile") = py::none(),
        py::arg("conductor_norm") = 37, py::arg("additive_count") = 0, py::arg("prime") = 53,
        "bound-ladder report as a dict");

    m.def(
        "least_prime_quadratic",
        [](std::int64_t d, int target, std::uint64_t sieve_bound) {
            auto r = cheblab::least_prime_quadratic(d, target, sieve_bound);
            py::dict out;
            out["D"] = r.field_id;
            out["target"] = r.target;
            out["least_prime"] = r.least_prime;
            out["log_disc"] = r.log_disc;
            out["ratio"] = r.ratio;
            return out;
        },
        py::arg("d"), py::arg("target"), py::arg("sieve_bound") = 100000,
        "least prime with Kronecker(D, p) = target");

    m.def(
        "cheb_sweep",
        [](std::uint64_t quadratic_range, std::uint64_t sieve_bound, unsigned jobs) {
            cheblab::SweepOptions opts;
            opts.quadratic_range = quadratic_range;
            opts.sieve_bound = sieve_bound;
            opts.jobs = jobs;
            return json_to_py(analysis::run_cheblab(opts));
        },
        py::arg("quadratic_range") = 10000, py::arg("sieve_bound") = 100000, py::arg("jobs") = 1,
        "least-prime sweep report over fundamental discriminants");

    m.def(
        "gl2_selftest",
        [](const std::vector<std::uint32_t>& ells) { return json_to_py(analysis::run_gl2_selftest(ells)); },
        py::arg("ells") = std::vector<std::uint32_t>{5, 7, 11, 13},
        "subgroup-classification self checks");
}
