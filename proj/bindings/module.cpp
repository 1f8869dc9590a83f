#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conclab/concentration.hpp"
#include "conclab/curvature.hpp"
#include "conclab/errors.hpp"
#include "conclab/finder.hpp"
#include "conclab/geometry.hpp"
#include "conclab/lipschitz.hpp"
#include "conclab/model.hpp"
#include "conclab/nets.hpp"
#include "conclab/rng.hpp"
#include "conclab/serialize.hpp"

namespace py = pybind11;
using namespace conclab;

namespace {

AmbientPoint as_point(const ManifoldModel& model, const Vector& coords) {
    if (static_cast<int>(coords.size()) != model.ambient_dim())
        throw UsageError("point has dimension " + std::to_string(coords.size()) + ", " +
                         model.designator() + " needs " + std::to_string(model.ambient_dim()));
    AmbientPoint p{coords};
    if (!is_unit(p, 1e-9))
        throw UsageError("point representatives must be unit vectors");
    return p;
}

Matrix points_as_rows(const std::vector<AmbientPoint>& points, int dim) {
    Matrix rows(static_cast<int>(points.size()), dim);
    for (int j = 0; j < static_cast<int>(points.size()); ++j)
        rows.row(j) = points[j].coords.transpose();
    return rows;
}

py::dict parse_json(const std::string& text) {
    return py::module_::import("json").attr("loads")(py::str(text));
}

const LipschitzFunction& checked_function(const std::string& label, const ManifoldModel& model) {
    const LipschitzFunction& T = find_function(label);
    if (!T.compatible(model))
        throw UsageError("function '" + label + "' is not defined on " + model.designator());
    return T;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "concentration-of-measure laboratory on spheres and projective spaces";

    const py::object usage =
        py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NoAdmissibleDimension>(m, "NoAdmissibleDimension", usage.ptr());
    const py::object check =
        py::register_exception<CheckFailure>(m, "CheckFailure", PyExc_RuntimeError);
    py::register_exception<MaxDrawsExceeded>(m, "MaxDrawsExceeded", check.ptr());

    m.def(
        "model_info",
        [](const std::string& designator) {
            const ManifoldModel model = ManifoldModel::parse(designator);
            py::dict d;
            d["designator"] = model.designator();
            d["family"] = family_name(model.family());
            d["index"] = model.index();
            d["ambient_dim"] = model.ambient_dim();
            d["real_dim"] = model.real_dim();
            d["curvature_floor"] = model.curvature_floor();
            d["ricci_floor"] = model.ricci_floor();
            d["diameter"] = model.diameter();
            d["max_tg_dim"] = model.max_tg_dim();
            d["is_real"] = model.is_real();
            return d;
        },
        py::arg("model"), "geometric constants of a model designator like 'sphere:4'");

    m.def("list_functions", [] {
        py::list out;
        for (const LipschitzFunction& f : catalog()) {
            py::dict d;
            d["label"] = f.label;
            d["claimed_constant"] = f.claimed_constant;
            py::list fams;
            for (const Family fam : f.compatible_families) fams.append(family_name(fam));
            d["families"] = fams;
            out.append(d);
        }
        return out;
    }, "the built-in Lipschitz function catalog");

    m.def(
        "evaluate_function",
        [](const std::string& model_s, const std::string& label, const Vector& x) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const LipschitzFunction& T = checked_function(label, model);
            return T.evaluate(model, as_point(model, x));
        },
        py::arg("model"), py::arg("function"), py::arg("x"));

    m.def(
        "distance",
        [](const std::string& model_s, const Vector& x, const Vector& y) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            return geodesic_distance(model, as_point(model, x), as_point(model, y));
        },
        py::arg("model"), py::arg("x"), py::arg("y"),
        "geodesic distance between unit representatives");

    m.def(
        "basis_point",
        [](const std::string& model_s, int i) {
            return Vector(basis_point(ManifoldModel::parse(model_s), i).coords);
        },
        py::arg("model"), py::arg("i"));

    m.def(
        "sample_points",
        [](const std::string& model_s, int count, std::uint64_t seed) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            if (count < 1) throw UsageError("sample_points: count must be positive");
            RandomStream rng(seed);
            Matrix rows(count, model.ambient_dim());
            for (int j = 0; j < count; ++j)
                rows.row(j) = sample_uniform(model, rng).coords.transpose();
            return rows;
        },
        py::arg("model"), py::arg("count"), py::arg("seed"),
        "uniform model points, one representative per row",
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "haar_isometry",
        [](const std::string& model_s, std::uint64_t seed) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            RandomStream rng(seed);
            return Matrix(sample_haar_isometry(model, rng).matrix);
        },
        py::arg("model"), py::arg("seed"),
        "Haar-distributed orthogonal/unitary matrix for the model");

    m.def(
        "embed_point",
        [](const std::string& model_s, const std::string& sub_s, const Vector& low) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const GeodesicSubmanifoldSpec spec = GeodesicSubmanifoldSpec::parse(model, sub_s);
            return Vector(embed(spec, as_point(spec.low_model(), low)).coords);
        },
        py::arg("model"), py::arg("submanifold"), py::arg("x"),
        "map a low-model representative through 'coord:<k>' or 'realpoints'");

    m.def(
        "build_net",
        [](const std::string& model_s, double delta, std::uint64_t seed, int stop_after) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const Net net = build_net(model, delta, RandomStream(seed), stop_after);
            py::dict d;
            d["model"] = model.designator();
            d["delta"] = delta;
            d["seed"] = seed;
            d["size"] = net.size();
            d["stop_evidence"] = net.stop_evidence;
            d["points"] = points_as_rows(net.points, model.ambient_dim());
            return d;
        },
        py::arg("model"), py::arg("delta"), py::arg("seed"), py::arg("stop_after") = 5000,
        "greedy delta-separated net; 'points' holds one representative per row");

    m.def(
        "verify_covering",
        [](const std::string& model_s, const Matrix& points, double delta, int samples,
           std::uint64_t seed) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            Net net{{}, delta, model, 0, 0};
            for (int j = 0; j < points.rows(); ++j)
                net.points.push_back(as_point(model, points.row(j).transpose()));
            const CoveringReport rep = verify_covering(net, samples, RandomStream(seed));
            py::dict d;
            d["samples"] = rep.samples;
            d["max_min_distance"] = rep.max_min_distance;
            d["fraction_covered"] = rep.fraction_covered;
            return d;
        },
        py::arg("model"), py::arg("points"), py::arg("delta"), py::arg("samples"),
        py::arg("seed"), "statistical covering check of a point set");

    m.def("cardinality_bound_closed", &cardinality_bound_closed, py::arg("m"), py::arg("delta"),
          py::arg("K"), "(6 / (delta sqrt K))^m");
    m.def("cardinality_bound_integral", &cardinality_bound_integral, py::arg("m"),
          py::arg("delta"), py::arg("K"), "volume-ratio net cardinality bound");
    m.def(
        "cardinality_chain_check",
        [](int mm, double delta, double K) {
            const CardinalityChain chain = cardinality_chain_check(mm, delta, K);
            py::dict d;
            d["log_volume_ratio"] = chain.log_volume_ratio;
            d["log_gamma_form"] = chain.log_gamma_form;
            d["log_power_form"] = chain.log_power_form;
            d["log_closed_form"] = chain.log_closed_form;
            d["volume_ratio"] = chain.volume_ratio();
            d["gamma_form"] = chain.gamma_form();
            d["power_form"] = chain.power_form();
            d["closed_form"] = chain.closed_form();
            d["ordered"] = chain.ordered;
            return d;
        },
        py::arg("m"), py::arg("delta"), py::arg("K"),
        "the four-member cardinality bound chain, weakest form last");

    m.def(
        "estimate_median",
        [](const std::string& model_s, const std::string& label, int samples,
           std::uint64_t seed) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const LipschitzFunction& T = checked_function(label, model);
            const MedianEstimate med = estimate_median(T, model, samples, RandomStream(seed));
            py::dict d;
            d["value"] = med.value;
            d["ci_low"] = med.ci_low;
            d["ci_high"] = med.ci_high;
            d["n_samples"] = med.n_samples;
            return d;
        },
        py::arg("model"), py::arg("function"), py::arg("samples"), py::arg("seed"),
        "empirical median with a 99% order-statistic confidence interval");

    m.def(
        "empirical_lipschitz",
        [](const std::string& model_s, const std::string& label, int pairs,
           std::uint64_t seed) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const LipschitzFunction& T = checked_function(label, model);
            return empirical_lipschitz(T, model, pairs, RandomStream(seed));
        },
        py::arg("model"), py::arg("function"), py::arg("pairs"), py::arg("seed"));

    m.def(
        "tail_check",
        [](const std::string& model_s, const std::string& label, double epsilon, int samples,
           std::uint64_t seed, py::object center) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const LipschitzFunction& T = checked_function(label, model);
            RandomStream rng(seed);
            ConcentrationReport report{};
            if (!center.is_none()) {
                report = empirical_tail(T, model, center.cast<double>(), epsilon, samples,
                                        rng.derive("tail"));
            } else {
                const MedianEstimate med = estimate_median(T, model, samples, rng.derive("median"));
                report = empirical_tail(T, model, med.value, epsilon, samples, rng.derive("tail"));
                report.median_ci_low = med.ci_low;
                report.median_ci_high = med.ci_high;
            }
            report.seed = seed;
            py::dict d = parse_json(to_json(report));
            d["binomial_se"] = report.binomial_se();
            d["within_bound"] = report.within_bound();
            return d;
        },
        py::arg("model"), py::arg("function"), py::arg("epsilon"), py::arg("samples"),
        py::arg("seed"), py::arg("center") = py::none(),
        "tail measure mu(|T - m_T| > eps) against exp(-ricci_floor eps^2 / 2); the median is "
        "estimated unless a center is given");

    m.def("dimension_formula", &dimension_formula, py::arg("epsilon"), py::arg("K"),
          py::arg("n"), "eps^2 K (n-1) / (8 ln(12 / (eps sqrt K)))");
    m.def("dimension_bound", &dimension_bound, py::arg("epsilon"), py::arg("K"), py::arg("n"),
          py::arg("r"), "admissible totally geodesic dimension, capped at r");
    m.def("success_floor", &success_floor, py::arg("N"), py::arg("epsilon"), py::arg("K"),
          py::arg("n"), "per-draw acceptance probability floor for an N-point net");
    m.def("ball_mass_floor", &ball_mass_floor, py::arg("s"), py::arg("epsilon"), py::arg("K"),
          "(eps sqrt K / 6)^s");

    m.def(
        "find_submanifold",
        [](const std::string& model_s, const std::string& label, double epsilon,
           std::uint64_t seed, int max_draws, int median_samples, int dense_samples,
           int net_stop_after, int lipschitz_guard_pairs, py::object second_function) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const LipschitzFunction& T = find_function(label);
            FinderOptions options;
            options.max_draws = max_draws;
            options.median_samples = median_samples;
            options.dense_samples = dense_samples;
            options.net_stop_after = net_stop_after;
            options.lipschitz_guard_pairs = lipschitz_guard_pairs;
            if (!second_function.is_none())
                options.second_function = &find_function(second_function.cast<std::string>());
            const ConcentrationCertificate cert = [&] {
                py::gil_scoped_release nogil;
                return find_submanifold(T, model, epsilon, RandomStream(seed), options);
            }();
            return parse_json(to_json(cert));
        },
        py::arg("model"), py::arg("function"), py::arg("epsilon"), py::arg("seed"),
        py::arg("max_draws") = 1000, py::arg("median_samples") = 100000,
        py::arg("dense_samples") = 10000, py::arg("net_stop_after") = 5000,
        py::arg("lipschitz_guard_pairs") = 2000, py::arg("second_function") = py::none(),
        "search for a totally geodesic submanifold on which the function is epsilon-constant; "
        "returns the audit certificate as a dict");

    m.def(
        "disintegration_check",
        [](const std::string& model_s, const std::string& sub_s, py::object u, int outer,
           int inner, std::uint64_t seed) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const GeodesicSubmanifoldSpec spec = GeodesicSubmanifoldSpec::parse(model, sub_s);
            std::function<double(const ManifoldModel&, const AmbientPoint&)> fn;
            if (py::isinstance<py::str>(u)) {
                fn = checked_function(u.cast<std::string>(), model).evaluate;
            } else {
                // Worker threads evaluate u, so each call re-acquires the GIL.
                py::function f = py::reinterpret_borrow<py::function>(u);
                fn = [f](const ManifoldModel&, const AmbientPoint& p) {
                    py::gil_scoped_acquire gil;
                    return f(Vector(p.coords)).cast<double>();
                };
            }
            DisintegrationReport report;
            {
                py::gil_scoped_release nogil;
                report = disintegration_check(fn, model, spec, outer, inner, RandomStream(seed));
            }
            py::dict d = parse_json(to_json(report));
            d["consistent"] = report.consistent();
            return d;
        },
        py::arg("model"), py::arg("submanifold"), py::arg("u"), py::arg("outer"),
        py::arg("inner"), py::arg("seed"),
        "compare the global mean of u with the isometry-averaged submanifold mean; u is a "
        "catalog label or a callable taking a representative row");

    m.def(
        "sectional_samples",
        [](const std::string& model_s, int count, std::uint64_t seed) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            if (count < 1) throw UsageError("sectional_samples: count must be positive");
            RandomStream rng(seed);
            Eigen::VectorXd values(count);
            for (int j = 0; j < count; ++j)
                values[j] = sectional_curvature(model, sample_tangent_frame(model, 2, rng));
            return values;
        },
        py::arg("model"), py::arg("count"), py::arg("seed"),
        "sectional curvatures of random tangent 2-planes",
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "ricci_floor_scan",
        [](const std::string& model_s, int mm, int trials, std::uint64_t seed, double tol) {
            const ManifoldModel model = ManifoldModel::parse(model_s);
            const RicciScan scan = [&] {
                py::gil_scoped_release nogil;
                return ricci_floor_scan(model, mm, trials, RandomStream(seed), tol);
            }();
            py::dict d;
            d["min_observed"] = scan.min_observed;
            d["max_observed"] = scan.max_observed;
            d["floor_value"] = scan.floor_value;
            d["floor_respected"] = scan.floor_respected;
            d["m"] = scan.m;
            d["trials"] = scan.trials;
            return d;
        },
        py::arg("model"), py::arg("m"), py::arg("trials"), py::arg("seed"),
        py::arg("tol") = 1e-6, "min/max of the m-Ricci sum over random frames vs (m-1)K");

    m.attr("__version__") = "0.1.0";
}
