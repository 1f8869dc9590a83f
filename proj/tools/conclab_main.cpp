// Command-line front end: every experiment as a subcommand with a master
// seed, machine-readable output (json or csv), and exit codes
//   0 success, 1 numerical assertion failed, 2 usage error.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "conclab/concentration.hpp"
#include "conclab/curvature.hpp"
#include "conclab/errors.hpp"
#include "conclab/finder.hpp"
#include "conclab/lipschitz.hpp"
#include "conclab/model.hpp"
#include "conclab/nets.hpp"
#include "conclab/rng.hpp"
#include "conclab/serialize.hpp"

namespace {

using namespace conclab;

struct Output {
    std::string path;  // empty: stdout

    void emit(const std::string& text) const {
        if (path.empty()) {
            std::fwrite(text.data(), 1, text.size(), stdout);
            std::fputc('\n', stdout);
        } else {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw UsageError("cannot open output file: " + path);
            out << text << '\n';
        }
    }
};

std::string fmt(double v) { return JsonWriter::format_double(v); }

void check_format(const std::string& format, bool csv_allowed) {
    if (format == "json") return;
    if (format == "csv" && csv_allowed) return;
    throw UsageError("unsupported format '" + format + "' for this command");
}

std::function<double(const ManifoldModel&, const AmbientPoint&)> test_function(
    const std::string& label) {
    if (label == "one")
        return [](const ManifoldModel&, const AmbientPoint&) { return 1.0; };
    if (label == "sqcoord")
        return [](const ManifoldModel& model, const AmbientPoint& x) {
            const double a = std::abs(hermitian_inner(basis_point(model, 0).coords, x.coords));
            return a * a;
        };
    return find_function(label).evaluate;
}

std::string point_csv_header(const ManifoldModel& model) {
    std::string header = "index";
    for (int i = 0; i < model.ambient_dim(); ++i) {
        if (model.is_real()) {
            header += ",x" + std::to_string(i);
        } else {
            header += ",re" + std::to_string(i) + ",im" + std::to_string(i);
        }
    }
    return header;
}

int run_net(const std::string& model_str, double delta, std::uint64_t seed, int samples,
            int stop_after, const std::string& format, const Output& out) {
    const ManifoldModel model = ManifoldModel::parse(model_str);
    RandomStream rng(seed);
    const Net net = build_net(model, delta, rng.derive("net"), stop_after);
    const CoveringReport covering = verify_covering(net, samples, rng.derive("covering"));
    const double bound =
        cardinality_bound_closed(model.real_dim(), delta, model.curvature_floor());

    if (format == "csv") {
        std::string text = point_csv_header(model);
        for (int j = 0; j < net.size(); ++j) {
            text += '\n' + std::to_string(j);
            for (int i = 0; i < model.ambient_dim(); ++i) {
                const std::complex<double> c = net.points[j].coords[i];
                text += ',' + fmt(c.real());
                if (!model.is_real()) text += ',' + fmt(c.imag());
            }
        }
        out.emit(text);
    } else {
        JsonWriter w;
        w.begin_object();
        w.key("schema").value("v1");
        w.key("command").value("net");
        w.key("model").value(model.designator());
        w.key("delta").value(delta);
        w.key("seed").value(seed);
        w.key("size").value(net.size());
        w.key("stop_after").value(stop_after);
        w.key("bound_closed").value(bound);
        w.key("net").raw(to_json(net));
        w.key("covering").begin_object();
        w.key("samples").value(covering.samples);
        w.key("max_min_distance").value(covering.max_min_distance);
        w.key("fraction_covered").value(covering.fraction_covered);
        w.end_object();
        w.end_object();
        out.emit(w.str());
    }

    if (static_cast<double>(net.size()) > bound) {
        std::cerr << "net size " << net.size() << " exceeds the cardinality bound " << bound
                  << "\n";
        return 1;
    }
    return 0;
}

int run_bounds(const std::vector<int>& ms, const std::vector<double>& deltas, double K,
               const std::string& format, const Output& out) {
    struct Row {
        int m;
        double delta;
        CardinalityChain chain;
    };
    std::vector<Row> rows;
    bool all_ordered = true;
    for (const int m : ms)
        for (const double delta : deltas) {
            rows.push_back({m, delta, cardinality_chain_check(m, delta, K)});
            all_ordered = all_ordered && rows.back().chain.ordered;
        }

    if (format == "csv") {
        std::string text = "m,delta,volume_ratio,gamma_form,power_form,closed_form,ordered";
        for (const Row& r : rows) {
            text += '\n' + std::to_string(r.m) + ',' + fmt(r.delta) + ',' +
                    fmt(r.chain.volume_ratio()) + ',' + fmt(r.chain.gamma_form()) + ',' +
                    fmt(r.chain.power_form()) + ',' + fmt(r.chain.closed_form()) + ',' +
                    (r.chain.ordered ? "1" : "0");
        }
        out.emit(text);
    } else {
        JsonWriter w;
        w.begin_object();
        w.key("schema").value("v1");
        w.key("command").value("bounds");
        w.key("K").value(K);
        w.key("rows").begin_array();
        for (const Row& r : rows) {
            w.begin_object();
            w.key("m").value(r.m);
            w.key("delta").value(r.delta);
            w.key("volume_ratio").value(r.chain.volume_ratio());
            w.key("gamma_form").value(r.chain.gamma_form());
            w.key("power_form").value(r.chain.power_form());
            w.key("closed_form").value(r.chain.closed_form());
            w.key("ordered").value(r.chain.ordered);
            w.end_object();
        }
        w.end_array();
        w.key("all_ordered").value(all_ordered);
        w.end_object();
        out.emit(w.str());
    }

    if (!all_ordered) {
        std::cerr << "bound chain ordering violated\n";
        return 1;
    }
    return 0;
}

int run_tail(const std::string& model_str, std::uint64_t seed, int samples, double epsilon,
             const std::string& function, bool have_center, double center,
             const std::string& format, const Output& out) {
    const ManifoldModel model = ManifoldModel::parse(model_str);
    const LipschitzFunction& T = find_function(function);
    RandomStream rng(seed);

    ConcentrationReport report{};
    std::vector<double> dump;
    std::vector<double>* dump_ptr = format == "csv" ? &dump : nullptr;
    if (have_center) {
        report = empirical_tail(T, model, center, epsilon, samples, rng.derive("tail"), dump_ptr);
    } else {
        const MedianEstimate median = estimate_median(T, model, samples, rng.derive("median"));
        report = empirical_tail(T, model, median.value, epsilon, samples, rng.derive("tail"),
                                dump_ptr);
        report.median_ci_low = median.ci_low;
        report.median_ci_high = median.ci_high;
    }
    report.seed = seed;  // record the master seed, not the tail substream

    if (format == "csv") {
        std::string text = "value";
        for (const double v : dump) text += '\n' + fmt(v);
        out.emit(text);
    } else {
        JsonWriter w;
        w.begin_object();
        w.key("schema").value("v1");
        w.key("command").value("tail");
        w.key("model").value(model.designator());
        w.key("function").value(function);
        w.key("report").raw(to_json(report));
        w.key("within_bound").value(report.within_bound());
        w.end_object();
        out.emit(w.str());
    }

    if (!report.within_bound()) {
        std::cerr << "empirical tail " << report.empirical_tail << " exceeds bound "
                  << report.theoretical_bound << " + 4 SE\n";
        return 1;
    }
    return 0;
}

int run_find(const std::string& model_str, std::uint64_t seed, int samples, double epsilon,
             const std::string& function, int max_draws, const std::string& format,
             const Output& out) {
    check_format(format, false);
    const ManifoldModel model = ManifoldModel::parse(model_str);
    const LipschitzFunction& T = find_function(function);
    FinderOptions options;
    options.max_draws = max_draws;
    options.median_samples = samples;
    const ConcentrationCertificate cert =
        find_submanifold(T, model, epsilon, RandomStream(seed), options);
    out.emit(to_json(cert));
    return 0;
}

int run_disintegrate(const std::string& model_str, std::uint64_t seed,
                     const std::string& submanifold, const std::string& function, int outer,
                     int inner, const std::string& format, const Output& out) {
    check_format(format, false);
    const ManifoldModel model = ManifoldModel::parse(model_str);
    const GeodesicSubmanifoldSpec spec = GeodesicSubmanifoldSpec::parse(model, submanifold);
    const auto u = test_function(function);
    const DisintegrationReport report =
        disintegration_check(u, model, spec, outer, inner, RandomStream(seed));

    JsonWriter w;
    w.begin_object();
    w.key("schema").value("v1");
    w.key("command").value("disintegrate");
    w.key("model").value(model.designator());
    w.key("submanifold").value(spec.designator());
    w.key("function").value(function);
    w.key("report").raw(to_json(report));
    w.end_object();
    out.emit(w.str());

    if (!report.consistent()) {
        std::cerr << "disintegration identity violated: |" << report.global_mean << " - "
                  << report.nested_mean << "| > 3 * " << report.combined_se << "\n";
        return 1;
    }
    return 0;
}

int run_curvature(const std::string& model_str, std::uint64_t seed, int trials, int m,
                  const std::string& format, const Output& out) {
    check_format(format, false);
    const ManifoldModel model = ManifoldModel::parse(model_str);
    const RicciScan scan = ricci_floor_scan(model, m, trials, RandomStream(seed));

    JsonWriter w;
    w.begin_object();
    w.key("schema").value("v1");
    w.key("command").value("curvature");
    w.key("model").value(model.designator());
    w.key("m").value(scan.m);
    w.key("trials").value(scan.trials);
    w.key("seed").value(seed);
    w.key("min_observed").value(scan.min_observed);
    w.key("max_observed").value(scan.max_observed);
    w.key("floor").value(scan.floor_value);
    w.key("floor_respected").value(scan.floor_respected);
    w.key("argmin").begin_object();
    w.key("base").begin_array();
    for (int i = 0; i < scan.argmin.base.dim(); ++i) {
        const std::complex<double> c = scan.argmin.base.coords[i];
        if (model.is_real()) {
            w.value(c.real());
        } else {
            w.begin_array().value(c.real()).value(c.imag()).end_array();
        }
    }
    w.end_array();
    w.key("vectors").begin_array();
    for (const Vector& v : scan.argmin.vectors) {
        w.begin_array();
        for (int i = 0; i < static_cast<int>(v.size()); ++i) {
            if (model.is_real()) {
                w.value(v[i].real());
            } else {
                w.begin_array().value(v[i].real()).value(v[i].imag()).end_array();
            }
        }
        w.end_array();
    }
    w.end_array();
    w.end_object();
    w.end_object();
    out.emit(w.str());

    if (!scan.floor_respected) {
        std::cerr << "m-Ricci minimum " << scan.min_observed << " fell below the floor "
                  << scan.floor_value << "\n";
        return 1;
    }
    return 0;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        values.push_back(std::stoi(item, &used));
        if (used != item.size()) throw UsageError("bad integer list: " + text);
    }
    if (values.empty()) throw UsageError("empty integer list");
    return values;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw UsageError("bad number list: " + text);
    }
    if (values.empty()) throw UsageError("empty number list");
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concentration-of-measure laboratory"};
    app.require_subcommand(1);

    std::string model = "sphere:2";
    std::uint64_t seed = 12345;
    int samples = 100000;
    double epsilon = 0.3;
    double delta = 0.5;
    std::string function = "dist";
    std::string format = "json";
    std::string out_path;

    // net
    auto* net_cmd = app.add_subcommand("net", "build a delta-net and verify covering");
    double net_delta = 0.0;
    int net_samples = 10000;
    int stop_after = 5000;
    net_cmd->add_option("--model", model, "model designator (sphere:<n>, rp:<n>, cp:<n>)");
    net_cmd->add_option("--delta", net_delta, "net separation (radians)")->required();
    net_cmd->add_option("--seed", seed, "master seed");
    net_cmd->add_option("--samples", net_samples, "covering test samples");
    net_cmd->add_option("--stop-after", stop_after, "consecutive rejections before stopping");
    net_cmd->add_option("--format", format, "json or csv");
    net_cmd->add_option("--out", out_path, "output file (default stdout)");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "cardinality bound chain sweep");
    std::string m_list = "1,2,3,4,5,6,7,8,9,10";
    std::string delta_list = "0.1,0.3,0.5,1.0";
    double K = 1.0;
    std::string bounds_format = "csv";
    bounds_cmd->add_option("--m", m_list, "comma-separated dimensions");
    bounds_cmd->add_option("--delta", delta_list, "comma-separated separations");
    bounds_cmd->add_option("--K", K, "curvature lower bound");
    bounds_cmd->add_option("--format", bounds_format, "csv or json");
    bounds_cmd->add_option("--out", out_path, "output file (default stdout)");

    // tail
    auto* tail_cmd = app.add_subcommand("tail", "empirical tail vs curvature bound");
    double center = 0.0;
    tail_cmd->add_option("--model", model, "model designator");
    tail_cmd->add_option("--seed", seed, "master seed");
    tail_cmd->add_option("--samples", samples, "Monte Carlo samples");
    tail_cmd->add_option("--epsilon", epsilon, "tail threshold")->required();
    tail_cmd->add_option("--function", function, "catalog function label");
    auto* center_opt = tail_cmd->add_option("--center", center,
                                            "fixed center (default: estimated median)");
    tail_cmd->add_option("--format", format, "json, or csv for a sample dump");
    tail_cmd->add_option("--out", out_path, "output file (default stdout)");

    // find
    auto* find_cmd = app.add_subcommand("find", "randomized submanifold search");
    int max_draws = 1000;
    find_cmd->add_option("--model", model, "model designator");
    find_cmd->add_option("--seed", seed, "master seed");
    find_cmd->add_option("--samples", samples, "median estimation samples");
    find_cmd->add_option("--epsilon", epsilon, "target oscillation")->required();
    find_cmd->add_option("--function", function, "catalog function label");
    find_cmd->add_option("--max-draws", max_draws, "isometry draw budget");
    find_cmd->add_option("--format", format, "json");
    find_cmd->add_option("--out", out_path, "output file (default stdout)");

    // disintegrate
    auto* dis_cmd = app.add_subcommand("disintegrate", "nested-vs-global mean identity");
    std::string submanifold = "coord:1";
    std::string dis_function = "sqcoord";
    int outer = 500;
    int inner = 500;
    dis_cmd->add_option("--model", model, "model designator");
    dis_cmd->add_option("--seed", seed, "master seed");
    dis_cmd->add_option("--submanifold", submanifold, "coord:<k> or realpoints");
    dis_cmd->add_option("--function", dis_function,
                        "test function: one, sqcoord, or a catalog label");
    dis_cmd->add_option("--outer", outer, "isometry draws");
    dis_cmd->add_option("--inner", inner, "samples per isometry");
    dis_cmd->add_option("--format", format, "json");
    dis_cmd->add_option("--out", out_path, "output file (default stdout)");

    // curvature
    auto* curv_cmd = app.add_subcommand("curvature", "m-Ricci floor scan");
    int m_value = 2;
    int trials = 10000;
    curv_cmd->add_option("--model", model, "model designator");
    curv_cmd->add_option("--seed", seed, "master seed");
    curv_cmd->add_option("--samples", trials, "random frames");
    curv_cmd->add_option("--m", m_value, "frame size (2..real_dim)");
    curv_cmd->add_option("--format", format, "json");
    curv_cmd->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Output out{out_path};
        if (net_cmd->parsed())
            return run_net(model, net_delta, seed, net_samples, stop_after, format, out);
        if (bounds_cmd->parsed())
            return run_bounds(parse_int_list(m_list), parse_double_list(delta_list), K,
                              bounds_format, out);
        if (tail_cmd->parsed())
            return run_tail(model, seed, samples, epsilon, function, center_opt->count() > 0,
                            center, format, out);
        if (find_cmd->parsed())
            return run_find(model, seed, samples, epsilon, function, max_draws, format, out);
        if (dis_cmd->parsed())
            return run_disintegrate(model, seed, submanifold, dis_function, outer, inner, format,
                                    out);
        if (curv_cmd->parsed())
            return run_curvature(model, seed, trials, m_value, format, out);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CheckFailure& e) {
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
