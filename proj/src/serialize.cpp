#include "conclab/serialize.hpp"

#include <cstdio>

#include <json.hpp>

#include "conclab/errors.hpp"

namespace conclab {

namespace {

using nlohmann::json;

json parse_checked(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw UsageError("malformed JSON input");
    return j;
}

const json& field(const json& j, const char* name) {
    if (!j.is_object()) throw UsageError("JSON input must be an object");
    const auto it = j.find(name);
    if (it == j.end()) throw UsageError(std::string("JSON input is missing field '") + name + "'");
    return *it;
}

void check_schema(const json& j) {
    const std::string schema = field(j, "schema").get<std::string>();
    if (schema != "v1") throw UsageError("unsupported report schema '" + schema + "'");
}

void write_point(JsonWriter& w, const ManifoldModel& model, const AmbientPoint& p) {
    w.begin_array();
    for (int i = 0; i < p.dim(); ++i) {
        if (model.is_real()) {
            w.value(p.coords[i].real());
        } else {
            w.begin_array().value(p.coords[i].real()).value(p.coords[i].imag()).end_array();
        }
    }
    w.end_array();
}

AmbientPoint read_point(const ManifoldModel& model, const json& arr) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != model.ambient_dim())
        throw UsageError("point has wrong arity for " + model.designator());
    Vector v(model.ambient_dim());
    for (int i = 0; i < model.ambient_dim(); ++i) {
        if (model.is_real()) {
            v[i] = std::complex<double>(arr[i].get<double>(), 0.0);
        } else {
            if (!arr[i].is_array() || arr[i].size() != 2)
                throw UsageError("complex coordinate must be a [re, im] pair");
            v[i] = std::complex<double>(arr[i][0].get<double>(), arr[i][1].get<double>());
        }
    }
    return AmbientPoint{std::move(v)};
}

void write_median(JsonWriter& w, const MedianEstimate& m) {
    w.begin_object();
    w.key("value").value(m.value);
    w.key("ci_low").value(m.ci_low);
    w.key("ci_high").value(m.ci_high);
    w.key("n_samples").value(m.n_samples);
    w.end_object();
}

MedianEstimate read_median(const json& j) {
    MedianEstimate m{};
    m.value = field(j, "value").get<double>();
    m.ci_low = field(j, "ci_low").get<double>();
    m.ci_high = field(j, "ci_high").get<double>();
    m.n_samples = field(j, "n_samples").get<int>();
    return m;
}

}  // namespace

JsonWriter& JsonWriter::begin_object() {
    comma();
    out_ += '{';
    pending_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    pending_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma();
    out_ += '[';
    pending_.push_back(false);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    pending_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
    comma();
    write_string(k);
    out_ += ':';
    // A key must not trigger another separator before its value.
    pending_.back() = false;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    comma();
    out_ += format_double(v);
    return *this;
}

JsonWriter& JsonWriter::value(int v) { return value(static_cast<std::int64_t>(v)); }

JsonWriter& JsonWriter::value(std::int64_t v) {
    comma();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
    comma();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    comma();
    write_string(v);
    return *this;
}

void JsonWriter::write_string(std::string_view v) {
    out_ += '"';
    for (const char c : v) {
        switch (c) {
            case '"': out_ += "\\\""; break;
            case '\\': out_ += "\\\\"; break;
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\r': out_ += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out_ += buf;
                } else {
                    out_ += c;
                }
        }
    }
    out_ += '"';
}

JsonWriter& JsonWriter::raw(std::string_view json_text) {
    comma();
    out_ += json_text;
    return *this;
}

void JsonWriter::comma() {
    if (pending_.empty()) return;
    if (pending_.back()) out_ += ',';
    pending_.back() = true;
}

std::string JsonWriter::format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_json(const Net& net) {
    JsonWriter w;
    w.begin_object();
    w.key("model").value(net.model.designator());
    w.key("delta").value(net.delta);
    w.key("points").begin_array();
    for (const AmbientPoint& p : net.points) write_point(w, net.model, p);
    w.end_array();
    w.key("seed").value(net.build_seed);
    w.end_object();
    return w.str();
}

Net net_from_json(const std::string& text) {
    const json j = parse_checked(text);
    const ManifoldModel model = ManifoldModel::parse(field(j, "model").get<std::string>());
    const double delta = field(j, "delta").get<double>();
    const json& pts = field(j, "points");
    if (!pts.is_array()) throw UsageError("net points must be an array");
    std::vector<AmbientPoint> points;
    points.reserve(pts.size());
    for (const json& p : pts) points.push_back(read_point(model, p));
    const std::uint64_t seed = field(j, "seed").get<std::uint64_t>();
    return Net{std::move(points), delta, model, seed, 0};
}

std::string to_json(const ConcentrationReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value("v1");
    w.key("median_estimate").value(report.median_estimate);
    w.key("median_ci_low").value(report.median_ci_low);
    w.key("median_ci_high").value(report.median_ci_high);
    w.key("epsilon").value(report.epsilon);
    w.key("empirical_tail").value(report.empirical_tail);
    w.key("theoretical_bound").value(report.theoretical_bound);
    w.key("n_samples").value(report.n_samples);
    w.key("seed").value(report.seed);
    w.end_object();
    return w.str();
}

ConcentrationReport concentration_report_from_json(const std::string& text) {
    const json j = parse_checked(text);
    check_schema(j);
    ConcentrationReport r{};
    r.median_estimate = field(j, "median_estimate").get<double>();
    r.median_ci_low = field(j, "median_ci_low").get<double>();
    r.median_ci_high = field(j, "median_ci_high").get<double>();
    r.epsilon = field(j, "epsilon").get<double>();
    r.empirical_tail = field(j, "empirical_tail").get<double>();
    r.theoretical_bound = field(j, "theoretical_bound").get<double>();
    r.n_samples = field(j, "n_samples").get<int>();
    r.seed = field(j, "seed").get<std::uint64_t>();
    return r;
}

std::string to_json(const DisintegrationReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("schema").value("v1");
    w.key("global_mean").value(report.global_mean);
    w.key("nested_mean").value(report.nested_mean);
    w.key("global_se").value(report.global_se);
    w.key("nested_se").value(report.nested_se);
    w.key("combined_se").value(report.combined_se);
    w.key("outer").value(report.outer);
    w.key("inner").value(report.inner);
    w.key("seed").value(report.seed);
    w.key("consistent").value(report.consistent());
    w.end_object();
    return w.str();
}

DisintegrationReport disintegration_report_from_json(const std::string& text) {
    const json j = parse_checked(text);
    check_schema(j);
    DisintegrationReport r{};
    r.global_mean = field(j, "global_mean").get<double>();
    r.nested_mean = field(j, "nested_mean").get<double>();
    r.global_se = field(j, "global_se").get<double>();
    r.nested_se = field(j, "nested_se").get<double>();
    r.combined_se = field(j, "combined_se").get<double>();
    r.outer = field(j, "outer").get<int>();
    r.inner = field(j, "inner").get<int>();
    r.seed = field(j, "seed").get<std::uint64_t>();
    return r;
}

std::string to_json(const ConcentrationCertificate& cert) {
    const ManifoldModel& model = cert.spec.ambient();
    JsonWriter w;
    w.begin_object();
    w.key("schema").value("v1");
    w.key("model").value(model.designator());
    w.key("submanifold").value(cert.spec.designator());
    w.key("s").value(cert.s);
    w.key("epsilon").value(cert.epsilon);
    w.key("median");
    write_median(w, cert.median);
    w.key("isometry").begin_array();
    for (int i = 0; i < cert.isometry.dim(); ++i) {
        w.begin_array();
        for (int j = 0; j < cert.isometry.dim(); ++j) {
            const std::complex<double> e = cert.isometry.matrix(i, j);
            if (model.is_real()) {
                w.value(e.real());
            } else {
                w.begin_array().value(e.real()).value(e.imag()).end_array();
            }
        }
        w.end_array();
    }
    w.end_array();
    w.key("net").begin_object();
    w.key("model").value(cert.net.model.designator());
    w.key("delta").value(cert.net.delta);
    w.key("points").begin_array();
    for (const AmbientPoint& p : cert.net.points) write_point(w, cert.net.model, p);
    w.end_array();
    w.key("seed").value(cert.net.build_seed);
    w.end_object();
    w.key("max_net_deviation").value(cert.max_net_deviation);
    w.key("max_dense_deviation").value(cert.max_dense_deviation);
    w.key("draws_used").value(cert.draws_used);
    w.key("theoretical_success_floor").value(cert.theoretical_success_floor);
    w.key("seed").value(cert.seed);
    w.end_object();
    return w.str();
}

ConcentrationCertificate certificate_from_json(const std::string& text) {
    const json j = parse_checked(text);
    check_schema(j);
    const ManifoldModel model = ManifoldModel::parse(field(j, "model").get<std::string>());
    const GeodesicSubmanifoldSpec spec =
        GeodesicSubmanifoldSpec::parse(model, field(j, "submanifold").get<std::string>());

    const json& qm = field(j, "isometry");
    const int d = model.ambient_dim();
    if (!qm.is_array() || static_cast<int>(qm.size()) != d)
        throw UsageError("isometry matrix has wrong shape");
    Matrix Q(d, d);
    for (int i = 0; i < d; ++i) {
        const json& row = qm[i];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw UsageError("isometry matrix has wrong shape");
        for (int k = 0; k < d; ++k) {
            if (model.is_real()) {
                Q(i, k) = std::complex<double>(row[k].get<double>(), 0.0);
            } else {
                if (!row[k].is_array() || row[k].size() != 2)
                    throw UsageError("complex matrix entry must be a [re, im] pair");
                Q(i, k) = std::complex<double>(row[k][0].get<double>(), row[k][1].get<double>());
            }
        }
    }

    const json& nj = field(j, "net");
    const ManifoldModel net_model = ManifoldModel::parse(field(nj, "model").get<std::string>());
    std::vector<AmbientPoint> points;
    for (const json& p : field(nj, "points")) points.push_back(read_point(net_model, p));
    Net net{std::move(points), field(nj, "delta").get<double>(), net_model,
            field(nj, "seed").get<std::uint64_t>(), 0};

    return ConcentrationCertificate{Isometry{std::move(Q)},
                                    spec,
                                    std::move(net),
                                    field(j, "s").get<int>(),
                                    field(j, "epsilon").get<double>(),
                                    read_median(field(j, "median")),
                                    field(j, "max_net_deviation").get<double>(),
                                    field(j, "max_dense_deviation").get<double>(),
                                    field(j, "draws_used").get<int>(),
                                    field(j, "theoretical_success_floor").get<double>(),
                                    field(j, "seed").get<std::uint64_t>()};
}

}  // namespace conclab
