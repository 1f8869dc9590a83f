#include "conclab/geometry.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "conclab/errors.hpp"

namespace conclab {

namespace {

double clamp_unit(double t) { return std::clamp(t, -1.0, 1.0); }

void check_dim(const ManifoldModel& model, const AmbientPoint& x, const char* where) {
    if (x.dim() != model.ambient_dim())
        throw UsageError(std::string(where) + ": point has dimension " + std::to_string(x.dim()) +
                         ", model " + model.designator() + " expects " +
                         std::to_string(model.ambient_dim()));
}

}  // namespace

std::complex<double> hermitian_inner(const Vector& x, const Vector& y) {
    return x.dot(y);  // Eigen's dot conjugates the left argument
}

double real_inner(const Vector& x, const Vector& y) {
    return x.dot(y).real();
}

double geodesic_distance(const ManifoldModel& model, const AmbientPoint& x, const AmbientPoint& y) {
    check_dim(model, x, "geodesic_distance");
    check_dim(model, y, "geodesic_distance");
    switch (model.family()) {
        case Family::Sphere:
            return std::acos(clamp_unit(real_inner(x.coords, y.coords)));
        case Family::RealProjective:
            return std::acos(clamp_unit(std::abs(real_inner(x.coords, y.coords))));
        case Family::ComplexProjective:
            return 2.0 * std::acos(clamp_unit(std::abs(hermitian_inner(x.coords, y.coords))));
    }
    throw UsageError("geodesic_distance: unknown family");
}

AmbientPoint sample_uniform(const ManifoldModel& model, RandomStream& rng) {
    const int d = model.ambient_dim();
    Vector v(d);
    if (model.is_real()) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const double g = rng.normal();
                v[i] = std::complex<double>(g, 0.0);
                norm2 += g * g;
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < d; ++i) v[i] = std::complex<double>(v[i].real() * inv, 0.0);
    } else {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int i = 0; i < d; ++i) {
                const std::complex<double> g = rng.complex_normal();
                v[i] = g;
                norm2 += std::norm(g);
            }
        } while (norm2 == 0.0);
        v *= 1.0 / std::sqrt(norm2);
    }
    return AmbientPoint{std::move(v)};
}

Isometry sample_haar_isometry(const ManifoldModel& model, RandomStream& rng) {
    const int d = model.ambient_dim();
    if (model.is_real()) {
        Eigen::MatrixXd g(d, d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        Eigen::MatrixXd q = qr.householderQ();
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int j = 0; j < d; ++j)
            if (r(j, j) < 0.0) q.col(j) = -q.col(j);
        return Isometry{q.cast<std::complex<double>>()};
    }
    Matrix g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        const std::complex<double> rjj = r(j, j);
        const double mag = std::abs(rjj);
        if (mag > 0.0) q.col(j) *= rjj / mag;  // fold the phase of R's diagonal into Q
    }
    return Isometry{std::move(q)};
}

AmbientPoint apply_isometry(const Isometry& Q, const AmbientPoint& x) {
    if (Q.dim() != x.dim())
        throw UsageError("apply_isometry: dimension mismatch (" + std::to_string(Q.dim()) + " vs " +
                         std::to_string(x.dim()) + ")");
    return AmbientPoint{Q.matrix * x.coords};
}

Isometry compose(const Isometry& a, const Isometry& b) {
    if (a.dim() != b.dim()) throw UsageError("compose: dimension mismatch");
    return Isometry{a.matrix * b.matrix};
}

double unitarity_defect(const Isometry& Q) {
    const Matrix d = Q.matrix.adjoint() * Q.matrix - Matrix::Identity(Q.dim(), Q.dim());
    return d.cwiseAbs().maxCoeff();
}

AmbientPoint basis_point(const ManifoldModel& model, int i) {
    const int d = model.ambient_dim();
    if (i < 0 || i >= d)
        throw UsageError("basis_point: index " + std::to_string(i) + " out of range for " +
                         model.designator());
    Vector v = Vector::Zero(d);
    v[i] = std::complex<double>(1.0, 0.0);
    return AmbientPoint{std::move(v)};
}

bool is_unit(const AmbientPoint& x, double tol) {
    return std::abs(x.coords.norm() - 1.0) <= tol;
}

bool same_point(const ManifoldModel& model, const AmbientPoint& x, const AmbientPoint& y,
                double tol) {
    return geodesic_distance(model, x, y) <= tol;
}

GeodesicSubmanifoldSpec GeodesicSubmanifoldSpec::coordinate(const ManifoldModel& ambient, int k) {
    if (k < 1 || k >= ambient.index())
        throw UsageError("coordinate submanifold index must lie in [1, " +
                         std::to_string(ambient.index() - 1) + "] for " + ambient.designator() +
                         ", got " + std::to_string(k));
    return GeodesicSubmanifoldSpec(Kind::CoordinateSub, k, ambient,
                                   ManifoldModel(ambient.family(), k));
}

GeodesicSubmanifoldSpec GeodesicSubmanifoldSpec::real_points(const ManifoldModel& ambient) {
    if (ambient.family() != Family::ComplexProjective)
        throw UsageError("real-point locus is only defined inside cp:<n>, got " +
                         ambient.designator());
    return GeodesicSubmanifoldSpec(Kind::RealPoints, ambient.index(), ambient,
                                   ManifoldModel(Family::RealProjective, ambient.index()));
}

double GeodesicSubmanifoldSpec::distance_scale() const {
    return kind_ == Kind::RealPoints ? 2.0 : 1.0;
}

std::string GeodesicSubmanifoldSpec::designator() const {
    return kind_ == Kind::RealPoints ? "realpoints" : "coord:" + std::to_string(k_);
}

GeodesicSubmanifoldSpec GeodesicSubmanifoldSpec::parse(const ManifoldModel& ambient,
                                                       const std::string& text) {
    if (text == "realpoints") return real_points(ambient);
    const std::string prefix = "coord:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string rest = text.substr(prefix.size());
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(rest, &used);
        } catch (const std::exception&) {
            throw UsageError("bad submanifold designator: " + text);
        }
        if (used != rest.size()) throw UsageError("bad submanifold designator: " + text);
        return coordinate(ambient, k);
    }
    throw UsageError("bad submanifold designator: " + text +
                     " (expected coord:<k> or realpoints)");
}

AmbientPoint embed(const GeodesicSubmanifoldSpec& spec, const AmbientPoint& p_low) {
    const ManifoldModel& low = spec.low_model();
    if (p_low.dim() != low.ambient_dim())
        throw UsageError("embed: point has dimension " + std::to_string(p_low.dim()) +
                         ", low model " + low.designator() + " expects " +
                         std::to_string(low.ambient_dim()));
    if (spec.kind() == GeodesicSubmanifoldSpec::Kind::RealPoints) {
        // RP^n representative reused verbatim as a CP^n representative. The
        // components are already real; copying keeps them exactly real.
        return AmbientPoint{p_low.coords};
    }
    Vector v = Vector::Zero(spec.ambient().ambient_dim());
    v.head(p_low.dim()) = p_low.coords;
    return AmbientPoint{std::move(v)};
}

}  // namespace conclab
