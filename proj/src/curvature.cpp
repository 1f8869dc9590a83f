#include "conclab/curvature.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "conclab/errors.hpp"

namespace conclab {

namespace {

// Removes the scalar-field span of z: real span for real families, complex
// span (z and iz together) for CP^n. The result stays in the tangent space
// {v : <z,v> = 0} at z.
Vector project_tangent(const ManifoldModel& model, const Vector& z, const Vector& g) {
    if (model.is_real()) return g - Vector(real_inner(z, g) * z);
    return g - Vector(hermitian_inner(z, g) * z);
}

Vector gaussian_vector(const ManifoldModel& model, RandomStream& rng) {
    const int d = model.ambient_dim();
    Vector g(d);
    if (model.is_real()) {
        for (int i = 0; i < d; ++i) g[i] = std::complex<double>(rng.normal(), 0.0);
    } else {
        for (int i = 0; i < d; ++i) g[i] = rng.complex_normal();
    }
    return g;
}

double pair_curvature(const ManifoldModel& model, const Vector& u, const Vector& v) {
    if (model.family() != Family::ComplexProjective) return 1.0;
    // Re<iu, v> = Im<u, v> under the convention <x,y> = sum conj(x_k) y_k.
    const double tau = hermitian_inner(u, v).imag();
    return (1.0 + 3.0 * tau * tau) / 4.0;
}

void require_valid(const ManifoldModel& model, const TangentFrame& frame, int min_vectors,
                   const char* op) {
    if (frame.size() < min_vectors)
        throw UsageError(std::string(op) + ": frame needs at least " +
                         std::to_string(min_vectors) + " vectors, got " +
                         std::to_string(frame.size()));
    const double defect = frame_defect(model, frame);
    if (defect > 1e-8)
        throw UsageError(std::string(op) + ": frame is not orthonormal-tangent (defect " +
                         std::to_string(defect) + ")");
}

}  // namespace

double frame_defect(const ManifoldModel& model, const TangentFrame& frame) {
    const Vector& z = frame.base.coords;
    double worst = std::abs(z.norm() - 1.0);
    const int m = frame.size();
    for (int i = 0; i < m; ++i) {
        const Vector& vi = frame.vectors[i];
        worst = std::max(worst, std::abs(hermitian_inner(z, vi)));
        for (int j = i; j < m; ++j) {
            const double g = real_inner(vi, frame.vectors[j]);
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

TangentFrame sample_tangent_frame(const ManifoldModel& model, int m, RandomStream& rng) {
    if (m < 1 || m > model.real_dim())
        throw UsageError("sample_tangent_frame: m must lie in [1, " +
                         std::to_string(model.real_dim()) + "] for " + model.designator() +
                         ", got " + std::to_string(m));
    AmbientPoint base = sample_uniform(model, rng);
    std::vector<Vector> vectors;
    vectors.reserve(m);
    while (static_cast<int>(vectors.size()) < m) {
        Vector t = project_tangent(model, base.coords, gaussian_vector(model, rng));
        // Two Gram-Schmidt passes over the real inner product keep the Gram
        // defect at roundoff level even for nearly dependent draws.
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& e : vectors) t -= Vector(real_inner(e, t) * e);
        const double norm = t.norm();
        if (norm < 1e-6) continue;  // near-dependent draw, reject
        vectors.push_back(t / norm);
    }
    return TangentFrame{std::move(base), std::move(vectors)};
}

double sectional_curvature(const ManifoldModel& model, const TangentFrame& frame) {
    require_valid(model, frame, 2, "sectional_curvature");
    if (frame.size() != 2)
        throw UsageError("sectional_curvature: expected a 2-frame, got " +
                         std::to_string(frame.size()) + " vectors");
    return pair_curvature(model, frame.vectors[0], frame.vectors[1]);
}

double m_ricci(const ManifoldModel& model, const TangentFrame& frame) {
    require_valid(model, frame, 2, "m_ricci");
    double total = 0.0;
    for (int j = 1; j < frame.size(); ++j)
        total += pair_curvature(model, frame.vectors[0], frame.vectors[j]);
    return total;
}

double inductive_identity_residual(const ManifoldModel& model, const TangentFrame& frame) {
    require_valid(model, frame, 3, "inductive_identity_residual");
    const int count = frame.size();  // m + 1 vectors
    std::vector<double> sec(count, 0.0);
    for (int j = 1; j < count; ++j)
        sec[j] = pair_curvature(model, frame.vectors[0], frame.vectors[j]);
    double lhs = 0.0;
    for (int j = 1; j < count; ++j) lhs += sec[j];
    double rhs = 0.0;
    for (int j = 1; j < count; ++j)
        for (int i = 1; i < count; ++i)
            if (i != j) rhs += sec[i];
    rhs /= static_cast<double>(count - 2);  // m - 1
    return std::abs(lhs - rhs);
}

RicciScan ricci_floor_scan(const ManifoldModel& model, int m, int trials, RandomStream rng,
                           double tol) {
    if (m < 2 || m > model.real_dim())
        throw UsageError("ricci_floor_scan: m must lie in [2, " +
                         std::to_string(model.real_dim()) + "] for " + model.designator() +
                         ", got " + std::to_string(m));
    if (trials < 1) throw UsageError("ricci_floor_scan: trials must be positive");

    RicciScan scan{};
    scan.m = m;
    scan.trials = trials;
    scan.floor_value = (m - 1) * model.curvature_floor();
    scan.min_observed = std::numeric_limits<double>::infinity();
    scan.max_observed = -std::numeric_limits<double>::infinity();

    for (int i = 0; i < trials; ++i) {
        TangentFrame frame = sample_tangent_frame(model, m, rng);
        const double value = m_ricci(model, frame);
        if (value < scan.min_observed) {
            scan.min_observed = value;
            scan.argmin = std::move(frame);
        }
        scan.max_observed = std::max(scan.max_observed, value);
    }
    scan.floor_respected = scan.min_observed >= scan.floor_value - tol;
    return scan;
}

}  // namespace conclab
