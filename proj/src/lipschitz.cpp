#include "conclab/lipschitz.hpp"

#include <algorithm>
#include <cmath>

#include "conclab/errors.hpp"
#include "conclab/rng.hpp"

namespace conclab {

namespace {

const std::vector<Family> kAllFamilies = {Family::Sphere, Family::RealProjective,
                                          Family::ComplexProjective};

AmbientPoint ones_anchor(const ManifoldModel& model) {
    const int d = model.ambient_dim();
    Vector v = Vector::Constant(d, std::complex<double>(1.0 / std::sqrt(double(d)), 0.0));
    return AmbientPoint{std::move(v)};
}

std::vector<LipschitzFunction> make_catalog() {
    std::vector<LipschitzFunction> entries;

    entries.push_back(
        {"coord", 1.0, {Family::Sphere}, [](const ManifoldModel& model, const AmbientPoint& x) {
             return real_inner(basis_point(model, 0).coords, x.coords);
         }});

    entries.push_back(
        {"abscoord", 1.0, kAllFamilies, [](const ManifoldModel& model, const AmbientPoint& x) {
             return std::abs(hermitian_inner(basis_point(model, 0).coords, x.coords));
         }});

    entries.push_back(
        {"dist", 1.0, kAllFamilies, [](const ManifoldModel& model, const AmbientPoint& x) {
             return geodesic_distance(model, basis_point(model, 0), x);
         }});

    entries.push_back(
        {"mindist", 1.0, kAllFamilies, [](const ManifoldModel& model, const AmbientPoint& x) {
             double best = geodesic_distance(model, basis_point(model, 0), x);
             if (model.ambient_dim() > 1)
                 best = std::min(best, geodesic_distance(model, basis_point(model, 1), x));
             return std::min(best, geodesic_distance(model, ones_anchor(model), x));
         }});

    // Convex combination of abscoord and dist; weights are fixed by a seeded
    // stream so the entry is a stable catalog member, not per-run noise.
    RandomStream mix_rng(0xC0FFEE);
    const double w = mix_rng.uniform01();
    entries.push_back(
        {"mix", 1.0, kAllFamilies, [w](const ManifoldModel& model, const AmbientPoint& x) {
             const double a =
                 std::abs(hermitian_inner(basis_point(model, 0).coords, x.coords));
             const double b = geodesic_distance(model, basis_point(model, 0), x);
             return w * a + (1.0 - w) * b;
         }});

    entries.push_back({"const", 0.0, kAllFamilies,
                       [](const ManifoldModel&, const AmbientPoint&) { return 0.7; }});

    return entries;
}

}  // namespace

bool LipschitzFunction::compatible(const ManifoldModel& model) const {
    return std::find(compatible_families.begin(), compatible_families.end(), model.family()) !=
           compatible_families.end();
}

const std::vector<LipschitzFunction>& catalog() {
    static const std::vector<LipschitzFunction> entries = make_catalog();
    return entries;
}

const LipschitzFunction& find_function(const std::string& label) {
    for (const LipschitzFunction& f : catalog())
        if (f.label == label) return f;
    throw UsageError("unknown function label: " + label);
}

}  // namespace conclab
