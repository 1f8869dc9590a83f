#pragma once

#include <string>

namespace conclab {

enum class Family { Sphere, RealProjective, ComplexProjective };

bool is_real_family(Family f);
std::string family_name(Family f);

/// One model space from the three supported families. Representatives live in
/// dimension n+1 over the scalar field (real for Sphere/RealProjective,
/// complex for ComplexProjective); every metric constant is derived from
/// (family, n).
class ManifoldModel {
public:
    ManifoldModel(Family family, int n);

    /// Parses the designator grammar `sphere:<n>`, `rp:<n>`, `cp:<n>`.
    static ManifoldModel parse(const std::string& designator);
    std::string designator() const;

    Family family() const { return family_; }
    /// The family index n (S^n, RP^n, CP^n).
    int index() const { return n_; }
    /// Length of a representative vector over the scalar field.
    int ambient_dim() const { return n_ + 1; }
    /// Real manifold dimension: n for the real families, 2n for CP^n.
    int real_dim() const;
    /// Sectional curvature lower bound: 1, 1, 1/4.
    double curvature_floor() const;
    /// (real_dim - 1) * curvature_floor.
    double ricci_floor() const;
    /// Geodesic diameter: pi, pi/2, pi.
    double diameter() const;
    /// Largest real dimension of a proper totally geodesic submanifold.
    int max_tg_dim() const;
    bool is_real() const { return is_real_family(family_); }

    friend bool operator==(const ManifoldModel&, const ManifoldModel&) = default;

private:
    Family family_;
    int n_;
};

}  // namespace conclab
