#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "conclab/model.hpp"
#include "conclab/rng.hpp"

namespace conclab {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Unit representative of a point. Real-family models keep the imaginary
/// parts exactly zero. Projective representatives are defined up to a unit
/// scalar (sign for RP^n, phase for CP^n): representatives differing by one
/// denote the same point and produce identical distances.
struct AmbientPoint {
    Vector coords;

    int dim() const { return static_cast<int>(coords.size()); }
};

/// Orthogonal (real families) or unitary (CP^n) matrix acting on
/// representatives; the computational stand-in for an isometry of the model.
struct Isometry {
    Matrix matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Hermitian inner product <x,y> = x^* y (real-valued on real-family points).
std::complex<double> hermitian_inner(const Vector& x, const Vector& y);

/// Re<x,y>: the real inner product of the underlying real coordinates.
double real_inner(const Vector& x, const Vector& y);

/// Geodesic distance in radians, in [0, diameter]. The inner product is
/// clamped to [-1, 1] before arccos to absorb roundoff.
double geodesic_distance(const ManifoldModel& model, const AmbientPoint& x, const AmbientPoint& y);

/// Draw from the normalized Riemannian measure: a normalized standard
/// Gaussian vector over the model's scalar field.
AmbientPoint sample_uniform(const ManifoldModel& model, RandomStream& rng);

/// Haar-distributed orthogonal/unitary matrix: QR of a Gaussian matrix with
/// the R diagonal normalized to positive reals (unit modulus in the complex
/// case), which makes the factor exactly Haar rather than merely orthogonal.
Isometry sample_haar_isometry(const ManifoldModel& model, RandomStream& rng);

AmbientPoint apply_isometry(const Isometry& Q, const AmbientPoint& x);

/// Composition acting as apply(compose(a, b), x) == apply(a, apply(b, x)).
Isometry compose(const Isometry& a, const Isometry& b);

/// max-norm of Q^* Q - I.
double unitarity_defect(const Isometry& Q);

/// i-th standard basis vector as a representative (0-based).
AmbientPoint basis_point(const ManifoldModel& model, int i);

bool is_unit(const AmbientPoint& x, double tol = 1e-12);

/// Same point of the model (distance below tol; absorbs sign/phase).
bool same_point(const ManifoldModel& model, const AmbientPoint& x, const AmbientPoint& y,
                double tol = 1e-9);

/// A totally geodesic embedding of a lower model into an ambient model.
///
/// CoordinateSub k embeds the index-k model of the same family by padding
/// representatives with zeros. RealPoints is the real locus RP^n inside CP^n:
/// a real unit vector reinterpreted as a complex one.
class GeodesicSubmanifoldSpec {
public:
    enum class Kind { CoordinateSub, RealPoints };

    static GeodesicSubmanifoldSpec coordinate(const ManifoldModel& ambient, int k);
    static GeodesicSubmanifoldSpec real_points(const ManifoldModel& ambient);

    Kind kind() const { return kind_; }
    int sub_index() const { return k_; }
    const ManifoldModel& ambient() const { return ambient_; }
    const ManifoldModel& low_model() const { return low_; }

    /// Ratio of ambient geodesic distance between embedded images to the low
    /// model's intrinsic distance. Coordinate subspaces embed isometrically
    /// (ratio 1). The real locus of CP^n carries the Fubini-Study restriction,
    /// which doubles RP^n distances (curvature 1/4 instead of 1), so the
    /// ratio is exactly 2.
    double distance_scale() const;

    /// "coord:<k>" or "realpoints"; parsed relative to an ambient model.
    std::string designator() const;
    static GeodesicSubmanifoldSpec parse(const ManifoldModel& ambient, const std::string& text);

    friend bool operator==(const GeodesicSubmanifoldSpec&, const GeodesicSubmanifoldSpec&) = default;

private:
    GeodesicSubmanifoldSpec(Kind kind, int k, ManifoldModel ambient, ManifoldModel low)
        : kind_(kind), k_(k), ambient_(ambient), low_(low) {}

    Kind kind_;
    int k_;
    ManifoldModel ambient_;
    ManifoldModel low_;
};

/// Embeds a representative of the low model into the ambient model.
AmbientPoint embed(const GeodesicSubmanifoldSpec& spec, const AmbientPoint& p_low);

}  // namespace conclab
