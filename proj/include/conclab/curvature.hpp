#pragma once

#include <vector>

#include "conclab/geometry.hpp"
#include "conclab/model.hpp"
#include "conclab/rng.hpp"

namespace conclab {

/// Base point with m tangent vectors, orthonormal under the real inner
/// product Re<.,.>. Tangency means <z,v> = 0 over the scalar field: for CP^n
/// complex-orthogonality to the representative z (which covers the iz
/// direction), for real families ordinary orthogonality.
struct TangentFrame {
    AmbientPoint base;
    std::vector<Vector> vectors;

    int size() const { return static_cast<int>(vectors.size()); }
};

/// Residual of the frame conditions: max over the base-norm defect, the
/// tangency inner products and the real Gram-matrix defect. Zero when valid.
double frame_defect(const ManifoldModel& model, const TangentFrame& frame);

/// Uniform base point with m random orthonormal tangent vectors, produced by
/// projecting Gaussian draws onto the tangent space and orthonormalizing over
/// the reals. Near-dependent draws (smallest singular value of the projected
/// pair below 1e-6, or re-orthogonalization residual below 1e-6) are rejected
/// and redrawn. Requires 1 <= m <= real_dim.
TangentFrame sample_tangent_frame(const ManifoldModel& model, int m, RandomStream& rng);

/// Sectional curvature of the plane spanned by the frame's two vectors.
/// Constant 1 for sphere and real projective models; for CP^n under the
/// normalization with range [1/4, 1], (1 + 3 (Re<iu, v>)^2) / 4.
/// Throws if the frame is not an orthonormal tangent 2-frame (defect > 1e-8).
double sectional_curvature(const ManifoldModel& model, const TangentFrame& frame);

/// Sum over j >= 2 of the sectional curvatures of span(e_1, e_j): the
/// m-Ricci curvature with the first vector distinguished. Requires m >= 2.
double m_ricci(const ManifoldModel& model, const TangentFrame& frame);

/// |LHS - RHS| of the inductive identity
///   sum_{j=2}^{m+1} Sec(P_1j) = (1/(m-1)) sum_j sum_{i != j} Sec(P_1i)
/// on a frame with m+1 vectors. Algebraically zero; the residual is roundoff.
double inductive_identity_residual(const ManifoldModel& model, const TangentFrame& frame);

struct RicciScan {
    double min_observed;
    double max_observed;
    TangentFrame argmin;
    double floor_value;   // (m-1) * curvature_floor_K
    int m;
    int trials;
    bool floor_respected; // min_observed >= floor_value - tol
};

/// Min (and max) of m_ricci over random m-frames, against the (m-1)K floor.
RicciScan ricci_floor_scan(const ManifoldModel& model, int m, int trials, RandomStream rng,
                           double tol = 1e-6);

}  // namespace conclab
