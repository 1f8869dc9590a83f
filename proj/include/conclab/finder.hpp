#pragma once

#include <cstdint>
#include <functional>

#include "conclab/concentration.hpp"
#include "conclab/geometry.hpp"
#include "conclab/lipschitz.hpp"
#include "conclab/model.hpp"
#include "conclab/nets.hpp"
#include "conclab/rng.hpp"

namespace conclab {

/// epsilon^2 K (n-1) / (8 ln(12 / (epsilon sqrt K))), the admissible-dimension
/// formula before flooring. n is the ambient real dimension. Requires
/// epsilon sqrt K < 12 and n >= 2.
double dimension_formula(double epsilon, double K, int n);

/// min(r, the largest integer strictly below dimension_formula). Throws
/// NoAdmissibleDimension when that is < 1.
int dimension_bound(double epsilon, double K, int n, int r);

/// max(0, 1 - N exp(-epsilon^2 K (n-1) / 8)): per-draw probability floor for
/// a random isometry keeping all N net values within epsilon/2 of the median.
double success_floor(std::int64_t N, double epsilon, double K, int n);

/// (epsilon sqrt K / 6)^s in log space. Requires epsilon sqrt K <= pi, s >= 0.
double ball_mass_floor(int s, double epsilon, double K);

struct FinderOptions {
    int max_draws = 1000;
    int median_samples = 100000;
    int dense_samples = 10000;
    int net_stop_after = 5000;
    int lipschitz_guard_pairs = 2000;
    /// When set, a draw is accepted only if this second function also stays
    /// within epsilon/2 of its own median on the same transported net (the
    /// union-bound variant: two functions, one submanifold; the success floor
    /// uses 2N).
    const LipschitzFunction* second_function = nullptr;
};

/// Everything needed to audit one successful search: the accepted isometry,
/// the submanifold it was applied to, the transported net, and the measured
/// deviations with the tolerance budget that admitted them.
struct ConcentrationCertificate {
    Isometry isometry;
    GeodesicSubmanifoldSpec spec;
    Net net;  // transported: points z_j = Q y_j in the ambient model
    int s;    // achieved submanifold real dimension
    double epsilon;
    MedianEstimate median;
    double max_net_deviation;    // <= epsilon/2 + median CI half-width
    double max_dense_deviation;  // <= epsilon + median CI half-width
    int draws_used;
    double theoretical_success_floor;
    std::uint64_t seed;
};

/// Randomized search for a totally geodesic submanifold on which T is
/// epsilon-constant around its median:
///   s = dimension_bound; delta = epsilon/2; build a delta-net on the
///   coordinate submanifold of dimension s; estimate the median; draw Haar
///   isometries until one keeps every net value within epsilon/2 + CI of the
///   median; validate on a dense transported sample against epsilon + CI.
/// Throws MaxDrawsExceeded when the draw budget runs out, and CheckFailure
/// (distinguishing a covering failure from a function failure) when dense
/// validation contradicts an accepted net.
ConcentrationCertificate find_submanifold(const LipschitzFunction& T, const ManifoldModel& model,
                                          double epsilon, RandomStream rng,
                                          const FinderOptions& options = {});

/// Re-runs the dense validation of a certificate with a fresh seed.
double dense_deviation(const ConcentrationCertificate& cert, const LipschitzFunction& T,
                       int samples, RandomStream rng);

struct DisintegrationReport {
    double global_mean;
    double nested_mean;
    double global_se;
    double nested_se;
    double combined_se;
    int outer;
    int inner;
    std::uint64_t seed;

    /// |global - nested| <= 3 combined SE (tiny absolute slack absorbs the
    /// zero-variance case, where both sides agree to roundoff).
    bool consistent() const;
};

/// Checks the disintegration identity: the mean of u over the ambient model
/// equals the mean over random isometries Q of the mean of u over Q applied
/// to the embedded low model. The left side uses outer*inner direct uniform
/// samples; the right side uses `outer` Haar isometries with `inner` embedded
/// samples each.
DisintegrationReport disintegration_check(
    const std::function<double(const ManifoldModel&, const AmbientPoint&)>& u,
    const ManifoldModel& model, const GeodesicSubmanifoldSpec& spec, int outer, int inner,
    RandomStream rng);

}  // namespace conclab
