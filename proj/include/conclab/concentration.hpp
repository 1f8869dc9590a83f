#pragma once

#include <cstdint>
#include <vector>

#include "conclab/lipschitz.hpp"
#include "conclab/model.hpp"
#include "conclab/rng.hpp"

namespace conclab {

/// Empirical median with a 99% order-statistic confidence interval.
struct MedianEstimate {
    double value;
    double ci_low;
    double ci_high;
    int n_samples;

    double ci_half_width() const;
};

MedianEstimate estimate_median(const LipschitzFunction& T, const ManifoldModel& model,
                               int n_samples, RandomStream rng);

/// Tail measurement mu(|T - m_T| > epsilon) against the curvature bound
/// exp(-ricci_floor * epsilon^2 / 2).
struct ConcentrationReport {
    double median_estimate;
    double median_ci_low;
    double median_ci_high;
    double epsilon;
    double empirical_tail;
    double theoretical_bound;
    int n_samples;
    std::uint64_t seed;

    double binomial_se() const;
    bool within_bound(double z = 4.0) const;  // empirical <= bound + z * SE
};

/// Measures the tail fraction at a given center m_T (pass the empirical
/// median from estimate_median, or an exact value when symmetry provides
/// one). The median fields record the center; CI fields are filled by the
/// caller when an estimate with a CI is available, else collapse to m_T.
ConcentrationReport empirical_tail(const LipschitzFunction& T, const ManifoldModel& model,
                                   double m_T, double epsilon, int n_samples, RandomStream rng,
                                   std::vector<double>* sample_dump = nullptr);

/// Max over random pairs of |T(x) - T(y)| / d(x, y); pairs closer than 1e-6
/// are skipped to avoid 0/0 noise.
double empirical_lipschitz(const LipschitzFunction& T, const ManifoldModel& model, int n_pairs,
                           RandomStream rng);

}  // namespace conclab
