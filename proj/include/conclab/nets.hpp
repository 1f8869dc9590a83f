#pragma once

#include <cstdint>
#include <vector>

#include "conclab/geometry.hpp"
#include "conclab/model.hpp"
#include "conclab/rng.hpp"

namespace conclab {

/// A delta-separated point set built by greedy random packing. Separation is
/// exact by construction; the covering property is statistical (maximality up
/// to the stop rule) and is checked separately by verify_covering.
struct Net {
    std::vector<AmbientPoint> points;
    double delta = 0.0;
    ManifoldModel model;
    std::uint64_t build_seed = 0;
    int stop_evidence = 0;  // consecutive rejections when the build stopped

    int size() const { return static_cast<int>(points.size()); }
};

/// Greedy random packing: draw uniform candidates, accept each iff it is at
/// geodesic distance >= delta from every accepted point, stop after
/// stop_after consecutive rejections. Requires 0 < delta <= diameter.
Net build_net(const ManifoldModel& model, double delta, RandomStream rng, int stop_after = 5000);

struct CoveringReport {
    double max_min_distance;  // max over samples of distance to the net
    double fraction_covered;  // fraction within delta of some net point
    int samples;
};

/// Statistical covering check on uniform test samples.
CoveringReport verify_covering(const Net& net, int samples, RandomStream rng);

/// (6 / (delta sqrt K))^m, computed in log space. Requires
/// 0 < delta sqrt K <= pi.
double cardinality_bound_closed(int m, double delta, double K);

/// Volume-ratio bound: integral_0^{pi/2} sin^{m-1} / integral_0^{x/2} sin^{m-1}
/// with x = delta sqrt K. Quadrature at 1e-10 relative tolerance; the small
/// integral is rescaled by sin(x/2)^{m-1} before quadrature so large m does
/// not underflow.
double cardinality_bound_integral(int m, double delta, double K);

/// The four-member bound chain, weakest form last:
///   volume ratio <= sqrt(pi) Gamma(m/2) m 2^(2m-1) / (2 Gamma((m+1)/2) x^m)
///                <  (pi/4) m (4/x)^m  <  (6/x)^m.
/// Values are carried as logs (the direct values may overflow past m ~ 350).
struct CardinalityChain {
    double log_volume_ratio;
    double log_gamma_form;
    double log_power_form;
    double log_closed_form;
    bool ordered;  // non-decreasing within 1e-12 relative slack

    double volume_ratio() const;
    double gamma_form() const;
    double power_form() const;
    double closed_form() const;
};

/// Evaluates all four members and checks the ordering. Requires
/// 0 < delta sqrt K <= pi and 1 <= m <= 500.
CardinalityChain cardinality_chain_check(int m, double delta, double K);

}  // namespace conclab
