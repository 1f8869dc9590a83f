#include "conclab/finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "conclab/errors.hpp"
#include "conclab/parallel.hpp"

namespace conclab {

namespace {

void check_formula_args(double epsilon, double K, int n) {
    if (!(epsilon > 0.0) || !(K > 0.0))
        throw UsageError("dimension formula: epsilon and K must be positive");
    if (!(epsilon * std::sqrt(K) < 12.0))
        throw UsageError("dimension formula: epsilon*sqrt(K) must be below 12");
    if (n < 2) throw UsageError("dimension formula: ambient real dimension must be >= 2");
}

// Max over `samples` embedded-and-transported low-model points of
// |T(Q x) - center|. Chunked with derived streams; max is order-independent.
double transported_deviation(const GeodesicSubmanifoldSpec& spec, const Isometry& Q,
                             const LipschitzFunction& T, double center, int samples,
                             const RandomStream& rng) {
    const ManifoldModel& ambient = spec.ambient();
    const ManifoldModel& low = spec.low_model();
    const std::int64_t chunks = chunk_count(samples, kDefaultChunk);
    std::vector<double> chunk_max(chunks, 0.0);
    parallel_chunks(samples, kDefaultChunk,
                    [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
                        RandomStream local = rng.derive(static_cast<std::uint64_t>(chunk));
                        double worst = 0.0;
                        for (std::int64_t i = begin; i < end; ++i) {
                            AmbientPoint x = sample_uniform(low, local);
                            const AmbientPoint z = apply_isometry(Q, embed(spec, x));
                            worst = std::max(worst, std::abs(T.evaluate(ambient, z) - center));
                        }
                        chunk_max[chunk] = worst;
                    });
    return *std::max_element(chunk_max.begin(), chunk_max.end());
}

void guard_one_lipschitz(const LipschitzFunction& T, const ManifoldModel& model, int pairs,
                         const RandomStream& rng) {
    const double ratio = empirical_lipschitz(T, model, pairs, rng);
    if (ratio > 1.0 + 1e-9)
        throw UsageError("function '" + T.label +
                         "' is not 1-Lipschitz on " + model.designator() +
                         " (observed ratio " + std::to_string(ratio) + ")");
}

}  // namespace

double dimension_formula(double epsilon, double K, int n) {
    check_formula_args(epsilon, K, n);
    const double x = epsilon * std::sqrt(K);
    return epsilon * epsilon * K * (n - 1) / (8.0 * std::log(12.0 / x));
}

int dimension_bound(double epsilon, double K, int n, int r) {
    if (r < 1) throw UsageError("dimension_bound: r must be >= 1");
    const double f = dimension_formula(epsilon, K, n);
    // The admissibility condition is strict (s < f), so an exactly integral
    // value steps down by one.
    double floored = std::floor(f);
    if (floored == f) floored -= 1.0;
    const int s = static_cast<int>(std::min<double>(r, floored));
    if (s < 1) {
        std::ostringstream msg;
        msg << "no admissible dimension: epsilon " << epsilon << " with K " << K << ", n " << n
            << " gives formula value " << f << ", leaving no integer s >= 1; increase epsilon "
            << "or the ambient dimension";
        throw NoAdmissibleDimension(msg.str());
    }
    return s;
}

double success_floor(std::int64_t N, double epsilon, double K, int n) {
    if (N < 0) throw UsageError("success_floor: N must be nonnegative");
    if (n < 2) throw UsageError("success_floor: n must be >= 2");
    const double miss = static_cast<double>(N) *
                        std::exp(-epsilon * epsilon * K * (n - 1) / 8.0);
    return std::max(0.0, 1.0 - miss);
}

double ball_mass_floor(int s, double epsilon, double K) {
    if (s < 0) throw UsageError("ball_mass_floor: s must be nonnegative");
    if (!(epsilon > 0.0) || !(K > 0.0))
        throw UsageError("ball_mass_floor: epsilon and K must be positive");
    const double x = epsilon * std::sqrt(K);
    if (x > std::numbers::pi + 1e-15)
        throw UsageError("ball_mass_floor: epsilon*sqrt(K) must not exceed pi");
    if (s == 0) return 1.0;
    return std::exp(s * (std::log(x) - std::log(6.0)));
}

ConcentrationCertificate find_submanifold(const LipschitzFunction& T, const ManifoldModel& model,
                                          double epsilon, RandomStream rng,
                                          const FinderOptions& options) {
    if (!(epsilon > 0.0)) throw UsageError("find_submanifold: epsilon must be positive");
    if (!T.compatible(model))
        throw UsageError("function '" + T.label + "' is not defined on " + model.designator());
    guard_one_lipschitz(T, model, options.lipschitz_guard_pairs, rng.derive("lipguard"));
    if (options.second_function)
        guard_one_lipschitz(*options.second_function, model, options.lipschitz_guard_pairs,
                            rng.derive("lipguard2"));

    const double K = model.curvature_floor();
    const int n = model.real_dim();
    const int s_admissible = dimension_bound(epsilon, K, n, model.max_tg_dim());

    // Coordinate submanifold whose real dimension does not exceed the
    // admissible s: index s itself for the real families, floor(s/2) for
    // CP^n (where coordinate CP^k has real dimension 2k).
    int k = model.is_real() ? s_admissible : s_admissible / 2;
    if (k < 1)
        throw NoAdmissibleDimension("no admissible dimension: the admissible s " +
                                    std::to_string(s_admissible) + " leaves no room for a " +
                                    "coordinate submanifold of " + model.designator());
    const GeodesicSubmanifoldSpec spec = GeodesicSubmanifoldSpec::coordinate(model, k);
    const int s_achieved = spec.low_model().real_dim();

    const double delta = 0.5 * epsilon;
    const Net low_net = build_net(spec.low_model(), delta, rng.derive("net"),
                                  options.net_stop_after);
    const int N = low_net.size();

    Matrix embedded(model.ambient_dim(), N);
    for (int j = 0; j < N; ++j) embedded.col(j) = embed(spec, low_net.points[j]).coords;

    const MedianEstimate median = estimate_median(T, model, options.median_samples,
                                                  rng.derive("median"));
    MedianEstimate median2{};
    if (options.second_function)
        median2 = estimate_median(*options.second_function, model, options.median_samples,
                                  rng.derive("median2"));

    const double net_tol = 0.5 * epsilon + median.ci_half_width();
    const double net_tol2 =
        options.second_function ? 0.5 * epsilon + median2.ci_half_width() : 0.0;

    RandomStream draw_stream = rng.derive("draws");
    Isometry accepted{Matrix()};
    int draws_used = 0;
    double accepted_deviation = 0.0;
    double best_deviation = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int i = 0; i < options.max_draws; ++i) {
        Isometry Q = sample_haar_isometry(model, draw_stream);
        const Matrix transported = Q.matrix * embedded;
        double dev = 0.0;
        double dev2 = 0.0;
        for (int j = 0; j < N; ++j) {
            const AmbientPoint z{transported.col(j)};
            dev = std::max(dev, std::abs(T.evaluate(model, z) - median.value));
            if (options.second_function)
                dev2 = std::max(dev2, std::abs(options.second_function->evaluate(model, z) -
                                               median2.value));
        }
        best_deviation = std::min(best_deviation, std::max(dev, dev2));
        if (dev <= net_tol && (!options.second_function || dev2 <= net_tol2)) {
            accepted = std::move(Q);
            draws_used = i + 1;
            accepted_deviation = std::max(dev, dev2);
            found = true;
            break;
        }
    }

    const std::int64_t effective_N = options.second_function ? 2 * static_cast<std::int64_t>(N)
                                                             : static_cast<std::int64_t>(N);
    const double floor = success_floor(effective_N, epsilon, K, n);
    if (!found) {
        std::ostringstream msg;
        msg << "no isometry accepted after " << options.max_draws << " draws (best max deviation "
            << best_deviation << " vs tolerance " << net_tol << "; per-draw success floor "
            << floor << ", net size " << N << ")";
        throw MaxDrawsExceeded(msg.str(), options.max_draws, best_deviation, net_tol, floor);
    }

    const double dense_tol = epsilon + median.ci_half_width();
    const double dense_dev = transported_deviation(spec, accepted, T, median.value,
                                                   options.dense_samples, rng.derive("validate"));
    if (dense_dev > dense_tol) {
        // The Lipschitz argument turns net control into dense control given
        // true covering, so diagnose which hypothesis broke.
        const CoveringReport cov =
            verify_covering(low_net, options.dense_samples, rng.derive("diagnose"));
        std::ostringstream msg;
        msg << "dense validation failed: max deviation " << dense_dev << " > " << dense_tol
            << "; ";
        if (cov.fraction_covered < 1.0)
            msg << "cause: net covering incomplete (fraction " << cov.fraction_covered
                << ", max gap " << cov.max_min_distance
                << ") -- the greedy packing stopped early; raise net_stop_after";
        else
            msg << "cause: function deviation despite full covering (fraction 1, max gap "
                << cov.max_min_distance << ") -- the Lipschitz budget is violated";
        throw CheckFailure(msg.str());
    }

    std::vector<AmbientPoint> z(N);
    const Matrix cols = accepted.matrix * embedded;
    for (int j = 0; j < N; ++j) z[j] = AmbientPoint{cols.col(j)};
    Net transported_net{std::move(z), delta, model, low_net.build_seed, low_net.stop_evidence};

    return ConcentrationCertificate{std::move(accepted),
                                    spec,
                                    std::move(transported_net),
                                    s_achieved,
                                    epsilon,
                                    median,
                                    accepted_deviation,
                                    dense_dev,
                                    draws_used,
                                    floor,
                                    rng.seed()};
}

double dense_deviation(const ConcentrationCertificate& cert, const LipschitzFunction& T,
                       int samples, RandomStream rng) {
    return transported_deviation(cert.spec, cert.isometry, T, cert.median.value, samples, rng);
}

bool DisintegrationReport::consistent() const {
    // The 1e-12 slack absorbs the zero-variance case (constant u), where both
    // sides agree to accumulation roundoff and the SE is exactly zero.
    return std::abs(global_mean - nested_mean) <= 3.0 * combined_se + 1e-12;
}

DisintegrationReport disintegration_check(
    const std::function<double(const ManifoldModel&, const AmbientPoint&)>& u,
    const ManifoldModel& model, const GeodesicSubmanifoldSpec& spec, int outer, int inner,
    RandomStream rng) {
    if (spec.ambient() != model)
        throw UsageError("disintegration_check: spec ambient " + spec.ambient().designator() +
                         " does not match model " + model.designator());
    if (outer < 2 || inner < 1)
        throw UsageError("disintegration_check: need outer >= 2 and inner >= 1");

    const std::int64_t total = static_cast<std::int64_t>(outer) * inner;
    const std::int64_t chunks = chunk_count(total, kDefaultChunk);
    std::vector<double> sums(chunks, 0.0);
    std::vector<double> sqsums(chunks, 0.0);
    const RandomStream global_rng = rng.derive("global");
    parallel_chunks(total, kDefaultChunk,
                    [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
                        RandomStream local = global_rng.derive(static_cast<std::uint64_t>(chunk));
                        double s = 0.0;
                        double s2 = 0.0;
                        for (std::int64_t i = begin; i < end; ++i) {
                            const AmbientPoint x = sample_uniform(model, local);
                            const double v = u(model, x);
                            s += v;
                            s2 += v * v;
                        }
                        sums[chunk] = s;
                        sqsums[chunk] = s2;
                    });
    double sum = 0.0;
    double sqsum = 0.0;
    for (std::int64_t c = 0; c < chunks; ++c) {
        sum += sums[c];
        sqsum += sqsums[c];
    }
    const double global_mean = sum / static_cast<double>(total);
    const double global_var =
        std::max(0.0, (sqsum - static_cast<double>(total) * global_mean * global_mean) /
                          static_cast<double>(total - 1));
    const double global_se = std::sqrt(global_var / static_cast<double>(total));

    // One stream per outer index: the Haar draw first, then that draw's inner
    // samples, so outer iterations are independent and parallel-safe.
    const RandomStream nested_rng = rng.derive("nested");
    std::vector<double> inner_means(outer, 0.0);
    parallel_chunks(outer, 16, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            RandomStream local = nested_rng.derive(static_cast<std::uint64_t>(i));
            const Isometry Q = sample_haar_isometry(model, local);
            double s = 0.0;
            for (int j = 0; j < inner; ++j) {
                AmbientPoint x = sample_uniform(spec.low_model(), local);
                const AmbientPoint z = apply_isometry(Q, embed(spec, x));
                s += u(model, z);
            }
            inner_means[i] = s / static_cast<double>(inner);
        }
    });
    double nsum = 0.0;
    for (const double a : inner_means) nsum += a;
    const double nested_mean = nsum / static_cast<double>(outer);
    double nvar = 0.0;
    for (const double a : inner_means) nvar += (a - nested_mean) * (a - nested_mean);
    nvar /= static_cast<double>(outer - 1);
    const double nested_se = std::sqrt(nvar / static_cast<double>(outer));

    DisintegrationReport report{};
    report.global_mean = global_mean;
    report.nested_mean = nested_mean;
    report.global_se = global_se;
    report.nested_se = nested_se;
    report.combined_se = std::sqrt(global_se * global_se + nested_se * nested_se);
    report.outer = outer;
    report.inner = inner;
    report.seed = rng.seed();
    return report;
}

}  // namespace conclab
