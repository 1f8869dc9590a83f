#include "conclab/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "conclab/errors.hpp"
#include "conclab/parallel.hpp"

namespace conclab {

namespace {

void require_compatible(const LipschitzFunction& T, const ManifoldModel& model) {
    if (!T.compatible(model))
        throw UsageError("function '" + T.label + "' is not defined on " + model.designator());
}

// 99% two-sided normal quantile for the order-statistic interval.
constexpr double kZ99 = 2.5758293035489004;

// Fills values[i] for i in [0, n) from per-chunk derived streams; the result
// is independent of the thread count.
std::vector<double> sample_values(const LipschitzFunction& T, const ManifoldModel& model, int n,
                                  const RandomStream& rng) {
    std::vector<double> values(n);
    parallel_chunks(n, kDefaultChunk,
                    [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
                        RandomStream local = rng.derive(static_cast<std::uint64_t>(chunk));
                        for (std::int64_t i = begin; i < end; ++i) {
                            const AmbientPoint x = sample_uniform(model, local);
                            values[i] = T.evaluate(model, x);
                        }
                    });
    return values;
}

}  // namespace

double MedianEstimate::ci_half_width() const {
    return std::max(value - ci_low, ci_high - value);
}

MedianEstimate estimate_median(const LipschitzFunction& T, const ManifoldModel& model,
                               int n_samples, RandomStream rng) {
    require_compatible(T, model);
    if (n_samples < 2) throw UsageError("estimate_median: need at least 2 samples");

    std::vector<double> values = sample_values(T, model, n_samples, rng);
    std::sort(values.begin(), values.end());

    const int n = n_samples;
    MedianEstimate est{};
    est.n_samples = n;
    est.value = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);

    // Order-statistic interval: the median lies in [X_(r), X_(s)] with
    // coverage >= 99% by the binomial normal approximation.
    const double half = 0.5 * kZ99 * std::sqrt(static_cast<double>(n));
    const int lo = std::max(0, static_cast<int>(std::floor(0.5 * n - half)) - 1);
    const int hi = std::min(n - 1, static_cast<int>(std::ceil(0.5 * n + half)));
    est.ci_low = values[lo];
    est.ci_high = values[hi];
    return est;
}

double ConcentrationReport::binomial_se() const {
    const double p = empirical_tail;
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
}

bool ConcentrationReport::within_bound(double z) const {
    return empirical_tail <= theoretical_bound + z * binomial_se();
}

ConcentrationReport empirical_tail(const LipschitzFunction& T, const ManifoldModel& model,
                                   double m_T, double epsilon, int n_samples, RandomStream rng,
                                   std::vector<double>* sample_dump) {
    require_compatible(T, model);
    if (!(epsilon >= 0.0)) throw UsageError("empirical_tail: epsilon must be nonnegative");
    if (n_samples < 1) throw UsageError("empirical_tail: samples must be positive");

    const std::int64_t chunks = chunk_count(n_samples, kDefaultChunk);
    std::vector<std::int64_t> exceed(chunks, 0);
    if (sample_dump) sample_dump->assign(n_samples, 0.0);
    parallel_chunks(n_samples, kDefaultChunk,
                    [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
                        RandomStream local = rng.derive(static_cast<std::uint64_t>(chunk));
                        std::int64_t count = 0;
                        for (std::int64_t i = begin; i < end; ++i) {
                            const AmbientPoint x = sample_uniform(model, local);
                            const double v = T.evaluate(model, x);
                            if (std::abs(v - m_T) > epsilon) ++count;
                            if (sample_dump) (*sample_dump)[i] = v;
                        }
                        exceed[chunk] = count;
                    });
    std::int64_t total = 0;
    for (const std::int64_t c : exceed) total += c;

    ConcentrationReport report{};
    report.median_estimate = m_T;
    report.median_ci_low = m_T;
    report.median_ci_high = m_T;
    report.epsilon = epsilon;
    report.empirical_tail = static_cast<double>(total) / static_cast<double>(n_samples);
    report.theoretical_bound = std::exp(-model.ricci_floor() * epsilon * epsilon / 2.0);
    report.n_samples = n_samples;
    report.seed = rng.seed();
    return report;
}

double empirical_lipschitz(const LipschitzFunction& T, const ManifoldModel& model, int n_pairs,
                           RandomStream rng) {
    require_compatible(T, model);
    if (n_pairs < 1) throw UsageError("empirical_lipschitz: pairs must be positive");

    const std::int64_t chunks = chunk_count(n_pairs, kDefaultChunk);
    std::vector<double> chunk_max(chunks, 0.0);
    parallel_chunks(n_pairs, kDefaultChunk,
                    [&](std::int64_t chunk, std::int64_t begin, std::int64_t end) {
                        RandomStream local = rng.derive(static_cast<std::uint64_t>(chunk));
                        double worst = 0.0;
                        for (std::int64_t i = begin; i < end; ++i) {
                            const AmbientPoint x = sample_uniform(model, local);
                            const AmbientPoint y = sample_uniform(model, local);
                            const double d = geodesic_distance(model, x, y);
                            if (d < 1e-6) continue;
                            const double ratio =
                                std::abs(T.evaluate(model, x) - T.evaluate(model, y)) / d;
                            worst = std::max(worst, ratio);
                        }
                        chunk_max[chunk] = worst;
                    });
    return *std::max_element(chunk_max.begin(), chunk_max.end());
}

}  // namespace conclab
