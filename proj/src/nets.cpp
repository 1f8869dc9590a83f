#include "conclab/nets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conclab/errors.hpp"
#include "conclab/parallel.hpp"
#include "conclab/quadrature.hpp"

namespace conclab {

namespace {

void check_bound_args(int m, double delta, double K, int max_m) {
    if (m < 1 || m > max_m)
        throw UsageError("cardinality bound: m must lie in [1, " + std::to_string(max_m) +
                         "], got " + std::to_string(m));
    if (!(delta > 0.0) || !(K > 0.0))
        throw UsageError("cardinality bound: delta and K must be positive");
    if (delta * std::sqrt(K) > std::numbers::pi + 1e-15)
        throw UsageError("cardinality bound: delta*sqrt(K) must not exceed pi");
}

// The separation test d(x, y) >= delta in threshold form, avoiding arccos in
// the rejection loop: on the sphere <x,y> <= cos(delta); on RP^n
// |<x,y>| <= cos(delta); on CP^n |<x,y>| <= cos(delta/2).
double separation_threshold(const ManifoldModel& model, double delta) {
    const double angle = model.family() == Family::ComplexProjective ? 0.5 * delta : delta;
    return std::cos(angle);
}

}  // namespace

Net build_net(const ManifoldModel& model, double delta, RandomStream rng, int stop_after) {
    if (!(delta > 0.0) || delta > model.diameter())
        throw UsageError("build_net: delta must lie in (0, diameter] for " + model.designator());
    if (stop_after < 1) throw UsageError("build_net: stop_after must be positive");

    const std::uint64_t seed = rng.seed();
    const double threshold = separation_threshold(model, delta);
    const int d = model.ambient_dim();
    const bool real = model.is_real();
    const bool sphere = model.family() == Family::Sphere;

    // Accepted points as matrix rows, one column per coordinate, so each
    // separation test is a column-major mat-vec over contiguous columns.
    // Near saturation almost every candidate is rejected, and a rejected
    // candidate usually violates the threshold early in the net, so the scan
    // runs block by block and bails out at the first violating block.
    constexpr int kBlock = 256;
    Eigen::MatrixXd real_rows;
    Matrix cplx_rows;
    Eigen::VectorXd real_inner(kBlock);
    Vector cplx_inner(kBlock);
    int count = 0;
    auto grow = [&](int need) {
        const int cap = real ? static_cast<int>(real_rows.rows()) : static_cast<int>(cplx_rows.rows());
        if (need <= cap) return;
        const int next = std::max(need, std::max(64, 2 * cap));
        if (real)
            real_rows.conservativeResize(next, d);
        else
            cplx_rows.conservativeResize(next, d);
    };

    std::vector<AmbientPoint> points;
    int consecutive = 0;
    while (consecutive < stop_after) {
        AmbientPoint cand = sample_uniform(model, rng);
        bool ok = true;
        if (real) {
            const Eigen::VectorXd c = cand.coords.real();
            for (int b = 0; b < count && ok; b += kBlock) {
                const int bs = std::min(kBlock, count - b);
                real_inner.head(bs).noalias() = real_rows.middleRows(b, bs) * c;
                const double worst = sphere ? real_inner.head(bs).maxCoeff()
                                            : real_inner.head(bs).cwiseAbs().maxCoeff();
                ok = worst <= threshold;
            }
            if (ok) {
                grow(count + 1);
                real_rows.row(count) = c.transpose();
            }
        } else {
            for (int b = 0; b < count && ok; b += kBlock) {
                const int bs = std::min(kBlock, count - b);
                cplx_inner.head(bs).noalias() = cplx_rows.middleRows(b, bs).conjugate() * cand.coords;
                ok = cplx_inner.head(bs).cwiseAbs().maxCoeff() <= threshold;
            }
            if (ok) {
                grow(count + 1);
                cplx_rows.row(count) = cand.coords.transpose();
            }
        }
        if (ok) {
            ++count;
            points.push_back(std::move(cand));
            consecutive = 0;
        } else {
            ++consecutive;
        }
    }
    return Net{std::move(points), delta, model, seed, consecutive};
}

CoveringReport verify_covering(const Net& net, int samples, RandomStream rng) {
    if (samples < 1) throw UsageError("verify_covering: samples must be positive");
    if (net.size() < 1) throw UsageError("verify_covering: empty net");

    const ManifoldModel& model = net.model;
    const int d = model.ambient_dim();
    const int n = net.size();
    const bool real = model.is_real();

    Eigen::MatrixXd real_cols;
    Matrix cplx_cols;
    if (real) {
        real_cols.resize(d, n);
        for (int j = 0; j < n; ++j) real_cols.col(j) = net.points[j].coords.real();
    } else {
        cplx_cols.resize(d, n);
        for (int j = 0; j < n; ++j) cplx_cols.col(j) = net.points[j].coords;
    }

    // Distance to the net via the largest (absolute) inner product; arccos is
    // applied once per sample, outside the mat-vec.
    const std::int64_t chunks = chunk_count(samples, kDefaultChunk);
    std::vector<double> chunk_max(chunks, 0.0);
    std::vector<std::int64_t> chunk_covered(chunks, 0);
    parallel_chunks(samples, kDefaultChunk, [&](std::int64_t chunk, std::int64_t begin,
                                                std::int64_t end) {
        RandomStream local = rng.derive(static_cast<std::uint64_t>(chunk));
        double worst = 0.0;
        std::int64_t covered = 0;
        for (std::int64_t i = begin; i < end; ++i) {
            const AmbientPoint x = sample_uniform(model, local);
            double best;  // max inner product against the net
            if (real) {
                const Eigen::VectorXd inner = real_cols.transpose() * x.coords.real();
                best = model.family() == Family::Sphere ? inner.maxCoeff()
                                                        : inner.cwiseAbs().maxCoeff();
            } else {
                const Vector inner = cplx_cols.adjoint() * x.coords;
                best = inner.cwiseAbs().maxCoeff();
            }
            best = std::clamp(best, -1.0, 1.0);
            double dist = std::acos(best);
            if (model.family() == Family::ComplexProjective) dist *= 2.0;
            worst = std::max(worst, dist);
            if (dist <= net.delta + 1e-12) ++covered;
        }
        chunk_max[chunk] = worst;
        chunk_covered[chunk] = covered;
    });

    CoveringReport report{};
    report.samples = samples;
    report.max_min_distance = *std::max_element(chunk_max.begin(), chunk_max.end());
    std::int64_t covered = 0;
    for (const std::int64_t c : chunk_covered) covered += c;
    report.fraction_covered = static_cast<double>(covered) / static_cast<double>(samples);
    return report;
}

double cardinality_bound_closed(int m, double delta, double K) {
    check_bound_args(m, delta, K, 500);
    const double x = delta * std::sqrt(K);
    return std::exp(m * (std::log(6.0) - std::log(x)));
}

double cardinality_bound_integral(int m, double delta, double K) {
    check_bound_args(m, delta, K, 500);
    const double x = delta * std::sqrt(K);
    const auto power = [m](double scale) {
        return [m, scale](double t) { return std::pow(std::sin(t) / scale, m - 1); };
    };
    const double num = integrate(power(1.0), 0.0, std::numbers::pi / 2.0);
    const double half = 0.5 * x;
    const double denom_scaled = integrate(power(std::sin(half)), 0.0, half);
    const double log_ratio =
        std::log(num) - (m - 1) * std::log(std::sin(half)) - std::log(denom_scaled);
    return std::exp(log_ratio);
}

double CardinalityChain::volume_ratio() const { return std::exp(log_volume_ratio); }
double CardinalityChain::gamma_form() const { return std::exp(log_gamma_form); }
double CardinalityChain::power_form() const { return std::exp(log_power_form); }
double CardinalityChain::closed_form() const { return std::exp(log_closed_form); }

CardinalityChain cardinality_chain_check(int m, double delta, double K) {
    check_bound_args(m, delta, K, 500);
    const double x = delta * std::sqrt(K);
    const double log_x = std::log(x);
    const double half = 0.5 * x;

    const auto power = [m](double scale) {
        return [m, scale](double t) { return std::pow(std::sin(t) / scale, m - 1); };
    };
    const double num = integrate(power(1.0), 0.0, std::numbers::pi / 2.0);
    const double denom_scaled = integrate(power(std::sin(half)), 0.0, half);

    CardinalityChain chain{};
    chain.log_volume_ratio =
        std::log(num) - (m - 1) * std::log(std::sin(half)) - std::log(denom_scaled);
    chain.log_gamma_form = 0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * m) +
                           std::log(static_cast<double>(m)) + (2 * m - 1) * std::log(2.0) -
                           std::log(2.0) - std::lgamma(0.5 * (m + 1)) - m * log_x;
    chain.log_power_form = std::log(std::numbers::pi / 4.0) +
                           std::log(static_cast<double>(m)) + m * (std::log(4.0) - log_x);
    chain.log_closed_form = m * (std::log(6.0) - log_x);

    // Relative slack on values is additive slack on logs; equality (exact at
    // m = 1, where the first three members coincide) passes.
    const double slack = 1e-12;
    chain.ordered = chain.log_gamma_form >= chain.log_volume_ratio - slack &&
                    chain.log_power_form >= chain.log_gamma_form - slack &&
                    chain.log_closed_form >= chain.log_power_form - slack;
    return chain;
}

}  // namespace conclab
