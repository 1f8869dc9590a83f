#include <atomic>
#include <cstdlib>
#include <doctest.h>
#include <string>
#include <vector>

#include "conclab/concentration.hpp"
#include "conclab/lipschitz.hpp"
#include "conclab/model.hpp"
#include "conclab/parallel.hpp"
#include "conclab/rng.hpp"

using namespace conclab;

namespace {

// Scoped CONCLAB_THREADS override; restores the previous state on exit.
class ThreadsEnv {
public:
    explicit ThreadsEnv(const char* value) {
        const char* old = std::getenv("CONCLAB_THREADS");
        had_old_ = old != nullptr;
        if (had_old_) old_ = old;
        if (value)
            setenv("CONCLAB_THREADS", value, 1);
        else
            unsetenv("CONCLAB_THREADS");
    }
    ~ThreadsEnv() {
        if (had_old_)
            setenv("CONCLAB_THREADS", old_.c_str(), 1);
        else
            unsetenv("CONCLAB_THREADS");
    }

private:
    bool had_old_ = false;
    std::string old_;
};

}  // namespace

TEST_CASE("thread cap honors the environment variable") {
    {
        ThreadsEnv env("1");
        CHECK(max_threads() == 1);
    }
    {
        ThreadsEnv env("3");
        CHECK(max_threads() <= 3);
        CHECK(max_threads() >= 1);
    }
    {
        // Nonsense values fall back to at least one worker.
        ThreadsEnv env("0");
        CHECK(max_threads() >= 1);
    }
    {
        ThreadsEnv env(nullptr);
        CHECK(max_threads() >= 1);
    }
}

TEST_CASE("chunk arithmetic") {
    CHECK(chunk_count(0, 4096) == 0);
    CHECK(chunk_count(1, 4096) == 1);
    CHECK(chunk_count(4096, 4096) == 1);
    CHECK(chunk_count(4097, 4096) == 2);
    CHECK(chunk_count(10000, 100) == 100);
}

TEST_CASE("parallel chunks cover the range exactly once") {
    const std::int64_t n = 10000;
    const std::int64_t chunk = 128;
    std::vector<std::atomic<int>> hits(n);
    for (auto& h : hits) h.store(0);
    std::atomic<int> calls{0};
    parallel_chunks(n, chunk, [&](std::int64_t c, std::int64_t begin, std::int64_t end) {
        ++calls;
        CHECK(begin == c * chunk);
        CHECK(end <= n);
        CHECK(end - begin <= chunk);
        for (std::int64_t i = begin; i < end; ++i) ++hits[i];
    });
    CHECK(calls.load() == chunk_count(n, chunk));
    for (std::int64_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);

    // Empty ranges run no chunks.
    parallel_chunks(0, chunk, [&](std::int64_t, std::int64_t, std::int64_t) { ++calls; });
    CHECK(calls.load() == chunk_count(n, chunk));
}

TEST_CASE("results do not depend on the worker count") {
    const ManifoldModel s15(Family::Sphere, 15);
    const LipschitzFunction& T = find_function("dist");

    MedianEstimate serial{};
    MedianEstimate parallel{};
    ConcentrationReport serial_tail{};
    ConcentrationReport parallel_tail{};
    {
        ThreadsEnv env("1");
        serial = estimate_median(T, s15, 30000, RandomStream(5));
        serial_tail = empirical_tail(T, s15, serial.value, 0.4, 30000, RandomStream(6));
    }
    {
        ThreadsEnv env("7");
        parallel = estimate_median(T, s15, 30000, RandomStream(5));
        parallel_tail = empirical_tail(T, s15, parallel.value, 0.4, 30000, RandomStream(6));
    }
    CHECK(serial.value == parallel.value);
    CHECK(serial.ci_low == parallel.ci_low);
    CHECK(serial.ci_high == parallel.ci_high);
    CHECK(serial_tail.empirical_tail == parallel_tail.empirical_tail);
}
