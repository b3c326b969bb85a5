// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rp {

using Index = Eigen::Index;

template <typename S> using Vec2 = Eigen::Matrix<S, 2, 1>;
template <typename S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <typename S> using Mat3 = Eigen::Matrix<S, 3, 3>;
template <typename S> using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S> using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using Vec2d = Vec2<double>;
using Vec3f = Vec3<float>;
using Vec3d = Vec3<double>;
using Mat3f = Mat3<float>;
using Mat3d = Mat3<double>;
using VecXf = VecX<float>;
using VecXd = VecX<double>;
using MatXf = MatX<float>;
using MatXd = MatX<double>;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// ---------------------------------------------------------------------------
// Keyed random streams.
//
// All stochastic choices in the library are drawn from counter-keyed streams
// so that results are reproducible bit-for-bit regardless of evaluation order
// or worker count. The generator is splitmix64; std::random distributions are
// avoided on purpose (their output is implementation-defined).

constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Fold an arbitrary list of key parts into one stream seed.
inline uint64_t stream_key(std::initializer_list<uint64_t> parts) {
    uint64_t h = 0x8C2A0EC5B1D6A0F3ull;
    for (uint64_t p : parts) h = splitmix64(h ^ p);
    return h;
}

class Stream {
  public:
    explicit Stream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    float uniform_f() { return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f; }

    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

    bool bernoulli(double p) { return uniform() < p; }

  private:
    uint64_t state_;
};

// ---------------------------------------------------------------------------
// Deterministic chunked parallelism.
//
// Work is split into a fixed chunk grid that does not depend on the worker
// count; workers pull chunk indices from a shared counter. Callers that
// reduce per-chunk results must do so in chunk order.

inline int worker_count() {
    if (const char* env = std::getenv("RP_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline Index chunk_count(Index total, Index chunk_size) {
    return total <= 0 ? 0 : (total + chunk_size - 1) / chunk_size;
}

// fn(chunk_index, begin, end) over [0, total) in chunks of chunk_size.
inline void parallel_chunks(Index total, Index chunk_size,
                            const std::function<void(Index, Index, Index)>& fn) {
    const Index n_chunks = chunk_count(total, chunk_size);
    if (n_chunks == 0) return;
    const int workers = std::min<Index>(worker_count(), n_chunks);
    if (workers <= 1) {
        for (Index c = 0; c < n_chunks; ++c)
            fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
        return;
    }
    std::atomic<Index> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const Index c = next.fetch_add(1);
                if (c >= n_chunks) break;
                fn(c, c * chunk_size, std::min(total, (c + 1) * chunk_size));
            }
        });
    }
    for (auto& t : pool) t.join();
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
    return m.derived().array().isFinite().all();
}

}  // namespace rp
