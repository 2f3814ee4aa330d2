#ifndef QCS_RNG_HPP
#define QCS_RNG_HPP

#include <cmath>
#include <cstdint>

namespace qcs {

/**
 * Seeded PRNG for deterministic Monte Carlo runs (splitmix64 core).
 *
 * Every stream in a simulation is derived from the scenario seed plus a
 * (window, stream) key, so parallel and serial runs produce bit-identical
 * timestamp sets. Samplers are hand-rolled because the standard library's
 * distributions are implementation-defined.
 */
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    /** Independent substream keyed by (window id, stream id). */
    static Rng substream(uint64_t seed, uint64_t window_id, uint64_t stream_id) {
        uint64_t k = seed;
        k = mix(k ^ (0x9e3779b97f4a7c15ULL + window_id));
        k = mix(k ^ (0xbf58476d1ce4e5b9ULL + stream_id));
        return Rng(k);
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /** Uniform double in [0, 1). */
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /** Exponential inter-arrival gap with the given rate [1/s]. */
    double exponential(double rate_hz) {
        double u;
        do { u = uniform(); } while (u <= 0.0);
        return -std::log1p(-u) / rate_hz;
    }

    /** Standard normal via Box-Muller (one value per call, cached pair). */
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1;
        do { u1 = uniform(); } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qcs

#endif  // QCS_RNG_HPP
