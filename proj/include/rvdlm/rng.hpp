#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rvdlm {

// Seeded random stream. The engine is mt19937_64 (fully specified by the
// standard) and the uniform/normal transforms are implemented here rather
// than through <random> distributions, so a seed replays bit-exactly on
// every conforming toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 5489u) : engine_(seed) {}

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() {
        for (;;) {
            const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    // Standard normal via the Marsaglia polar method.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double k = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * k;
        has_spare_ = true;
        return u * k;
    }

    // Independent child stream, e.g. one per series or per replication.
    Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rvdlm
