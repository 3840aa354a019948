#pragma once

#include <cstdint>
#include <cmath>

#include <Eigen/Dense>

namespace covgeom {

// Counter-based random stream. The pair (seed, stream) fixes a key and every
// draw advances a private counter through a SplitMix64-style bijective mix,
// so distinct streams can be generated in any order (or concurrently) and
// still produce identical values for identical (seed, stream, draw-index).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(finalize(finalize(seed + 0x9e3779b97f4a7c15ull) ^
                        finalize(stream + 0xbf58476d1ce4e5b9ull))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (++counter_) * 0x9e3779b97f4a7c15ull;
        return finalize(z);
    }

    // Uniform in [0, 1), 53-bit mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal via Box-Muller; the spare value is cached.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Eigen::VectorXd next_direction(int dim) {
        Eigen::VectorXd u(dim);
        double n2 = 0.0;
        do {
            for (int i = 0; i < dim; ++i) u[i] = next_gaussian();
            n2 = u.squaredNorm();
        } while (n2 == 0.0);
        return u / std::sqrt(n2);
    }

private:
    // SplitMix64 finalizer (Stafford mix13 variant).
    static std::uint64_t finalize(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace covgeom
