#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace tenad {

// splitmix64 (Steele, Lea, Flood 2014). Used as the seed-split primitive so
// that derived streams are documented and reproducible across runs.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a stream index:
// two splitmix64 steps starting from master ^ splitmix64(index).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = stream;
    std::uint64_t mixed = master ^ splitmix64(s);
    return splitmix64(mixed);
}

inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Seeded random stream. One instance per attack session / sample.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Eigen::VectorXd normal_vector(Eigen::Index n) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace tenad
