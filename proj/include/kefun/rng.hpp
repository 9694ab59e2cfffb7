#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace kefun {

/// SplitMix64 engine, usable with the <random> distributions.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Stateless finaliser, used to derive stream states.
    static std::uint64_t mix(std::uint64_t x) {
        SplitMix64 g(x);
        return g();
    }

private:
    std::uint64_t state_;
};

/// Reproducible random stream addressed by (seed, id).
///
/// Children are addressed by index and do not depend on how many values the
/// parent has drawn, so a sample's randomness is fixed by its id alone.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t id)
        : seed_(seed), id_(id), engine_(SplitMix64::mix(seed ^ SplitMix64::mix(id + 0x5851F42D4C957F2DULL))) {}

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t id() const { return id_; }

    [[nodiscard]] RngStream child(std::uint64_t index) const {
        return {seed_, SplitMix64::mix(id_ * 0x9E3779B97F4A7C15ULL + index + 1)};
    }

    /// Uniform on the open interval (0, 1).
    double uniform() {
        double u = 0.0;
        do {
            u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        } while (u == 0.0);
        return u;
    }
    double normal() { return normal_(engine_); }
    double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        return std::poisson_distribution<std::uint64_t>(mean)(engine_);
    }

private:
    std::uint64_t seed_;
    std::uint64_t id_;
    SplitMix64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace kefun
