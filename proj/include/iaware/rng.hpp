#pragma once

#include <cstdint>
#include <random>

namespace iaware {

namespace detail {
// splitmix64 finalizer, used only to derive stream keys.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Splittable random stream. A stream is identified by a key derived from the
/// seed; child streams are derived from the parent's key alone, never from how
/// much the parent has been consumed. Per-track / per-component children are
/// therefore reproducible regardless of evaluation order, which is what makes
/// the parallel and serial filter paths bit-identical.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : key_(detail::mix64(seed)), engine_(key_) {}

    /// Derives an independent child stream from up to three salt words.
    [[nodiscard]] RandomSource child(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
        std::uint64_t k = key_;
        k = detail::mix64(k ^ a);
        k = detail::mix64(k ^ b);
        k = detail::mix64(k ^ c);
        return RandomSource(k, FromKey{});
    }

    [[nodiscard]] std::uint64_t key() const { return key_; }

    std::uint64_t bits() { return engine_(); }

    /// Uniform draw in [0, 1).
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    /// Standard normal draw.
    double normal() { return normal_(engine_); }

    /// Poisson draw with the given mean (0 when mean <= 0).
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        return std::poisson_distribution<int>(mean)(engine_);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

private:
    struct FromKey {};
    RandomSource(std::uint64_t key, FromKey) : key_(key), engine_(key) {}

    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Salt words for the filter's per-stage child streams. Keeping them in one
// place guarantees two stages never collide on the same derived key.
namespace stream {
inline constexpr std::uint64_t frame = 0xF1;
inline constexpr std::uint64_t predict = 0xF2;
inline constexpr std::uint64_t birth = 0xF3;
inline constexpr std::uint64_t resample = 0xF4;
inline constexpr std::uint64_t scan = 0xF5;
inline constexpr std::uint64_t scenario = 0xF6;
}  // namespace stream

}  // namespace iaware
