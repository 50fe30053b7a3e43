#ifndef ERGOLAT_RNG_HPP
#define ERGOLAT_RNG_HPP

#include <cstdint>

namespace ergolat {

namespace detail {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;
inline constexpr std::uint64_t kSubSalt = 0x632BE59BD9B4E019ull;

// SplitMix64 finalizer (Vigna / Steele-Lea-Flood). Passes BigCrush as a
// counter-mode generator, which is how we use it throughout.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Top 53 bits to a uniform double in [0,1). Never returns 1.0.
inline constexpr double to_unit(std::uint64_t u) noexcept {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

} // namespace detail

/// Splittable counter-mode key. A key addresses an unbounded family of
/// independent substreams (`sub`) and 64-bit blocks (`raw`), all stateless,
/// so every Monte-Carlo draw in an experiment is a pure function of the
/// master key and a counter.
struct RngKey {
    std::uint64_t bits = 0;

    constexpr RngKey() = default;
    constexpr explicit RngKey(std::uint64_t b) noexcept : bits(b) {}

    /// Derived key for an independent purpose-tagged substream.
    constexpr RngKey sub(std::uint64_t tag) const noexcept {
        return RngKey{detail::mix64(bits ^ detail::mix64(tag + detail::kSubSalt))};
    }

    /// i-th 64-bit block of this key's counter stream.
    constexpr std::uint64_t raw(std::uint64_t counter) const noexcept {
        return detail::mix64((bits ^ detail::kStreamSalt) + detail::kGoldenGamma * counter);
    }

    /// i-th uniform deviate in [0,1).
    constexpr double unit(std::uint64_t counter) const noexcept {
        return detail::to_unit(raw(counter));
    }

    friend constexpr bool operator==(RngKey, RngKey) noexcept = default;
};

} // namespace ergolat

#endif // ERGOLAT_RNG_HPP
