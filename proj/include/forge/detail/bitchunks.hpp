// 64-assignment chunked truth-table evaluation helpers. Assignment i over
// n ordered variables assigns variable at position p the bit (i >> (n-1-p)).
#pragma once

#include <cstdint>

namespace forge::detail {

// bit k of kLowPatterns[s] equals (k >> s) & 1
constexpr uint64_t kLowPatterns[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

/// Word of 64 consecutive assignment values for a variable with bit shift
/// `shift` (= n-1-position), starting at assignment index chunk_base
/// (a multiple of 64).
inline uint64_t var_word(int shift, uint64_t chunk_base) {
    if (shift < 6)
        return kLowPatterns[shift];
    return ((chunk_base >> shift) & 1) ? ~uint64_t(0) : uint64_t(0);
}

/// Mask of valid bits in the chunk starting at chunk_base when the full
/// table has `total` assignments.
inline uint64_t chunk_mask(uint64_t total, uint64_t chunk_base) {
    uint64_t remaining = total - chunk_base;
    return remaining >= 64 ? ~uint64_t(0) : ((uint64_t(1) << remaining) - 1);
}

} // namespace forge::detail
