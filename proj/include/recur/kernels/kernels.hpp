#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "recur/fixedpoint.hpp"

// Hot inner loops live here: fixed-point orbit scans, sliding-window minimum
// counts and byte-pattern scans. Each kernel has a scalar reference
// implementation and an AVX2 variant; the backend is picked once at runtime
// and the two are equivalence-tested against each other.
namespace recur::kernels {

enum class Backend { scalar, avx2 };

// Backend chosen for this process (AVX2 when the CPU supports it).
Backend active_backend();

// Test hook: pin the backend, or pass nullopt to restore auto-detection.
void force_backend(std::optional<Backend> b);

const char* backend_name(Backend b);

// Indices i in [0, n) with (first + i*step) mod 2^64 < two_r. Callers encode
// "circular distance to the target < r" by biasing first with +r, so the
// test is a single unsigned compare. two_r must be nonzero.
void collect_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n,
                        std::vector<std::uint32_t>& out);

// popcount-only variant of the above.
std::uint64_t count_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n);

struct WindowMin {
    std::uint32_t min_count = 0;
    std::uint32_t argmin = 0;  // smallest window start attaining the minimum
};

// min over m in [0, len-1-window] of prefix[m+window] - prefix[m].
// prefix must be nondecreasing (a prefix-count array), len >= window + 1.
WindowMin min_window_diff_u32(const std::uint32_t* prefix, std::size_t len, std::uint32_t window);

// Positions p in [0, hay_len - k] with hay[p .. p+k) == needle (k >= 1).
void find_matches_u8(const std::uint8_t* hay, std::size_t hay_len,
                     const std::uint8_t* needle, std::size_t k,
                     std::vector<std::uint32_t>& out);

// Per-backend entry points, exposed for equivalence tests.
namespace scalar {
void collect_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n,
                        std::vector<std::uint32_t>& out);
std::uint64_t count_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n);
WindowMin min_window_diff_u32(const std::uint32_t* prefix, std::size_t len, std::uint32_t window);
void find_matches_u8(const std::uint8_t* hay, std::size_t hay_len,
                     const std::uint8_t* needle, std::size_t k,
                     std::vector<std::uint32_t>& out);
}  // namespace scalar

#if defined(RECUR_HAVE_AVX2)
namespace avx2 {
void collect_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n,
                        std::vector<std::uint32_t>& out);
std::uint64_t count_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n);
WindowMin min_window_diff_u32(const std::uint32_t* prefix, std::size_t len, std::uint32_t window);
void find_matches_u8(const std::uint8_t* hay, std::size_t hay_len,
                     const std::uint8_t* needle, std::size_t k,
                     std::vector<std::uint32_t>& out);
}  // namespace avx2
#endif

}  // namespace recur::kernels
