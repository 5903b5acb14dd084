// AVX2 variants of the scan kernels. This file is compiled with -mavx2 and
// only ever called after a runtime cpuid check; everything else must go
// through the dispatcher in dispatch.cpp.
#include "recur/kernels/kernels.hpp"

#if defined(RECUR_HAVE_AVX2)

#include <immintrin.h>

#include <cstring>
#include <stdexcept>

namespace recur::kernels::avx2 {

namespace {

// Unsigned 64-bit a < b via the sign-flip trick: flip the top bit of both
// sides and use the signed compare.
inline __m256i cmplt_epu64(__m256i a, __m256i b) {
    const __m256i bias = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ULL));
    return _mm256_cmpgt_epi64(_mm256_xor_si256(b, bias), _mm256_xor_si256(a, bias));
}

}  // namespace

void collect_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n,
                        std::vector<std::uint32_t>& out) {
    const __m256i limit = _mm256_set1_epi64x(static_cast<long long>(two_r));
    const __m256i stride = _mm256_set1_epi64x(static_cast<long long>(4 * step));
    __m256i cur = _mm256_set_epi64x(static_cast<long long>(first + 3 * step),
                                    static_cast<long long>(first + 2 * step),
                                    static_cast<long long>(first + step),
                                    static_cast<long long>(first));
    std::uint32_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i lt = cmplt_epu64(cur, limit);
        const int mask = _mm256_movemask_pd(_mm256_castsi256_pd(lt));
        if (mask) {
            if (mask & 1) out.push_back(i);
            if (mask & 2) out.push_back(i + 1);
            if (mask & 4) out.push_back(i + 2);
            if (mask & 8) out.push_back(i + 3);
        }
        cur = _mm256_add_epi64(cur, stride);
    }
    // remainder
    u64 c = first + static_cast<u64>(i) * step;
    for (; i < n; ++i) {
        if (c < two_r) out.push_back(i);
        c += step;
    }
}

std::uint64_t count_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n) {
    const __m256i limit = _mm256_set1_epi64x(static_cast<long long>(two_r));
    const __m256i stride = _mm256_set1_epi64x(static_cast<long long>(4 * step));
    __m256i cur = _mm256_set_epi64x(static_cast<long long>(first + 3 * step),
                                    static_cast<long long>(first + 2 * step),
                                    static_cast<long long>(first + step),
                                    static_cast<long long>(first));
    __m256i acc = _mm256_setzero_si256();  // per-lane counts of hits (as 0/-1 sums)
    std::uint32_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_sub_epi64(acc, cmplt_epu64(cur, limit));
        cur = _mm256_add_epi64(cur, stride);
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t count = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    u64 c = first + static_cast<u64>(i) * step;
    for (; i < n; ++i) {
        count += c < two_r ? 1 : 0;
        c += step;
    }
    return count;
}

WindowMin min_window_diff_u32(const std::uint32_t* prefix, std::size_t len, std::uint32_t window) {
    if (len < static_cast<std::size_t>(window) + 1)
        throw std::invalid_argument("min_window_diff_u32: window longer than data");
    const std::size_t n_windows = len - window;
    __m256i vmin = _mm256_set1_epi32(-1);  // all-ones = UINT32_MAX
    std::size_t m = 0;
    for (; m + 8 <= n_windows; m += 8) {
        const __m256i hi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prefix + m + window));
        const __m256i lo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(prefix + m));
        vmin = _mm256_min_epu32(vmin, _mm256_sub_epi32(hi, lo));
    }
    alignas(32) std::uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), vmin);
    std::uint32_t best = lanes[0];
    for (int j = 1; j < 8; ++j) best = lanes[j] < best ? lanes[j] : best;
    for (std::size_t t = m; t < n_windows; ++t) {
        const std::uint32_t c = prefix[t + window] - prefix[t];
        best = c < best ? c : best;
    }
    // second pass: first window start attaining the minimum
    for (std::size_t t = 0; t < n_windows; ++t) {
        if (prefix[t + window] - prefix[t] == best)
            return WindowMin{best, static_cast<std::uint32_t>(t)};
    }
    return WindowMin{best, 0};  // unreachable
}

void find_matches_u8(const std::uint8_t* hay, std::size_t hay_len,
                     const std::uint8_t* needle, std::size_t k,
                     std::vector<std::uint32_t>& out) {
    if (k == 0 || hay_len < k) return;
    const std::size_t last = hay_len - k;
    const __m256i first_b = _mm256_set1_epi8(static_cast<char>(needle[0]));
    const __m256i last_b = _mm256_set1_epi8(static_cast<char>(needle[k - 1]));
    std::size_t p = 0;
    // candidate filter: first and last needle byte must match
    for (; p + 32 <= last + 1; p += 32) {
        const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hay + p));
        const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hay + p + k - 1));
        const __m256i eq = _mm256_and_si256(_mm256_cmpeq_epi8(a, first_b),
                                            _mm256_cmpeq_epi8(b, last_b));
        std::uint32_t mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(eq));
        while (mask) {
            const unsigned bit = static_cast<unsigned>(__builtin_ctz(mask));
            mask &= mask - 1;
            const std::size_t pos = p + bit;
            if (k <= 2 || std::memcmp(hay + pos + 1, needle + 1, k - 2) == 0)
                out.push_back(static_cast<std::uint32_t>(pos));
        }
    }
    for (; p <= last; ++p) {
        std::size_t j = 0;
        while (j < k && hay[p + j] == needle[j]) ++j;
        if (j == k) out.push_back(static_cast<std::uint32_t>(p));
    }
}

}  // namespace recur::kernels::avx2

#endif  // RECUR_HAVE_AVX2
