#include "recur/kernels/kernels.hpp"

#include <stdexcept>

namespace recur::kernels::scalar {

void collect_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n,
                        std::vector<std::uint32_t>& out) {
    u64 cur = first;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (cur < two_r) out.push_back(i);
        cur += step;
    }
}

std::uint64_t count_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n) {
    u64 cur = first;
    std::uint64_t count = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        count += cur < two_r ? 1 : 0;
        cur += step;
    }
    return count;
}

WindowMin min_window_diff_u32(const std::uint32_t* prefix, std::size_t len, std::uint32_t window) {
    if (len < static_cast<std::size_t>(window) + 1)
        throw std::invalid_argument("min_window_diff_u32: window longer than data");
    const std::size_t n_windows = len - window;
    WindowMin r{prefix[window] - prefix[0], 0};
    for (std::size_t m = 1; m < n_windows; ++m) {
        const std::uint32_t c = prefix[m + window] - prefix[m];
        if (c < r.min_count) {
            r.min_count = c;
            r.argmin = static_cast<std::uint32_t>(m);
        }
    }
    return r;
}

void find_matches_u8(const std::uint8_t* hay, std::size_t hay_len,
                     const std::uint8_t* needle, std::size_t k,
                     std::vector<std::uint32_t>& out) {
    if (k == 0 || hay_len < k) return;
    const std::size_t last = hay_len - k;
    for (std::size_t p = 0; p <= last; ++p) {
        std::size_t j = 0;
        while (j < k && hay[p + j] == needle[j]) ++j;
        if (j == k) out.push_back(static_cast<std::uint32_t>(p));
    }
}

}  // namespace recur::kernels::scalar
