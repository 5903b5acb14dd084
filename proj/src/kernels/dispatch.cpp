#include "recur/kernels/kernels.hpp"

#include <atomic>

namespace recur::kernels {

namespace {

std::atomic<int> g_forced{-1};  // -1 = auto

Backend detect() {
#if defined(RECUR_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

}  // namespace

Backend active_backend() {
    const int forced = g_forced.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<Backend>(forced);
    static const Backend detected = detect();
    return detected;
}

void force_backend(std::optional<Backend> b) {
    g_forced.store(b ? static_cast<int>(*b) : -1, std::memory_order_relaxed);
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

void collect_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n,
                        std::vector<std::uint32_t>& out) {
#if defined(RECUR_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        avx2::collect_visits_u64(first, step, two_r, n, out);
        return;
    }
#endif
    scalar::collect_visits_u64(first, step, two_r, n, out);
}

std::uint64_t count_visits_u64(u64 first, u64 step, u64 two_r, std::uint32_t n) {
#if defined(RECUR_HAVE_AVX2)
    if (active_backend() == Backend::avx2) return avx2::count_visits_u64(first, step, two_r, n);
#endif
    return scalar::count_visits_u64(first, step, two_r, n);
}

WindowMin min_window_diff_u32(const std::uint32_t* prefix, std::size_t len, std::uint32_t window) {
#if defined(RECUR_HAVE_AVX2)
    if (active_backend() == Backend::avx2) return avx2::min_window_diff_u32(prefix, len, window);
#endif
    return scalar::min_window_diff_u32(prefix, len, window);
}

void find_matches_u8(const std::uint8_t* hay, std::size_t hay_len,
                     const std::uint8_t* needle, std::size_t k,
                     std::vector<std::uint32_t>& out) {
#if defined(RECUR_HAVE_AVX2)
    if (active_backend() == Backend::avx2) {
        avx2::find_matches_u8(hay, hay_len, needle, k, out);
        return;
    }
#endif
    scalar::find_matches_u8(hay, hay_len, needle, k, out);
}

}  // namespace recur::kernels
