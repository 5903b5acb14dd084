#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>
#include <string>

#include "recur/kernels/kernels.hpp"

using namespace recur;
namespace k = recur::kernels;

namespace {

// brute-force references, independent of the kernel code paths
std::vector<std::uint32_t> visits_brute(u64 first, u64 step, u64 two_r, std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < n; ++i) {
        const u64 v = first + step * static_cast<u64>(i);
        if (v < two_r) out.push_back(i);
    }
    return out;
}

std::vector<std::uint32_t> matches_brute(const std::string& hay, const std::string& needle) {
    std::vector<std::uint32_t> out;
    if (needle.empty() || hay.size() < needle.size()) return out;
    for (std::size_t p = 0; p + needle.size() <= hay.size(); ++p)
        if (hay.compare(p, needle.size(), needle) == 0) out.push_back(static_cast<std::uint32_t>(p));
    return out;
}

}  // namespace

TEST_CASE("collect_visits: rational rotation period 4") {
    // alpha = 1/4, radius 0.1 centered: (0 + r) + n*alpha < 2r picks n = 0 mod 4
    const u64 r = ticks_from_unit(0.1);
    const u64 alpha = static_cast<u64>(1) << 62;
    std::vector<std::uint32_t> out;
    k::scalar::collect_visits_u64(r, alpha, 2 * r, 12, out);
    CHECK(out == std::vector<std::uint32_t>{0, 4, 8});
}

#if defined(RECUR_HAVE_AVX2)
TEST_CASE("kernel backends agree on random inputs") {
    REQUIRE(k::active_backend() == k::Backend::avx2);  // this host must exercise both paths
    std::mt19937_64 rng(20240809);
    for (int trial = 0; trial < 400; ++trial) {
        const u64 first = rng();
        const u64 step = rng();
        const u64 two_r = rng() >> (rng() % 30);  // bias toward small thresholds too
        const auto n = static_cast<std::uint32_t>(rng() % 700);
        std::vector<std::uint32_t> a, b;
        k::scalar::collect_visits_u64(first, step, two_r, n, a);
        k::avx2::collect_visits_u64(first, step, two_r, n, b);
        CHECK(a == b);
        CHECK(a == visits_brute(first, step, two_r, n));
        CHECK(k::scalar::count_visits_u64(first, step, two_r, n) == a.size());
        CHECK(k::avx2::count_visits_u64(first, step, two_r, n) == a.size());
    }
}

TEST_CASE("min_window_diff backends agree") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t len = 2 + rng() % 500;
        std::vector<std::uint32_t> prefix(len, 0);
        for (std::size_t i = 1; i < len; ++i)
            prefix[i] = prefix[i - 1] + static_cast<std::uint32_t>(rng() % 3);
        const auto window = static_cast<std::uint32_t>(1 + rng() % (len - 1));
        const auto a = k::scalar::min_window_diff_u32(prefix.data(), len, window);
        const auto b = k::avx2::min_window_diff_u32(prefix.data(), len, window);
        CHECK(a.min_count == b.min_count);
        CHECK(a.argmin == b.argmin);
    }
}

TEST_CASE("find_matches backends agree") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t len = rng() % 600;
        std::string hay(len, '0');
        for (auto& c : hay) c = "01"[rng() % 2];
        const std::size_t klen = 1 + rng() % 6;
        std::string needle(klen, '0');
        for (auto& c : needle) c = "01"[rng() % 2];
        std::vector<std::uint32_t> a, b;
        k::scalar::find_matches_u8(reinterpret_cast<const std::uint8_t*>(hay.data()), hay.size(),
                                   reinterpret_cast<const std::uint8_t*>(needle.data()),
                                   needle.size(), a);
        k::avx2::find_matches_u8(reinterpret_cast<const std::uint8_t*>(hay.data()), hay.size(),
                                 reinterpret_cast<const std::uint8_t*>(needle.data()),
                                 needle.size(), b);
        CHECK(a == b);
        CHECK(a == matches_brute(hay, needle));
    }
}
#endif

TEST_CASE("min_window_diff on even-integer prefix counts") {
    // visits at even positions in [0, 100): every 10-window holds 5
    std::vector<std::uint32_t> prefix(101, 0);
    for (int t = 0; t < 100; t += 2)
        for (int i = t + 1; i <= 100; ++i) ++prefix[static_cast<std::size_t>(i)];
    const auto r = k::min_window_diff_u32(prefix.data(), prefix.size(), 10);
    CHECK(r.min_count == 5);
    CHECK(r.argmin == 0);
}

TEST_CASE("forced backend switch round-trips") {
    const auto before = k::active_backend();
    k::force_backend(k::Backend::scalar);
    CHECK(k::active_backend() == k::Backend::scalar);
    k::force_backend(std::nullopt);
    CHECK(k::active_backend() == before);
}

TEST_CASE("find_matches single-symbol needle") {
    const std::string hay = "0100101001001";
    std::vector<std::uint32_t> out;
    k::find_matches_u8(reinterpret_cast<const std::uint8_t*>(hay.data()), hay.size(),
                       reinterpret_cast<const std::uint8_t*>("1"), 1, out);
    CHECK(out == std::vector<std::uint32_t>{1, 4, 6, 9, 12});
}
