// Compiled with -mavx2 -mpopcnt; only reached after a runtime CPU check.
#include "ssq/kernels.hpp"

#include <immintrin.h>
#include <limits>

namespace ssq::kernels {

namespace {

inline __m256i load(const Word *p) { return _mm256_loadu_si256(reinterpret_cast<const __m256i *>(p)); }
inline void store(Word *p, __m256i v) { _mm256_storeu_si256(reinterpret_cast<__m256i *>(p), v); }

void or_words(Word *dst, const Word *a, const Word *b, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        store(dst + i, _mm256_or_si256(load(a + i), load(b + i)));
    for (; i < n; ++i)
        dst[i] = a[i] | b[i];
}

void and_words(Word *dst, const Word *a, const Word *b, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        store(dst + i, _mm256_and_si256(load(a + i), load(b + i)));
    for (; i < n; ++i)
        dst[i] = a[i] & b[i];
}

void andnot_words(Word *dst, const Word *a, const Word *b, std::size_t n)
{
    std::size_t i = 0;
    // _mm256_andnot_si256(x, y) computes ~x & y.
    for (; i + 4 <= n; i += 4)
        store(dst + i, _mm256_andnot_si256(load(b + i), load(a + i)));
    for (; i < n; ++i)
        dst[i] = a[i] & ~b[i];
}

bool subset_words(const Word *a, const Word *b, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        if (!_mm256_testc_si256(load(b + i), load(a + i))) // (~b & a) == 0
            return false;
    for (; i < n; ++i)
        if (a[i] & ~b[i])
            return false;
    return true;
}

std::size_t popcount_words(const Word *a, std::size_t n)
{
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        total += static_cast<std::size_t>(_mm_popcnt_u64(a[i]) + _mm_popcnt_u64(a[i + 1]) +
                                          _mm_popcnt_u64(a[i + 2]) + _mm_popcnt_u64(a[i + 3]));
    for (; i < n; ++i)
        total += static_cast<std::size_t>(_mm_popcnt_u64(a[i]));
    return total;
}

inline __m128i load_slots(const std::uint32_t *p) { return _mm_loadu_si128(reinterpret_cast<const __m128i *>(p)); }

inline __m256i gather4(const std::int64_t *column, const std::uint32_t *slots)
{
    return _mm256_i32gather_epi64(reinterpret_cast<const long long *>(column), load_slots(slots), 8);
}

inline std::int64_t lane(__m256i v, int i)
{
    alignas(32) std::int64_t out[4];
    _mm256_store_si256(reinterpret_cast<__m256i *>(out), v);
    return out[i];
}

SumResult sum_gathered(const std::int64_t *column, const std::uint32_t *slots, std::size_t n, std::uint64_t max_abs)
{
    // Wrapping lane adds are exact when n * max_abs cannot leave the int64 range.
    const auto limit = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    if (n == 0)
        return {};
    if (max_abs != 0 && n > limit / max_abs)
        return scalar_table().gather_sum(column, slots, n, max_abs);

    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_epi64(acc, gather4(column, slots + i));
    std::int64_t total = lane(acc, 0) + lane(acc, 1) + lane(acc, 2) + lane(acc, 3);
    for (; i < n; ++i)
        total += column[slots[i]];
    return {total, false};
}

std::int64_t min_gathered(const std::int64_t *column, const std::uint32_t *slots, std::size_t n)
{
    std::size_t i = 0;
    std::int64_t m = column[slots[0]];
    if (n >= 4) {
        __m256i best = gather4(column, slots);
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256i v = gather4(column, slots + i);
            best = _mm256_blendv_epi8(best, v, _mm256_cmpgt_epi64(best, v));
        }
        m = lane(best, 0);
        for (int k = 1; k < 4; ++k)
            m = lane(best, k) < m ? lane(best, k) : m;
    }
    for (; i < n; ++i)
        m = column[slots[i]] < m ? column[slots[i]] : m;
    return m;
}

std::int64_t max_gathered(const std::int64_t *column, const std::uint32_t *slots, std::size_t n)
{
    std::size_t i = 0;
    std::int64_t m = column[slots[0]];
    if (n >= 4) {
        __m256i best = gather4(column, slots);
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256i v = gather4(column, slots + i);
            best = _mm256_blendv_epi8(best, v, _mm256_cmpgt_epi64(v, best));
        }
        m = lane(best, 0);
        for (int k = 1; k < 4; ++k)
            m = lane(best, k) > m ? lane(best, k) : m;
    }
    for (; i < n; ++i)
        m = column[slots[i]] > m ? column[slots[i]] : m;
    return m;
}

constexpr Table kAvx2{or_words,     and_words,    andnot_words, subset_words,
                      popcount_words, sum_gathered, min_gathered, max_gathered};

}

const Table *avx2_table() { return &kAvx2; }

}
