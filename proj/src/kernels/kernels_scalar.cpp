#include "ssq/kernels.hpp"

namespace ssq::kernels {

namespace {

void or_words(Word *dst, const Word *a, const Word *b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = a[i] | b[i];
}

void and_words(Word *dst, const Word *a, const Word *b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = a[i] & b[i];
}

void andnot_words(Word *dst, const Word *a, const Word *b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        dst[i] = a[i] & ~b[i];
}

bool subset_words(const Word *a, const Word *b, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] & ~b[i])
            return false;
    return true;
}

std::size_t popcount_words(const Word *a, std::size_t n)
{
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i)
        total += static_cast<std::size_t>(__builtin_popcountll(a[i]));
    return total;
}

SumResult sum_gathered(const std::int64_t *column, const std::uint32_t *slots, std::size_t n, std::uint64_t)
{
    SumResult r;
    for (std::size_t i = 0; i < n; ++i)
        if (__builtin_add_overflow(r.value, column[slots[i]], &r.value))
            return {0, true};
    return r;
}

std::int64_t min_gathered(const std::int64_t *column, const std::uint32_t *slots, std::size_t n)
{
    std::int64_t m = column[slots[0]];
    for (std::size_t i = 1; i < n; ++i)
        m = column[slots[i]] < m ? column[slots[i]] : m;
    return m;
}

std::int64_t max_gathered(const std::int64_t *column, const std::uint32_t *slots, std::size_t n)
{
    std::int64_t m = column[slots[0]];
    for (std::size_t i = 1; i < n; ++i)
        m = column[slots[i]] > m ? column[slots[i]] : m;
    return m;
}

constexpr Table kScalar{or_words,     and_words,    andnot_words, subset_words,
                        popcount_words, sum_gathered, min_gathered, max_gathered};

}

const Table &scalar_table() { return kScalar; }

}
