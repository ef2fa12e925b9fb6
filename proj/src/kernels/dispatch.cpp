#include "ssq/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace ssq::kernels {

#ifndef SSQ_HAVE_AVX2
const Table *avx2_table() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2()
{
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
    return false;
#endif
}

Isa detect()
{
    return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa> &current()
{
    static std::atomic<Isa> isa{detect()};
    return isa;
}

const Table &active() { return table_for(current().load(std::memory_order_relaxed)); }

}

std::string_view isa_name(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa)
{
    if (isa == Isa::Scalar)
        return true;
    static const bool avx2 = avx2_table() != nullptr && cpu_has_avx2();
    return avx2;
}

Isa active_isa() { return current().load(); }

void set_isa(Isa isa)
{
    if (!isa_supported(isa))
        throw std::invalid_argument("instruction set '" + std::string(isa_name(isa)) + "' is not available");
    current().store(isa);
}

const Table &table_for(Isa isa)
{
    if (isa == Isa::Avx2 && isa_supported(Isa::Avx2))
        return *avx2_table();
    return scalar_table();
}

void bit_or(std::span<Word> dst, std::span<const Word> a, std::span<const Word> b)
{
    active().bit_or(dst.data(), a.data(), b.data(), dst.size());
}

void bit_and(std::span<Word> dst, std::span<const Word> a, std::span<const Word> b)
{
    active().bit_and(dst.data(), a.data(), b.data(), dst.size());
}

void bit_andnot(std::span<Word> dst, std::span<const Word> a, std::span<const Word> b)
{
    active().bit_andnot(dst.data(), a.data(), b.data(), dst.size());
}

bool is_subset(std::span<const Word> a, std::span<const Word> b)
{
    return active().is_subset(a.data(), b.data(), a.size());
}

std::size_t popcount(std::span<const Word> a)
{
    return active().popcount(a.data(), a.size());
}

SumResult gather_sum(std::span<const std::int64_t> column, std::span<const std::uint32_t> slots, std::uint64_t max_abs)
{
    return active().gather_sum(column.data(), slots.data(), slots.size(), max_abs);
}

std::int64_t gather_min(std::span<const std::int64_t> column, std::span<const std::uint32_t> slots)
{
    if (slots.empty())
        throw std::invalid_argument("gather_min over no slots");
    return active().gather_min(column.data(), slots.data(), slots.size());
}

std::int64_t gather_max(std::span<const std::int64_t> column, std::span<const std::uint32_t> slots)
{
    if (slots.empty())
        throw std::invalid_argument("gather_max over no slots");
    return active().gather_max(column.data(), slots.data(), slots.size());
}

bool Bitset::none() const
{
    for (Word w : words_)
        if (w) return false;
    return true;
}

std::vector<std::size_t> Bitset::positions() const
{
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        Word bits = words_[w];
        while (bits) {
            out.push_back(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

}
