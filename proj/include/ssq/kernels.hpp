#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

// Data-parallel inner loops used by the subset algebra: word-wise bitset algebra over subset
// membership masks and gathered reductions over numeric columns. Every routine has a portable
// scalar reference; an AVX2 variant is selected at runtime when the CPU supports it.
namespace ssq::kernels {

using Word = std::uint64_t;

enum class Isa : std::uint8_t { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);
/// The variant currently used by the dispatching entry points.
Isa active_isa();
/// Pins dispatch to `isa` (tests, benchmarks). Throws std::invalid_argument if unsupported.
void set_isa(Isa isa);

struct SumResult
{
    std::int64_t value = 0;
    bool overflow = false;
};

/// Function table implemented once per instruction set.
struct Table
{
    void (*bit_or)(Word *dst, const Word *a, const Word *b, std::size_t n);
    void (*bit_and)(Word *dst, const Word *a, const Word *b, std::size_t n);
    void (*bit_andnot)(Word *dst, const Word *a, const Word *b, std::size_t n); // a & ~b
    bool (*is_subset)(const Word *a, const Word *b, std::size_t n);           // a ⊆ b
    std::size_t (*popcount)(const Word *a, std::size_t n);
    /// Sum of column[slots[i]]. `max_abs` bounds |column| and lets wide variants skip per-add checks.
    SumResult (*gather_sum)(const std::int64_t *column, const std::uint32_t *slots, std::size_t n,
                            std::uint64_t max_abs);
    std::int64_t (*gather_min)(const std::int64_t *column, const std::uint32_t *slots, std::size_t n);
    std::int64_t (*gather_max)(const std::int64_t *column, const std::uint32_t *slots, std::size_t n);
};

const Table &scalar_table();
/// nullptr when the build has no AVX2 variant.
const Table *avx2_table();
const Table &table_for(Isa isa);

// Dispatching entry points.
void bit_or(std::span<Word> dst, std::span<const Word> a, std::span<const Word> b);
void bit_and(std::span<Word> dst, std::span<const Word> a, std::span<const Word> b);
void bit_andnot(std::span<Word> dst, std::span<const Word> a, std::span<const Word> b);
bool is_subset(std::span<const Word> a, std::span<const Word> b);
std::size_t popcount(std::span<const Word> a);
SumResult gather_sum(std::span<const std::int64_t> column, std::span<const std::uint32_t> slots,
                     std::uint64_t max_abs);
std::int64_t gather_min(std::span<const std::int64_t> column, std::span<const std::uint32_t> slots);
std::int64_t gather_max(std::span<const std::int64_t> column, std::span<const std::uint32_t> slots);

/// Fixed-width membership mask over the slots of one extension.
class Bitset
{
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t bits() const { return bits_; }
    void set(std::size_t i) { words_[i / 64] |= Word{1} << (i % 64); }
    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
    std::span<Word> words() { return words_; }
    std::span<const Word> words() const { return words_; }
    bool none() const;

    /// Set bit positions in ascending order.
    std::vector<std::size_t> positions() const;

    bool operator==(const Bitset &) const = default;

private:
    std::size_t bits_ = 0;
    std::vector<Word> words_;
};

}
