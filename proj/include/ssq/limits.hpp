#pragma once

#include <cstdint>

namespace ssq {

/// Resource caps. Exceeding any of them is a hard LimitError, never a truncated result.
struct Limits
{
    /// Enumeration nodes (and subset pairs in cross operators) a single operator may visit.
    std::uint64_t max_generated = 1'000'000;
    /// Member subsets any relation of subsets may hold.
    std::uint64_t max_results = 100'000;
    /// Largest relation the materializing power set accepts.
    std::uint64_t naive_cap = 20;
};

/// Throws std::invalid_argument unless every limit is positive.
void validate(const Limits &limits);

}
