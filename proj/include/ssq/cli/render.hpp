#pragma once

#include "ssq/engine.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ssq::cli {

enum class Format : std::uint8_t { Table, Csv, Json };

std::optional<Format> parse_format(std::string_view name);
std::string_view to_string(Format f);

/// Table: aligned columns under a header rule. CSV: header plus rows. JSON:
/// `{"subsets": [{"sid": k, "rows": [...]}]}` for subset results, a flat array of row objects otherwise.
std::string render(const QueryResult &result, Format format);

}
