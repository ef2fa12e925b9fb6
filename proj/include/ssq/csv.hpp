#pragma once

#include "ssq/relation.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssq {

/// Loads an RFC-4180 file. Without a declared schema each column is Int if every cell parses as
/// an integer, else Dec if every cell parses as a decimal, else Str. Throws LoadError.
RelationPtr load_csv(const std::filesystem::path &path, std::string name,
                     const std::optional<Schema> &declared = std::nullopt);
RelationPtr parse_csv(std::string_view text, std::string name, const std::optional<Schema> &declared = std::nullopt);

/// Splits RFC-4180 text into records. Quoted fields are reported with `quoted` set so callers
/// can tell an empty quoted string from a missing cell.
struct CsvField
{
    std::string text;
    bool quoted = false;
};
std::vector<std::vector<CsvField>> split_csv(std::string_view text);

std::string csv_escape(std::string_view field);
std::string write_csv(const Relation &r);

}
