#pragma once

#include "ssq/sql/ast.hpp"
#include "ssq/sql/lexer.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace ssq::sql {

/// Parses exactly one query, optionally followed by ';'. Throws ParseError with the position of
/// the offending token.
Ast parse(std::span<const Token> tokens);
Ast parse(std::string_view text);

/// Parses a sequence of ';'-separated queries; empty statements are skipped.
std::vector<Ast> parse_script(std::string_view text);

}
