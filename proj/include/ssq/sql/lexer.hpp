#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ssq::sql {

struct Token
{
    enum class Kind : std::uint8_t {
        Keyword,   ///< text is upper-cased
        Ident,     ///< possibly qualified: "Item.ItemId"
        Int,
        Dec,
        Str,       ///< text is the unescaped contents
        Op,        ///< = != <> < <= > >=
        LParen,
        RParen,
        Comma,
        Star,
        Minus,
        Semicolon,
    };

    Kind kind = Kind::Ident;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;

    bool is_keyword(std::string_view kw) const { return kind == Kind::Keyword && text == kw; }
    bool operator==(const Token &) const = default;
};

std::string_view to_string(Token::Kind kind);

/// Splits SQL text into tokens. Keywords are case-insensitive; strings take single or double
/// quotes with the quote doubled to escape it; `--` starts a comment running to end of line.
/// Throws ParseError on an illegal character or an unterminated string.
std::vector<Token> tokenize(std::string_view text);

bool is_keyword(std::string_view word);

}
