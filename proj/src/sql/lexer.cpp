#include "ssq/sql/lexer.hpp"

#include "ssq/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ssq::sql {

namespace {

constexpr std::array kKeywords = {
    "SELECT", "FROM", "WHERE", "WITH", "SUBSETS", "CONSTRAINED", "BY", "APPLY", "UNARY", "UNION", "INTERSECTION",
    "CROSS", "MAXIMAL", "MINIMAL", "GROUP", "HAVING", "AND", "OR", "NOT", "TRUE", "FALSE",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::string upper(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

}

bool is_keyword(std::string_view word)
{
    const std::string u = upper(word);
    return std::find(kKeywords.begin(), kKeywords.end(), u) != kKeywords.end();
}

std::string_view to_string(Token::Kind kind)
{
    switch (kind) {
        case Token::Kind::Keyword: return "keyword";
        case Token::Kind::Ident: return "identifier";
        case Token::Kind::Int: return "integer";
        case Token::Kind::Dec: return "decimal";
        case Token::Kind::Str: return "string";
        case Token::Kind::Op: return "comparison operator";
        case Token::Kind::LParen: return "'('";
        case Token::Kind::RParen: return "')'";
        case Token::Kind::Comma: return "','";
        case Token::Kind::Star: return "'*'";
        case Token::Kind::Minus: return "'-'";
        case Token::Kind::Semicolon: return "';'";
    }
    return "token";
}

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto emit = [&](Token::Kind kind, std::string s, std::size_t l, std::size_t c) {
        out.push_back({kind, std::move(s), l, c});
    };

    while (i < text.size()) {
        const char c = text[i];
        const std::size_t l = line, k = col;
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
        } else if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j]))
                ++j;
            // One qualifier level: Table.column
            if (j + 1 < text.size() && text[j] == '.' && ident_start(text[j + 1])) {
                ++j;
                while (j < text.size() && ident_char(text[j]))
                    ++j;
            }
            const std::string_view word = text.substr(i, j - i);
            if (word.find('.') == std::string_view::npos && is_keyword(word))
                emit(Token::Kind::Keyword, upper(word), l, k);
            else
                emit(Token::Kind::Ident, std::string(word), l, k);
            advance(j - i);
        } else if (digit(c)) {
            std::size_t j = i;
            while (j < text.size() && digit(text[j]))
                ++j;
            bool dec = false;
            if (j + 1 < text.size() && text[j] == '.' && digit(text[j + 1])) {
                dec = true;
                ++j;
                while (j < text.size() && digit(text[j]))
                    ++j;
            }
            if (j < text.size() && ident_char(text[j]))
                throw ParseError("malformed number '" + std::string(text.substr(i, j - i + 1)) + "'", l, k);
            emit(dec ? Token::Kind::Dec : Token::Kind::Int, std::string(text.substr(i, j - i)), l, k);
            advance(j - i);
        } else if (c == '"' || c == '\'') {
            std::string s;
            std::size_t j = i + 1;
            for (;;) {
                if (j >= text.size())
                    throw ParseError("unterminated string literal", l, k);
                if (text[j] == c) {
                    if (j + 1 < text.size() && text[j + 1] == c) {
                        s += c;
                        j += 2;
                        continue;
                    }
                    break;
                }
                s += text[j++];
            }
            emit(Token::Kind::Str, std::move(s), l, k);
            advance(j + 1 - i);
        } else if (c == '<' || c == '>' || c == '=' || c == '!') {
            std::string op(1, c);
            if (i + 1 < text.size() && ((c != '=' && text[i + 1] == '=') || (c == '<' && text[i + 1] == '>')))
                op += text[i + 1];
            if (op == "!")
                throw ParseError("illegal character '!'", l, k);
            emit(Token::Kind::Op, op == "<>" ? "!=" : op, l, k);
            advance(op.size());
        } else {
            Token::Kind kind;
            switch (c) {
                case '(': kind = Token::Kind::LParen; break;
                case ')': kind = Token::Kind::RParen; break;
                case ',': kind = Token::Kind::Comma; break;
                case '*': kind = Token::Kind::Star; break;
                case '-': kind = Token::Kind::Minus; break;
                case ';': kind = Token::Kind::Semicolon; break;
                default: {
                    const unsigned char u = static_cast<unsigned char>(c);
                    std::string shown = std::isprint(u) ? std::string(1, c) : "\\x" + std::to_string(int(u));
                    throw ParseError("illegal character '" + shown + "'", l, k);
                }
            }
            emit(kind, std::string(1, c), l, k);
            advance(1);
        }
    }
    return out;
}

}
