#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssq {

/// Base of every error the engine raises. The category decides the CLI exit code.
class Error : public std::runtime_error
{
public:
    enum class Category { Usage, Load, Semantic, Limit };

    Error(Category category, const std::string &what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

class LoadError : public Error
{
public:
    explicit LoadError(const std::string &what) : Error(Category::Load, what) {}
};

/// Unknown tables/attributes, kind mismatches, malformed plans, undefined aggregates.
class SemanticError : public Error
{
public:
    explicit SemanticError(const std::string &what) : Error(Category::Semantic, what) {}
};

/// Syntax errors carry the 1-based position of the offending token.
class ParseError : public SemanticError
{
public:
    ParseError(const std::string &what, std::size_t line, std::size_t column)
        : SemanticError(std::to_string(line) + ":" + std::to_string(column) + ": " + what)
        , line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class LimitError : public Error
{
public:
    explicit LimitError(const std::string &what) : Error(Category::Limit, what) {}
};

}
