#pragma once

#include "ssq/cli/render.hpp"
#include "ssq/engine.hpp"
#include "ssq/sql/ast.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ssq::cli {

struct SessionConfig
{
    std::vector<std::pair<std::string, std::filesystem::path>> tables;
    Limits limits;
    Format format = Format::Table;
    MaxMinCriterion maxmin_criterion = MaxMinCriterion::Inclusion;
    /// Attributes whose sum(...) bounds are read per tuple.
    std::vector<std::string> per_tuple_sum;
    /// Answer with the naive reference evaluator instead of the engine.
    bool oracle = false;
};

class Session
{
public:
    /// Loads every configured table; throws LoadError or SemanticError on duplicates.
    explicit Session(SessionConfig config);

    void load(const std::string &name, const std::filesystem::path &path);

    QueryResult query(const sql::Ast &ast) const;
    /// Runs every query of the script and renders the results, blank-line separated. Nothing is
    /// rendered unless every query succeeds.
    std::string execute(std::string_view script) const;

    const Catalog &catalog() const { return catalog_; }
    SessionConfig &config() { return config_; }
    const SessionConfig &config() const { return config_; }

private:
    SessionConfig config_;
    Catalog catalog_;
};

/// 1 usage, 2 load, 3 parse or semantic, 4 limit.
int exit_code(const std::exception &e);

/// Executes a query file ("-" reads `in`). Returns the process exit code.
int run_batch(const std::filesystem::path &query_file, const SessionConfig &config, std::istream &in,
              std::ostream &out, std::ostream &err);

/// Interactive loop. Queries end with ';' or a blank line; lines starting with '\' are commands.
/// Errors are reported and the session continues. Returns 0.
int repl(Session &session, std::istream &in, std::ostream &out, std::ostream &err, bool prompt = true);

}
