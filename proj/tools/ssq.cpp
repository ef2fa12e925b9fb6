#include "ssq/cli/session.hpp"
#include "ssq/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <unistd.h>

namespace {

using ssq::cli::SessionConfig;

void add_common(CLI::App &cmd, SessionConfig &config, std::vector<std::string> &tables, std::string &format,
                std::string &criterion)
{
    cmd.add_option("--table,-t", tables, "Register a CSV file as a table (NAME=PATH)");
    cmd.add_option("--format,-f", format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    cmd.add_option("--max-generated", config.limits.max_generated, "Enumeration node limit")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--max-results", config.limits.max_results, "Result subset limit")->check(CLI::PositiveNumber);
    cmd.add_option("--maxmin-criterion", criterion, "How MAXIMAL/MINIMAL compare subsets")
        ->check(CLI::IsMember({"inclusion", "cardinality"}));
    cmd.add_option("--per-tuple-sum", config.per_tuple_sum,
                   "Read sum(ATTR) bounds in CONSTRAINED BY as bounds on each tuple's ATTR");
    cmd.add_flag("--oracle", config.oracle, "Evaluate with the naive reference evaluator")->group("");
}

void finish(SessionConfig &config, const std::vector<std::string> &tables, const std::string &format,
            const std::string &criterion)
{
    for (const auto &arg : tables) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size())
            throw ssq::Error(ssq::Error::Category::Usage, "--table expects NAME=PATH, got '" + arg + "'");
        config.tables.emplace_back(arg.substr(0, eq), arg.substr(eq + 1));
    }
    config.format = *ssq::cli::parse_format(format);
    config.maxmin_criterion =
        criterion == "cardinality" ? ssq::MaxMinCriterion::Cardinality : ssq::MaxMinCriterion::Inclusion;
}

}

int main(int argc, char **argv)
{
    CLI::App app{"Subset queries over CSV tables"};
    app.require_subcommand(1);

    SessionConfig config;
    std::vector<std::string> tables;
    std::string format = "table";
    std::string criterion = "inclusion";
    std::string query_file;

    CLI::App *run = app.add_subcommand("run", "Execute the ';'-separated queries of a file (- for stdin)");
    run->add_option("file", query_file, "Query file")->required();
    add_common(*run, config, tables, format, criterion);

    CLI::App *repl = app.add_subcommand("repl", "Interactive session");
    add_common(*repl, config, tables, format, criterion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        finish(config, tables, format, criterion);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return ssq::cli::exit_code(e);
    }

    if (*run)
        return ssq::cli::run_batch(query_file, config, std::cin, std::cout, std::cerr);

    try {
        ssq::cli::Session session(config);
        return ssq::cli::repl(session, std::cin, std::cout, std::cerr, isatty(STDIN_FILENO) != 0);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return ssq::cli::exit_code(e);
    }
}
