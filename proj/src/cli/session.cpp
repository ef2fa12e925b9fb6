#include "ssq/cli/session.hpp"

#include "ssq/csv.hpp"
#include "ssq/error.hpp"
#include "ssq/oracle.hpp"
#include "ssq/sql/lower.hpp"
#include "ssq/sql/parser.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace ssq::cli {

Session::Session(SessionConfig config) : config_(std::move(config))
{
    validate(config_.limits);
    for (const auto &[name, path] : config_.tables)
        catalog_.add(load_csv(path, name));
}

void Session::load(const std::string &name, const std::filesystem::path &path)
{
    catalog_.add(load_csv(path, name));
    config_.tables.emplace_back(name, path);
}

QueryResult Session::query(const sql::Ast &ast) const
{
    const PlanNode plan = sql::lower(ast, catalog_, {config_.per_tuple_sum});
    if (config_.oracle)
        return oracle_eval(plan, catalog_, config_.maxmin_criterion);
    EvalOptions options;
    options.limits = config_.limits;
    options.maxmin_criterion = config_.maxmin_criterion;
    return evaluate(plan, catalog_, options);
}

std::string Session::execute(std::string_view script) const
{
    std::string out;
    for (const auto &ast : sql::parse_script(script)) {
        if (!out.empty())
            out += "\n";
        out += render(query(ast), config_.format);
    }
    return out;
}

int exit_code(const std::exception &e)
{
    if (const auto *err = dynamic_cast<const Error *>(&e)) {
        switch (err->category()) {
            case Error::Category::Usage: return 1;
            case Error::Category::Load: return 2;
            case Error::Category::Semantic: return 3;
            case Error::Category::Limit: return 4;
        }
    }
    if (dynamic_cast<const std::invalid_argument *>(&e))
        return 1;
    return 3;
}

int run_batch(const std::filesystem::path &query_file, const SessionConfig &config, std::istream &in,
              std::ostream &out, std::ostream &err)
{
    try {
        std::string script;
        if (query_file == "-") {
            std::ostringstream ss;
            ss << in.rdbuf();
            script = ss.str();
        } else {
            std::ifstream f(query_file, std::ios::binary);
            if (!f)
                throw LoadError("cannot read query file '" + query_file.string() + "'");
            std::ostringstream ss;
            ss << f.rdbuf();
            script = ss.str();
        }
        const Session session(config);
        out << session.execute(script);
        return 0;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e);
    }
}

}
