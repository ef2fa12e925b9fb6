#include "ssq/cli/session.hpp"

#include "ssq/error.hpp"

#include <iostream>
#include <sstream>

namespace ssq::cli {

namespace {

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

constexpr const char *kHelp =
    "\\load NAME PATH   register a CSV file as table NAME\n"
    "\\tables           list registered tables\n"
    "\\limits           show resource limits\n"
    "\\format FMT       table, csv or json\n"
    "\\quit             leave\n"
    "Queries end with ';' or a blank line.\n";

/// Returns false on \quit.
bool command(Session &session, const std::string &line, std::ostream &out)
{
    std::istringstream ss(line);
    std::string cmd;
    ss >> cmd;
    std::vector<std::string> args;
    for (std::string a; ss >> a;)
        args.push_back(a);
    auto need = [&](std::size_t n, const char *usage) {
        if (args.size() != n)
            throw Error(Error::Category::Usage, std::string("usage: ") + usage);
    };
    if (cmd == "\\quit" || cmd == "\\q") {
        return false;
    } else if (cmd == "\\load") {
        need(2, "\\load NAME PATH");
        session.load(args[0], args[1]);
        out << "loaded " << session.catalog().find(args[0])->size() << " rows into " << args[0] << "\n";
    } else if (cmd == "\\tables") {
        need(0, "\\tables");
        for (const auto &name : session.catalog().names())
            out << name << "\n";
    } else if (cmd == "\\limits") {
        need(0, "\\limits");
        const Limits &l = session.config().limits;
        out << "max_generated " << l.max_generated << "\nmax_results " << l.max_results << "\nnaive_cap "
            << l.naive_cap << "\n";
    } else if (cmd == "\\format") {
        need(1, "\\format table|csv|json");
        const auto f = parse_format(args[0]);
        if (!f)
            throw Error(Error::Category::Usage, "unknown format '" + args[0] + "'");
        session.config().format = *f;
    } else if (cmd == "\\help" || cmd == "\\?") {
        out << kHelp;
    } else {
        throw Error(Error::Category::Usage, "unknown command '" + cmd + "'; try \\help");
    }
    return true;
}

}

int repl(Session &session, std::istream &in, std::ostream &out, std::ostream &err, bool prompt)
{
    std::string buffer;
    auto submit = [&] {
        const std::string text = trim(buffer);
        buffer.clear();
        if (text.empty())
            return;
        try {
            out << session.execute(text);
        } catch (const std::exception &e) {
            err << "error: " << e.what() << "\n";
        }
    };
    for (;;) {
        if (prompt)
            out << (buffer.empty() ? "ssq> " : "...> ") << std::flush;
        std::string line;
        if (!std::getline(in, line))
            break;
        const std::string t = trim(line);
        if (buffer.empty() && !t.empty() && t[0] == '\\') {
            try {
                if (!command(session, t, out))
                    return 0;
            } catch (const std::exception &e) {
                err << "error: " << e.what() << "\n";
            }
            continue;
        }
        if (t.empty()) {
            submit();
            continue;
        }
        buffer += line + "\n";
        if (t.back() == ';')
            submit();
    }
    submit();
    if (prompt)
        out << "\n";
    return 0;
}

}
