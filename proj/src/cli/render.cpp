#include "ssq/cli/render.hpp"

#include "ssq/csv.hpp"

#include <json.hpp>

#include <algorithm>

namespace ssq::cli {

std::optional<Format> parse_format(std::string_view name)
{
    if (name == "table") return Format::Table;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    return std::nullopt;
}

std::string_view to_string(Format f)
{
    switch (f) {
        case Format::Table: return "table";
        case Format::Csv: return "csv";
        case Format::Json: return "json";
    }
    return "?";
}

namespace {

std::string rstrip(std::string s)
{
    while (!s.empty() && s.back() == ' ')
        s.pop_back();
    return s;
}

std::string table(const QueryResult &r)
{
    std::vector<std::size_t> width;
    for (const auto &c : r.columns)
        width.push_back(c.size());
    std::vector<std::vector<std::string>> cells;
    for (const auto &row : r.rows) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line.push_back(row[i].to_string());
            width[i] = std::max(width[i], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto format_line = [&](const std::vector<std::string> &line) {
        std::string out;
        for (std::size_t i = 0; i < line.size(); ++i) {
            out += line[i];
            if (i + 1 < line.size())
                out += std::string(width[i] - line[i].size() + 2, ' ');
        }
        return rstrip(out) + "\n";
    };
    std::string out = format_line(r.columns);
    std::vector<std::string> rule;
    for (std::size_t w : width)
        rule.emplace_back(w, '-');
    out += format_line(rule);
    for (const auto &line : cells)
        out += format_line(line);
    return out;
}

std::string csv(const QueryResult &r)
{
    auto line = [](const auto &fields, auto text) {
        std::string out;
        for (std::size_t i = 0; i < fields.size(); ++i)
            out += (i ? "," : "") + csv_escape(text(fields[i]));
        return out + "\n";
    };
    std::string out = line(r.columns, [](const std::string &s) { return s; });
    for (const auto &row : r.rows)
        out += line(row, [](const Value &v) { return v.to_string(); });
    return out;
}

std::string json_value(const Value &v)
{
    if (v.kind() == Kind::Str)
        return nlohmann::json(v.as_str()).dump();
    // Decimal text is already a valid JSON number and keeps every digit.
    return v.to_string();
}

std::string json_key(const std::string &k)
{
    return nlohmann::json(k).dump();
}

std::string json_object(const QueryResult &r, const std::vector<Value> &row, std::size_t from)
{
    std::string out = "{";
    for (std::size_t i = from; i < row.size(); ++i)
        out += (i > from ? ", " : "") + json_key(r.columns[i]) + ": " + json_value(row[i]);
    return out + "}";
}

std::string json(const QueryResult &r)
{
    if (r.shape == QueryResult::Shape::Rows) {
        if (r.rows.empty())
            return "[]\n";
        std::string out = "[\n";
        for (std::size_t i = 0; i < r.rows.size(); ++i)
            out += "  " + json_object(r, r.rows[i], 0) + (i + 1 < r.rows.size() ? ",\n" : "\n");
        return out + "]\n";
    }
    if (r.rows.empty())
        return "{\"subsets\": []}\n";
    std::string out = "{\"subsets\": [\n";
    std::size_t i = 0;
    while (i < r.rows.size()) {
        const Value sid = r.rows[i][0];
        std::string rows;
        for (; i < r.rows.size() && r.rows[i][0] == sid; ++i)
            rows += (rows.empty() ? "" : ", ") + json_object(r, r.rows[i], 1);
        out += "  {\"sid\": " + sid.to_string() + ", \"rows\": [" + rows + "]}" + (i < r.rows.size() ? ",\n" : "\n");
    }
    return out + "]}\n";
}

}

std::string render(const QueryResult &result, Format format)
{
    switch (format) {
        case Format::Table: return table(result);
        case Format::Csv: return csv(result);
        case Format::Json: return json(result);
    }
    return {};
}

}
