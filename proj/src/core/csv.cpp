#include "ssq/csv.hpp"

#include "ssq/error.hpp"
#include "ssq/ident.hpp"

#include <fstream>
#include <sstream>

namespace ssq {

std::vector<std::vector<CsvField>> split_csv(std::string_view text)
{
    std::vector<std::vector<CsvField>> records;
    std::vector<CsvField> record;
    CsvField field;
    std::size_t line = 1;
    std::size_t i = 0;
    bool at_field_start = true;
    bool any = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field = {};
        at_field_start = true;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any = false;
    };

    while (i < text.size()) {
        const char c = text[i];
        if (at_field_start && c == '"') {
            field.quoted = true;
            at_field_start = false;
            any = true;
            const std::size_t open_line = line;
            ++i;
            for (;;) {
                if (i >= text.size())
                    throw LoadError("unterminated quoted field starting on line " + std::to_string(open_line));
                if (text[i] == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        field.text += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                if (text[i] == '\n')
                    ++line;
                field.text += text[i++];
            }
            if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                throw LoadError("unexpected character after closing quote on line " + std::to_string(line));
            continue;
        }
        if (c == ',') {
            any = true;
            end_field();
            ++i;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            ++i;
            if (any || !field.text.empty() || !record.empty())
                end_record();
            else
                records.emplace_back(); // blank line, reported as an empty record
            ++line;
        } else {
            if (!at_field_start && field.quoted)
                throw LoadError("unexpected character after closing quote on line " + std::to_string(line));
            any = true;
            at_field_start = false;
            field.text += c;
            ++i;
        }
    }
    if (any || !field.text.empty() || !record.empty())
        end_record();
    // Trailing blank lines carry no data.
    while (!records.empty() && records.back().empty())
        records.pop_back();
    return records;
}

namespace {

Value parse_cell(const CsvField &f, Kind kind, std::size_t line, const std::string &column)
{
    auto fail = [&](std::string_view why) -> Value {
        throw LoadError("line " + std::to_string(line) + ", column '" + column + "': " + std::string(why));
    };
    if (f.text.empty() && !f.quoted)
        return fail("missing value");
    switch (kind) {
        case Kind::Int:
            if (auto v = parse_int(f.text)) return Value(*v);
            return fail("'" + f.text + "' is not an integer");
        case Kind::Dec:
            if (auto v = Decimal::parse(f.text)) return Value(*v);
            return fail("'" + f.text + "' is not a decimal with at most 6 fractional digits");
        case Kind::Str:
            return Value(f.text);
    }
    return fail("unknown kind");
}

Kind infer_kind(const std::vector<std::vector<CsvField>> &records, std::size_t col)
{
    if (records.size() <= 1)
        return Kind::Str;
    bool all_int = true;
    bool all_dec = true;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (col >= records[r].size())
            continue; // arity error is reported later
        const std::string &t = records[r][col].text;
        if (all_int && !parse_int(t))
            all_int = false;
        if (all_dec && !Decimal::parse(t))
            all_dec = false;
    }
    return all_int ? Kind::Int : all_dec ? Kind::Dec : Kind::Str;
}

}

RelationPtr parse_csv(std::string_view text, std::string name, const std::optional<Schema> &declared)
{
    auto records = split_csv(text);
    if (records.empty())
        throw LoadError("'" + name + "': missing header row");
    const auto &header = records.front();

    std::vector<Attribute> attrs;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string &h = header[c].text;
        if (h.empty())
            throw LoadError("'" + name + "': empty column name in header");
        for (const auto &a : attrs)
            if (iequals(a.name, h))
                throw LoadError("'" + name + "': duplicate column name '" + h + "'");
        attrs.push_back({h, infer_kind(records, c), name});
    }
    if (declared) {
        if (declared->arity() != attrs.size())
            throw LoadError("'" + name + "': header has " + std::to_string(attrs.size()) + " columns, schema declares " +
                            std::to_string(declared->arity()));
        for (std::size_t c = 0; c < attrs.size(); ++c) {
            if (!iequals((*declared)[c].name, attrs[c].name))
                throw LoadError("'" + name + "': header column '" + attrs[c].name + "' does not match declared '" +
                                (*declared)[c].name + "'");
            attrs[c].kind = (*declared)[c].kind;
        }
    }

    std::vector<std::vector<Value>> rows;
    rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto &rec = records[r];
        if (rec.size() != attrs.size())
            throw LoadError("'" + name + "' line " + std::to_string(r + 1) + ": expected " +
                            std::to_string(attrs.size()) + " fields, found " + std::to_string(rec.size()));
        std::vector<Value> row;
        row.reserve(rec.size());
        for (std::size_t c = 0; c < rec.size(); ++c)
            row.push_back(parse_cell(rec[c], attrs[c].kind, r + 1, attrs[c].name));
        rows.push_back(std::move(row));
    }
    try {
        return Relation::make_base(std::move(name), Schema(std::move(attrs)), std::move(rows));
    } catch (const SemanticError &e) {
        throw LoadError(e.what());
    }
}

RelationPtr load_csv(const std::filesystem::path &path, std::string name, const std::optional<Schema> &declared)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw LoadError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), std::move(name), declared);
}

std::string csv_escape(std::string_view field)
{
    const bool needs = field.empty() || field.find_first_of(",\"\r\n") != std::string_view::npos ||
                       field.front() == ' ' || field.back() == ' ';
    if (!needs)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string write_csv(const Relation &r)
{
    std::string out;
    for (std::size_t c = 0; c < r.schema().arity(); ++c) {
        if (c) out += ',';
        out += csv_escape(r.schema()[c].name);
    }
    out += '\n';
    for (const auto &t : r.tuples()) {
        for (std::size_t c = 0; c < t.values.size(); ++c) {
            if (c) out += ',';
            out += csv_escape(t.values[c].to_string());
        }
        out += '\n';
    }
    return out;
}

}
