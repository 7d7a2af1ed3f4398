#include "enroll/tabular/csv.hpp"

#include "enroll/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace enroll::tabular {

namespace csv {

std::vector<Record> parse(std::string_view text)
{
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);

    std::vector<Record> records;
    Record current;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    std::size_t line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.fields.size() == 1 && current.fields[0].empty();
        if (!blank)
            records.push_back(std::move(current));
        current = Record {};
        current.line = line;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n')
                    ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field.empty() && !field_was_quoted) {
                in_quotes = true;
                field_was_quoted = true;
            } else {
                throw Error(ErrorCode::UnparseableValue,
                    "line " + std::to_string(line) + ": stray quote inside unquoted field");
            }
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            ++line;
            end_record();
            break;
        case '\n':
            ++line;
            end_record();
            break;
        default:
            if (field_was_quoted)
                throw Error(ErrorCode::UnparseableValue,
                    "line " + std::to_string(line) + ": text after closing quote");
            field += c;
        }
    }
    if (in_quotes)
        throw Error(ErrorCode::UnparseableValue, "unterminated quoted field starting near line "
                + std::to_string(current.line));
    if (!field.empty() || field_was_quoted || !current.fields.empty())
        end_record();
    return records;
}

std::string format_field(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_record(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out += ',';
        out += format_field(fields[i]);
    }
    return out;
}

} // namespace csv

Dataset parse_csv(std::string_view text, const Schema& schema)
{
    auto records = csv::parse(text);
    if (records.empty())
        throw Error(ErrorCode::HeaderMismatch, "input has no header row");

    const auto& header = records.front().fields;
    std::vector<std::size_t> position(schema.size(), header.size());
    std::vector<std::string> unknown;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!seen.insert(header[i]).second)
            throw Error(ErrorCode::HeaderMismatch, "duplicate header column '" + header[i] + "'");
        if (auto idx = schema.index_of(header[i]))
            position[*idx] = i;
        else
            unknown.push_back(header[i]);
    }
    std::vector<std::string> absent;
    for (std::size_t c = 0; c < schema.size(); ++c)
        if (position[c] == header.size())
            absent.push_back(schema.column(c).name);
    if (!unknown.empty() || !absent.empty()) {
        std::string msg = "header does not match schema";
        if (!absent.empty())
            msg += "; missing columns: " + kv::join_list(absent);
        if (!unknown.empty())
            msg += "; unexpected columns: " + kv::join_list(unknown);
        throw Error(ErrorCode::HeaderMismatch, msg);
    }

    std::vector<Row> rows;
    rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size())
            throw Error(ErrorCode::RowArityMismatch, "line " + std::to_string(rec.line) + ": "
                    + std::to_string(rec.fields.size()) + " cells, expected " + std::to_string(header.size()));
        Row row(schema.size());
        for (std::size_t c = 0; c < schema.size(); ++c) {
            try {
                row[c] = normalize_cell(schema.column(c), rec.fields[position[c]]);
            } catch (const Error& e) {
                rethrow_with_context(e, "line " + std::to_string(rec.line));
            }
        }
        rows.push_back(std::move(row));
    }
    return Dataset(schema, std::move(rows));
}

Dataset parse_csv(std::istream& in, const Schema& schema)
{
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), schema);
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Dataset read_csv_file(const std::string& path, const Schema& schema)
{
    const auto text = read_text_file(path);
    try {
        return parse_csv(text, schema);
    } catch (const Error& e) {
        rethrow_with_context(e, path);
    }
}

std::string to_csv(const Dataset& ds)
{
    const auto& schema = ds.schema();
    std::vector<std::string> fields;
    for (const auto& c : schema.columns())
        fields.push_back(c.name);
    std::string out = csv::format_record(fields) + "\r\n";
    for (const auto& row : ds.rows()) {
        fields.clear();
        for (std::size_t c = 0; c < row.size(); ++c)
            fields.push_back(row[c] ? *row[c] : schema.column(c).missing_marker);
        out += csv::format_record(fields);
        out += "\r\n";
    }
    return out;
}

void write_csv_file(const std::string& path, const Dataset& ds) { write_text_file(path, to_csv(ds)); }

} // namespace enroll::tabular
