#include "enroll/tabular/dataset.hpp"

#include "enroll/error.hpp"
#include "enroll/kv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>

namespace enroll::tabular {
namespace {

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size()
        && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

std::optional<std::string> canonical_count(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    std::uint64_t value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        return std::nullopt;
    return std::to_string(value);
}

bool is_binary_value(const std::string& v) { return v == "0" || v == "1"; }

} // namespace

Cell normalize_cell(const ColumnSpec& column, std::string_view raw)
{
    if (raw.empty() || raw == column.missing_marker)
        return std::nullopt;
    switch (column.kind) {
    case ColumnKind::Binary:
    case ColumnKind::Target: {
        const auto token = kv::trim(raw);
        for (const auto& t : column.true_tokens)
            if (iequals(token, t))
                return std::string("1");
        for (const auto& f : column.false_tokens)
            if (iequals(token, f))
                return std::string("0");
        throw Error(ErrorCode::UnparseableValue,
            "column '" + column.name + "': '" + std::string(raw) + "' is not a recognized binary value");
    }
    case ColumnKind::Count: {
        if (auto v = canonical_count(kv::trim(raw)))
            return v;
        throw Error(ErrorCode::UnparseableValue,
            "column '" + column.name + "': '" + std::string(raw) + "' is not a non-negative integer count");
    }
    case ColumnKind::Categorical:
    case ColumnKind::Identifier:
        return std::string(raw);
    }
    return std::string(raw);
}

Dataset::Dataset(Schema schema, std::vector<Row> rows)
    : schema_(std::move(schema))
    , rows_(std::move(rows))
{
    const auto arity = schema_.size();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const auto& row = rows_[r];
        if (row.size() != arity)
            throw Error(ErrorCode::RowArityMismatch, "row " + std::to_string(r) + " has "
                    + std::to_string(row.size()) + " cells, schema has " + std::to_string(arity));
        for (std::size_t c = 0; c < arity; ++c) {
            if (!row[c])
                continue;
            const auto& spec = schema_.column(c);
            const auto& v = *row[c];
            if (!spec.missing_marker.empty() && v == spec.missing_marker)
                throw Error(ErrorCode::UnparseableValue, "column '" + spec.name + "' row " + std::to_string(r)
                        + ": value equals the missing marker");
            switch (spec.kind) {
            case ColumnKind::Binary:
            case ColumnKind::Target:
                if (!is_binary_value(v))
                    throw Error(ErrorCode::UnparseableValue,
                        "column '" + spec.name + "' row " + std::to_string(r) + ": '" + v + "' is not 0/1");
                break;
            case ColumnKind::Count:
                if (canonical_count(v) != v)
                    throw Error(ErrorCode::UnparseableValue, "column '" + spec.name + "' row "
                            + std::to_string(r) + ": '" + v + "' is not a non-negative integer");
                break;
            case ColumnKind::Categorical:
            case ColumnKind::Identifier:
                if (v.empty())
                    throw Error(ErrorCode::UnparseableValue,
                        "column '" + spec.name + "' row " + std::to_string(r) + ": empty value must be Missing");
                break;
            }
        }
    }
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& indices) const
{
    std::vector<Row> out;
    out.reserve(indices.size());
    for (auto i : indices)
        out.push_back(rows_.at(i));
    return Dataset(schema_, std::move(out));
}

std::size_t Dataset::missing_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& row : rows_)
        n += static_cast<std::size_t>(std::count(row.begin(), row.end(), std::nullopt));
    return n;
}

} // namespace enroll::tabular
