#include "enroll/tabular/schema.hpp"

#include "enroll/error.hpp"

#include <set>

namespace enroll::tabular {

std::string_view to_string(ColumnKind kind) noexcept
{
    switch (kind) {
    case ColumnKind::Binary: return "binary";
    case ColumnKind::Count: return "count";
    case ColumnKind::Categorical: return "categorical";
    case ColumnKind::Identifier: return "identifier";
    case ColumnKind::Target: return "target";
    }
    return "?";
}

std::optional<ColumnKind> parse_column_kind(std::string_view text) noexcept
{
    if (text == "binary")
        return ColumnKind::Binary;
    if (text == "count")
        return ColumnKind::Count;
    if (text == "categorical")
        return ColumnKind::Categorical;
    if (text == "identifier")
        return ColumnKind::Identifier;
    if (text == "target")
        return ColumnKind::Target;
    return std::nullopt;
}

Schema::Schema(std::vector<ColumnSpec> columns)
    : columns_(std::move(columns))
{
    std::set<std::string> seen;
    std::optional<std::size_t> target;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        const auto& c = columns_[i];
        if (c.name.empty())
            throw Error(ErrorCode::Config, "schema: column " + std::to_string(i) + " has an empty name");
        if (c.name.find_first_of(",=\r\n") != std::string::npos)
            throw Error(ErrorCode::Config, "schema: column name '" + c.name + "' contains a reserved character");
        if (!seen.insert(c.name).second)
            throw Error(ErrorCode::Config, "schema: duplicate column name '" + c.name + "'");
        if (c.kind == ColumnKind::Target) {
            if (target)
                throw Error(ErrorCode::Config, "schema: more than one target column ('"
                        + columns_[*target].name + "', '" + c.name + "')");
            target = i;
        }
    }
    if (!target)
        throw Error(ErrorCode::Config, "schema: no target column");
    target_ = *target;
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const noexcept
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name)
            return i;
    return std::nullopt;
}

std::vector<std::size_t> Schema::feature_indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].is_feature())
            out.push_back(i);
    return out;
}

std::optional<std::size_t> Schema::identifier_index() const noexcept
{
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].kind == ColumnKind::Identifier)
            return i;
    return std::nullopt;
}

Schema Schema::from_document(const kv::Document& doc)
{
    const auto names = kv::split_list(doc.get("columns"));
    if (names.empty())
        throw Error(ErrorCode::Config, "schema: 'columns' lists no columns");
    std::vector<ColumnSpec> cols;
    for (const auto& name : names) {
        ColumnSpec spec;
        spec.name = name;
        const auto kind_text = doc.get(name + ".kind");
        auto kind = parse_column_kind(kind_text);
        if (!kind)
            throw Error(ErrorCode::Config, "schema: column '" + name + "' has unknown kind '" + kind_text + "'");
        spec.kind = *kind;
        spec.missing_marker = doc.get_or(name + ".missing", "");
        spec.feature = doc.get_bool_or(name + ".feature", true);
        if (auto t = doc.find(name + ".true"))
            spec.true_tokens = kv::split_list(*t);
        if (auto f = doc.find(name + ".false"))
            spec.false_tokens = kv::split_list(*f);
        cols.push_back(std::move(spec));
    }
    return Schema(std::move(cols));
}

Schema Schema::load(const std::string& path) { return from_document(kv::Document::load(path)); }

kv::Document Schema::to_document() const
{
    kv::Document doc;
    std::vector<std::string> names;
    for (const auto& c : columns_)
        names.push_back(c.name);
    doc.set("columns", kv::join_list(names));
    const ColumnSpec defaults;
    for (const auto& c : columns_) {
        doc.set(c.name + ".kind", std::string(to_string(c.kind)));
        if (!c.missing_marker.empty())
            doc.set(c.name + ".missing", c.missing_marker);
        if (!c.feature)
            doc.set(c.name + ".feature", false);
        if (c.true_tokens != defaults.true_tokens)
            doc.set(c.name + ".true", kv::join_list(c.true_tokens));
        if (c.false_tokens != defaults.false_tokens)
            doc.set(c.name + ".false", kv::join_list(c.false_tokens));
    }
    return doc;
}

} // namespace enroll::tabular
