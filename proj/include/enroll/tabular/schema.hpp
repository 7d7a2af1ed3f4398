#pragma once

#include "enroll/kv.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enroll::tabular {

enum class ColumnKind { Binary, Count, Categorical, Identifier, Target };

std::string_view to_string(ColumnKind kind) noexcept;
std::optional<ColumnKind> parse_column_kind(std::string_view text) noexcept;

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    // Cells equal to this marker, or empty, are Missing.
    std::string missing_marker;
    // Binary/count/categorical columns can be carried without being encoded
    // (e.g. an admission-status column kept only for profiling).
    bool feature = true;
    // Accepted spellings for binary and target cells, matched case-insensitively.
    std::vector<std::string> true_tokens { "1", "yes", "y", "true" };
    std::vector<std::string> false_tokens { "0", "no", "n", "false" };

    bool is_feature() const noexcept
    {
        return feature
            && (kind == ColumnKind::Binary || kind == ColumnKind::Count || kind == ColumnKind::Categorical);
    }

    bool operator==(const ColumnSpec&) const = default;
};

// Ordered column catalog. Invariants: exactly one target column, names unique,
// non-empty and free of the characters the text formats reserve (`,` `=` and
// line breaks).
class Schema {
public:
    explicit Schema(std::vector<ColumnSpec> columns);

    const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
    const ColumnSpec& column(std::size_t i) const { return columns_.at(i); }
    std::size_t size() const noexcept { return columns_.size(); }

    std::optional<std::size_t> index_of(std::string_view name) const noexcept;
    std::size_t target_index() const noexcept { return target_; }
    const ColumnSpec& target() const { return columns_[target_]; }

    std::vector<std::size_t> feature_indices() const;
    // first identifier column, if any
    std::optional<std::size_t> identifier_index() const noexcept;

    // Schema documents:
    //   columns = id, gender, enrolled
    //   id.kind = identifier
    //   gender.kind = categorical
    //   gender.missing = NA
    //   enrolled.kind = target
    // Optional per column: <name>.feature = false, <name>.true = yes,1 and
    // <name>.false = no,0 (binary/target spellings).
    static Schema from_document(const kv::Document& doc);
    static Schema load(const std::string& path);
    kv::Document to_document() const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<ColumnSpec> columns_;
    std::size_t target_ = 0;
};

} // namespace enroll::tabular
