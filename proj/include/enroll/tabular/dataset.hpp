#pragma once

#include "enroll/tabular/schema.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enroll::tabular {

// nullopt is Missing. Non-missing cells are stored normalized: binary and
// target cells as "0"/"1", count cells as canonical decimal integers,
// categorical and identifier cells verbatim.
using Cell = std::optional<std::string>;
using Row = std::vector<Cell>;

// Normalize one raw text cell for a column; markers and empty text give
// Missing. Throws UnparseableValue for text the column kind cannot hold.
Cell normalize_cell(const ColumnSpec& column, std::string_view raw);

// Immutable table. Construction checks row arity, binary/target cells in
// {"0","1"} and count cells as non-negative canonical integers.
class Dataset {
public:
    Dataset(Schema schema, std::vector<Row> rows);

    const Schema& schema() const noexcept { return schema_; }
    const std::vector<Row>& rows() const noexcept { return rows_; }
    std::size_t row_count() const noexcept { return rows_.size(); }
    std::size_t column_count() const noexcept { return schema_.size(); }
    const Cell& cell(std::size_t row, std::size_t col) const { return rows_.at(row).at(col); }

    // Same schema, rows taken by index (in the given order).
    Dataset select_rows(const std::vector<std::size_t>& indices) const;
    Dataset with_rows(std::vector<Row> rows) const { return Dataset(schema_, std::move(rows)); }

    std::size_t missing_count() const noexcept;

    bool operator==(const Dataset&) const = default;

private:
    Schema schema_;
    std::vector<Row> rows_;
};

} // namespace enroll::tabular
