#pragma once

#include "enroll/run_log.hpp"
#include "enroll/tabular/dataset.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace enroll::tabular {

struct DedupResult {
    Dataset data;
    std::size_t removed = 0;
    // keys whose dropped duplicates differed from the retained row
    std::vector<std::string> conflicting_keys;
};

// Keep-first by file order on an identifier column. Rows with a Missing key
// are always kept.
DedupResult deduplicate(const Dataset& ds, std::string_view key, RunLog* log = nullptr);

enum class MergeMode { Inner, Left };

// Column union keyed on `key`: left columns first, then right-only columns.
// Overlapping non-key columns must share a kind and agree wherever both
// sides are present; the merged cell takes the left value when present.
// Right rows after the first for a key are ignored; unmatched right rows are
// dropped in both modes.
Dataset merge_sources(const Dataset& left, const Dataset& right, std::string_view key, MergeMode mode,
    RunLog* log = nullptr);

struct ImputeStrategy {
    enum class Kind { ModeFill, DropRows, DropColumns };
    Kind kind = Kind::ModeFill;
    // DropColumns: remove feature columns whose missing fraction exceeds this
    double threshold = 0.5;

    static ImputeStrategy mode_fill() { return { Kind::ModeFill, 0.5 }; }
    static ImputeStrategy drop_rows() { return { Kind::DropRows, 0.5 }; }
    static ImputeStrategy drop_columns(double threshold) { return { Kind::DropColumns, threshold }; }
};

std::string describe(const ImputeStrategy& strategy);

// Rows with a Missing target are removed first under every strategy.
Dataset impute(const Dataset& ds, const ImputeStrategy& strategy, RunLog* log = nullptr);

// Orders non-missing values of one column by encoded value: numerically for
// binary/count/target, lexicographically otherwise.
bool encoded_less(const ColumnSpec& column, const std::string& a, const std::string& b);

} // namespace enroll::tabular
