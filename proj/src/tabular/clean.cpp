#include "enroll/tabular/clean.hpp"

#include "enroll/error.hpp"
#include "enroll/kv.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace enroll::tabular {
namespace {

std::size_t require_column(const Schema& schema, std::string_view key, const char* op)
{
    auto idx = schema.index_of(key);
    if (!idx)
        throw Error(ErrorCode::KeyColumn, std::string(op) + ": key column '" + std::string(key) + "' not found");
    return *idx;
}

bool numeric_kind(ColumnKind k)
{
    return k == ColumnKind::Binary || k == ColumnKind::Count || k == ColumnKind::Target;
}

std::vector<Row> rows_with_target(const Dataset& ds, RunLog* log)
{
    const auto t = ds.schema().target_index();
    std::vector<Row> kept;
    kept.reserve(ds.row_count());
    for (const auto& row : ds.rows())
        if (row[t])
            kept.push_back(row);
    const auto dropped = ds.row_count() - kept.size();
    if (log && dropped > 0)
        log->add("impute", "dropped " + std::to_string(dropped) + " row(s) with missing target '"
                + ds.schema().target().name + "'");
    return kept;
}

} // namespace

bool encoded_less(const ColumnSpec& column, const std::string& a, const std::string& b)
{
    // canonical non-negative integers order by (length, text)
    if (numeric_kind(column.kind) && a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

DedupResult deduplicate(const Dataset& ds, std::string_view key, RunLog* log)
{
    const auto k = require_column(ds.schema(), key, "deduplicate");
    if (ds.schema().column(k).kind != ColumnKind::Identifier)
        throw Error(ErrorCode::KeyColumn, "deduplicate: column '" + std::string(key) + "' is not an identifier");

    std::unordered_map<std::string, std::size_t> first_seen;
    std::vector<Row> kept;
    DedupResult result { ds, 0, {} };
    std::set<std::string> conflicts;
    for (const auto& row : ds.rows()) {
        if (!row[k]) {
            kept.push_back(row);
            continue;
        }
        auto [it, inserted] = first_seen.emplace(*row[k], kept.size());
        if (inserted) {
            kept.push_back(row);
            continue;
        }
        ++result.removed;
        if (kept[it->second] != row && conflicts.insert(*row[k]).second)
            result.conflicting_keys.push_back(*row[k]);
    }
    if (log) {
        log->add("dedup", "key '" + std::string(key) + "': removed " + std::to_string(result.removed)
                + " duplicate row(s), kept first occurrence");
        for (const auto& c : result.conflicting_keys)
            log->add("dedup", "conflict: key '" + c + "' had differing duplicates; kept first");
    }
    result.data = ds.with_rows(std::move(kept));
    return result;
}

Dataset merge_sources(const Dataset& left, const Dataset& right, std::string_view key, MergeMode mode, RunLog* log)
{
    const auto lk = require_column(left.schema(), key, "merge");
    const auto rk = require_column(right.schema(), key, "merge");

    // column union
    std::vector<ColumnSpec> columns = left.schema().columns();
    std::vector<std::size_t> right_to_union(right.column_count());
    std::vector<std::pair<std::size_t, std::size_t>> overlap; // (left col, right col)
    for (std::size_t c = 0; c < right.column_count(); ++c) {
        if (c == rk) {
            right_to_union[c] = lk;
            continue;
        }
        const auto& spec = right.schema().column(c);
        if (auto li = left.schema().index_of(spec.name)) {
            if (left.schema().column(*li).kind != spec.kind)
                throw Error(ErrorCode::MergeConflict, "column '" + spec.name + "' has kind "
                        + std::string(to_string(left.schema().column(*li).kind)) + " on the left and "
                        + std::string(to_string(spec.kind)) + " on the right");
            right_to_union[c] = *li;
            overlap.emplace_back(*li, c);
        } else {
            right_to_union[c] = columns.size();
            columns.push_back(spec);
        }
    }
    Schema schema(std::move(columns)); // rejects a second, differently named target

    std::unordered_map<std::string, std::size_t> right_index;
    std::size_t right_dupes = 0;
    for (std::size_t r = 0; r < right.row_count(); ++r) {
        const auto& kc = right.cell(r, rk);
        if (!kc)
            continue;
        if (!right_index.emplace(*kc, r).second)
            ++right_dupes;
    }

    std::vector<Row> rows;
    std::vector<std::string> conflict_keys;
    std::set<std::string> conflict_seen;
    std::size_t matched = 0, unmatched = 0;
    std::unordered_set<std::string> used_right;
    for (const auto& lrow : left.rows()) {
        const Row* rrow = nullptr;
        if (lrow[lk]) {
            if (auto it = right_index.find(*lrow[lk]); it != right_index.end())
                rrow = &right.rows()[it->second];
        }
        if (!rrow) {
            ++unmatched;
            if (mode == MergeMode::Inner)
                continue;
        } else {
            ++matched;
            used_right.insert(*lrow[lk]);
        }
        Row row(schema.size());
        std::copy(lrow.begin(), lrow.end(), row.begin());
        if (rrow) {
            for (auto [lc, rc] : overlap) {
                const auto& a = lrow[lc];
                const auto& b = (*rrow)[rc];
                if (a && b && *a != *b) {
                    if (conflict_seen.insert(*lrow[lk]).second)
                        conflict_keys.push_back(*lrow[lk]);
                }
            }
            for (std::size_t c = 0; c < rrow->size(); ++c) {
                const auto u = right_to_union[c];
                if (!row[u])
                    row[u] = (*rrow)[c];
            }
        }
        rows.push_back(std::move(row));
    }
    if (!conflict_keys.empty())
        throw Error(ErrorCode::MergeConflict, "conflicting values for key(s): " + kv::join_list(conflict_keys));

    if (log) {
        log->add("merge", std::string(mode == MergeMode::Inner ? "inner" : "left") + " join on '"
                + std::string(key) + "': " + std::to_string(matched) + " matched, " + std::to_string(unmatched)
                + " left row(s) without a match" + (mode == MergeMode::Inner ? " dropped" : " kept")
                + ", " + std::to_string(right.row_count() - used_right.size() - right_dupes)
                + " right row(s) unused");
        if (right_dupes > 0)
            log->add("merge", "ignored " + std::to_string(right_dupes) + " repeated key(s) in the right source");
    }
    return Dataset(std::move(schema), std::move(rows));
}

std::string describe(const ImputeStrategy& strategy)
{
    switch (strategy.kind) {
    case ImputeStrategy::Kind::ModeFill: return "mode";
    case ImputeStrategy::Kind::DropRows: return "drop-rows";
    case ImputeStrategy::Kind::DropColumns: return "drop-columns:" + kv::format_double(strategy.threshold);
    }
    return "?";
}

Dataset impute(const Dataset& ds, const ImputeStrategy& strategy, RunLog* log)
{
    auto rows = rows_with_target(ds, log);
    const auto& schema = ds.schema();
    const auto features = schema.feature_indices();

    switch (strategy.kind) {
    case ImputeStrategy::Kind::ModeFill: {
        for (auto c : features) {
            const auto& spec = schema.column(c);
            std::map<std::string, std::size_t> counts;
            std::size_t missing = 0;
            for (const auto& row : rows) {
                if (row[c])
                    ++counts[*row[c]];
                else
                    ++missing;
            }
            if (missing == 0)
                continue;
            if (counts.empty())
                throw Error(ErrorCode::AllMissingColumn, "column '" + spec.name + "' has no observed values");
            const std::string* best = nullptr;
            std::size_t best_count = 0;
            for (const auto& [value, count] : counts) {
                if (!best || count > best_count || (count == best_count && encoded_less(spec, value, *best))) {
                    best = &value;
                    best_count = count;
                }
            }
            for (auto& row : rows)
                if (!row[c])
                    row[c] = *best;
            if (log)
                log->add("impute", "mode-filled " + std::to_string(missing) + " cell(s) in '" + spec.name
                        + "' with '" + *best + "'");
        }
        return Dataset(schema, std::move(rows));
    }
    case ImputeStrategy::Kind::DropRows: {
        const auto before = rows.size();
        const auto t = schema.target_index();
        std::erase_if(rows, [&](const Row& row) {
            if (!row[t])
                return true;
            return std::any_of(features.begin(), features.end(), [&](std::size_t c) { return !row[c]; });
        });
        if (log)
            log->add("impute", "dropped " + std::to_string(before - rows.size())
                    + " row(s) with missing feature cells");
        return Dataset(schema, std::move(rows));
    }
    case ImputeStrategy::Kind::DropColumns: {
        if (!(strategy.threshold >= 0.0 && strategy.threshold <= 1.0))
            throw Error(ErrorCode::InvalidArgument, "drop-columns threshold must be in [0, 1]");
        std::vector<bool> drop(schema.size(), false);
        for (auto c : features) {
            if (rows.empty())
                break;
            std::size_t missing = 0;
            for (const auto& row : rows)
                missing += row[c] ? 0 : 1;
            const double fraction = static_cast<double>(missing) / static_cast<double>(rows.size());
            if (fraction > strategy.threshold) {
                drop[c] = true;
                if (log)
                    log->add("impute", "dropped column '" + schema.column(c).name + "' (missing fraction "
                            + kv::format_double(fraction) + " > " + kv::format_double(strategy.threshold) + ")");
            }
        }
        std::vector<ColumnSpec> cols;
        for (std::size_t c = 0; c < schema.size(); ++c)
            if (!drop[c])
                cols.push_back(schema.column(c));
        for (auto& row : rows) {
            Row kept;
            kept.reserve(cols.size());
            for (std::size_t c = 0; c < row.size(); ++c)
                if (!drop[c])
                    kept.push_back(std::move(row[c]));
            row = std::move(kept);
        }
        return Dataset(Schema(std::move(cols)), std::move(rows));
    }
    }
    return Dataset(schema, std::move(rows));
}

} // namespace enroll::tabular
