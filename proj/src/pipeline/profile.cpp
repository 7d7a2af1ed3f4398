#include "enroll/pipeline/profile.hpp"

#include "enroll/error.hpp"
#include "enroll/tabular/clean.hpp"
#include "enroll/tabular/csv.hpp"

#include <algorithm>
#include <map>

namespace enroll::pipeline {
namespace {

std::string pad(const std::string& s, std::size_t width, bool left)
{
    // the dash placeholder is one column wide but three bytes long
    const std::size_t shown = s == "—" ? 1 : s.size();
    if (shown >= width)
        return s;
    const std::string fill(width - shown, ' ');
    return left ? fill + s : s + fill;
}

} // namespace

std::string format_percent(std::size_t enrolled, std::size_t count)
{
    if (count == 0)
        return "—";
    const auto tenths = (2000 * enrolled + count) / (2 * count);
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
}

Profile profile(const tabular::Dataset& ds, const std::optional<std::string>& population_column)
{
    using tabular::ColumnKind;
    const auto& schema = ds.schema();
    const auto target = schema.target_index();

    std::optional<std::size_t> population;
    if (population_column) {
        population = schema.index_of(*population_column);
        if (!population || schema.column(*population).kind != ColumnKind::Binary)
            throw Error(ErrorCode::InvalidArgument,
                "population column '" + *population_column + "' is not a binary column of the schema");
    }

    Profile out;
    out.population = population_column;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const auto& spec = schema.column(c);
        if (spec.kind != ColumnKind::Binary && spec.kind != ColumnKind::Categorical)
            continue;
        std::map<std::string, ProfileRow> cats;
        if (spec.kind == ColumnKind::Binary) {
            cats["0"].category = "0";
            cats["1"].category = "1";
        }
        ProfileRow missing { "(missing)", 0, 0 };
        ProfileTable table { spec.name, {}, { "Total", 0, 0 } };
        for (const auto& row : ds.rows()) {
            if (!row[target])
                continue;
            const bool enrolled = *row[target] == "1";
            ProfileRow& r = row[c] ? cats[*row[c]] : missing;
            if (row[c])
                r.category = *row[c];
            ++r.count;
            r.enrolled += enrolled;
            ++table.total.count;
            table.total.enrolled += enrolled;
        }
        for (auto& [_, r] : cats)
            table.rows.push_back(r);
        std::sort(table.rows.begin(), table.rows.end(), [&](const ProfileRow& a, const ProfileRow& b) {
            return tabular::encoded_less(spec, a.category, b.category);
        });
        if (missing.count > 0)
            table.rows.push_back(missing);
        out.tables.push_back(std::move(table));
    }

    for (const auto& row : ds.rows()) {
        if (!row[target]) {
            ++out.missing_target;
            continue;
        }
        const bool enrolled = *row[target] == "1";
        ++out.rows;
        out.enrolled += enrolled;
        if (population && row[*population] && *row[*population] == "1") {
            ++out.population_rows;
            out.population_enrolled += enrolled;
        }
    }
    return out;
}

std::string profile_text(const Profile& p)
{
    std::string out;
    out += "Rows: " + std::to_string(p.rows) + "   Enrolled: " + std::to_string(p.enrolled) + " ("
        + format_percent(p.enrolled, p.rows) + ")\n";
    if (p.population)
        out += p.population.value() + " = 1: " + std::to_string(p.population_rows) + "   Enrolled: "
            + std::to_string(p.population_enrolled) + " (" + format_percent(p.population_enrolled, p.population_rows)
            + ")\n";
    if (p.missing_target > 0)
        out += "Rows without a target value (excluded): " + std::to_string(p.missing_target) + "\n";

    for (const auto& t : p.tables) {
        std::size_t width = std::max<std::size_t>(t.column.size(), 9);
        for (const auto& r : t.rows)
            width = std::max(width, r.category.size());
        width += 2;
        out += "\n" + pad(t.column, width, false) + pad("Count", 10, true) + pad("Enrolled", 10, true)
            + pad("%", 8, true) + "\n";
        auto line = [&](const ProfileRow& r) {
            out += pad(r.category, width, false) + pad(std::to_string(r.count), 10, true)
                + pad(std::to_string(r.enrolled), 10, true) + pad(format_percent(r.enrolled, r.count), 8, true) + "\n";
        };
        for (const auto& r : t.rows)
            line(r);
        line(t.total);
    }
    return out;
}

std::string profile_csv(const Profile& p)
{
    using tabular::csv::format_record;
    std::string out = format_record({ "column", "category", "count", "enrolled", "percent" }) + "\r\n";
    for (const auto& t : p.tables) {
        auto line = [&](const ProfileRow& r) {
            out += format_record({ t.column, r.category, std::to_string(r.count), std::to_string(r.enrolled),
                       format_percent(r.enrolled, r.count) })
                + "\r\n";
        };
        for (const auto& r : t.rows)
            line(r);
        line(t.total);
    }
    return out;
}

} // namespace enroll::pipeline
