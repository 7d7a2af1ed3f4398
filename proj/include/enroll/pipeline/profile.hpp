#pragma once

#include "enroll/tabular/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace enroll::pipeline {

// Enrolled share to one decimal, half-up on exact integer arithmetic:
// 3199 of 6489 -> "49.3%". An empty category renders as "—".
std::string format_percent(std::size_t enrolled, std::size_t count);

struct ProfileRow {
    std::string category;
    std::size_t count = 0;
    std::size_t enrolled = 0;
};

struct ProfileTable {
    std::string column;
    std::vector<ProfileRow> rows;
    ProfileRow total;
};

struct Profile {
    std::vector<ProfileTable> tables;
    std::size_t rows = 0;
    std::size_t enrolled = 0;
    std::size_t missing_target = 0; // rows left out of every table
    // population column (e.g. an admission flag): rows with it set, and
    // how many of those enrolled
    std::optional<std::string> population;
    std::size_t population_rows = 0;
    std::size_t population_enrolled = 0;
};

// One table per binary or categorical column (features and carried
// columns alike). Categories are the observed values in encoded order, both
// binary values always listed, plus "(missing)" when cells are Missing.
Profile profile(const tabular::Dataset& ds, const std::optional<std::string>& population_column = std::nullopt);

std::string profile_text(const Profile& p);
// column,category,count,enrolled,percent
std::string profile_csv(const Profile& p);

} // namespace enroll::pipeline
