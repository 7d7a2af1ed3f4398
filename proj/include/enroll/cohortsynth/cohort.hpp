#pragma once

#include "enroll/kv.hpp"
#include "enroll/tabular/dataset.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace enroll::cohortsynth {

struct Bernoulli {
    double q = 0.5;
};

// Poisson(lambda) conditioned on a value <= max.
struct TruncatedPoisson {
    double lambda = 1.0;
    std::uint64_t max = 10;
};

struct Categorical {
    std::vector<std::string> levels;
    std::vector<double> probs;
};

using Law = std::variant<Bernoulli, TruncatedPoisson, Categorical>;

// Text form: bernoulli(0.3), poisson(2.1, 8), categorical(Female:0.54, Male:0.46)
Law parse_law(std::string_view text);
std::string format_law(const Law& law);

struct FeatureSpec {
    std::string name;
    Law law;

    tabular::ColumnKind kind() const noexcept;
};

// Generation recipe. true_weights = intercept followed by one weight per
// encoded feature, in the order encoded_names() lists them: features in
// declaration order, a categorical feature contributing one indicator per
// level except its lexicographically smallest.
struct CohortSpec {
    std::size_t n = 1000;
    std::uint64_t seed = 1;
    std::string id_column = "ID"; // empty: no identifier column
    std::string target_name = "Enrolled";
    std::string missing_marker = "?";
    std::vector<FeatureSpec> features;
    std::vector<double> true_weights;

    std::vector<std::string> encoded_names() const;
    void validate() const;
    tabular::Schema schema() const;

    //   n = 1000
    //   seed = 7
    //   features = honors, siblings, gender
    //   honors.law = bernoulli(0.3)
    //   siblings.law = poisson(2.1, 8)
    //   gender.law = categorical(Female:0.54, Male:0.46)
    //   intercept = -0.4
    //   honors.weight = 0.8
    //   gender.weight.Male = 0.3
    // Optional: id_column, target, missing. Absent weights are 0.
    static CohortSpec from_document(const kv::Document& doc);
    static CohortSpec load(const std::string& path);
    kv::Document to_document() const;
};

tabular::Dataset generate(const CohortSpec& spec);

// Stand-in for the 7,879-applicant admissions cohort. Independent features;
// weights of Within_Province, Gender, Online_Application and the intercept are
// calibrated so the conditional enrollment rates match the published
// breakdowns in expectation. Carries an Admitted column (not a feature).
CohortSpec paper_cohort_spec(std::uint64_t seed);
tabular::Dataset paper_cohort(std::uint64_t seed);

// Population rate of the target given one binary feature value (or one
// categorical level), computed exactly over the independent feature laws.
double expected_rate(const CohortSpec& spec, const std::string& feature, const std::string& value);
double expected_rate(const CohortSpec& spec);

// Each feature cell independently set Missing with probability `rate`;
// identifier, target and non-feature columns are untouched.
tabular::Dataset inject_missing(const tabular::Dataset& ds, double rate, std::uint64_t seed);

} // namespace enroll::cohortsynth
