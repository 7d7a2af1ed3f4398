#pragma once

#include "enroll/glm/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace enroll::select {

using tabular::DesignMatrix;

struct Correlation {
    double value = 0.0; // Pearson r in [-1, 1]
    bool constant = false; // a zero-variance input; value is then 0
};

Correlation correlation(std::span<const double> attr, std::span<const double> cls);

struct RankedAttribute {
    std::size_t feature = 0; // 0-based, intercept excluded
    double score = 0.0;      // signed correlation with the class
    bool constant = false;
};

// All features, by |r| descending, ties by ascending index.
std::vector<RankedAttribute> rank_attributes(const DesignMatrix& dm);

enum class Direction { Forward, Backward, Bidirectional };
enum class MeritMode { CrossValidated, Training };

std::string_view to_string(Direction d) noexcept;
std::optional<Direction> parse_direction(std::string_view text) noexcept;

struct SearchConfig {
    Direction direction = Direction::Bidirectional;
    int stale_limit = 5;
    int merit_cv_folds = 5;
    std::uint64_t seed = 1;
    MeritMode merit_mode = MeritMode::CrossValidated;
    // workers for evaluating the successors of one expansion
    unsigned threads = 1;

    void validate() const;
};

struct SubsetCandidate {
    std::vector<std::size_t> features; // sorted ascending
    double merit = 0.0;

    bool operator==(const SubsetCandidate&) const = default;
};

// Strict "a ranks ahead of b": higher merit, then fewer features, then
// lexicographically smaller index list.
bool ranks_ahead(const SubsetCandidate& a, const SubsetCandidate& b) noexcept;

// Accuracy of a logistic model on intercept + `features`, from seeded
// stratified cross-validation (or training accuracy in Training mode).
double subset_merit(std::span<const std::size_t> features, const DesignMatrix& dm, const SearchConfig& cfg,
    const glm::FitConfig& fit_cfg);

struct SearchResult {
    SubsetCandidate best;
    SubsetCandidate start;
    std::size_t evaluations = 0; // distinct subsets scored
    std::size_t expansions = 0;
};

using MeritFunction = std::function<double(const std::vector<std::size_t>&)>;

// Best-first search over subsets of {0..d-1} with a memoized merit. Stops
// after stale_limit consecutive expansions without a strictly higher merit.
// `merit` may be called from several threads when cfg.threads > 1.
SearchResult best_first_search(std::size_t d, const SearchConfig& cfg, const MeritFunction& merit);

SearchResult best_first_search(const DesignMatrix& dm, const SearchConfig& cfg, const glm::FitConfig& fit_cfg);

} // namespace enroll::select
