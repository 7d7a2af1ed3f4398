#pragma once

#include "enroll/tabular/dataset.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace enroll::tabular {

// Numeric trainer input: row-major n x (d+1) values whose column 0 is the
// intercept (identically 1), labels over {0,1} and one name per feature
// column. An unlabeled matrix (for scoring) has an empty label vector.
class DesignMatrix {
public:
    DesignMatrix(std::vector<double> values, std::vector<double> labels, std::vector<std::string> feature_names);

    // Builds a matrix from feature rows without the intercept column.
    static DesignMatrix from_rows(const std::vector<std::vector<double>>& features, std::vector<double> labels,
        std::vector<std::string> feature_names = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t feature_count() const noexcept { return cols_ - 1; }
    bool labeled() const noexcept { return !labels_.empty(); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> labels() const noexcept { return labels_; }
    std::span<const double> row(std::size_t i) const { return { values_.data() + i * cols_, cols_ }; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }

    // column j of the matrix (j = 0 is the intercept)
    std::vector<double> column(std::size_t j) const;

    // Intercept plus the given feature columns (feature indices are 0-based,
    // not counting the intercept), in the given order.
    DesignMatrix select_features(std::span<const std::size_t> features) const;
    DesignMatrix select_rows(std::span<const std::size_t> indices) const;

    bool operator==(const DesignMatrix&) const = default;

private:
    std::vector<double> values_;
    std::vector<double> labels_;
    std::vector<std::string> names_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 1;
};

struct EncodedFeature {
    enum class Kind { Binary, Count, Indicator };
    std::string name; // `column` or `column=level`
    std::string column;
    Kind kind = Kind::Binary;
    std::string level; // Indicator only
    double center = 0.0;
    double scale = 1.0;
};

struct EncodeOptions {
    // z-score count columns with the training mean and population sd
    bool standardize_counts = false;
};

// Column-to-feature mapping derived from a training Dataset and reusable on
// new data with the same columns. Categorical columns with c observed levels
// produce c-1 indicators; the lexicographically smallest level is the
// reference.
class EncodingPlan {
public:
    EncodingPlan() = default;
    explicit EncodingPlan(std::vector<EncodedFeature> features)
        : features_(std::move(features))
    {
    }

    static EncodingPlan derive(const Dataset& ds, EncodeOptions options = {});
    // Rebuild a plan from stored feature names against a schema; throws
    // FeatureMismatch naming every feature whose column is absent.
    static EncodingPlan from_feature_names(const Schema& schema, const std::vector<std::string>& names,
        const std::vector<double>& centers = {}, const std::vector<double>& scales = {});

    const std::vector<EncodedFeature>& features() const noexcept { return features_; }
    std::vector<std::string> feature_names() const;
    EncodingPlan select(std::span<const std::size_t> features) const;

private:
    std::vector<EncodedFeature> features_;
};

// Requires no Missing feature/target cells; throws EmptyDataset on n = 0.
DesignMatrix encode(const Dataset& ds, const EncodingPlan& plan);
DesignMatrix encode(const Dataset& ds, EncodeOptions options = {});
// Ignores the target column; rows with Missing cells in encoded columns are
// rejected with their row index.
DesignMatrix encode_unlabeled(const Dataset& ds, const EncodingPlan& plan);

} // namespace enroll::tabular
