#include "enroll/tabular/design_matrix.hpp"

#include "enroll/error.hpp"
#include "enroll/kv.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace enroll::tabular {

DesignMatrix::DesignMatrix(std::vector<double> values, std::vector<double> labels, std::vector<std::string> names)
    : values_(std::move(values))
    , labels_(std::move(labels))
    , names_(std::move(names))
    , cols_(names_.size() + 1)
{
    if (values_.size() % cols_ != 0)
        throw Error(ErrorCode::DimensionMismatch, "design matrix: " + std::to_string(values_.size())
                + " values do not fill rows of width " + std::to_string(cols_));
    rows_ = values_.size() / cols_;
    if (rows_ == 0)
        throw Error(ErrorCode::EmptyDataset, "design matrix has no rows");
    if (!labels_.empty() && labels_.size() != rows_)
        throw Error(ErrorCode::DimensionMismatch, "design matrix: " + std::to_string(labels_.size())
                + " labels for " + std::to_string(rows_) + " rows");
    for (std::size_t i = 0; i < rows_; ++i)
        if (values_[i * cols_] != 1.0)
            throw Error(ErrorCode::InvalidArgument, "design matrix: intercept column is not 1 at row " + std::to_string(i));
    for (double y : labels_)
        if (y != 0.0 && y != 1.0)
            throw Error(ErrorCode::InvalidArgument, "design matrix: labels must be 0 or 1");
    for (double v : values_)
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidArgument, "design matrix: non-finite value");
}

DesignMatrix DesignMatrix::from_rows(const std::vector<std::vector<double>>& features, std::vector<double> labels,
    std::vector<std::string> feature_names)
{
    const std::size_t d = features.empty() ? feature_names.size() : features.front().size();
    if (feature_names.empty())
        for (std::size_t j = 0; j < d; ++j)
            feature_names.push_back("x" + std::to_string(j + 1));
    if (feature_names.size() != d)
        throw Error(ErrorCode::DimensionMismatch, "from_rows: name count does not match feature width");
    std::vector<double> values;
    values.reserve(features.size() * (d + 1));
    for (const auto& r : features) {
        if (r.size() != d)
            throw Error(ErrorCode::DimensionMismatch, "from_rows: ragged feature rows");
        values.push_back(1.0);
        values.insert(values.end(), r.begin(), r.end());
    }
    return DesignMatrix(std::move(values), std::move(labels), std::move(feature_names));
}

std::vector<double> DesignMatrix::column(std::size_t j) const
{
    if (j >= cols_)
        throw Error(ErrorCode::InvalidIndex, "column " + std::to_string(j) + " out of range");
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        out[i] = values_[i * cols_ + j];
    return out;
}

DesignMatrix DesignMatrix::select_features(std::span<const std::size_t> features) const
{
    std::vector<std::string> names;
    for (auto f : features) {
        if (f >= feature_count())
            throw Error(ErrorCode::InvalidIndex, "feature index " + std::to_string(f) + " out of range (d = "
                    + std::to_string(feature_count()) + ")");
        names.push_back(names_[f]);
    }
    const auto width = features.size() + 1;
    std::vector<double> values(rows_ * width);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* src = values_.data() + i * cols_;
        double* dst = values.data() + i * width;
        dst[0] = 1.0;
        for (std::size_t k = 0; k < features.size(); ++k)
            dst[k + 1] = src[features[k] + 1];
    }
    return DesignMatrix(std::move(values), labels_, std::move(names));
}

DesignMatrix DesignMatrix::select_rows(std::span<const std::size_t> indices) const
{
    std::vector<double> values;
    values.reserve(indices.size() * cols_);
    std::vector<double> labels;
    for (auto i : indices) {
        if (i >= rows_)
            throw Error(ErrorCode::InvalidIndex, "row index " + std::to_string(i) + " out of range");
        auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
        if (labeled())
            labels.push_back(labels_[i]);
    }
    return DesignMatrix(std::move(values), std::move(labels), names_);
}

EncodingPlan EncodingPlan::derive(const Dataset& ds, EncodeOptions options)
{
    const auto& schema = ds.schema();
    std::vector<EncodedFeature> out;
    for (auto c : schema.feature_indices()) {
        const auto& spec = schema.column(c);
        switch (spec.kind) {
        case ColumnKind::Binary:
            out.push_back({ spec.name, spec.name, EncodedFeature::Kind::Binary, {}, 0.0, 1.0 });
            break;
        case ColumnKind::Count: {
            EncodedFeature f { spec.name, spec.name, EncodedFeature::Kind::Count, {}, 0.0, 1.0 };
            if (options.standardize_counts) {
                double sum = 0.0, sumsq = 0.0;
                std::size_t n = 0;
                for (const auto& row : ds.rows()) {
                    if (!row[c])
                        continue;
                    const double v = static_cast<double>(*kv::parse_int(*row[c]));
                    sum += v;
                    sumsq += v * v;
                    ++n;
                }
                if (n > 0) {
                    const double mean = sum / static_cast<double>(n);
                    const double var = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
                    f.center = mean;
                    f.scale = var > 0.0 ? std::sqrt(var) : 1.0;
                }
            }
            out.push_back(std::move(f));
            break;
        }
        case ColumnKind::Categorical: {
            std::set<std::string> levels;
            for (const auto& row : ds.rows())
                if (row[c])
                    levels.insert(*row[c]);
            bool first = true;
            for (const auto& level : levels) {
                if (first) { // reference level
                    first = false;
                    continue;
                }
                out.push_back({ spec.name + "=" + level, spec.name, EncodedFeature::Kind::Indicator, level, 0.0, 1.0 });
            }
            break;
        }
        default:
            break;
        }
    }
    return EncodingPlan(std::move(out));
}

EncodingPlan EncodingPlan::from_feature_names(const Schema& schema, const std::vector<std::string>& names,
    const std::vector<double>& centers, const std::vector<double>& scales)
{
    if ((!centers.empty() && centers.size() != names.size()) || (!scales.empty() && scales.size() != names.size()))
        throw Error(ErrorCode::DimensionMismatch, "encoding plan: scaling vectors do not match feature names");
    std::vector<EncodedFeature> out;
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& name = names[i];
        const auto eq = name.find('=');
        const std::string column = name.substr(0, eq);
        auto idx = schema.index_of(column);
        if (!idx || !(schema.column(*idx).kind == ColumnKind::Binary || schema.column(*idx).kind == ColumnKind::Count
                || schema.column(*idx).kind == ColumnKind::Categorical)) {
            missing.push_back(name);
            continue;
        }
        const auto kind = schema.column(*idx).kind;
        EncodedFeature f;
        f.name = name;
        f.column = column;
        if (eq != std::string::npos) {
            if (kind != ColumnKind::Categorical) {
                missing.push_back(name);
                continue;
            }
            f.kind = EncodedFeature::Kind::Indicator;
            f.level = name.substr(eq + 1);
        } else if (kind == ColumnKind::Categorical) {
            missing.push_back(name);
            continue;
        } else {
            f.kind = kind == ColumnKind::Binary ? EncodedFeature::Kind::Binary : EncodedFeature::Kind::Count;
        }
        if (!centers.empty())
            f.center = centers[i];
        if (!scales.empty())
            f.scale = scales[i];
        out.push_back(std::move(f));
    }
    if (!missing.empty())
        throw Error(ErrorCode::FeatureMismatch, "input lacks model feature(s): " + kv::join_list(missing));
    return EncodingPlan(std::move(out));
}

std::vector<std::string> EncodingPlan::feature_names() const
{
    std::vector<std::string> names;
    for (const auto& f : features_)
        names.push_back(f.name);
    return names;
}

EncodingPlan EncodingPlan::select(std::span<const std::size_t> features) const
{
    std::vector<EncodedFeature> out;
    for (auto i : features)
        out.push_back(features_.at(i));
    return EncodingPlan(std::move(out));
}

namespace {

DesignMatrix encode_impl(const Dataset& ds, const EncodingPlan& plan, bool with_labels)
{
    const auto& schema = ds.schema();
    if (ds.row_count() == 0)
        throw Error(ErrorCode::EmptyDataset, "cannot encode an empty dataset");

    std::vector<std::size_t> source;
    for (const auto& f : plan.features()) {
        auto idx = schema.index_of(f.column);
        if (!idx)
            throw Error(ErrorCode::FeatureMismatch, "dataset has no column '" + f.column + "'");
        source.push_back(*idx);
    }
    const auto d = plan.features().size();
    const auto t = schema.target_index();
    std::vector<double> values;
    values.reserve(ds.row_count() * (d + 1));
    std::vector<double> labels;
    for (std::size_t r = 0; r < ds.row_count(); ++r) {
        const auto& row = ds.rows()[r];
        values.push_back(1.0);
        for (std::size_t k = 0; k < d; ++k) {
            const auto& f = plan.features()[k];
            const auto& cell = row[source[k]];
            if (!cell)
                throw Error(ErrorCode::InvalidArgument, "encode: row " + std::to_string(r) + " has a missing value in '"
                        + f.column + "'; impute or drop first");
            double v = 0.0;
            switch (f.kind) {
            case EncodedFeature::Kind::Binary:
                v = *cell == "1" ? 1.0 : 0.0;
                break;
            case EncodedFeature::Kind::Count:
                v = (static_cast<double>(*kv::parse_int(*cell)) - f.center) / f.scale;
                break;
            case EncodedFeature::Kind::Indicator:
                v = *cell == f.level ? 1.0 : 0.0;
                break;
            }
            values.push_back(v);
        }
        if (with_labels) {
            if (!row[t])
                throw Error(ErrorCode::InvalidArgument, "encode: row " + std::to_string(r) + " has a missing target");
            labels.push_back(*row[t] == "1" ? 1.0 : 0.0);
        }
    }
    return DesignMatrix(std::move(values), std::move(labels), plan.feature_names());
}

} // namespace

DesignMatrix encode(const Dataset& ds, const EncodingPlan& plan) { return encode_impl(ds, plan, true); }

DesignMatrix encode(const Dataset& ds, EncodeOptions options)
{
    if (ds.row_count() == 0)
        throw Error(ErrorCode::EmptyDataset, "cannot encode an empty dataset");
    return encode_impl(ds, EncodingPlan::derive(ds, options), true);
}

DesignMatrix encode_unlabeled(const Dataset& ds, const EncodingPlan& plan) { return encode_impl(ds, plan, false); }

} // namespace enroll::tabular
