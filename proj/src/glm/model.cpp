#include "enroll/glm/model.hpp"

#include "enroll/error.hpp"
#include "enroll/glm/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace enroll::glm {

void FitConfig::validate() const
{
    if (!(ridge >= 0.0) || !std::isfinite(ridge))
        throw Error(ErrorCode::InvalidArgument, "ridge must be a finite value >= 0");
    if (max_iterations <= 0)
        throw Error(ErrorCode::InvalidArgument, "max_iterations must be positive");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance))
        throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
    if (fallback_step_halvings < 0)
        throw Error(ErrorCode::InvalidArgument, "fallback_step_halvings must be >= 0");
}

Model::Model(std::vector<double> weights, std::vector<std::string> feature_names, double ridge, double threshold,
    bool converged, int iterations_used, double final_loss, std::vector<double> centers, std::vector<double> scales)
    : weights_(std::move(weights))
    , names_(std::move(feature_names))
    , ridge_(ridge)
    , threshold_(threshold)
    , converged_(converged)
    , iterations_(iterations_used)
    , final_loss_(final_loss)
    , centers_(std::move(centers))
    , scales_(std::move(scales))
{
    if (weights_.size() != names_.size() + 1)
        throw Error(ErrorCode::DimensionMismatch, "model: " + std::to_string(weights_.size()) + " weights for "
                + std::to_string(names_.size()) + " features");
    for (double w : weights_)
        if (!std::isfinite(w))
            throw Error(ErrorCode::InvalidArgument, "model: non-finite weight");
    if (!(threshold_ >= 0.0 && threshold_ <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "model: threshold must be in [0, 1]");
    if (centers_.empty())
        centers_.assign(names_.size(), 0.0);
    if (scales_.empty())
        scales_.assign(names_.size(), 1.0);
    if (centers_.size() != names_.size() || scales_.size() != names_.size())
        throw Error(ErrorCode::DimensionMismatch, "model: scaling vectors do not match feature count");
}

Model Model::with_threshold(double threshold) const
{
    return Model(weights_, names_, ridge_, threshold, converged_, iterations_, final_loss_, centers_, scales_);
}

Model Model::with_scaling(std::vector<double> centers, std::vector<double> scales) const
{
    return Model(weights_, names_, ridge_, threshold_, converged_, iterations_, final_loss_, std::move(centers),
        std::move(scales));
}

kv::Document Model::to_document() const
{
    kv::Document doc;
    doc.set("format", std::string("enroll-logistic-model"));
    doc.set("version", std::int64_t { 1 });
    doc.set("feature_count", static_cast<std::int64_t>(names_.size()));
    doc.set("ridge", ridge_);
    doc.set("threshold", threshold_);
    doc.set("converged", converged_);
    doc.set("iterations_used", static_cast<std::int64_t>(iterations_));
    doc.set("final_loss", final_loss_);
    doc.set("weight.intercept", weights_[0]);
    for (std::size_t j = 0; j < names_.size(); ++j) {
        const auto prefix = "feature." + std::to_string(j + 1);
        doc.set(prefix + ".name", names_[j]);
        doc.set(prefix + ".weight", weights_[j + 1]);
        doc.set(prefix + ".center", centers_[j]);
        doc.set(prefix + ".scale", scales_[j]);
    }
    return doc;
}

Model Model::from_document(const kv::Document& doc)
{
    if (doc.get_or("format", "") != "enroll-logistic-model")
        throw Error(ErrorCode::Config, "not a model document (format key missing or wrong)");
    if (doc.get_int("version") != 1)
        throw Error(ErrorCode::Config, "unsupported model version");
    const auto d = doc.get_int("feature_count");
    if (d < 0)
        throw Error(ErrorCode::Config, "model: negative feature_count");
    std::vector<double> weights { doc.get_double("weight.intercept") };
    std::vector<std::string> names;
    std::vector<double> centers, scales;
    for (std::int64_t j = 1; j <= d; ++j) {
        const auto prefix = "feature." + std::to_string(j);
        names.push_back(doc.get(prefix + ".name"));
        weights.push_back(doc.get_double(prefix + ".weight"));
        centers.push_back(doc.get_double_or(prefix + ".center", 0.0));
        scales.push_back(doc.get_double_or(prefix + ".scale", 1.0));
    }
    return Model(std::move(weights), std::move(names), doc.get_double("ridge"), doc.get_double("threshold"),
        doc.get_bool("converged"), static_cast<int>(doc.get_int("iterations_used")), doc.get_double("final_loss"),
        std::move(centers), std::move(scales));
}

void Model::save(const std::string& path) const { to_document().save(path); }

Model Model::load(const std::string& path) { return from_document(kv::Document::load(path)); }

Model fit(const DesignMatrix& dm, const FitConfig& cfg)
{
    cfg.validate();
    if (!dm.labeled())
        throw Error(ErrorCode::DimensionMismatch, "fit: design matrix has no labels");
    if (cfg.ridge == 0.0) {
        const auto y = dm.labels();
        const bool has_pos = std::find(y.begin(), y.end(), 1.0) != y.end();
        const bool has_neg = std::find(y.begin(), y.end(), 0.0) != y.end();
        if (!has_pos || !has_neg)
            throw Error(ErrorCode::DegenerateLabels, "labels contain a single class and ridge = 0");
    }

    const auto p = dm.cols();
    std::vector<double> w(p, 0.0);
    double loss = penalized_nll(w, dm, cfg.ridge);
    bool converged = false;
    int iterations = 0;

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        iterations = it;
        const auto g = gradient(w, dm, cfg.ridge);
        const auto h = hessian(w, dm, cfg.ridge);
        const auto factor = cholesky(h, p);
        if (!factor) {
            if (cfg.ridge == 0.0)
                throw Error(ErrorCode::SingularSystem,
                    "Newton system is not positive definite at iteration " + std::to_string(it) + " (ridge = 0)");
            // the unpenalized intercept can run off to infinity (single-class
            // labels); keep the last iterate, unconverged
            break;
        }
        const auto step = cholesky_solve(*factor, p, g);

        double t = 1.0;
        bool accepted = false;
        std::vector<double> candidate(p);
        double candidate_loss = loss;
        for (int h_i = 0; h_i <= cfg.fallback_step_halvings; ++h_i) {
            for (std::size_t j = 0; j < p; ++j)
                candidate[j] = w[j] - t * step[j];
            candidate_loss = penalized_nll(candidate, dm, cfg.ridge);
            if (std::isfinite(candidate_loss) && candidate_loss <= loss) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }

        double max_step = 0.0;
        for (double s : step)
            max_step = std::max(max_step, std::abs(s));
        if (!accepted) {
            // no step size lowers the loss; stationary to working precision
            converged = max_step < cfg.tolerance;
            break;
        }
        double max_delta = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            max_delta = std::max(max_delta, std::abs(candidate[j] - w[j]));
        w.swap(candidate);
        loss = candidate_loss;
        if (max_delta < cfg.tolerance) {
            converged = true;
            break;
        }
    }
    return Model(std::move(w), dm.feature_names(), cfg.ridge, 0.5, converged, iterations, loss);
}

std::vector<double> predict_proba(const Model& model, const DesignMatrix& dm)
{
    if (dm.feature_count() != model.feature_count())
        throw Error(ErrorCode::DimensionMismatch, "model has " + std::to_string(model.feature_count())
                + " features, input has " + std::to_string(dm.feature_count()));
    return probabilities(model.weights(), dm);
}

std::vector<int> labels_from_probabilities(std::span<const double> probabilities, double threshold)
{
    std::vector<int> out(probabilities.size());
    for (std::size_t i = 0; i < probabilities.size(); ++i)
        out[i] = probabilities[i] >= threshold ? 1 : 0;
    return out;
}

std::vector<int> predict_label(const Model& model, const DesignMatrix& dm)
{
    return labels_from_probabilities(predict_proba(model, dm), model.threshold());
}

} // namespace enroll::glm
