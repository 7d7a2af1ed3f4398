#pragma once

#include "enroll/glm/logistic.hpp"
#include "enroll/kv.hpp"

#include <string>
#include <vector>

namespace enroll::glm {

struct FitConfig {
    double ridge = 1e-8;          // penalty on non-intercept coefficients, >= 0
    int max_iterations = 100;     // > 0
    double tolerance = 1e-8;      // convergence threshold on max |delta w|, > 0
    int fallback_step_halvings = 30; // >= 0

    void validate() const;
};

// Fitted ridge-logistic model. Index 0 of the weights is the intercept.
// Centers/scales record the affine transform applied to each feature at
// encoding time (0/1 when the feature was used raw).
class Model {
public:
    Model(std::vector<double> weights, std::vector<std::string> feature_names, double ridge, double threshold,
        bool converged, int iterations_used, double final_loss, std::vector<double> centers = {},
        std::vector<double> scales = {});

    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    std::size_t feature_count() const noexcept { return names_.size(); }
    double ridge() const noexcept { return ridge_; }
    double threshold() const noexcept { return threshold_; }
    bool converged() const noexcept { return converged_; }
    int iterations_used() const noexcept { return iterations_; }
    double final_loss() const noexcept { return final_loss_; }
    const std::vector<double>& centers() const noexcept { return centers_; }
    const std::vector<double>& scales() const noexcept { return scales_; }

    Model with_threshold(double threshold) const;
    Model with_scaling(std::vector<double> centers, std::vector<double> scales) const;

    // Key-value model document; doubles are written in shortest round-trip
    // form so a reloaded model is bit-identical.
    kv::Document to_document() const;
    static Model from_document(const kv::Document& doc);
    void save(const std::string& path) const;
    static Model load(const std::string& path);

    bool operator==(const Model&) const = default;

private:
    std::vector<double> weights_;
    std::vector<std::string> names_;
    double ridge_ = 0.0;
    double threshold_ = 0.5;
    bool converged_ = false;
    int iterations_ = 0;
    double final_loss_ = 0.0;
    std::vector<double> centers_;
    std::vector<double> scales_;
};

// Newton/IRLS from the zero vector with step halving on loss increase.
// Throws DegenerateLabels for single-class labels with ridge = 0 and
// SingularSystem when the Newton system cannot be factorized.
Model fit(const DesignMatrix& dm, const FitConfig& cfg = {});

std::vector<double> predict_proba(const Model& model, const DesignMatrix& dm);
// label = 1 iff p >= model threshold
std::vector<int> predict_label(const Model& model, const DesignMatrix& dm);
std::vector<int> labels_from_probabilities(std::span<const double> probabilities, double threshold);

} // namespace enroll::glm
