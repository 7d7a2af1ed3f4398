#pragma once

#include "enroll/evalkit/metrics.hpp"
#include "enroll/glm/model.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace enroll::evalkit {

using tabular::DesignMatrix;

// Per class, indices are shuffled by the seeded generator and dealt
// round-robin to folds; the dealing position carries over from positives to
// negatives so fold sizes also stay within one of each other.
std::vector<std::size_t> stratified_folds(std::span<const double> y, std::size_t k, std::uint64_t seed);

struct FoldResult {
    ConfusionMatrix confusion;
    Metrics metrics;
    std::size_t train_rows = 0;
    bool converged = false;
    int iterations = 0;
};

struct CvResult {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> fold_of; // fold index per row
    std::vector<FoldResult> folds;
    ConfusionMatrix pooled;
    Metrics pooled_metrics;

    bool operator==(const CvResult&) const;
};

struct CvOptions {
    unsigned threads = 1;
};

// Fits on each fold's complement and scores the held-out fold at the default
// 0.5 threshold (or `threshold`). Pooled metrics come from the summed counts.
// Fit failures are rethrown with the fold index in the message.
CvResult cross_validate(const DesignMatrix& dm, std::size_t k, std::uint64_t seed, const glm::FitConfig& fit_cfg,
    CvOptions options = {}, double threshold = 0.5);

std::pair<ConfusionMatrix, Metrics> evaluate_on(const glm::Model& model, const DesignMatrix& dm);

} // namespace enroll::evalkit
