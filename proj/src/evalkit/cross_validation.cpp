#include "enroll/evalkit/cross_validation.hpp"

#include "enroll/error.hpp"
#include "enroll/parallel.hpp"
#include "enroll/rng.hpp"

namespace enroll::evalkit {

bool CvResult::operator==(const CvResult& o) const
{
    if (k != o.k || seed != o.seed || fold_of != o.fold_of || pooled != o.pooled
        || pooled_metrics != o.pooled_metrics || folds.size() != o.folds.size())
        return false;
    for (std::size_t i = 0; i < folds.size(); ++i) {
        const auto& a = folds[i];
        const auto& b = o.folds[i];
        if (a.confusion != b.confusion || a.metrics != b.metrics || a.train_rows != b.train_rows
            || a.converged != b.converged || a.iterations != b.iterations)
            return false;
    }
    return true;
}

std::vector<std::size_t> stratified_folds(std::span<const double> y, std::size_t k, std::uint64_t seed)
{
    const auto n = y.size();
    if (k < 2)
        throw Error(ErrorCode::InvalidArgument, "number of folds must be at least 2 (got " + std::to_string(k) + ")");
    if (k > n)
        throw Error(ErrorCode::InvalidArgument,
            "number of folds " + std::to_string(k) + " exceeds the " + std::to_string(n) + " available rows");

    std::vector<std::size_t> positives, negatives;
    for (std::size_t i = 0; i < n; ++i) {
        if (y[i] == 1.0)
            positives.push_back(i);
        else if (y[i] == 0.0)
            negatives.push_back(i);
        else
            throw Error(ErrorCode::InvalidArgument, "stratified_folds: labels must be 0 or 1");
    }
    Rng rng(seed);
    std::vector<std::size_t> fold_of(n);
    std::size_t position = 0;
    for (auto* group : { &positives, &negatives }) {
        rng.shuffle(std::span<std::size_t>(*group));
        for (auto idx : *group)
            fold_of[idx] = position++ % k;
    }
    return fold_of;
}

CvResult cross_validate(const DesignMatrix& dm, std::size_t k, std::uint64_t seed, const glm::FitConfig& fit_cfg,
    CvOptions options, double threshold)
{
    fit_cfg.validate();
    if (!dm.labeled())
        throw Error(ErrorCode::InvalidArgument, "cross_validate: design matrix has no labels");

    CvResult result;
    result.k = k;
    result.seed = seed;
    result.fold_of = stratified_folds(dm.labels(), k, seed);

    result.folds = parallel_map<FoldResult>(k, options.threads, [&](std::size_t f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < dm.rows(); ++i)
            (result.fold_of[i] == f ? test : train).push_back(i);
        try {
            const auto train_dm = dm.select_rows(train);
            const auto test_dm = dm.select_rows(test);
            const auto model = glm::fit(train_dm, fit_cfg).with_threshold(threshold);
            FoldResult fr;
            fr.confusion = confusion(test_dm.labels(), glm::predict_label(model, test_dm));
            fr.metrics = metrics(fr.confusion);
            fr.train_rows = train.size();
            fr.converged = model.converged();
            fr.iterations = model.iterations_used();
            return fr;
        } catch (const Error& e) {
            rethrow_with_context(e, "fold " + std::to_string(f));
        }
    });

    for (const auto& f : result.folds)
        result.pooled += f.confusion;
    result.pooled_metrics = metrics(result.pooled);
    return result;
}

std::pair<ConfusionMatrix, Metrics> evaluate_on(const glm::Model& model, const DesignMatrix& dm)
{
    if (!dm.labeled())
        throw Error(ErrorCode::InvalidArgument, "evaluate_on: design matrix has no labels");
    const auto cm = confusion(dm.labels(), glm::predict_label(model, dm));
    return { cm, metrics(cm) };
}

} // namespace enroll::evalkit
