#include "enroll/select/selection.hpp"

#include "enroll/error.hpp"
#include "enroll/evalkit/cross_validation.hpp"
#include "enroll/kernels/kernels.hpp"
#include "enroll/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace enroll::select {

Correlation correlation(std::span<const double> attr, std::span<const double> cls)
{
    if (attr.size() != cls.size())
        throw Error(ErrorCode::DimensionMismatch, "correlation: vectors differ in length");
    const auto n = attr.size();
    if (n < 2)
        throw Error(ErrorCode::InvalidArgument, "correlation: need at least 2 observations");

    const double inv_n = 1.0 / static_cast<double>(n);
    const double mx = std::accumulate(attr.begin(), attr.end(), 0.0) * inv_n;
    const double my = std::accumulate(cls.begin(), cls.end(), 0.0) * inv_n;
    std::vector<double> dx(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = attr[i] - mx;
        dy[i] = cls[i] - my;
    }
    const double sxx = kernels::dot(dx, dx);
    const double syy = kernels::dot(dy, dy);
    if (sxx == 0.0 || syy == 0.0)
        return { 0.0, true };
    const double sxy = kernels::dot(dx, dy);
    return { std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false };
}

std::vector<RankedAttribute> rank_attributes(const DesignMatrix& dm)
{
    if (dm.feature_count() == 0)
        throw Error(ErrorCode::InvalidArgument, "rank_attributes: no features to rank");
    if (!dm.labeled())
        throw Error(ErrorCode::InvalidArgument, "rank_attributes: design matrix has no labels");
    std::vector<RankedAttribute> out;
    for (std::size_t f = 0; f < dm.feature_count(); ++f) {
        const auto col = dm.column(f + 1);
        const auto c = correlation(col, dm.labels());
        out.push_back({ f, c.value, c.constant });
    }
    std::stable_sort(out.begin(), out.end(), [](const RankedAttribute& a, const RankedAttribute& b) {
        return std::abs(a.score) > std::abs(b.score);
    });
    return out;
}

std::string_view to_string(Direction d) noexcept
{
    switch (d) {
    case Direction::Forward: return "forward";
    case Direction::Backward: return "backward";
    case Direction::Bidirectional: return "bidirectional";
    }
    return "?";
}

std::optional<Direction> parse_direction(std::string_view text) noexcept
{
    if (text == "forward")
        return Direction::Forward;
    if (text == "backward")
        return Direction::Backward;
    if (text == "bidirectional")
        return Direction::Bidirectional;
    return std::nullopt;
}

void SearchConfig::validate() const
{
    if (stale_limit < 1)
        throw Error(ErrorCode::InvalidArgument, "stale_limit must be >= 1");
    if (merit_cv_folds < 2)
        throw Error(ErrorCode::InvalidArgument, "merit_cv_folds must be >= 2");
}

bool ranks_ahead(const SubsetCandidate& a, const SubsetCandidate& b) noexcept
{
    if (a.merit != b.merit)
        return a.merit > b.merit;
    if (a.features.size() != b.features.size())
        return a.features.size() < b.features.size();
    return a.features < b.features;
}

double subset_merit(std::span<const std::size_t> features, const DesignMatrix& dm, const SearchConfig& cfg,
    const glm::FitConfig& fit_cfg)
{
    cfg.validate();
    std::vector<std::size_t> sorted(features.begin(), features.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (auto f : sorted)
        if (f >= dm.feature_count())
            throw Error(ErrorCode::InvalidIndex, "subset_merit: feature index " + std::to_string(f)
                    + " out of range (d = " + std::to_string(dm.feature_count()) + ")");

    const auto sub = dm.select_features(sorted);
    if (cfg.merit_mode == MeritMode::Training) {
        const auto model = glm::fit(sub, fit_cfg);
        return *evalkit::evaluate_on(model, sub).second.accuracy;
    }
    const auto cv = evalkit::cross_validate(sub, static_cast<std::size_t>(cfg.merit_cv_folds), cfg.seed, fit_cfg);
    return *cv.pooled_metrics.accuracy;
}

SearchResult best_first_search(std::size_t d, const SearchConfig& cfg, const MeritFunction& merit)
{
    cfg.validate();
    if (d == 0)
        throw Error(ErrorCode::InvalidArgument, "best_first_search: no candidate features");

    struct Ahead {
        bool operator()(const SubsetCandidate& a, const SubsetCandidate& b) const noexcept { return ranks_ahead(a, b); }
    };
    std::map<std::vector<std::size_t>, double> memo;
    std::set<SubsetCandidate, Ahead> open;

    SubsetCandidate start;
    if (cfg.direction == Direction::Backward) {
        start.features.resize(d);
        std::iota(start.features.begin(), start.features.end(), std::size_t { 0 });
    }
    start.merit = merit(start.features);
    memo.emplace(start.features, start.merit);
    open.insert(start);

    SearchResult result;
    result.start = start;
    result.best = start;
    int stale = 0;

    while (!open.empty()) {
        const SubsetCandidate node = *open.begin();
        open.erase(open.begin());
        ++result.expansions;

        std::vector<std::vector<std::size_t>> fresh;
        auto consider = [&](std::vector<std::size_t> s) {
            if (!memo.contains(s))
                fresh.push_back(std::move(s));
        };
        if (cfg.direction != Direction::Backward) {
            for (std::size_t j = 0; j < d; ++j) {
                if (std::binary_search(node.features.begin(), node.features.end(), j))
                    continue;
                auto s = node.features;
                s.insert(std::upper_bound(s.begin(), s.end(), j), j);
                consider(std::move(s));
            }
        }
        if (cfg.direction != Direction::Forward) {
            for (std::size_t k = 0; k < node.features.size(); ++k) {
                auto s = node.features;
                s.erase(s.begin() + static_cast<std::ptrdiff_t>(k));
                consider(std::move(s));
            }
        }

        const auto merits = parallel_map<double>(fresh.size(), cfg.threads, [&](std::size_t i) { return merit(fresh[i]); });

        bool improved = false;
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            SubsetCandidate c { std::move(fresh[i]), merits[i] };
            memo.emplace(c.features, c.merit);
            if (c.merit > result.best.merit)
                improved = true;
            if (ranks_ahead(c, result.best))
                result.best = c;
            open.insert(std::move(c));
        }
        stale = improved ? 0 : stale + 1;
        if (stale >= cfg.stale_limit)
            break;
    }
    result.evaluations = memo.size();
    return result;
}

SearchResult best_first_search(const DesignMatrix& dm, const SearchConfig& cfg, const glm::FitConfig& fit_cfg)
{
    return best_first_search(dm.feature_count(), cfg,
        [&](const std::vector<std::size_t>& features) { return subset_merit(features, dm, cfg, fit_cfg); });
}

} // namespace enroll::select
