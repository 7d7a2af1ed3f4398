#include "enroll/glm/logistic.hpp"

#include "enroll/error.hpp"
#include "enroll/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace enroll::glm {
namespace {

void check_dims(std::span<const double> weights, const DesignMatrix& dm, bool need_labels)
{
    if (weights.size() != dm.cols())
        throw Error(ErrorCode::DimensionMismatch, "weight vector has " + std::to_string(weights.size())
                + " entries, design matrix has " + std::to_string(dm.cols()) + " columns");
    if (need_labels && !dm.labeled())
        throw Error(ErrorCode::DimensionMismatch, "design matrix has no labels");
}

double penalty(std::span<const double> weights, double ridge)
{
    if (ridge == 0.0 || weights.size() < 2)
        return 0.0;
    return 0.5 * ridge * kernels::dot(weights.subspan(1), weights.subspan(1));
}

} // namespace

double sigmoid(double z) noexcept
{
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::vector<double> linear_predictor(std::span<const double> weights, const DesignMatrix& dm)
{
    check_dims(weights, dm, false);
    std::vector<double> z(dm.rows());
    kernels::gemv(dm.values(), dm.rows(), dm.cols(), weights, z);
    return z;
}

std::vector<double> probabilities(std::span<const double> weights, const DesignMatrix& dm)
{
    auto p = linear_predictor(weights, dm);
    for (auto& v : p)
        v = sigmoid(v);
    return p;
}

double penalized_nll(std::span<const double> weights, const DesignMatrix& dm, double ridge)
{
    check_dims(weights, dm, true);
    const auto p = probabilities(weights, dm);
    const auto y = dm.labels();
    double loss = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pc = std::clamp(p[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
        loss -= y[i] != 0.0 ? std::log(pc) : std::log1p(-pc);
    }
    return loss + penalty(weights, ridge);
}

std::vector<double> gradient(std::span<const double> weights, const DesignMatrix& dm, double ridge)
{
    check_dims(weights, dm, true);
    auto r = probabilities(weights, dm);
    const auto y = dm.labels();
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] -= y[i];
    std::vector<double> g(dm.cols());
    kernels::gemv_transposed(dm.values(), dm.rows(), dm.cols(), r, g);
    for (std::size_t j = 1; j < g.size(); ++j)
        g[j] += ridge * weights[j];
    return g;
}

std::vector<double> hessian(std::span<const double> weights, const DesignMatrix& dm, double ridge)
{
    check_dims(weights, dm, false);
    auto w = probabilities(weights, dm);
    for (auto& v : w)
        v = v * (1.0 - v);
    const auto p = dm.cols();
    std::vector<double> h(p * p);
    kernels::weighted_gram(dm.values(), dm.rows(), p, w, h);
    for (std::size_t j = 1; j < p; ++j)
        h[j * p + j] += ridge;
    return h;
}

} // namespace enroll::glm
