#pragma once

#include "enroll/tabular/design_matrix.hpp"

#include <span>
#include <vector>

namespace enroll::glm {

using tabular::DesignMatrix;

// Probabilities are clamped this far from 0 and 1 inside the log-likelihood.
inline constexpr double kProbabilityClamp = 1e-12;

// Logistic function, evaluated on the branch that never exponentiates a
// positive argument.
double sigmoid(double z) noexcept;

// -sum[y ln p + (1-y) ln(1-p)] + (ridge/2) sum_{j>=1} w_j^2
double penalized_nll(std::span<const double> weights, const DesignMatrix& dm, double ridge);

// X^T (p - y) + ridge * w~, where w~ has its intercept entry zeroed
std::vector<double> gradient(std::span<const double> weights, const DesignMatrix& dm, double ridge);

// X^T W X + ridge * I~, W = diag(p_i (1 - p_i)), I~ = identity without the
// intercept diagonal. Row-major (d+1) x (d+1).
std::vector<double> hessian(std::span<const double> weights, const DesignMatrix& dm, double ridge);

// Linear predictor and probabilities for every row.
std::vector<double> linear_predictor(std::span<const double> weights, const DesignMatrix& dm);
std::vector<double> probabilities(std::span<const double> weights, const DesignMatrix& dm);

} // namespace enroll::glm
