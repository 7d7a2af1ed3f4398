#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace enroll::glm {

// Lower Cholesky factor of a symmetric positive-definite row-major n x n
// matrix, or nullopt when a pivot is not safely positive (relative to the
// largest diagonal entry).
std::optional<std::vector<double>> cholesky(std::span<const double> a, std::size_t n);

// Solves A x = b given the lower factor L of A.
std::vector<double> cholesky_solve(std::span<const double> lower, std::size_t n, std::span<const double> b);

} // namespace enroll::glm
