#include "enroll/glm/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace enroll::glm {

std::optional<std::vector<double>> cholesky(std::span<const double> a, std::size_t n)
{
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_diag = std::max(max_diag, std::abs(a[i * n + i]));
    const double floor = max_diag * 1e-14;

    std::vector<double> l(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k)
            diag -= l[j * n + k] * l[j * n + k];
        if (!(diag > floor) || !std::isfinite(diag))
            return std::nullopt;
        const double ljj = std::sqrt(diag);
        l[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / ljj;
        }
    }
    return l;
}

std::vector<double> cholesky_solve(std::span<const double> lower, std::size_t n, std::span<const double> b)
{
    std::vector<double> x(b.begin(), b.end());
    // forward: L z = b
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k)
            s -= lower[i * n + k] * x[k];
        x[i] = s / lower[i * n + i];
    }
    // backward: L^T x = z
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= lower[k * n + i] * x[k];
        x[i] = s / lower[i * n + i];
    }
    return x;
}

} // namespace enroll::glm
