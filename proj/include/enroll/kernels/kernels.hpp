#pragma once

// Dense double-precision kernels used by the logistic trainer and the
// attribute ranker. Every primitive has a scalar reference implementation and
// optional AVX2/NEON variants; the active variant is chosen once at startup
// from CPU capabilities (overridable through ENROLL_SIMD=scalar|avx2|neon or
// set_active_backend) and all composite operations route through it.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace enroll::kernels {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

bool available(Backend backend) noexcept;
const KernelTable& table(Backend backend);

Backend active_backend() noexcept;
void set_active_backend(Backend backend);
// Backend the process would pick without any override.
Backend detect_backend() noexcept;

std::string_view name(Backend backend) noexcept;
std::optional<Backend> parse_backend(std::string_view text) noexcept;

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Row-major matrix views: `x` holds rows*cols values.
// out[i] = x_i . w
void gemv(std::span<const double> x, std::size_t rows, std::size_t cols,
    std::span<const double> w, std::span<double> out);
// out = X^T r
void gemv_transposed(std::span<const double> x, std::size_t rows, std::size_t cols,
    std::span<const double> r, std::span<double> out);
// out = X^T diag(weights) X, full symmetric cols x cols result (row-major).
void weighted_gram(std::span<const double> x, std::size_t rows, std::size_t cols,
    std::span<const double> weights, std::span<double> out);

namespace detail {
extern const KernelTable scalar_table;
#if defined(ENROLL_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(ENROLL_HAVE_NEON)
extern const KernelTable neon_table;
#endif
} // namespace detail

} // namespace enroll::kernels
