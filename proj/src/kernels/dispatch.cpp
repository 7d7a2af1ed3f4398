#include "enroll/error.hpp"
#include "enroll/kernels/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

namespace enroll::kernels {
namespace {

Backend initial_backend() noexcept
{
    if (const char* env = std::getenv("ENROLL_SIMD")) {
        if (auto b = parse_backend(env); b && available(*b))
            return *b;
    }
    return detect_backend();
}

std::atomic<Backend>& active_slot() noexcept
{
    static std::atomic<Backend> slot { initial_backend() };
    return slot;
}

const KernelTable& active_table() { return table(active_backend()); }

void require(bool ok, const char* what)
{
    if (!ok)
        throw Error(ErrorCode::DimensionMismatch, what);
}

} // namespace

bool available(Backend backend) noexcept
{
    switch (backend) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(ENROLL_HAVE_AVX2)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::Neon:
#if defined(ENROLL_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& table(Backend backend)
{
    if (!available(backend))
        throw Error(ErrorCode::InvalidArgument, "SIMD backend '" + std::string(name(backend)) + "' is not available");
    switch (backend) {
#if defined(ENROLL_HAVE_AVX2)
    case Backend::Avx2:
        return detail::avx2_table;
#endif
#if defined(ENROLL_HAVE_NEON)
    case Backend::Neon:
        return detail::neon_table;
#endif
    default:
        return detail::scalar_table;
    }
}

Backend detect_backend() noexcept
{
    if (available(Backend::Avx2))
        return Backend::Avx2;
    if (available(Backend::Neon))
        return Backend::Neon;
    return Backend::Scalar;
}

Backend active_backend() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active_backend(Backend backend)
{
    if (!available(backend))
        throw Error(ErrorCode::InvalidArgument, "SIMD backend '" + std::string(name(backend)) + "' is not available");
    active_slot().store(backend, std::memory_order_relaxed);
}

std::string_view name(Backend backend) noexcept
{
    switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    }
    return "unknown";
}

std::optional<Backend> parse_backend(std::string_view text) noexcept
{
    if (text == "scalar")
        return Backend::Scalar;
    if (text == "avx2")
        return Backend::Avx2;
    if (text == "neon")
        return Backend::Neon;
    return std::nullopt;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "dot: length mismatch");
    return active_table().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    require(x.size() == y.size(), "axpy: length mismatch");
    active_table().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> x, std::size_t rows, std::size_t cols,
    std::span<const double> w, std::span<double> out)
{
    require(x.size() == rows * cols && w.size() == cols && out.size() == rows, "gemv: shape mismatch");
    const auto& k = active_table();
    for (std::size_t i = 0; i < rows; ++i)
        out[i] = k.dot(x.data() + i * cols, w.data(), cols);
}

void gemv_transposed(std::span<const double> x, std::size_t rows, std::size_t cols,
    std::span<const double> r, std::span<double> out)
{
    require(x.size() == rows * cols && r.size() == rows && out.size() == cols,
        "gemv_transposed: shape mismatch");
    const auto& k = active_table();
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        k.axpy(r[i], x.data() + i * cols, out.data(), cols);
}

void weighted_gram(std::span<const double> x, std::size_t rows, std::size_t cols,
    std::span<const double> weights, std::span<double> out)
{
    require(x.size() == rows * cols && weights.size() == rows && out.size() == cols * cols,
        "weighted_gram: shape mismatch");
    const auto& k = active_table();
    std::fill(out.begin(), out.end(), 0.0);
    // accumulate the upper triangle row by row, then mirror
    for (std::size_t i = 0; i < rows; ++i) {
        const double* xi = x.data() + i * cols;
        for (std::size_t j = 0; j < cols; ++j) {
            const double a = weights[i] * xi[j];
            if (a != 0.0)
                k.axpy(a, xi + j, out.data() + j * cols + j, cols - j);
        }
    }
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t l = j + 1; l < cols; ++l)
            out[l * cols + j] = out[j * cols + l];
}

} // namespace enroll::kernels
