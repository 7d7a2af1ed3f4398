#include "enroll/error.hpp"
#include "enroll/kernels/kernels.hpp"
#include "enroll/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace enroll;
using kernels::Backend;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n)
{
    std::vector<double> v(n);
    for (auto& x : v)
        x = rng.uniform() * 4.0 - 2.0;
    return v;
}

// naive long-double references
long double ref_dot(const std::vector<double>& a, const std::vector<double>& b)
{
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += static_cast<long double>(a[i]) * b[i];
    return s;
}

std::vector<Backend> vector_backends()
{
    std::vector<Backend> out;
    for (auto b : { Backend::Avx2, Backend::Neon })
        if (kernels::available(b))
            out.push_back(b);
    return out;
}

class BackendGuard {
public:
    BackendGuard()
        : saved_(kernels::active_backend())
    {
    }
    ~BackendGuard() { kernels::set_active_backend(saved_); }

private:
    Backend saved_;
};

} // namespace

TEST(Kernels, ScalarMatchesReference)
{
    Rng rng(10);
    const auto& t = kernels::table(Backend::Scalar);
    for (std::size_t n = 0; n < 70; ++n) {
        const auto a = random_vector(rng, n), b = random_vector(rng, n);
        EXPECT_NEAR(t.dot(a.data(), b.data(), n), static_cast<double>(ref_dot(a, b)), 1e-12);
        auto y = b;
        t.axpy(0.75, a.data(), y.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_DOUBLE_EQ(y[i], b[i] + 0.75 * a[i]);
    }
}

TEST(Kernels, VectorBackendsMatchScalar)
{
    const auto backends = vector_backends();
    if (backends.empty())
        GTEST_SKIP() << "no SIMD backend on this machine";
    Rng rng(11);
    const auto& s = kernels::table(Backend::Scalar);
    for (auto b : backends) {
        const auto& v = kernels::table(b);
        for (std::size_t n = 0; n < 131; ++n) {
            const auto a = random_vector(rng, n), c = random_vector(rng, n);
            // reassociated sums: relative agreement on the magnitude sum
            double mag = 0;
            for (std::size_t i = 0; i < n; ++i)
                mag += std::abs(a[i] * c[i]);
            EXPECT_NEAR(v.dot(a.data(), c.data(), n), s.dot(a.data(), c.data(), n), 1e-14 * (mag + 1.0))
                << kernels::name(b) << " n=" << n;
            auto y1 = c, y2 = c;
            s.axpy(-1.25, a.data(), y1.data(), n);
            v.axpy(-1.25, a.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i)
                EXPECT_NEAR(y1[i], y2[i], 1e-15 * (std::abs(y1[i]) + 1.0));
        }
    }
}

TEST(Kernels, CompositeOpsAgreeAcrossBackends)
{
    BackendGuard guard;
    Rng rng(12);
    const std::size_t rows = 37, cols = 9;
    const auto m = random_vector(rng, rows * cols);
    const auto x = random_vector(rng, cols);
    const auto y = random_vector(rng, rows);
    auto w = random_vector(rng, rows);
    for (auto& v : w)
        v = std::abs(v);
    w[4] = 0.0;

    kernels::set_active_backend(Backend::Scalar);
    std::vector<double> gv(rows), gt(cols), gram(cols * cols);
    kernels::gemv(m, rows, cols, x, gv);
    kernels::gemv_transposed(m, rows, cols, y, gt);
    kernels::weighted_gram(m, rows, cols, w, gram);

    // reference by definition
    for (std::size_t i = 0; i < rows; ++i) {
        long double s = 0;
        for (std::size_t j = 0; j < cols; ++j)
            s += static_cast<long double>(m[i * cols + j]) * x[j];
        EXPECT_NEAR(gv[i], static_cast<double>(s), 1e-12);
    }
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t k = 0; k < cols; ++k) {
            long double s = 0;
            for (std::size_t i = 0; i < rows; ++i)
                s += static_cast<long double>(w[i]) * m[i * cols + j] * m[i * cols + k];
            EXPECT_NEAR(gram[j * cols + k], static_cast<double>(s), 1e-11);
            EXPECT_EQ(gram[j * cols + k], gram[k * cols + j]);
        }

    for (auto b : vector_backends()) {
        kernels::set_active_backend(b);
        std::vector<double> gv2(rows), gt2(cols), gram2(cols * cols);
        kernels::gemv(m, rows, cols, x, gv2);
        kernels::gemv_transposed(m, rows, cols, y, gt2);
        kernels::weighted_gram(m, rows, cols, w, gram2);
        for (std::size_t i = 0; i < rows; ++i)
            EXPECT_NEAR(gv[i], gv2[i], 1e-12);
        for (std::size_t j = 0; j < cols; ++j)
            EXPECT_NEAR(gt[j], gt2[j], 1e-12);
        for (std::size_t j = 0; j < cols * cols; ++j)
            EXPECT_NEAR(gram[j], gram2[j], 1e-11);
    }
}

TEST(Kernels, ShapeMismatchThrows)
{
    std::vector<double> m(6), x(2), y(3);
    EXPECT_THROW(kernels::gemv(m, 2, 3, x, y), Error);
    EXPECT_THROW(kernels::dot(x, y), Error);
}

TEST(Kernels, BackendNamesParse)
{
    EXPECT_EQ(kernels::parse_backend("scalar"), Backend::Scalar);
    EXPECT_EQ(kernels::parse_backend("avx2"), Backend::Avx2);
    EXPECT_EQ(kernels::parse_backend("neon"), Backend::Neon);
    EXPECT_FALSE(kernels::parse_backend("sse9").has_value());
    EXPECT_TRUE(kernels::available(Backend::Scalar));
    EXPECT_EQ(kernels::name(Backend::Scalar), "scalar");
}

TEST(Kernels, UnavailableBackendIsRejected)
{
    BackendGuard guard;
    for (auto b : { Backend::Avx2, Backend::Neon })
        if (!kernels::available(b))
            EXPECT_THROW(kernels::set_active_backend(b), Error);
    kernels::set_active_backend(Backend::Scalar);
    EXPECT_EQ(kernels::active_backend(), Backend::Scalar);
}
