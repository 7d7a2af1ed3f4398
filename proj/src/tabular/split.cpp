#include "enroll/tabular/split.hpp"

#include "enroll/error.hpp"
#include "enroll/rng.hpp"

#include <cmath>
#include <numeric>

namespace enroll::tabular {

TrainTestSplit split(const Dataset& ds, double test_fraction, std::uint64_t seed)
{
    if (!(test_fraction >= 0.0 && test_fraction <= 1.0))
        throw Error(ErrorCode::InvalidArgument, "test fraction must be in [0, 1]");
    const auto n = ds.row_count();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t { 0 });
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(perm));

    const auto test_n = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
    std::vector<std::size_t> test(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(test_n));
    std::vector<std::size_t> train(perm.begin() + static_cast<std::ptrdiff_t>(test_n), perm.end());
    return { ds.select_rows(train), ds.select_rows(test), std::move(train), std::move(test) };
}

} // namespace enroll::tabular
