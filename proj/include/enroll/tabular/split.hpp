#pragma once

#include "enroll/tabular/dataset.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace enroll::tabular {

struct TrainTestSplit {
    Dataset train;
    Dataset test;
    // row indices into the source dataset, in output order
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

// Seeded Fisher-Yates permutation of the rows; the first
// round(n * test_fraction) permuted rows form the test set.
TrainTestSplit split(const Dataset& ds, double test_fraction, std::uint64_t seed);

} // namespace enroll::tabular
