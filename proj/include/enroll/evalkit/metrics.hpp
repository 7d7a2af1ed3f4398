#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace enroll::evalkit {

// Binary confusion counts; pairs are (actual, predicted) with 1 = positive.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const noexcept { return tp + fn + fp + tn; }
    std::uint64_t actual_positive() const noexcept { return tp + fn; }
    std::uint64_t actual_negative() const noexcept { return fp + tn; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept
    {
        tp += o.tp;
        fn += o.fn;
        fp += o.fp;
        tn += o.tn;
        return *this;
    }
    friend ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b) noexcept { return a += b; }
    bool operator==(const ConfusionMatrix&) const = default;
};

// nullopt marks an Undefined rate (zero denominator); never substituted.
using Rate = std::optional<double>;

struct Metrics {
    Rate accuracy;
    Rate sensitivity; // = recall = TP rate
    Rate specificity;
    Rate precision;
    Rate f_measure;
    Rate fp_rate;

    Rate recall() const noexcept { return sensitivity; }
    Rate tp_rate() const noexcept { return sensitivity; }
    bool all_defined() const noexcept
    {
        return accuracy && sensitivity && specificity && precision && f_measure && fp_rate;
    }
    bool operator==(const Metrics&) const = default;
};

// Label vectors hold 0/1; throws on length mismatch or any other value.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);
ConfusionMatrix confusion(std::span<const double> y_true, std::span<const int> y_pred);

// Throws InvalidArgument when the matrix is empty.
Metrics metrics(const ConfusionMatrix& cm);

// "0.843" style with the given decimals, or "undefined".
std::string format_rate(const Rate& rate, int decimals = 3);

} // namespace enroll::evalkit
