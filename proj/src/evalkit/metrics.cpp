#include "enroll/evalkit/metrics.hpp"

#include "enroll/error.hpp"

#include <cstdio>

namespace enroll::evalkit {
namespace {

Rate ratio(std::uint64_t num, std::uint64_t den)
{
    if (den == 0)
        return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

void tally(ConfusionMatrix& cm, int actual, int predicted)
{
    if ((actual != 0 && actual != 1) || (predicted != 0 && predicted != 1))
        throw Error(ErrorCode::InvalidArgument, "confusion: labels must be 0 or 1");
    if (actual == 1)
        (predicted == 1 ? cm.tp : cm.fn) += 1;
    else
        (predicted == 1 ? cm.fp : cm.tn) += 1;
}

} // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred)
{
    if (y_true.size() != y_pred.size())
        throw Error(ErrorCode::DimensionMismatch, "confusion: label vectors differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        tally(cm, y_true[i], y_pred[i]);
    return cm;
}

ConfusionMatrix confusion(std::span<const double> y_true, std::span<const int> y_pred)
{
    if (y_true.size() != y_pred.size())
        throw Error(ErrorCode::DimensionMismatch, "confusion: label vectors differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double y = y_true[i];
        if (y != 0.0 && y != 1.0)
            throw Error(ErrorCode::InvalidArgument, "confusion: labels must be 0 or 1");
        tally(cm, static_cast<int>(y), y_pred[i]);
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm)
{
    if (cm.total() == 0)
        throw Error(ErrorCode::InvalidArgument, "metrics: confusion matrix is empty");
    Metrics m;
    m.accuracy = ratio(cm.tp + cm.tn, cm.total());
    m.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
    m.specificity = ratio(cm.tn, cm.tn + cm.fp);
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    m.fp_rate = ratio(cm.fp, cm.fp + cm.tn);
    if (m.precision && m.sensitivity && (*m.precision + *m.sensitivity) > 0.0)
        m.f_measure = 2.0 * *m.precision * *m.sensitivity / (*m.precision + *m.sensitivity);
    return m;
}

std::string format_rate(const Rate& rate, int decimals)
{
    if (!rate)
        return "undefined";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, *rate);
    return buf;
}

} // namespace enroll::evalkit
