#include "enroll/evalkit/report.hpp"

#include <cstdio>

namespace enroll::evalkit {
namespace {

std::string pad_left(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string rate_key(const Rate& r) { return r ? kv::format_double(*r) : std::string("undefined"); }

} // namespace

std::string metrics_table(const Metrics& m)
{
    const char* headers[] = { "TP Rate", "FP Rate", "Precision", "Recall", "F-Measure", "Specificity", "Accuracy" };
    const Rate values[] = { m.tp_rate(), m.fp_rate, m.precision, m.recall(), m.f_measure, m.specificity, m.accuracy };
    std::string head, row;
    for (std::size_t i = 0; i < 7; ++i) {
        head += pad_left(headers[i], 12);
        row += pad_left(format_rate(values[i]), 12);
    }
    return head + "\n" + row + "\n";
}

std::string confusion_grid(const ConfusionMatrix& cm)
{
    const std::size_t w = 14;
    std::string out;
    out += pad_right("", 22) + pad_left("Predicted", w) + "\n";
    out += pad_right("Actual", 22) + pad_left("Positive (1)", w) + pad_left("Negative (0)", w) + "\n";
    out += pad_right("  Positive (1)", 22) + pad_left(std::to_string(cm.tp), w) + pad_left(std::to_string(cm.fn), w)
        + "\n";
    out += pad_right("  Negative (0)", 22) + pad_left(std::to_string(cm.fp), w) + pad_left(std::to_string(cm.tn), w)
        + "\n";
    return out;
}

void append_metrics(kv::Document& doc, const std::string& prefix, const ConfusionMatrix& cm, const Metrics& m)
{
    doc.set(prefix + ".tp", static_cast<std::int64_t>(cm.tp));
    doc.set(prefix + ".fn", static_cast<std::int64_t>(cm.fn));
    doc.set(prefix + ".fp", static_cast<std::int64_t>(cm.fp));
    doc.set(prefix + ".tn", static_cast<std::int64_t>(cm.tn));
    doc.set(prefix + ".total", static_cast<std::int64_t>(cm.total()));
    doc.set(prefix + ".accuracy", rate_key(m.accuracy));
    doc.set(prefix + ".sensitivity", rate_key(m.sensitivity));
    doc.set(prefix + ".specificity", rate_key(m.specificity));
    doc.set(prefix + ".precision", rate_key(m.precision));
    doc.set(prefix + ".f_measure", rate_key(m.f_measure));
    doc.set(prefix + ".fp_rate", rate_key(m.fp_rate));
}

kv::Document cv_document(const CvResult& cv)
{
    kv::Document doc;
    doc.set("cv.folds", static_cast<std::int64_t>(cv.k));
    doc.set("cv.seed", std::to_string(cv.seed));
    append_metrics(doc, "pooled", cv.pooled, cv.pooled_metrics);
    for (std::size_t f = 0; f < cv.folds.size(); ++f)
        append_metrics(doc, "fold." + std::to_string(f + 1), cv.folds[f].confusion, cv.folds[f].metrics);
    return doc;
}

std::string cv_report(const CvResult& cv)
{
    std::string out;
    out += "Stratified " + std::to_string(cv.k) + "-fold cross-validation (seed " + std::to_string(cv.seed) + ")\n\n";
    out += "Pooled detailed accuracy (positive class)\n";
    out += metrics_table(cv.pooled_metrics);
    out += "\nPooled confusion matrix\n";
    out += confusion_grid(cv.pooled);
    out += "\nPer-fold results\n";
    out += pad_left("fold", 6) + pad_left("tp", 8) + pad_left("fn", 8) + pad_left("fp", 8) + pad_left("tn", 8)
        + pad_left("accuracy", 12) + pad_left("precision", 12) + pad_left("recall", 12) + pad_left("converged", 11)
        + "\n";
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
        const auto& fr = cv.folds[f];
        out += pad_left(std::to_string(f + 1), 6) + pad_left(std::to_string(fr.confusion.tp), 8)
            + pad_left(std::to_string(fr.confusion.fn), 8) + pad_left(std::to_string(fr.confusion.fp), 8)
            + pad_left(std::to_string(fr.confusion.tn), 8) + pad_left(format_rate(fr.metrics.accuracy), 12)
            + pad_left(format_rate(fr.metrics.precision), 12) + pad_left(format_rate(fr.metrics.recall()), 12)
            + pad_left(fr.converged ? "yes" : "no", 11) + "\n";
    }
    return out;
}

} // namespace enroll::evalkit
