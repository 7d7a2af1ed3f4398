#pragma once

#include "enroll/evalkit/cross_validation.hpp"
#include "enroll/kv.hpp"

#include <string>

namespace enroll::evalkit {

// TP Rate | FP Rate | Precision | Recall | F-Measure | Specificity | Accuracy
std::string metrics_table(const Metrics& m);

// 2x2 grid, rows = actual, columns = predicted, positive class first.
std::string confusion_grid(const ConfusionMatrix& cm);

// Flat key-value machine output: <prefix>.tp ... <prefix>.accuracy; Undefined
// rates are written as "undefined".
void append_metrics(kv::Document& doc, const std::string& prefix, const ConfusionMatrix& cm, const Metrics& m);
kv::Document cv_document(const CvResult& cv);

// Human-readable cross-validation report: pooled table, grid and per-fold rows.
std::string cv_report(const CvResult& cv);

} // namespace enroll::evalkit
