#pragma once

#include "enroll/evalkit/cross_validation.hpp"
#include "enroll/glm/model.hpp"
#include "enroll/kv.hpp"
#include "enroll/run_log.hpp"
#include "enroll/select/selection.hpp"
#include "enroll/tabular/clean.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enroll::pipeline {

enum class SelectionMethod { Rank, Wrapper, None };

std::string_view to_string(SelectionMethod m) noexcept;
std::optional<SelectionMethod> parse_selection(std::string_view text) noexcept;

// "mode", "drop-rows", "drop-columns" or "drop-columns:<threshold>"
tabular::ImputeStrategy parse_impute(std::string_view text);

struct RunConfig {
    std::vector<std::string> inputs;
    // one schema for every input, or one per input
    std::vector<std::string> schemas;
    std::string key;              // merge/dedup column; default: the identifier column
    tabular::MergeMode merge = tabular::MergeMode::Left;
    bool dedup = true;
    std::uint64_t seed = 1;
    std::vector<tabular::ImputeStrategy> impute { tabular::ImputeStrategy::mode_fill() };
    bool standardize_counts = false;

    SelectionMethod selection = SelectionMethod::Wrapper;
    select::Direction direction = select::Direction::Bidirectional;
    int stale_limit = 5;
    int merit_folds = 5;
    select::MeritMode merit = select::MeritMode::CrossValidated;
    double rank_threshold = 0.0; // rank: keep features with |r| above this
    std::size_t rank_top = 0;    // rank: keep at most this many (0 = no cap)

    std::size_t folds = 10;
    double ridge = 1e-8;
    int max_iterations = 100;
    double tolerance = 1e-8;
    double threshold = 0.5;
    double holdout = 0.0; // fraction held out from selection, CV and the final fit
    unsigned threads = 1;
    std::string output_dir = "enroll-out";

    // Throws Config errors; called before any file is read.
    void validate() const;

    kv::Document to_document() const;
    // Keys as written by to_document(); absent keys keep their defaults.
    static RunConfig from_document(const kv::Document& doc);

    glm::FitConfig fit_config() const;
    select::SearchConfig search_config() const;
};

struct RunResult {
    RunLog log;
    std::vector<std::string> feature_names; // every encoded candidate
    std::vector<select::RankedAttribute> ranking;
    std::optional<select::SearchResult> search;
    std::vector<std::size_t> selected; // ascending candidate indices
    evalkit::CvResult cv;
    std::optional<glm::Model> model;
    std::vector<double> fitted_probabilities; // final model on the training rows
    double majority_baseline = 0.0;
    std::size_t training_rows = 0;
    std::optional<std::pair<evalkit::ConfusionMatrix, evalkit::Metrics>> holdout;
    // file name -> contents, written by write_outputs
    std::map<std::string, std::string> files;
};

// clean -> encode -> select -> cross-validate -> final fit -> reports.
// Errors are rethrown with the stage name prefixed.
RunResult run(const RunConfig& cfg);
void write_outputs(const RunResult& result, const std::string& dir);

struct PredictResult {
    std::string csv; // input echoed with probability and label columns
    double expected_enrollees = 0.0;
    std::size_t rows = 0;
};

// Scores raw CSV text. Columns named in the schema are parsed with it; other
// columns are echoed untouched; the target column may be absent. Features the
// model needs but the input lacks are listed in a FeatureMismatch error.
PredictResult predict(const glm::Model& model, const tabular::Schema& schema, std::string_view csv_text);

} // namespace enroll::pipeline
