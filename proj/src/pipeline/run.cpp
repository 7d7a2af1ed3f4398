#include "enroll/pipeline/run.hpp"

#include "enroll/error.hpp"
#include "enroll/evalkit/report.hpp"
#include "enroll/tabular/csv.hpp"
#include "enroll/tabular/design_matrix.hpp"
#include "enroll/tabular/split.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

namespace enroll::pipeline {
namespace {

using tabular::Dataset;
using tabular::Schema;

[[noreturn]] void bad_config(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

// Runs one stage, tagging any library error with the stage name.
template <class F>
auto stage(const char* name, F&& body)
{
    try {
        return body();
    } catch (const Error& e) {
        rethrow_with_context(e, std::string("stage ") + name);
    }
}

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string subset_text(const std::vector<std::size_t>& subset, const std::vector<std::string>& names)
{
    std::vector<std::string> items;
    for (auto f : subset)
        items.push_back(names[f]);
    return "{" + kv::join_list(items) + "}";
}

bool has_missing(const Dataset& ds)
{
    auto cols = ds.schema().feature_indices();
    cols.push_back(ds.schema().target_index());
    for (const auto& row : ds.rows())
        for (auto c : cols)
            if (!row[c])
                return true;
    return false;
}

Dataset load_and_clean(const RunConfig& cfg, RunLog& log)
{
    std::vector<Dataset> sources;
    stage("load", [&] {
        for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
            const auto& schema_path = cfg.schemas.size() == 1 ? cfg.schemas[0] : cfg.schemas[i];
            const auto schema = Schema::load(schema_path);
            sources.push_back(tabular::read_csv_file(cfg.inputs[i], schema));
            log.add("load", cfg.inputs[i] + ": " + std::to_string(sources.back().row_count()) + " row(s), "
                    + std::to_string(schema.size()) + " column(s), schema " + schema_path);
        }
        return 0;
    });

    return stage("clean", [&] {
        auto key_of = [&](const Dataset& ds) -> std::optional<std::string> {
            if (!cfg.key.empty())
                return cfg.key;
            if (const auto id = ds.schema().identifier_index())
                return ds.schema().column(*id).name;
            return std::nullopt;
        };
        if (cfg.dedup) {
            for (auto& ds : sources) {
                if (const auto key = key_of(ds))
                    ds = tabular::deduplicate(ds, *key, &log).data;
                else
                    log.add("clean", "no identifier column; de-duplication skipped");
            }
        }
        Dataset merged = sources.front();
        for (std::size_t i = 1; i < sources.size(); ++i) {
            const auto key = key_of(merged);
            if (!key)
                throw Error(ErrorCode::KeyColumn, "merging sources needs a key column");
            merged = tabular::merge_sources(merged, sources[i], *key, cfg.merge, &log);
        }
        for (const auto& strategy : cfg.impute)
            merged = tabular::impute(merged, strategy, &log);
        if (has_missing(merged)) {
            log.add("clean", "missing cells remain after imputation; dropping the affected rows");
            merged = tabular::impute(merged, tabular::ImputeStrategy::drop_rows(), &log);
        }
        if (merged.row_count() == 0)
            throw Error(ErrorCode::EmptyDataset, "no rows left after cleaning");
        log.add("clean", std::to_string(merged.row_count()) + " row(s) ready");
        return merged;
    });
}

std::string selection_report(const RunConfig& cfg, const RunResult& r, const std::string& target)
{
    const auto& names = r.feature_names;
    std::string out = "Attribute ranking (Pearson correlation with " + target + ")\n";
    out += pad_left("rank", 6) + pad_left("|r|", 10) + pad_left("r", 10) + "  feature\n";
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
        const auto& a = r.ranking[i];
        out += pad_left(std::to_string(i + 1), 6) + pad_left(fixed(std::abs(a.score), 4), 10)
            + pad_left(fixed(a.score, 4), 10) + "  " + names[a.feature] + (a.constant ? " (constant)" : "") + "\n";
    }
    out += "\nSelection method: " + std::string(to_string(cfg.selection));
    switch (cfg.selection) {
    case SelectionMethod::Wrapper:
        out += " (best-first " + std::string(to_string(cfg.direction)) + ", stale limit "
            + std::to_string(cfg.stale_limit) + ", merit = "
            + (cfg.merit == select::MeritMode::Training ? std::string("training accuracy")
                                                       : std::to_string(cfg.merit_folds) + "-fold CV accuracy")
            + ", seed " + std::to_string(cfg.seed) + ")\n";
        out += "Start subset: " + subset_text(r.search->start.features, names) + " merit "
            + fixed(r.search->start.merit, 4) + "\n";
        out += "Subsets evaluated: " + std::to_string(r.search->evaluations) + ", expansions: "
            + std::to_string(r.search->expansions) + "\n";
        out += "Best merit: " + fixed(r.search->best.merit, 4) + "\n";
        break;
    case SelectionMethod::Rank:
        out += " (|r| > " + kv::format_double(cfg.rank_threshold)
            + (cfg.rank_top ? ", top " + std::to_string(cfg.rank_top) : std::string()) + ")\n";
        break;
    case SelectionMethod::None:
        out += " (all encoded features)\n";
        break;
    }
    out += "Selected (" + std::to_string(r.selected.size()) + "): " + subset_text(r.selected, names) + "\n";
    return out;
}

std::string selection_csv(const RunResult& r)
{
    using tabular::csv::format_record;
    std::string out = format_record({ "rank", "feature", "correlation", "constant", "selected" }) + "\r\n";
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
        const auto& a = r.ranking[i];
        const bool chosen = std::binary_search(r.selected.begin(), r.selected.end(), a.feature);
        out += format_record({ std::to_string(i + 1), r.feature_names[a.feature], kv::format_double(a.score),
                   a.constant ? "1" : "0", chosen ? "1" : "0" })
            + "\r\n";
    }
    return out;
}

std::string model_summary(const glm::Model& m)
{
    std::string out = pad_left("coefficient", 14) + "  feature\n";
    out += pad_left(fixed(m.weights()[0], 6), 14) + "  (intercept)\n";
    for (std::size_t j = 0; j < m.feature_count(); ++j)
        out += pad_left(fixed(m.weights()[j + 1], 6), 14) + "  " + m.feature_names()[j] + "\n";
    return out;
}

} // namespace

std::string_view to_string(SelectionMethod m) noexcept
{
    switch (m) {
    case SelectionMethod::Rank: return "rank";
    case SelectionMethod::Wrapper: return "wrapper";
    case SelectionMethod::None: return "none";
    }
    return "?";
}

std::optional<SelectionMethod> parse_selection(std::string_view text) noexcept
{
    if (text == "rank")
        return SelectionMethod::Rank;
    if (text == "wrapper")
        return SelectionMethod::Wrapper;
    if (text == "none")
        return SelectionMethod::None;
    return std::nullopt;
}

tabular::ImputeStrategy parse_impute(std::string_view text)
{
    text = kv::trim(text);
    if (text == "mode")
        return tabular::ImputeStrategy::mode_fill();
    if (text == "drop-rows")
        return tabular::ImputeStrategy::drop_rows();
    if (text == "drop-columns")
        return tabular::ImputeStrategy::drop_columns(0.5);
    if (text.starts_with("drop-columns:")) {
        const auto t = kv::parse_double(text.substr(13));
        if (!t || !(*t >= 0.0 && *t <= 1.0))
            bad_config("drop-columns threshold must be a number in [0, 1]");
        return tabular::ImputeStrategy::drop_columns(*t);
    }
    bad_config("unknown imputation strategy '" + std::string(text) + "' (mode, drop-rows, drop-columns[:t])");
}

void RunConfig::validate() const
{
    if (inputs.empty())
        bad_config("no input file given");
    if (schemas.size() != 1 && schemas.size() != inputs.size())
        bad_config("give one schema for all inputs or one per input");
    if (folds < 2)
        bad_config("folds must be at least 2 (got " + std::to_string(folds) + ")");
    if (!(ridge >= 0.0) || !std::isfinite(ridge))
        bad_config("ridge must be finite and >= 0");
    if (max_iterations < 1)
        bad_config("max_iterations must be >= 1");
    if (!(tolerance > 0.0))
        bad_config("tolerance must be > 0");
    if (!(threshold >= 0.0 && threshold <= 1.0))
        bad_config("threshold must lie in [0, 1]");
    if (!(holdout >= 0.0 && holdout < 1.0))
        bad_config("holdout must lie in [0, 1)");
    if (stale_limit < 1)
        bad_config("stale_limit must be >= 1");
    if (merit_folds < 2)
        bad_config("merit_folds must be >= 2");
    if (!(rank_threshold >= 0.0 && rank_threshold <= 1.0))
        bad_config("rank_threshold must lie in [0, 1]");
    if (threads < 1)
        bad_config("threads must be >= 1");
    if (impute.empty())
        bad_config("at least one imputation strategy is required");
    for (const auto& s : impute)
        if (s.kind == tabular::ImputeStrategy::Kind::DropColumns && !(s.threshold >= 0.0 && s.threshold <= 1.0))
            bad_config("drop-columns threshold must lie in [0, 1]");
    if (output_dir.empty())
        bad_config("output directory must not be empty");
}

kv::Document RunConfig::to_document() const
{
    kv::Document doc;
    doc.set("inputs", kv::join_list(inputs));
    doc.set("schemas", kv::join_list(schemas));
    doc.set("key", key);
    doc.set("merge", std::string(merge == tabular::MergeMode::Left ? "left" : "inner"));
    doc.set("dedup", dedup);
    doc.set("seed", std::to_string(seed));
    std::vector<std::string> strategies;
    for (const auto& s : impute)
        strategies.push_back(tabular::describe(s));
    doc.set("impute", kv::join_list(strategies));
    doc.set("standardize_counts", standardize_counts);
    doc.set("selection", std::string(to_string(selection)));
    doc.set("direction", std::string(select::to_string(direction)));
    doc.set("stale_limit", static_cast<std::int64_t>(stale_limit));
    doc.set("merit_folds", static_cast<std::int64_t>(merit_folds));
    doc.set("merit", std::string(merit == select::MeritMode::Training ? "training" : "cv"));
    doc.set("rank_threshold", rank_threshold);
    doc.set("rank_top", static_cast<std::int64_t>(rank_top));
    doc.set("folds", static_cast<std::int64_t>(folds));
    doc.set("ridge", ridge);
    doc.set("max_iterations", static_cast<std::int64_t>(max_iterations));
    doc.set("tolerance", tolerance);
    doc.set("threshold", threshold);
    doc.set("holdout", holdout);
    doc.set("threads", static_cast<std::int64_t>(threads));
    doc.set("output", output_dir);
    return doc;
}

RunConfig RunConfig::from_document(const kv::Document& doc)
{
    static const std::set<std::string> known { "inputs", "schemas", "key", "merge", "dedup", "seed", "impute",
        "standardize_counts", "selection", "direction", "stale_limit", "merit_folds", "merit", "rank_threshold",
        "rank_top", "folds", "ridge", "max_iterations", "tolerance", "threshold", "holdout", "threads", "output" };
    for (const auto& [key, value] : doc.entries())
        if (!known.contains(key))
            bad_config("unknown configuration key '" + key + "'");

    auto non_negative = [&](const char* key, std::int64_t fallback) {
        const auto v = doc.get_int_or(key, fallback);
        if (v < 0)
            bad_config(std::string(key) + " must be >= 0");
        return v;
    };

    RunConfig cfg;
    if (const auto v = doc.find("inputs"))
        cfg.inputs = kv::split_list(*v);
    if (const auto v = doc.find("schemas"))
        cfg.schemas = kv::split_list(*v);
    cfg.key = doc.get_or("key", "");
    const auto merge = doc.get_or("merge", "left");
    if (merge != "left" && merge != "inner")
        bad_config("merge must be 'left' or 'inner'");
    cfg.merge = merge == "left" ? tabular::MergeMode::Left : tabular::MergeMode::Inner;
    cfg.dedup = doc.get_bool_or("dedup", cfg.dedup);
    const auto seed = doc.get_or("seed", "1");
    if (std::from_chars(seed.data(), seed.data() + seed.size(), cfg.seed).ptr != seed.data() + seed.size())
        bad_config("seed must be a non-negative integer");
    if (const auto v = doc.find("impute")) {
        cfg.impute.clear();
        for (const auto& item : kv::split_list(*v))
            cfg.impute.push_back(parse_impute(item));
    }
    cfg.standardize_counts = doc.get_bool_or("standardize_counts", cfg.standardize_counts);
    if (const auto v = doc.find("selection")) {
        const auto m = parse_selection(*v);
        if (!m)
            bad_config("selection must be rank, wrapper or none");
        cfg.selection = *m;
    }
    if (const auto v = doc.find("direction")) {
        const auto d = select::parse_direction(*v);
        if (!d)
            bad_config("direction must be forward, backward or bidirectional");
        cfg.direction = *d;
    }
    cfg.stale_limit = static_cast<int>(doc.get_int_or("stale_limit", cfg.stale_limit));
    cfg.merit_folds = static_cast<int>(doc.get_int_or("merit_folds", cfg.merit_folds));
    const auto merit = doc.get_or("merit", "cv");
    if (merit != "cv" && merit != "training")
        bad_config("merit must be 'cv' or 'training'");
    cfg.merit = merit == "cv" ? select::MeritMode::CrossValidated : select::MeritMode::Training;
    cfg.rank_threshold = doc.get_double_or("rank_threshold", cfg.rank_threshold);
    cfg.rank_top = static_cast<std::size_t>(non_negative("rank_top", 0));
    cfg.folds = static_cast<std::size_t>(non_negative("folds", static_cast<std::int64_t>(cfg.folds)));
    cfg.ridge = doc.get_double_or("ridge", cfg.ridge);
    cfg.max_iterations = static_cast<int>(doc.get_int_or("max_iterations", cfg.max_iterations));
    cfg.tolerance = doc.get_double_or("tolerance", cfg.tolerance);
    cfg.threshold = doc.get_double_or("threshold", cfg.threshold);
    cfg.holdout = doc.get_double_or("holdout", cfg.holdout);
    cfg.threads = static_cast<unsigned>(non_negative("threads", cfg.threads));
    cfg.output_dir = doc.get_or("output", cfg.output_dir);
    return cfg;
}

glm::FitConfig RunConfig::fit_config() const
{
    glm::FitConfig f;
    f.ridge = ridge;
    f.max_iterations = max_iterations;
    f.tolerance = tolerance;
    return f;
}

select::SearchConfig RunConfig::search_config() const
{
    select::SearchConfig s;
    s.direction = direction;
    s.stale_limit = stale_limit;
    s.merit_cv_folds = merit_folds;
    s.seed = seed;
    s.merit_mode = merit;
    s.threads = threads;
    return s;
}

RunResult run(const RunConfig& cfg)
{
    cfg.validate();
    RunResult r;
    auto& log = r.log;
    log.add("config", "seed " + std::to_string(cfg.seed) + ", " + std::to_string(cfg.folds) + " folds, selection "
            + std::string(to_string(cfg.selection)));

    Dataset data = load_and_clean(cfg, log);
    const auto& schema = data.schema();
    const std::string target = schema.target().name;

    std::optional<Dataset> held_out;
    if (cfg.holdout > 0.0) {
        auto parts = stage("split", [&] { return tabular::split(data, cfg.holdout, cfg.seed); });
        log.add("split", std::to_string(parts.test.row_count()) + " row(s) held out, "
                + std::to_string(parts.train.row_count()) + " kept for training");
        held_out = std::move(parts.test);
        data = std::move(parts.train);
    }

    tabular::EncodingPlan plan;
    const auto dm = stage("encode", [&] {
        plan = tabular::EncodingPlan::derive(data, { cfg.standardize_counts });
        auto m = tabular::encode(data, plan);
        log.add("encode", std::to_string(m.rows()) + " row(s), " + std::to_string(m.feature_count())
                + " candidate feature(s): " + kv::join_list(plan.feature_names()));
        return m;
    });
    r.feature_names = plan.feature_names();
    r.training_rows = dm.rows();

    const auto fit_cfg = cfg.fit_config();
    stage("select", [&] {
        if (dm.feature_count() == 0) {
            log.add("select", "no candidate features; intercept-only model");
            return 0;
        }
        r.ranking = select::rank_attributes(dm);
        switch (cfg.selection) {
        case SelectionMethod::None:
            for (std::size_t f = 0; f < dm.feature_count(); ++f)
                r.selected.push_back(f);
            break;
        case SelectionMethod::Rank:
            for (const auto& a : r.ranking) {
                if (cfg.rank_top && r.selected.size() >= cfg.rank_top)
                    break;
                if (!a.constant && std::abs(a.score) > cfg.rank_threshold)
                    r.selected.push_back(a.feature);
            }
            break;
        case SelectionMethod::Wrapper:
            r.search = select::best_first_search(dm, cfg.search_config(), fit_cfg);
            r.selected = r.search->best.features;
            log.add("select", "best-first search: " + std::to_string(r.search->evaluations) + " subset(s), "
                    + std::to_string(r.search->expansions) + " expansion(s), merit "
                    + kv::format_double(r.search->best.merit));
            break;
        }
        std::sort(r.selected.begin(), r.selected.end());
        log.add("select", "selected " + std::to_string(r.selected.size()) + " of "
                + std::to_string(dm.feature_count()) + ": " + subset_text(r.selected, r.feature_names));
        return 0;
    });

    const auto dm_sel = dm.select_features(r.selected);
    const auto plan_sel = plan.select(r.selected);

    r.cv = stage("cross-validate", [&] {
        auto cv = evalkit::cross_validate(dm_sel, cfg.folds, cfg.seed, fit_cfg, { cfg.threads }, cfg.threshold);
        std::size_t unconverged = 0;
        for (const auto& f : cv.folds)
            unconverged += f.converged ? 0 : 1;
        log.add("cross-validate", std::to_string(cfg.folds) + " folds, pooled accuracy "
                + evalkit::format_rate(cv.pooled_metrics.accuracy) + ", unconverged folds "
                + std::to_string(unconverged));
        return cv;
    });

    std::size_t positives = 0;
    for (const double y : dm_sel.labels())
        positives += y == 1.0;
    r.majority_baseline = static_cast<double>(std::max(positives, dm_sel.rows() - positives))
        / static_cast<double>(dm_sel.rows());

    stage("fit", [&] {
        std::vector<double> centers, scales;
        for (const auto& f : plan_sel.features()) {
            centers.push_back(f.center);
            scales.push_back(f.scale);
        }
        r.model = glm::fit(dm_sel, fit_cfg).with_threshold(cfg.threshold).with_scaling(centers, scales);
        r.fitted_probabilities = glm::predict_proba(*r.model, dm_sel);
        log.add("fit", std::string(r.model->converged() ? "converged" : "did not converge") + " after "
                + std::to_string(r.model->iterations_used()) + " iteration(s), final loss "
                + kv::format_double(r.model->final_loss()));
        return 0;
    });

    if (held_out) {
        r.holdout = stage("holdout", [&] {
            const auto hdm = tabular::encode(*held_out, plan_sel);
            auto res = evalkit::evaluate_on(*r.model, hdm);
            log.add("holdout", std::to_string(hdm.rows()) + " row(s), accuracy " + evalkit::format_rate(res.second.accuracy));
            return res;
        });
    }

    // reports
    const auto& model = *r.model;
    r.files["model.kv"] = model.to_document().serialize();
    r.files["selection.txt"] = selection_report(cfg, r, target);
    r.files["selection.csv"] = selection_csv(r);

    std::string report = evalkit::cv_report(r.cv);
    report += "\nMajority-class baseline: " + fixed(r.majority_baseline, 4) + "\n";
    report += "\nFinal model (all " + std::to_string(dm_sel.rows()) + " training rows)\n";
    report += model_summary(model);
    const auto [train_cm, train_m] = evalkit::evaluate_on(model, dm_sel);
    report += "\nTraining-set detailed accuracy\n" + evalkit::metrics_table(train_m);
    if (r.holdout) {
        report += "\nHold-out detailed accuracy\n" + evalkit::metrics_table(r.holdout->second);
        report += evalkit::confusion_grid(r.holdout->first);
    }
    r.files["cv_report.txt"] = report;
    r.files["confusion.txt"] = evalkit::confusion_grid(r.cv.pooled);

    auto metrics_doc = evalkit::cv_document(r.cv);
    metrics_doc.set("baseline.majority_accuracy", r.majority_baseline);
    evalkit::append_metrics(metrics_doc, "final.training", train_cm, train_m);
    if (r.holdout)
        evalkit::append_metrics(metrics_doc, "holdout", r.holdout->first, r.holdout->second);
    r.files["metrics.kv"] = metrics_doc.serialize();

    {
        using tabular::csv::format_record;
        const auto id = schema.identifier_index();
        std::string out = format_record({ id ? schema.column(*id).name : "row", target, "probability", "predicted" })
            + "\r\n";
        const auto labels = glm::labels_from_probabilities(r.fitted_probabilities, model.threshold());
        for (std::size_t i = 0; i < dm_sel.rows(); ++i) {
            const auto& cell = id ? data.cell(i, *id) : tabular::Cell {};
            out += format_record({ id ? cell.value_or(schema.column(*id).missing_marker) : std::to_string(i + 1),
                       dm_sel.labels()[i] == 1.0 ? "1" : "0", kv::format_double(r.fitted_probabilities[i]),
                       std::to_string(labels[i]) })
                + "\r\n";
        }
        r.files["predictions.csv"] = out;
    }

    r.files["run.log"] = "# configuration\n" + cfg.to_document().serialize() + "\n# stages\n" + log.text();
    return r;
}

void write_outputs(const RunResult& result, const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error(ErrorCode::Io, "cannot create output directory '" + dir + "': " + ec.message());
    for (const auto& [name, contents] : result.files)
        tabular::write_text_file((std::filesystem::path(dir) / name).string(), contents);
}

PredictResult predict(const glm::Model& model, const tabular::Schema& schema, std::string_view csv_text)
{
    using tabular::csv::format_record;
    const auto records = tabular::csv::parse(csv_text);
    if (records.empty())
        throw Error(ErrorCode::HeaderMismatch, "input has no header row");
    const auto& header = records.front().fields;
    {
        std::set<std::string> seen;
        for (const auto& h : header)
            if (!seen.insert(h).second)
                throw Error(ErrorCode::HeaderMismatch, "duplicate column '" + h + "' in input header");
    }

    // schema columns present in the input, plus the target (filled Missing
    // when the input does not carry it)
    std::vector<tabular::ColumnSpec> cols;
    std::vector<std::optional<std::size_t>> source;
    for (const auto& spec : schema.columns()) {
        const auto it = std::find(header.begin(), header.end(), spec.name);
        if (it == header.end() && spec.kind != tabular::ColumnKind::Target)
            continue;
        cols.push_back(spec);
        source.push_back(it == header.end() ? std::nullopt
                                            : std::optional<std::size_t>(static_cast<std::size_t>(it - header.begin())));
    }
    const tabular::Schema input_schema(cols);
    const auto plan = tabular::EncodingPlan::from_feature_names(input_schema, model.feature_names(), model.centers(),
        model.scales());

    std::vector<tabular::Row> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size())
            throw Error(ErrorCode::RowArityMismatch, "line " + std::to_string(rec.line) + ": expected "
                    + std::to_string(header.size()) + " fields, found " + std::to_string(rec.fields.size()));
        tabular::Row row;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            try {
                row.push_back(source[c] ? tabular::normalize_cell(cols[c], rec.fields[*source[c]]) : tabular::Cell {});
            } catch (const Error& e) {
                rethrow_with_context(e, "line " + std::to_string(rec.line));
            }
        }
        rows.push_back(std::move(row));
    }
    const tabular::Dataset ds(input_schema, std::move(rows));
    const auto dm = tabular::encode_unlabeled(ds, plan);
    const auto probs = glm::predict_proba(model, dm);
    const auto labels = glm::labels_from_probabilities(probs, model.threshold());

    PredictResult out;
    out.rows = probs.size();
    auto head = header;
    head.push_back("probability");
    head.push_back("label");
    out.csv = format_record(head) + "\r\n";
    for (std::size_t i = 0; i < probs.size(); ++i) {
        auto fields = records[i + 1].fields;
        fields.push_back(kv::format_double(probs[i]));
        fields.push_back(std::to_string(labels[i]));
        out.csv += format_record(fields) + "\r\n";
        out.expected_enrollees += probs[i];
    }
    return out;
}

} // namespace enroll::pipeline
