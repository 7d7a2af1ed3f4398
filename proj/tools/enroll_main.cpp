#include "enroll/cohortsynth/cohort.hpp"
#include "enroll/error.hpp"
#include "enroll/kernels/kernels.hpp"
#include "enroll/pipeline/profile.hpp"
#include "enroll/pipeline/run.hpp"
#include "enroll/tabular/csv.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace enroll;

int exit_code(ErrorCategory c)
{
    switch (c) {
    case ErrorCategory::Config: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numeric: return 4;
    case ErrorCategory::Io: return 5;
    }
    return 1;
}

struct ProfileArgs {
    std::string input, schema, population, csv_out;
};

int cmd_profile(const ProfileArgs& a)
{
    const auto schema = tabular::Schema::load(a.schema);
    const auto ds = tabular::read_csv_file(a.input, schema);
    const auto p = pipeline::profile(ds, a.population.empty() ? std::nullopt : std::optional(a.population));
    std::cout << pipeline::profile_text(p);
    if (!a.csv_out.empty())
        tabular::write_text_file(a.csv_out, pipeline::profile_csv(p));
    return 0;
}

struct PredictArgs {
    std::string model, schema, input, output;
};

int cmd_predict(const PredictArgs& a)
{
    const auto model = glm::Model::load(a.model);
    const auto schema = tabular::Schema::load(a.schema);
    const auto text = tabular::read_text_file(a.input);
    const auto res = pipeline::predict(model, schema, text);
    if (a.output.empty())
        std::cout << res.csv;
    else
        tabular::write_text_file(a.output, res.csv);
    std::cerr << "rows = " << res.rows << "\n";
    std::cerr << "expected enrollees = " << kv::format_double(res.expected_enrollees) << "\n";
    return 0;
}

struct SynthArgs {
    std::string spec, out, schema_out;
    bool paper = false;
    std::uint64_t seed = 1;
    double missing_rate = 0.0;
};

int cmd_synth(const SynthArgs& a, bool seed_given)
{
    if (a.paper == !a.spec.empty())
        throw Error(ErrorCode::Config, "synth needs exactly one of --spec or --paper");
    tabular::Dataset ds = [&] {
        if (a.paper)
            return cohortsynth::paper_cohort(a.seed);
        auto spec = cohortsynth::CohortSpec::load(a.spec);
        if (seed_given)
            spec.seed = a.seed;
        return cohortsynth::generate(spec);
    }();
    if (a.missing_rate > 0.0)
        ds = cohortsynth::inject_missing(ds, a.missing_rate, a.seed + 1);
    tabular::write_csv_file(a.out, ds);
    if (!a.schema_out.empty())
        tabular::write_text_file(a.schema_out, ds.schema().to_document().serialize());
    std::cerr << "wrote " << ds.row_count() << " rows to " << a.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "Enrollment-likelihood modelling: profile, train, evaluate and score applicant data." };
    app.require_subcommand(1);
    std::string simd;
    app.add_option("--simd", simd, "Kernel backend override: scalar, avx2 or neon");

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "Enrollment breakdown per binary/categorical column");
    profile->add_option("--input", pa.input, "CSV file")->required();
    profile->add_option("--schema", pa.schema, "Schema file")->required();
    profile->add_option("--population", pa.population, "Binary column defining a sub-population (e.g. Admitted)");
    profile->add_option("--csv", pa.csv_out, "Also write the tables as CSV here");

    std::string config_path;
    pipeline::RunConfig rc;
    std::string inputs, schemas, impute, selection, direction, merge, merit;
    std::string output_dir;
    auto* run = app.add_subcommand("run", "Clean, encode, select, cross-validate and fit");
    run->add_option("--config", config_path, "Key-value run configuration; flags override it");
    run->add_option("--input", inputs, "CSV input(s), comma-separated");
    run->add_option("--schema", schemas, "Schema file(s), comma-separated");
    run->add_option("--key", rc.key, "Merge/dedup key column");
    run->add_option("--merge", merge, "Merge mode: left or inner");
    run->add_option("--seed", rc.seed, "Seed for folds, search and splits");
    run->add_option("--impute", impute, "Strategies in order: mode, drop-rows, drop-columns[:t]");
    run->add_option("--selection", selection, "rank, wrapper or none");
    run->add_option("--direction", direction, "forward, backward or bidirectional");
    run->add_option("--stale-limit", rc.stale_limit, "Non-improving expansions before stopping");
    run->add_option("--merit-folds", rc.merit_folds, "Folds used to score a subset");
    run->add_option("--merit", merit, "cv or training");
    run->add_option("--rank-threshold", rc.rank_threshold, "rank: keep |r| above this");
    run->add_option("--rank-top", rc.rank_top, "rank: keep at most this many");
    run->add_option("--folds", rc.folds, "Cross-validation folds");
    run->add_option("--ridge", rc.ridge, "L2 penalty on non-intercept weights");
    run->add_option("--max-iterations", rc.max_iterations, "Newton iteration cap");
    run->add_option("--tolerance", rc.tolerance, "Convergence tolerance on max |dw|");
    run->add_option("--threshold", rc.threshold, "Probability cut for label 1");
    run->add_option("--holdout", rc.holdout, "Fraction held out for a final test");
    run->add_option("--threads", rc.threads, "Worker threads for folds and subset scoring");
    run->add_option("--standardize-counts", rc.standardize_counts, "z-score count columns");
    run->add_option("--output", output_dir, "Output directory");

    PredictArgs pr;
    auto* predict = app.add_subcommand("predict", "Score a CSV with a saved model");
    predict->add_option("--model", pr.model, "Model file")->required();
    predict->add_option("--schema", pr.schema, "Schema file")->required();
    predict->add_option("--input", pr.input, "CSV to score")->required();
    predict->add_option("--output", pr.output, "Scored CSV (default: stdout)");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
    synth->add_option("--spec", sa.spec, "Cohort spec file");
    synth->add_flag("--paper", sa.paper, "Calibrated 7,879-applicant admissions cohort");
    auto* synth_seed = synth->add_option("--seed", sa.seed, "Seed (overrides the spec's)");
    synth->add_option("--out", sa.out, "Output CSV")->required();
    synth->add_option("--schema-out", sa.schema_out, "Also write the matching schema");
    synth->add_option("--missing-rate", sa.missing_rate, "Blank feature cells with this probability");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!simd.empty()) {
            const auto b = kernels::parse_backend(simd);
            if (!b || !kernels::available(*b))
                throw Error(ErrorCode::Config, "SIMD backend '" + simd + "' is not available");
            kernels::set_active_backend(*b);
        }
        if (*profile)
            return cmd_profile(pa);
        if (*predict)
            return cmd_predict(pr);
        if (*synth)
            return cmd_synth(sa, synth_seed->count() > 0);

        pipeline::RunConfig cfg;
        if (!config_path.empty())
            cfg = pipeline::RunConfig::from_document(kv::Document::load(config_path));
        auto given = [&](const char* flag) { return run->get_option(flag)->count() > 0; };
        if (given("--input"))
            cfg.inputs = kv::split_list(inputs);
        if (given("--schema"))
            cfg.schemas = kv::split_list(schemas);
        if (given("--key"))
            cfg.key = rc.key;
        if (given("--merge")) {
            if (merge != "left" && merge != "inner")
                throw Error(ErrorCode::Config, "--merge must be left or inner");
            cfg.merge = merge == "left" ? tabular::MergeMode::Left : tabular::MergeMode::Inner;
        }
        if (given("--seed"))
            cfg.seed = rc.seed;
        if (given("--impute")) {
            cfg.impute.clear();
            for (const auto& s : kv::split_list(impute))
                cfg.impute.push_back(pipeline::parse_impute(s));
        }
        if (given("--selection")) {
            const auto m = pipeline::parse_selection(selection);
            if (!m)
                throw Error(ErrorCode::Config, "--selection must be rank, wrapper or none");
            cfg.selection = *m;
        }
        if (given("--direction")) {
            const auto d = select::parse_direction(direction);
            if (!d)
                throw Error(ErrorCode::Config, "--direction must be forward, backward or bidirectional");
            cfg.direction = *d;
        }
        if (given("--merit")) {
            if (merit != "cv" && merit != "training")
                throw Error(ErrorCode::Config, "--merit must be cv or training");
            cfg.merit = merit == "cv" ? select::MeritMode::CrossValidated : select::MeritMode::Training;
        }
        if (given("--stale-limit"))
            cfg.stale_limit = rc.stale_limit;
        if (given("--merit-folds"))
            cfg.merit_folds = rc.merit_folds;
        if (given("--rank-threshold"))
            cfg.rank_threshold = rc.rank_threshold;
        if (given("--rank-top"))
            cfg.rank_top = rc.rank_top;
        if (given("--folds"))
            cfg.folds = rc.folds;
        if (given("--ridge"))
            cfg.ridge = rc.ridge;
        if (given("--max-iterations"))
            cfg.max_iterations = rc.max_iterations;
        if (given("--tolerance"))
            cfg.tolerance = rc.tolerance;
        if (given("--threshold"))
            cfg.threshold = rc.threshold;
        if (given("--holdout"))
            cfg.holdout = rc.holdout;
        if (given("--threads"))
            cfg.threads = rc.threads;
        if (given("--standardize-counts"))
            cfg.standardize_counts = rc.standardize_counts;
        if (given("--output"))
            cfg.output_dir = output_dir;

        const auto result = pipeline::run(cfg);
        pipeline::write_outputs(result, cfg.output_dir);
        std::cout << "pooled accuracy " << evalkit::format_rate(result.cv.pooled_metrics.accuracy)
                  << " (majority baseline " << evalkit::format_rate(result.majority_baseline) << "), "
                  << result.selected.size() << " feature(s) selected; reports in " << cfg.output_dir << "\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "enroll: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "enroll: " << e.what() << "\n";
        return 1;
    }
}
