#include "enroll/error.hpp"
#include "enroll/tabular/clean.hpp"
#include "enroll/tabular/csv.hpp"
#include "enroll/tabular/design_matrix.hpp"
#include "enroll/tabular/split.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace enroll;
using namespace enroll::tabular;

namespace {

Schema id_gender_enrolled(std::string marker = "")
{
    return Schema({
        { .name = "id", .kind = ColumnKind::Identifier, .missing_marker = marker },
        { .name = "gender", .kind = ColumnKind::Categorical, .missing_marker = marker },
        { .name = "enrolled", .kind = ColumnKind::Target, .missing_marker = marker },
    });
}

Schema mixed_schema()
{
    return Schema({
        { .name = "id", .kind = ColumnKind::Identifier, .missing_marker = "NA" },
        { .name = "With_Honors", .kind = ColumnKind::Binary, .missing_marker = "NA" },
        { .name = "Total_Number_Siblings", .kind = ColumnKind::Count, .missing_marker = "NA" },
        { .name = "Parent_Job", .kind = ColumnKind::Categorical, .missing_marker = "NA" },
        { .name = "enrolled", .kind = ColumnKind::Target, .missing_marker = "NA" },
    });
}

ErrorCode code_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no exception";
    return ErrorCode::InvalidArgument;
}

std::string message_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Schema, ValidatesTargetsAndNames)
{
    EXPECT_EQ(code_of([] { Schema({ { .name = "a", .kind = ColumnKind::Binary } }); }), ErrorCode::Config);
    EXPECT_EQ(code_of([] {
        Schema({ { .name = "a", .kind = ColumnKind::Target }, { .name = "b", .kind = ColumnKind::Target } });
    }),
        ErrorCode::Config);
    EXPECT_EQ(code_of([] {
        Schema({ { .name = "a", .kind = ColumnKind::Binary }, { .name = "a", .kind = ColumnKind::Target } });
    }),
        ErrorCode::Config);
    EXPECT_EQ(code_of([] { Schema({ { .name = "", .kind = ColumnKind::Target } }); }), ErrorCode::Config);
    EXPECT_EQ(code_of([] { Schema({ { .name = "a,b", .kind = ColumnKind::Target } }); }), ErrorCode::Config);
}

TEST(Schema, IdentifiersAndTargetsAreNotFeatures)
{
    const auto s = mixed_schema();
    EXPECT_EQ(s.feature_indices(), (std::vector<std::size_t> { 1, 2, 3 }));
    EXPECT_EQ(s.target_index(), 4u);
    EXPECT_EQ(s.identifier_index(), 0u);
}

TEST(Schema, DocumentRoundTrip)
{
    auto cols = mixed_schema().columns();
    cols[1].true_tokens = { "yes" };
    cols[1].false_tokens = { "no" };
    cols[3].feature = false;
    const Schema s(cols);
    const auto back = Schema::from_document(kv::Document::parse(s.to_document().serialize()));
    EXPECT_EQ(back, s);
}

TEST(Schema, FromDocumentReportsUnknownKinds)
{
    const auto doc = kv::Document::parse("columns = a, y\na.kind = ordinal\ny.kind = target\n");
    EXPECT_EQ(code_of([&] { Schema::from_document(doc); }), ErrorCode::Config);
}

TEST(ParseCsv, SingleRow)
{
    const auto ds = parse_csv("id,gender,enrolled\nA1,M,1\n", id_gender_enrolled());
    ASSERT_EQ(ds.row_count(), 1u);
    EXPECT_EQ(ds.cell(0, 0), "A1");
    EXPECT_EQ(ds.cell(0, 1), "M");
    EXPECT_EQ(ds.cell(0, 2), "1");
}

TEST(ParseCsv, EmptyCellIsMissing)
{
    const auto ds = parse_csv("id,gender,enrolled\nA2,,1\n", id_gender_enrolled());
    EXPECT_FALSE(ds.cell(0, 1).has_value());
}

TEST(ParseCsv, ArityErrorCarriesLineNumber)
{
    const auto msg = message_of([] { parse_csv("id,gender,enrolled\nA1,M,1\nA3,M\n", id_gender_enrolled()); });
    EXPECT_NE(msg.find("RowArityMismatch"), std::string::npos);
    EXPECT_NE(msg.find("line 3"), std::string::npos);
}

TEST(ParseCsv, HeaderIsOrderInsensitiveButMustMatch)
{
    const auto ds = parse_csv("enrolled,id,gender\n0,B1,F\n", id_gender_enrolled());
    EXPECT_EQ(ds.cell(0, 0), "B1");
    EXPECT_EQ(ds.cell(0, 2), "0");
    const auto msg = message_of([] { parse_csv("id,sex,enrolled\nA,F,1\n", id_gender_enrolled()); });
    EXPECT_NE(msg.find("missing columns: gender"), std::string::npos);
    EXPECT_NE(msg.find("unexpected columns: sex"), std::string::npos);
}

TEST(ParseCsv, BinarySynonymsNormalize)
{
    const auto ds = parse_csv("id,With_Honors,Total_Number_Siblings,Parent_Job,enrolled\n"
                              "1,yes,3,Farmer,1\n2,No,0,Driver,0\n3,NA,NA,NA,NA\n",
        mixed_schema());
    EXPECT_EQ(ds.cell(0, 1), "1");
    EXPECT_EQ(ds.cell(1, 1), "0");
    EXPECT_EQ(ds.cell(0, 2), "3");
    for (std::size_t c = 1; c < 5; ++c)
        EXPECT_FALSE(ds.cell(2, c).has_value());
}

TEST(ParseCsv, UnparseableCountAndTarget)
{
    const std::string head = "id,With_Honors,Total_Number_Siblings,Parent_Job,enrolled\n";
    auto msg = message_of([&] { parse_csv(head + "1,1,-2,x,1\n", mixed_schema()); });
    EXPECT_NE(msg.find("UnparseableValue"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_EQ(code_of([&] { parse_csv(head + "1,1,2.5,x,1\n", mixed_schema()); }), ErrorCode::UnparseableValue);
    EXPECT_EQ(code_of([&] { parse_csv(head + "1,1,2,x,2\n", mixed_schema()); }), ErrorCode::UnparseableValue);
    EXPECT_EQ(code_of([&] { parse_csv(head + "1,maybe,2,x,1\n", mixed_schema()); }), ErrorCode::UnparseableValue);
}

TEST(ParseCsv, QuotingCrLfAndBom)
{
    const std::string text = "\xEF\xBB\xBFid,gender,enrolled\r\n\"A,1\",\"say \"\"hi\"\"\nthere\",1\r\n\r\nB,F,0";
    const auto ds = parse_csv(text, id_gender_enrolled());
    ASSERT_EQ(ds.row_count(), 2u);
    EXPECT_EQ(ds.cell(0, 0), "A,1");
    EXPECT_EQ(ds.cell(0, 1), "say \"hi\"\nthere");
    EXPECT_EQ(ds.cell(1, 0), "B");
}

TEST(ParseCsv, RoundTripIsCellIdentical)
{
    Rng rng(4);
    const auto schema = mixed_schema();
    const char* jobs[] = { "Farmer", "O\"Brien & Co", "a,b", "line\nbreak", "Driver" };
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Row> rows;
        for (int i = 0; i < 30; ++i) {
            Row r;
            r.emplace_back("id" + std::to_string(i));
            r.push_back(rng.uniform() < 0.2 ? Cell {} : Cell { rng.uniform() < 0.5 ? "1" : "0" });
            r.push_back(rng.uniform() < 0.2 ? Cell {} : Cell { std::to_string(rng.below(9)) });
            r.push_back(rng.uniform() < 0.2 ? Cell {} : Cell { jobs[rng.below(5)] });
            r.push_back(rng.uniform() < 0.1 ? Cell {} : Cell { rng.uniform() < 0.5 ? "1" : "0" });
            rows.push_back(r);
        }
        const Dataset ds(schema, rows);
        const auto once = parse_csv(to_csv(ds), schema);
        EXPECT_EQ(once, ds);
        EXPECT_EQ(parse_csv(to_csv(once), schema), ds);
    }
}

TEST(DatasetInvariants, ConstructorChecksCells)
{
    const auto schema = mixed_schema();
    EXPECT_EQ(code_of([&] { Dataset(schema, { Row(4) }); }), ErrorCode::RowArityMismatch);
    EXPECT_EQ(code_of([&] { Dataset(schema, { Row { "a", "2", "1", "x", "1" } }); }), ErrorCode::UnparseableValue);
    EXPECT_EQ(code_of([&] { Dataset(schema, { Row { "a", "1", "01", "x", "1" } }); }), ErrorCode::UnparseableValue);
    EXPECT_EQ(code_of([&] { Dataset(schema, { Row { "a", "1", "1", "NA", "1" } }); }), ErrorCode::UnparseableValue);
}

TEST(Deduplicate, IdenticalRowsCollapse)
{
    const auto ds = parse_csv("id,gender,enrolled\nA1,M,1\nA1,M,1\n", id_gender_enrolled());
    const auto r = deduplicate(ds, "id");
    EXPECT_EQ(r.data.row_count(), 1u);
    EXPECT_EQ(r.removed, 1u);
    EXPECT_TRUE(r.conflicting_keys.empty());
}

TEST(Deduplicate, DistinctIdsUnchanged)
{
    const auto ds = parse_csv("id,gender,enrolled\nA1,M,1\nA2,F,0\n", id_gender_enrolled());
    const auto r = deduplicate(ds, "id");
    EXPECT_EQ(r.data, ds);
    EXPECT_EQ(r.removed, 0u);
}

TEST(Deduplicate, KeepFirstAndLogConflict)
{
    const auto ds = parse_csv("id,gender,enrolled\nA1,M,1\nA1,F,0\n,F,1\n,F,1\n", id_gender_enrolled());
    RunLog log;
    const auto r = deduplicate(ds, "id", &log);
    EXPECT_EQ(r.removed, 1u);
    ASSERT_EQ(r.data.row_count(), 3u); // Missing keys are kept
    EXPECT_EQ(r.data.cell(0, 1), "M");
    EXPECT_EQ(r.conflicting_keys, (std::vector<std::string> { "A1" }));
    EXPECT_NE(log.text().find("A1"), std::string::npos);
    // idempotent
    EXPECT_EQ(deduplicate(r.data, "id").removed, 0u);
}

TEST(Deduplicate, KeyMustBeAnIdentifier)
{
    const auto ds = parse_csv("id,gender,enrolled\nA1,M,1\n", id_gender_enrolled());
    EXPECT_EQ(code_of([&] { deduplicate(ds, "gender"); }), ErrorCode::KeyColumn);
    EXPECT_EQ(code_of([&] { deduplicate(ds, "nope"); }), ErrorCode::KeyColumn);
}

namespace {

Schema right_schema()
{
    return Schema({
        { .name = "id", .kind = ColumnKind::Identifier },
        { .name = "Online", .kind = ColumnKind::Binary },
        { .name = "enrolled", .kind = ColumnKind::Target },
    });
}

} // namespace

TEST(Merge, DisjointColumnsSameKeys)
{
    const auto left = parse_csv("id,gender,enrolled\nA1,M,1\nA2,F,0\n", id_gender_enrolled());
    const auto right = parse_csv("id,Online,enrolled\nA2,1,0\nA1,0,1\n", right_schema());
    const auto m = merge_sources(left, right, "id", MergeMode::Left);
    EXPECT_EQ(m.row_count(), 2u);
    EXPECT_EQ(m.column_count(), 4u);
    const auto online = *m.schema().index_of("Online");
    EXPECT_EQ(m.cell(0, online), "0");
    EXPECT_EQ(m.cell(1, online), "1");
}

TEST(Merge, InnerDropsUnmatchedLeftRows)
{
    const auto left = parse_csv("id,gender,enrolled\nA1,M,1\nA9,F,0\n", id_gender_enrolled());
    const auto right = parse_csv("id,Online,enrolled\nA1,1,1\n", right_schema());
    const auto inner = merge_sources(left, right, "id", MergeMode::Inner);
    ASSERT_EQ(inner.row_count(), 1u);
    EXPECT_EQ(inner.cell(0, 0), "A1");
    const auto outer = merge_sources(left, right, "id", MergeMode::Left);
    ASSERT_EQ(outer.row_count(), 2u);
    EXPECT_FALSE(outer.cell(1, *outer.schema().index_of("Online")).has_value());
}

TEST(Merge, ConflictListsKeys)
{
    const auto left = parse_csv("id,gender,enrolled\nA7,M,1\nA8,F,0\n", id_gender_enrolled());
    const auto right = parse_csv("id,gender,enrolled\nA7,F,1\nA8,F,0\n", id_gender_enrolled());
    const auto msg = message_of([&] { merge_sources(left, right, "id", MergeMode::Left); });
    EXPECT_NE(msg.find("MergeConflict"), std::string::npos);
    EXPECT_NE(msg.find("A7"), std::string::npos);
    EXPECT_EQ(msg.find("A8"), std::string::npos);
}

TEST(Merge, KindDisagreementIsAConflict)
{
    const auto left = parse_csv("id,gender,enrolled\nA7,1,1\n", id_gender_enrolled());
    const Schema other({
        { .name = "id", .kind = ColumnKind::Identifier },
        { .name = "gender", .kind = ColumnKind::Binary },
        { .name = "enrolled", .kind = ColumnKind::Target },
    });
    const auto right = parse_csv("id,gender,enrolled\nA7,1,1\n", other);
    EXPECT_EQ(code_of([&] { merge_sources(left, right, "id", MergeMode::Left); }), ErrorCode::MergeConflict);
}

namespace {

Dataset honors_column(const std::vector<const char*>& honors, const std::vector<const char*>& targets)
{
    const Schema s({
        { .name = "With_Honors", .kind = ColumnKind::Binary },
        { .name = "y", .kind = ColumnKind::Target },
    });
    std::vector<Row> rows;
    for (std::size_t i = 0; i < honors.size(); ++i)
        rows.push_back({ honors[i] ? Cell { honors[i] } : Cell {}, targets[i] ? Cell { targets[i] } : Cell {} });
    return Dataset(s, rows);
}

} // namespace

TEST(Impute, ModeFillUsesTheMode)
{
    const auto ds = honors_column({ "1", "1", "0", nullptr }, { "1", "0", "1", "0" });
    const auto out = impute(ds, ImputeStrategy::mode_fill());
    EXPECT_EQ(out.row_count(), 4u);
    EXPECT_EQ(out.cell(3, 0), "1");
    EXPECT_EQ(out.missing_count(), 0u);
}

TEST(Impute, ModeTieGoesToSmallerEncodedValue)
{
    const auto ds = honors_column({ "1", "0", nullptr }, { "1", "0", "1" });
    EXPECT_EQ(impute(ds, ImputeStrategy::mode_fill()).cell(2, 0), "0");
    // counts compare numerically, not as text
    const Schema s({ { .name = "k", .kind = ColumnKind::Count }, { .name = "y", .kind = ColumnKind::Target } });
    const Dataset counts(s, { { "10", "1" }, { "9", "0" }, { Cell {}, "1" } });
    EXPECT_EQ(impute(counts, ImputeStrategy::mode_fill()).cell(2, 0), "9");
}

TEST(Impute, DropRows)
{
    const auto ds = honors_column({ "1", "1", "0", nullptr }, { "1", "0", "1", "0" });
    const auto out = impute(ds, ImputeStrategy::drop_rows());
    EXPECT_EQ(out.row_count(), 3u);
    EXPECT_EQ(out.missing_count(), 0u);
}

TEST(Impute, AllMissingColumn)
{
    const auto ds = honors_column({ nullptr, nullptr }, { "1", "0" });
    EXPECT_EQ(code_of([&] { impute(ds, ImputeStrategy::mode_fill()); }), ErrorCode::AllMissingColumn);
}

TEST(Impute, MissingTargetRowsAlwaysDropFirst)
{
    const auto ds = honors_column({ "1", nullptr, "0" }, { "1", "0", nullptr });
    for (const auto& s : { ImputeStrategy::mode_fill(), ImputeStrategy::drop_rows(), ImputeStrategy::drop_columns(0.9) })
    {
        const auto out = impute(ds, s);
        for (const auto& row : out.rows())
            EXPECT_TRUE(row.back().has_value()) << describe(s);
    }
    EXPECT_EQ(impute(ds, ImputeStrategy::mode_fill()).row_count(), 2u);
}

TEST(Impute, DropColumnsAboveThreshold)
{
    const auto schema = mixed_schema();
    const Dataset ds(schema, {
                                 { "1", Cell {}, "1", "x", "1" },
                                 { "2", Cell {}, "2", Cell {}, "0" },
                                 { "3", "1", "3", "y", "1" },
                                 { "4", Cell {}, "3", "y", "0" },
                             });
    const auto out = impute(ds, ImputeStrategy::drop_columns(0.5));
    EXPECT_FALSE(out.schema().index_of("With_Honors").has_value()); // 3/4 missing
    EXPECT_TRUE(out.schema().index_of("Parent_Job").has_value());   // 1/4 missing
    EXPECT_EQ(out.row_count(), 4u);
}

TEST(Encode, BinaryCountCategoricalAndIntercept)
{
    const auto ds = parse_csv("id,With_Honors,Total_Number_Siblings,Parent_Job,enrolled\n"
                              "1,yes,3,Farmer,1\n2,no,0,Driver,0\n3,1,1,Teacher,0\n",
        mixed_schema());
    const auto dm = encode(ds);
    EXPECT_EQ(dm.feature_names(),
        (std::vector<std::string> { "With_Honors", "Total_Number_Siblings", "Parent_Job=Farmer", "Parent_Job=Teacher" }));
    EXPECT_EQ(dm.at(0, 1), 1.0);
    EXPECT_EQ(dm.at(0, 2), 3.0);
    EXPECT_EQ(dm.at(0, 3), 1.0);
    EXPECT_EQ(dm.at(1, 3), 0.0); // Driver is the reference level
    EXPECT_EQ(dm.at(1, 4), 0.0);
    EXPECT_EQ(dm.at(2, 4), 1.0);
    double intercept = 0;
    for (std::size_t i = 0; i < dm.rows(); ++i)
        intercept += dm.at(i, 0);
    EXPECT_EQ(intercept, 3.0);
    EXPECT_EQ(dm.labels()[0], 1.0);
}

TEST(Encode, StandardizedCountsUseTrainingMoments)
{
    const auto ds = parse_csv("id,With_Honors,Total_Number_Siblings,Parent_Job,enrolled\n"
                              "1,1,1,a,1\n2,0,3,a,0\n",
        mixed_schema());
    const auto plan = EncodingPlan::derive(ds, { .standardize_counts = true });
    const auto dm = encode(ds, plan);
    EXPECT_DOUBLE_EQ(dm.at(0, 2), -1.0);
    EXPECT_DOUBLE_EQ(dm.at(1, 2), 1.0);
}

TEST(Encode, RejectsMissingAndEmpty)
{
    const auto ds = parse_csv("id,With_Honors,Total_Number_Siblings,Parent_Job,enrolled\n1,NA,1,a,1\n", mixed_schema());
    EXPECT_THROW(encode(ds), Error);
    const Dataset empty(mixed_schema(), {});
    EXPECT_EQ(code_of([&] { encode(empty); }), ErrorCode::EmptyDataset);
}

TEST(Encode, PlanFromNamesReportsAbsentFeatures)
{
    const Schema small({ { .name = "With_Honors", .kind = ColumnKind::Binary }, { .name = "y", .kind = ColumnKind::Target } });
    const auto msg = message_of(
        [&] { EncodingPlan::from_feature_names(small, { "With_Honors", "Parent_Job=Farmer", "Total_Number_Siblings" }); });
    EXPECT_NE(msg.find("FeatureMismatch"), std::string::npos);
    EXPECT_NE(msg.find("Parent_Job=Farmer"), std::string::npos);
    EXPECT_NE(msg.find("Total_Number_Siblings"), std::string::npos);
}

TEST(DesignMatrixInvariants, Validation)
{
    EXPECT_EQ(code_of([] { DesignMatrix({}, {}, {}); }), ErrorCode::EmptyDataset);
    EXPECT_THROW(DesignMatrix({ 2.0, 1.0 }, { 1.0 }, { "x" }), Error);   // intercept not 1
    EXPECT_THROW(DesignMatrix({ 1.0, 1.0 }, { 0.5 }, { "x" }), Error);   // label
    const auto dm = DesignMatrix::from_rows({ { 1.0, 2.0 }, { 3.0, 4.0 } }, { 0.0, 1.0 });
    EXPECT_EQ(dm.feature_names(), (std::vector<std::string> { "x1", "x2" }));
    const std::vector<std::size_t> pick { 1 };
    const auto sub = dm.select_features(pick);
    EXPECT_EQ(sub.cols(), 2u);
    EXPECT_EQ(sub.at(1, 1), 4.0);
    EXPECT_EQ(sub.feature_names(), (std::vector<std::string> { "x2" }));
}

TEST(Split, SizesAndDeterminism)
{
    std::vector<Row> rows;
    for (int i = 0; i < 10; ++i)
        rows.push_back({ "A" + std::to_string(i), "M", i % 2 ? "1" : "0" });
    const Dataset ds(id_gender_enrolled(), rows);
    const auto a = split(ds, 0.2, 42);
    EXPECT_EQ(a.train.row_count(), 8u);
    EXPECT_EQ(a.test.row_count(), 2u);
    const auto b = split(ds, 0.2, 42);
    EXPECT_EQ(a.train_rows, b.train_rows);
    EXPECT_EQ(a.test_rows, b.test_rows);
    const auto zero = split(ds, 0.0, 1);
    EXPECT_EQ(zero.test.row_count(), 0u);
    EXPECT_EQ(zero.train.row_count(), 10u);
    EXPECT_THROW(split(ds, 1.5, 1), Error);
    EXPECT_THROW(split(ds, -0.1, 1), Error);
}

TEST(Split, PartitionsEveryRowOnce)
{
    std::vector<Row> rows;
    for (int i = 0; i < 37; ++i)
        rows.push_back({ "A" + std::to_string(i), "M", "1" });
    const Dataset ds(id_gender_enrolled(), rows);
    for (double f : { 0.0, 0.1, 0.25, 0.5, 0.99, 1.0 })
        for (std::uint64_t seed : { 1u, 2u, 3u }) {
            const auto s = split(ds, f, seed);
            std::vector<std::size_t> all = s.train_rows;
            all.insert(all.end(), s.test_rows.begin(), s.test_rows.end());
            std::sort(all.begin(), all.end());
            ASSERT_EQ(all.size(), 37u);
            for (std::size_t i = 0; i < all.size(); ++i)
                EXPECT_EQ(all[i], i);
            EXPECT_EQ(s.test_rows.size(), static_cast<std::size_t>(std::llround(37 * f)));
        }
}
