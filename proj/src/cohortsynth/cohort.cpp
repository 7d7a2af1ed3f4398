#include "enroll/cohortsynth/cohort.hpp"

#include "enroll/error.hpp"
#include "enroll/glm/logistic.hpp"
#include "enroll/rng.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace enroll::cohortsynth {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};

double require_double(std::string_view text, const std::string& what)
{
    const auto v = kv::parse_double(text);
    if (!v)
        throw Error(ErrorCode::Config, what + ": '" + std::string(text) + "' is not a number");
    return *v;
}

std::vector<std::string> sorted_levels(const Categorical& c)
{
    auto levels = c.levels;
    std::sort(levels.begin(), levels.end());
    return levels;
}

// Truncated-Poisson CDF over 0..max.
std::vector<double> poisson_cdf(const TruncatedPoisson& p)
{
    std::vector<double> pmf(p.max + 1);
    double term = std::exp(-p.lambda);
    for (std::uint64_t k = 0; k <= p.max; ++k) {
        pmf[k] = term;
        term *= p.lambda / static_cast<double>(k + 1);
    }
    const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    std::vector<double> cdf(pmf.size());
    double run = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        run += pmf[k] / total;
        cdf[k] = run;
    }
    cdf.back() = 1.0;
    return cdf;
}

std::size_t draw_index(const std::vector<double>& cdf, double u)
{
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

// One feature's sampling table: cumulative probabilities, the cell text and
// the linear-predictor contribution of each outcome.
struct Outcomes {
    std::vector<double> cdf;
    std::vector<double> prob;
    std::vector<std::string> text;
    std::vector<double> contribution;
};

std::vector<Outcomes> outcome_tables(const CohortSpec& spec)
{
    std::vector<Outcomes> tables;
    std::size_t w = 1; // weight cursor, past the intercept
    for (const auto& f : spec.features) {
        Outcomes o;
        std::visit(overloaded {
                       [&](const Bernoulli& b) {
                           o.prob = { 1.0 - b.q, b.q };
                           o.text = { "0", "1" };
                           o.contribution = { 0.0, spec.true_weights[w++] };
                       },
                       [&](const TruncatedPoisson& p) {
                           const double beta = spec.true_weights[w++];
                           double prev = 0.0;
                           for (const double c : poisson_cdf(p)) {
                               const auto k = o.prob.size();
                               o.prob.push_back(c - prev);
                               prev = c;
                               o.text.push_back(std::to_string(k));
                               o.contribution.push_back(beta * static_cast<double>(k));
                           }
                       },
                       [&](const Categorical& c) {
                           const auto sorted = sorted_levels(c);
                           std::map<std::string, double> beta;
                           for (std::size_t i = 1; i < sorted.size(); ++i)
                               beta[sorted[i]] = spec.true_weights[w++];
                           // sampled in declaration order
                           for (std::size_t i = 0; i < c.levels.size(); ++i) {
                               o.prob.push_back(c.probs[i]);
                               o.text.push_back(c.levels[i]);
                               const auto it = beta.find(c.levels[i]);
                               o.contribution.push_back(it == beta.end() ? 0.0 : it->second);
                           }
                       },
                   },
            f.law);
        double run = 0.0;
        for (const double p : o.prob)
            o.cdf.push_back(run += p);
        o.cdf.back() = 1.0;
        tables.push_back(std::move(o));
    }
    return tables;
}

// Discrete distribution of a sum of independent contributions, as
// (value, probability) points.
using Support = std::vector<std::pair<double, double>>;

Support convolve(const Support& acc, const Outcomes& o)
{
    std::map<double, double> merged;
    for (const auto& [v, p] : acc)
        for (std::size_t i = 0; i < o.prob.size(); ++i)
            if (o.prob[i] > 0.0)
                merged[v + o.contribution[i]] += p * o.prob[i];
    return { merged.begin(), merged.end() };
}

double mean_sigmoid(const Support& s, double shift)
{
    double total = 0.0;
    for (const auto& [v, p] : s)
        total += p * glm::sigmoid(v + shift);
    return total;
}

std::size_t feature_position(const CohortSpec& spec, const std::string& name)
{
    for (std::size_t i = 0; i < spec.features.size(); ++i)
        if (spec.features[i].name == name)
            return i;
    invalid("no cohort feature named '" + name + "'");
}

std::string padded_id(std::size_t i, std::size_t n)
{
    auto digits = std::to_string(n).size();
    auto s = std::to_string(i);
    return "A" + std::string(digits > s.size() ? digits - s.size() : 0, '0') + s;
}

} // namespace

Law parse_law(std::string_view text)
{
    text = kv::trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')')
        throw Error(ErrorCode::Config, "law '" + std::string(text) + "' is not of the form name(args)");
    const auto name = kv::trim(text.substr(0, open));
    const auto args = kv::split_list(text.substr(open + 1, text.size() - open - 2));
    const std::string where = "law '" + std::string(text) + "'";

    if (name == "bernoulli") {
        if (args.size() != 1)
            throw Error(ErrorCode::Config, where + ": expected bernoulli(q)");
        return Bernoulli { require_double(args[0], where) };
    }
    if (name == "poisson") {
        if (args.size() != 2)
            throw Error(ErrorCode::Config, where + ": expected poisson(lambda, max)");
        const auto max = kv::parse_int(args[1]);
        if (!max || *max < 0)
            throw Error(ErrorCode::Config, where + ": max must be a non-negative integer");
        return TruncatedPoisson { require_double(args[0], where), static_cast<std::uint64_t>(*max) };
    }
    if (name == "categorical") {
        Categorical c;
        for (const auto& item : args) {
            const auto colon = item.rfind(':');
            if (colon == std::string::npos)
                throw Error(ErrorCode::Config, where + ": expected level:probability items");
            c.levels.emplace_back(kv::trim(std::string_view(item).substr(0, colon)));
            c.probs.push_back(require_double(std::string_view(item).substr(colon + 1), where));
        }
        return c;
    }
    throw Error(ErrorCode::Config, where + ": unknown law '" + std::string(name) + "'");
}

std::string format_law(const Law& law)
{
    return std::visit(overloaded {
                          [](const Bernoulli& b) { return "bernoulli(" + kv::format_double(b.q) + ")"; },
                          [](const TruncatedPoisson& p) {
                              return "poisson(" + kv::format_double(p.lambda) + ", " + std::to_string(p.max) + ")";
                          },
                          [](const Categorical& c) {
                              std::vector<std::string> items;
                              for (std::size_t i = 0; i < c.levels.size(); ++i)
                                  items.push_back(c.levels[i] + ":" + kv::format_double(c.probs[i]));
                              return "categorical(" + kv::join_list(items) + ")";
                          },
                      },
        law);
}

tabular::ColumnKind FeatureSpec::kind() const noexcept
{
    if (std::holds_alternative<Bernoulli>(law))
        return tabular::ColumnKind::Binary;
    if (std::holds_alternative<TruncatedPoisson>(law))
        return tabular::ColumnKind::Count;
    return tabular::ColumnKind::Categorical;
}

std::vector<std::string> CohortSpec::encoded_names() const
{
    std::vector<std::string> names;
    for (const auto& f : features) {
        if (const auto* c = std::get_if<Categorical>(&f.law)) {
            const auto sorted = sorted_levels(*c);
            for (std::size_t i = 1; i < sorted.size(); ++i)
                names.push_back(f.name + "=" + sorted[i]);
        } else {
            names.push_back(f.name);
        }
    }
    return names;
}

void CohortSpec::validate() const
{
    if (n == 0)
        invalid("cohort size n must be positive");
    if (features.empty())
        invalid("cohort spec declares no features");
    std::set<std::string> seen { target_name };
    if (!id_column.empty() && !seen.insert(id_column).second)
        invalid("id column and target share the name '" + id_column + "'");
    for (const auto& f : features) {
        if (!seen.insert(f.name).second)
            invalid("duplicate column name '" + f.name + "'");
        const std::string where = "feature '" + f.name + "'";
        std::visit(overloaded {
                       [&](const Bernoulli& b) {
                           if (!(b.q >= 0.0 && b.q <= 1.0))
                               invalid(where + ": Bernoulli parameter " + kv::format_double(b.q) + " outside [0, 1]");
                       },
                       [&](const TruncatedPoisson& p) {
                           if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda))
                               invalid(where + ": Poisson rate must be finite and >= 0");
                           if (p.max > 1000000)
                               invalid(where + ": Poisson truncation point too large");
                       },
                       [&](const Categorical& c) {
                           if (c.levels.size() < 2)
                               invalid(where + ": a categorical law needs at least 2 levels");
                           if (std::set<std::string>(c.levels.begin(), c.levels.end()).size() != c.levels.size())
                               invalid(where + ": duplicate categorical level");
                           double total = 0.0;
                           for (std::size_t i = 0; i < c.levels.size(); ++i) {
                               if (c.levels[i].empty() || c.levels[i] == missing_marker)
                                   invalid(where + ": empty or reserved categorical level");
                               if (!(c.probs[i] >= 0.0 && c.probs[i] <= 1.0))
                                   invalid(where + ": level probability outside [0, 1]");
                               total += c.probs[i];
                           }
                           if (std::abs(total - 1.0) > 1e-9)
                               invalid(where + ": level probabilities sum to " + kv::format_double(total));
                       },
                   },
            f.law);
    }
    const auto expected = encoded_names().size() + 1;
    if (true_weights.size() != expected)
        invalid("true_weights has " + std::to_string(true_weights.size()) + " entries, expected "
            + std::to_string(expected) + " (intercept + encoded features)");
    for (const double w : true_weights)
        if (!std::isfinite(w))
            invalid("true_weights must be finite");
}

tabular::Schema CohortSpec::schema() const
{
    std::vector<tabular::ColumnSpec> cols;
    if (!id_column.empty())
        cols.push_back({ .name = id_column, .kind = tabular::ColumnKind::Identifier, .missing_marker = missing_marker });
    for (const auto& f : features)
        cols.push_back({ .name = f.name, .kind = f.kind(), .missing_marker = missing_marker });
    cols.push_back({ .name = target_name, .kind = tabular::ColumnKind::Target, .missing_marker = missing_marker });
    return tabular::Schema(std::move(cols));
}

CohortSpec CohortSpec::from_document(const kv::Document& doc)
{
    CohortSpec spec;
    std::set<std::string> known { "n", "seed", "id_column", "target", "missing", "features", "intercept" };

    const auto n = doc.get_int("n");
    if (n <= 0)
        throw Error(ErrorCode::Config, "n must be a positive integer");
    spec.n = static_cast<std::size_t>(n);
    const auto seed_text = doc.get_or("seed", "1");
    if (std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), spec.seed).ptr
        != seed_text.data() + seed_text.size())
        throw Error(ErrorCode::Config, "seed must be a non-negative integer");
    spec.id_column = doc.get_or("id_column", spec.id_column);
    spec.target_name = doc.get_or("target", spec.target_name);
    spec.missing_marker = doc.get_or("missing", spec.missing_marker);

    for (const auto& name : kv::split_list(doc.get("features"))) {
        spec.features.push_back({ name, parse_law(doc.get(name + ".law")) });
        known.insert(name + ".law");
    }

    spec.true_weights.push_back(doc.get_double_or("intercept", 0.0));
    for (const auto& f : spec.features) {
        if (const auto* c = std::get_if<Categorical>(&f.law)) {
            const auto sorted = sorted_levels(*c);
            for (std::size_t i = 1; i < sorted.size(); ++i) {
                const auto key = f.name + ".weight." + sorted[i];
                known.insert(key);
                spec.true_weights.push_back(doc.get_double_or(key, 0.0));
            }
        } else {
            known.insert(f.name + ".weight");
            spec.true_weights.push_back(doc.get_double_or(f.name + ".weight", 0.0));
        }
    }
    for (const auto& [key, value] : doc.entries())
        if (!known.contains(key))
            throw Error(ErrorCode::Config, "unknown cohort spec key '" + key + "'");
    spec.validate();
    return spec;
}

CohortSpec CohortSpec::load(const std::string& path)
{
    try {
        return from_document(kv::Document::load(path));
    } catch (const Error& e) {
        rethrow_with_context(e, path);
    }
}

kv::Document CohortSpec::to_document() const
{
    kv::Document doc;
    doc.set("n", static_cast<std::int64_t>(n));
    doc.set("seed", std::to_string(seed));
    doc.set("id_column", id_column);
    doc.set("target", target_name);
    doc.set("missing", missing_marker);
    std::vector<std::string> names;
    for (const auto& f : features)
        names.push_back(f.name);
    doc.set("features", kv::join_list(names));
    for (const auto& f : features)
        doc.set(f.name + ".law", format_law(f.law));
    doc.set("intercept", true_weights.at(0));
    std::size_t w = 1;
    for (const auto& f : features) {
        if (const auto* c = std::get_if<Categorical>(&f.law)) {
            const auto sorted = sorted_levels(*c);
            for (std::size_t i = 1; i < sorted.size(); ++i)
                doc.set(f.name + ".weight." + sorted[i], true_weights.at(w++));
        } else {
            doc.set(f.name + ".weight", true_weights.at(w++));
        }
    }
    return doc;
}

tabular::Dataset generate(const CohortSpec& spec)
{
    spec.validate();
    const auto tables = outcome_tables(spec);
    Rng rng(spec.seed);
    std::vector<tabular::Row> rows;
    rows.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        tabular::Row row;
        if (!spec.id_column.empty())
            row.emplace_back(padded_id(i + 1, spec.n));
        double eta = spec.true_weights[0];
        for (const auto& t : tables) {
            const auto k = draw_index(t.cdf, rng.uniform());
            row.emplace_back(t.text[k]);
            eta += t.contribution[k];
        }
        row.emplace_back(rng.uniform() < glm::sigmoid(eta) ? "1" : "0");
        rows.push_back(std::move(row));
    }
    return tabular::Dataset(spec.schema(), std::move(rows));
}

double expected_rate(const CohortSpec& spec)
{
    spec.validate();
    Support s { { 0.0, 1.0 } };
    for (const auto& t : outcome_tables(spec))
        s = convolve(s, t);
    return mean_sigmoid(s, spec.true_weights[0]);
}

double expected_rate(const CohortSpec& spec, const std::string& feature, const std::string& value)
{
    spec.validate();
    const auto pos = feature_position(spec, feature);
    auto tables = outcome_tables(spec);
    auto& cond = tables[pos];
    const auto it = std::find(cond.text.begin(), cond.text.end(), value);
    if (it == cond.text.end())
        invalid("feature '" + feature + "' cannot take the value '" + value + "'");
    const auto k = static_cast<std::size_t>(it - cond.text.begin());
    std::fill(cond.prob.begin(), cond.prob.end(), 0.0);
    cond.prob[k] = 1.0;

    Support s { { 0.0, 1.0 } };
    for (const auto& t : tables)
        s = convolve(s, t);
    return mean_sigmoid(s, spec.true_weights[0]);
}

namespace {

constexpr double kApplicants = 7879.0;
constexpr double kInProvince = 6489.0, kInProvinceEnrolled = 3199.0;
constexpr double kOutProvince = 1390.0, kOutProvinceEnrolled = 215.0;
constexpr double kMale = 3635.0, kMaleEnrolled = 1870.0;
constexpr double kFemale = 4244.0, kFemaleEnrolled = 1693.0;
constexpr double kOnline = 1962.0, kOnlineEnrolled = 892.0;
constexpr double kEnrolled = 3414.0, kAdmitted = 4486.0;

// Uncalibrated part of the cohort: feature, law and weight.
CohortSpec paper_base()
{
    CohortSpec spec;
    spec.n = 7879;
    spec.id_column = "ApplicantID";
    spec.target_name = "OL_Pursued";
    spec.features = {
        { "Within_City", Bernoulli { 0.35 } },
        { "Within_Province", Bernoulli { kInProvince / kApplicants } },
        { "Gender", Categorical { { "Female", "Male" }, { kFemale / kApplicants, kMale / kApplicants } } },
        { "Religion_Binary", Bernoulli { 0.80 } },
        { "Type_of_School", Bernoulli { 0.45 } },
        { "With_Honors", Bernoulli { 0.30 } },
        { "School_Choice", Bernoulli { 0.55 } },
        { "Online_Application", Bernoulli { kOnline / kApplicants } },
        { "College_Admitted_To_Binary", Bernoulli { 0.50 } },
        { "Guardian_Parent_Binary", Bernoulli { 0.85 } },
        { "Total_Number_Siblings", TruncatedPoisson { 2.2, 10 } },
        { "Previous_School_Binary", Bernoulli { 0.40 } },
    };
    // intercept, then encoded order; slots 2, 3 and 8 (province, male,
    // online) and the intercept are overwritten by calibration
    spec.true_weights = { 0.0, 0.25, 0.0, 0.0, 0.15, 0.20, 0.35, 0.90, 0.0, 0.30, 0.10, -0.08, 0.25 };
    return spec;
}

double bisect(const std::function<double(double)>& rate, double target)
{
    double lo = -30.0, hi = 30.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        (rate(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Published rates: province and online exactly. Gender enrolled totals
// (3,563) disagree with the overall 3,414, so the male rate keeps the
// published male/female ratio rescaled to the 3,414 total.
std::vector<double> calibrate_paper_weights()
{
    auto spec = paper_base();
    const double ratio = (kMaleEnrolled / kMale) / (kFemaleEnrolled / kFemale);
    const double male_target = kEnrolled * ratio / (kMale * ratio + kFemale);
    const double out_target = kOutProvinceEnrolled / kOutProvince;
    const double in_target = kInProvinceEnrolled / kInProvince;
    const double online_target = kOnlineEnrolled / kOnline;

    const double q_prov = kInProvince / kApplicants;
    const double q_male = kMale / kApplicants;
    const double q_online = kOnline / kApplicants;

    // distribution of every uncalibrated contribution
    auto tables = outcome_tables(spec);
    Support rest { { 0.0, 1.0 } };
    for (const std::size_t f : { 0u, 3u, 4u, 5u, 6u, 8u, 9u, 10u, 11u })
        rest = convolve(rest, tables[f]);

    double w0 = 0.0, wp = 0.0, wm = 0.0, wo = 0.0;
    // E[y | prov, male, online], each argument either fixed (0/1) or -1
    // for "averaged over its law"
    auto rate = [&](int prov, int male, int online, double b0, double bp, double bm, double bo) {
        double total = 0.0;
        for (int p = 0; p <= 1; ++p) {
            const double pp = prov < 0 ? (p ? q_prov : 1 - q_prov) : (p == prov ? 1.0 : 0.0);
            for (int m = 0; m <= 1 && pp > 0; ++m) {
                const double pm = male < 0 ? (m ? q_male : 1 - q_male) : (m == male ? 1.0 : 0.0);
                for (int o = 0; o <= 1 && pm > 0; ++o) {
                    const double po = online < 0 ? (o ? q_online : 1 - q_online) : (o == online ? 1.0 : 0.0);
                    if (po > 0)
                        total += pp * pm * po * mean_sigmoid(rest, b0 + p * bp + m * bm + o * bo);
                }
            }
        }
        return total;
    };

    for (int round = 0; round < 200; ++round) {
        const double prev[] = { w0, wp, wm, wo };
        w0 = bisect([&](double b) { return rate(0, -1, -1, b, wp, wm, wo); }, out_target);
        wp = bisect([&](double b) { return rate(1, -1, -1, w0, b, wm, wo); }, in_target);
        wm = bisect([&](double b) { return rate(-1, 1, -1, w0, wp, b, wo); }, male_target);
        wo = bisect([&](double b) { return rate(-1, -1, 1, w0, wp, wm, b); }, online_target);
        const double delta = std::max({ std::abs(w0 - prev[0]), std::abs(wp - prev[1]), std::abs(wm - prev[2]),
            std::abs(wo - prev[3]) });
        if (delta < 1e-11)
            break;
    }
    auto w = spec.true_weights;
    w[0] = w0;
    w[2] = wp;
    w[3] = wm;
    w[8] = wo;
    return w;
}

} // namespace

CohortSpec paper_cohort_spec(std::uint64_t seed)
{
    static const std::vector<double> weights = calibrate_paper_weights();
    auto spec = paper_base();
    spec.true_weights = weights;
    spec.seed = seed;
    return spec;
}

tabular::Dataset paper_cohort(std::uint64_t seed)
{
    const auto spec = paper_cohort_spec(seed);
    const auto base = generate(spec);

    // Admission status for profiling: every enrollee was admitted; the
    // remaining 1,072 admissions are spread over the non-enrollees.
    auto columns = base.schema().columns();
    columns.push_back({ .name = "Admitted", .kind = tabular::ColumnKind::Binary,
        .missing_marker = spec.missing_marker, .feature = false });
    const auto target = base.schema().target_index();
    const double admit_rate = (kAdmitted - kEnrolled) / (kApplicants - kEnrolled);

    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<tabular::Row> rows = base.rows();
    for (auto& row : rows) {
        const bool enrolled = *row[target] == "1";
        const bool admitted = rng.bernoulli(admit_rate);
        row.emplace_back(enrolled || admitted ? "1" : "0");
    }
    return tabular::Dataset(tabular::Schema(std::move(columns)), std::move(rows));
}

tabular::Dataset inject_missing(const tabular::Dataset& ds, double rate, std::uint64_t seed)
{
    if (!(rate >= 0.0 && rate <= 1.0))
        invalid("missing rate must lie in [0, 1]");
    std::vector<bool> eligible;
    for (const auto& c : ds.schema().columns())
        eligible.push_back(c.is_feature());
    Rng rng(seed);
    auto rows = ds.rows();
    for (auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            if (eligible[c] && rng.uniform() < rate)
                row[c].reset();
    return ds.with_rows(std::move(rows));
}

} // namespace enroll::cohortsynth
