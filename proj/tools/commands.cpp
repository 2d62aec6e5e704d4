#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "ldscore/adversarial.hpp"
#include "ldscore/analysis.hpp"
#include "ldscore/error.hpp"
#include "ldscore/fusion.hpp"
#include "ldscore/stylometry.hpp"
#include "ldscore/synthetic.hpp"

namespace ldscore::cli {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kGroupByHelp = "Grouping key: source, domain, variant, id or temperature";

ordered_json distribution_array(const chardist::LetterDistribution& d) {
    ordered_json arr = ordered_json::array();
    for (double v : d.p) arr.push_back(v);
    return arr;
}

std::string matrix_csv(const std::vector<std::string>& labels, const std::vector<std::vector<double>>& m) {
    std::ostringstream os;
    os << "label";
    for (const auto& l : labels) os << ',' << csv_field(l);
    os << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        os << csv_field(labels[i]);
        for (double v : m[i]) os << ',' << format_double(v);
        os << '\n';
    }
    return os.str();
}

// Samples matching --reference-filter form the reference pool; they are
// excluded from the evaluated pool.
struct ReferenceSplit {
    fusion::ReferenceDistribution reference;
    std::vector<std::size_t> reference_indices;
    std::vector<std::size_t> pool;
};

ReferenceSplit split_reference(const std::vector<corpus::TextSample>& samples, const corpus::SampleFilter& filter,
                               const std::vector<std::string>& reference_filter) {
    if (reference_filter.empty()) throw ValidationError("--reference-filter is required");
    const auto ref_filter = corpus::SampleFilter::parse(reference_filter);
    ReferenceSplit out;
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (ref_filter.matches(samples[i])) {
            out.reference_indices.push_back(i);
            texts.push_back(samples[i].text);
        } else if (filter.matches(samples[i])) {
            out.pool.push_back(i);
        }
    }
    if (texts.empty()) throw ValidationError("reference filter matched no samples");
    try {
        out.reference = fusion::build_reference(texts);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("reference pool: ") + e.what());
    }
    if (out.pool.empty()) throw ValidationError("no samples matched");
    return out;
}

double signed_score(double raw, const std::string& polarity) {
    if (polarity == "higher-is-ai") return raw;
    if (polarity == "lower-is-ai") return -raw;
    throw ValidationError("--polarity must be 'higher-is-ai' or 'lower-is-ai'");
}

std::optional<analysis::DomainSkew> parse_skew(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0)
        throw ValidationError("--skew must look like LETTERS:BOOST, e.g. bcdfgmpw:4");
    analysis::DomainSkew skew;
    skew.focus_letters = spec.substr(0, colon);
    try {
        std::size_t used = 0;
        skew.boost = std::stod(spec.substr(colon + 1), &used);
        if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ValidationError("--skew boost is not a number");
    }
    return skew;
}

// --- dist / matrix / separation / dendro / pca -----------------------------

struct GroupingOptions {
    std::string group_by = "source";
    std::string pooling = "pooled";
};

void add_grouping(CLI::App* sub, GroupingOptions& opts) {
    sub->add_option("--group-by", opts.group_by, std::string(kGroupByHelp))->capture_default_str();
    sub->add_option("--pooling", opts.pooling, "Group distribution: pooled or per-sample-mean")->capture_default_str();
}

std::map<std::string, chardist::LetterDistribution> load_group_distributions(Context& ctx, const GroupingOptions& o) {
    const auto samples = ctx.load_corpus();
    const auto groups = group_texts(samples, corpus::select(samples, ctx.filter()), o.group_by);
    return group_distributions(groups, o.pooling);
}

Command make_dist(CLI::App& app) {
    auto opts = std::make_shared<GroupingOptions>();
    auto* sub = app.add_subcommand("dist", "Per-group letter distributions (JSON, 26 probabilities a..z)");
    add_grouping(sub, *opts);
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                ordered_json doc = ordered_json::object();
                for (const auto& [key, d] : load_group_distributions(ctx, *opts)) doc[key] = distribution_array(d);
                ctx.write_output(doc.dump(2) + "\n", self);
            }};
}

struct MatrixOptions {
    GroupingOptions grouping;
    std::string level = "letter";
};

Command make_matrix(CLI::App& app) {
    auto opts = std::make_shared<MatrixOptions>();
    auto* sub = app.add_subcommand("matrix", "Pairwise LD-Score (or WD-Score) matrix between groups (CSV)");
    add_grouping(sub, opts->grouping);
    sub->add_option("--level", opts->level, "letter (LD-Score) or word (WD-Score)")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                analysis::DivergenceMatrix m;
                if (opts->level == "letter") {
                    m = analysis::pairwise_matrix(load_group_distributions(ctx, opts->grouping));
                } else if (opts->level == "word") {
                    const auto samples = ctx.load_corpus();
                    const auto groups =
                        group_texts(samples, corpus::select(samples, ctx.filter()), opts->grouping.group_by);
                    std::map<std::string, chardist::WordDistribution> words;
                    for (const auto& [key, texts] : groups.texts) words[key] = chardist::pooled_word_distribution(texts);
                    m = analysis::pairwise_word_matrix(words);
                } else {
                    throw ValidationError("--level must be 'letter' or 'word'");
                }
                ctx.write_output(matrix_csv(m.labels, m.m), self);
            }};
}

struct SeparationOptions {
    GroupingOptions grouping;
    std::vector<std::string> human_labels{"human"};
};

Command make_separation(CLI::App& app) {
    auto opts = std::make_shared<SeparationOptions>();
    auto* sub = app.add_subcommand("separation", "Check max AI-AI < min human-AI over the group matrix (JSON)");
    add_grouping(sub, opts->grouping);
    sub->add_option("--human-label", opts->human_labels, "Group label(s) treated as human")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto m = analysis::pairwise_matrix(load_group_distributions(ctx, opts->grouping));
                const std::set<std::string> humans(opts->human_labels.begin(), opts->human_labels.end());
                const auto r = analysis::separation_report(m, humans);
                ordered_json doc;
                doc["max_ai_ai"] = r.max_ai_ai;
                doc["min_human_ai"] = r.min_human_ai;
                doc["holds"] = r.holds;
                doc["argmax_pair"] = {r.argmax_pair.first, r.argmax_pair.second};
                doc["argmin_pair"] = {r.argmin_pair.first, r.argmin_pair.second};
                ctx.write_output(doc.dump(2) + "\n", self);
            }};
}

ordered_json dendrogram_json(const analysis::DendrogramNode& node) {
    if (node.is_leaf()) return node.label;
    return ordered_json::array({dendrogram_json(node.children[0]), dendrogram_json(node.children[1]), node.height});
}

Command make_dendro(CLI::App& app) {
    auto opts = std::make_shared<GroupingOptions>();
    auto* sub = app.add_subcommand("dendro", "Average-linkage dendrogram over the LD-Score matrix (JSON nested lists)");
    add_grouping(sub, *opts);
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto m = analysis::pairwise_matrix(load_group_distributions(ctx, *opts));
                ordered_json doc;
                doc["linkage"] = "average";
                doc["tree"] = dendrogram_json(analysis::agglomerative_cluster(m));
                ctx.write_output(doc.dump(2) + "\n", self);
            }};
}

struct PcaOptions {
    GroupingOptions grouping;
    std::size_t k = 2;
};

Command make_pca(CLI::App& app) {
    auto opts = std::make_shared<PcaOptions>();
    auto* sub = app.add_subcommand("pca", "PCA of group letter distributions (CSV coordinates)");
    add_grouping(sub, opts->grouping);
    sub->add_option("--k", opts->k, "Number of components")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto groups = load_group_distributions(ctx, opts->grouping);
                std::vector<std::string> labels;
                std::vector<chardist::LetterDistribution> dists;
                for (const auto& [key, d] : groups) {
                    labels.push_back(key);
                    dists.push_back(d);
                }
                const auto r = analysis::pca(dists, opts->k);
                std::ostringstream os;
                os << "# explained_variance_ratio";
                for (double v : r.explained_variance_ratio) os << ',' << format_double(v);
                os << "\ngroup";
                for (std::size_t c = 0; c < opts->k; ++c) os << ",pc" << (c + 1);
                os << '\n';
                for (std::size_t i = 0; i < labels.size(); ++i) {
                    os << csv_field(labels[i]);
                    for (double v : r.coordinates[i]) os << ',' << format_double(v);
                    os << '\n';
                }
                ctx.write_output(os.str(), self);
            }};
}

// --- score / corr ----------------------------------------------------------

struct ScoreOptions {
    std::vector<std::string> reference_filter;
    std::string detector_name = "ld";
};

Command make_score(CLI::App& app) {
    auto opts = std::make_shared<ScoreOptions>();
    auto* sub = app.add_subcommand("score", "LD-Score of each sample against a pooled reference (score CSV)");
    sub->add_option("--reference-filter", opts->reference_filter, "key=value selecting the reference pool")
        ->required();
    sub->add_option("--detector-name", opts->detector_name, "Detector column value")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto samples = ctx.load_corpus();
                const auto ref = split_reference(samples, ctx.filter(), opts->reference_filter);
                std::ostringstream os;
                os << "sample_id,detector,score\n";
                for (auto i : ref.pool) {
                    const auto f = fusion::featurize(samples[i], 0.0, ref.reference);
                    os << csv_field(samples[i].id) << ',' << csv_field(opts->detector_name) << ','
                       << format_double(f.ld_to_reference) << '\n';
                }
                ctx.write_output(os.str(), self);
            }};
}

struct CorrOptions {
    std::vector<std::string> reference_filter;
};

Command make_corr(CLI::App& app) {
    auto opts = std::make_shared<CorrOptions>();
    auto* sub = app.add_subcommand("corr", "Pearson correlation matrix between detector signals (CSV)");
    sub->add_option("--reference-filter", opts->reference_filter,
                    "With --corpus: add an 'ld' signal against this reference pool");
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto table = ctx.load_scores();
                const auto detectors = table.detectors();
                if (detectors.empty()) throw ValidationError("score files contain no records");
                auto ids = table.sample_ids(detectors.front());
                std::sort(ids.begin(), ids.end());
                for (const auto& d : detectors) {
                    auto these = table.sample_ids(d);
                    std::sort(these.begin(), these.end());
                    if (these != ids) {
                        throw ValidationError("signals misaligned: detector '" + d + "' covers different sample ids than '" +
                                              detectors.front() + "'");
                    }
                }
                // The LD signal is only defined outside the reference pool; those ids are dropped from every signal.
                std::vector<double> ld_values;
                if (!opts->reference_filter.empty()) {
                    const auto samples = ctx.load_corpus();
                    const auto ref = split_reference(samples, corpus::SampleFilter{}, opts->reference_filter);
                    std::set<std::string> reference_ids;
                    for (auto i : ref.reference_indices) reference_ids.insert(samples[i].id);
                    std::map<std::string, std::size_t> by_id;
                    for (auto i : ref.pool) by_id[samples[i].id] = i;
                    std::vector<std::string> kept;
                    std::size_t dropped = 0;
                    for (const auto& id : ids) {
                        if (reference_ids.count(id)) {
                            ++dropped;
                            continue;
                        }
                        const auto it = by_id.find(id);
                        if (it == by_id.end())
                            throw ValidationError("signals misaligned: sample '" + id + "' is not in the corpus");
                        kept.push_back(id);
                        ld_values.push_back(fusion::featurize(samples[it->second], 0.0, ref.reference).ld_to_reference);
                    }
                    ids = std::move(kept);
                    ctx.note("reference_ids_excluded", dropped);
                }
                std::vector<analysis::Signal> signals;
                for (const auto& d : detectors) {
                    analysis::Signal s{d, ids, {}};
                    for (const auto& id : ids) s.values.push_back(*table.find(id, d));
                    signals.push_back(std::move(s));
                }
                if (!opts->reference_filter.empty()) signals.push_back({"ld", ids, ld_values});
                const auto m = analysis::correlation_matrix(signals);
                ctx.write_output(matrix_csv(m.labels, m.m), self);
            }};
}

// --- stylo / ngram ---------------------------------------------------------

struct StyloOptions {
    bool classify = false;
    std::vector<std::string> reference_filter;
    double train_fraction = 0.5;
};

std::vector<std::pair<std::string, double>> profile_fields(const stylometry::StylometricProfile& p) {
    return {{"words", static_cast<double>(p.words)},
            {"sentences", static_cast<double>(p.sentences)},
            {"syllables", static_cast<double>(p.syllables)},
            {"fkgl", p.fkgl},
            {"lds", p.lds},
            {"commas", static_cast<double>(p.commas)},
            {"dots", static_cast<double>(p.dots)},
            {"punctuation_total", static_cast<double>(p.punctuation_total)},
            {"numerals", static_cast<double>(p.numerals)},
            {"words_per_sentence", p.words_per_sentence},
            {"ttr_lemmas_proxy", p.ttr_lemmas_proxy}};
}

Command make_stylo(CLI::App& app) {
    auto opts = std::make_shared<StyloOptions>();
    auto* sub = app.add_subcommand("stylo", "Per-sample stylometric profiles, or per-feature F1 with --classify (CSV)");
    sub->add_flag("--classify", opts->classify, "Single-threshold F1 per feature (human vs ai)");
    sub->add_option("--reference-filter", opts->reference_filter,
                    "With --classify: add an LD-Score feature against this reference pool");
    sub->add_option("--train-fraction", opts->train_fraction, "With --classify: per-class training fraction")
        ->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto samples = ctx.load_corpus();
                std::vector<std::size_t> pool;
                std::optional<fusion::ReferenceDistribution> reference;
                if (!opts->reference_filter.empty()) {
                    auto ref = split_reference(samples, ctx.filter(), opts->reference_filter);
                    pool = std::move(ref.pool);
                    reference = ref.reference;
                } else {
                    pool = corpus::select(samples, ctx.filter());
                }
                if (pool.empty()) throw ValidationError("no samples matched");

                std::ostringstream os;
                if (!opts->classify) {
                    os << "id," << stylometry::kProfileColumns << '\n';
                    for (auto i : pool) {
                        os << csv_field(samples[i].id);
                        for (const auto& [_, v] : profile_fields(stylometry::surface_features(samples[i].text)))
                            os << ',' << format_double(v);
                        os << '\n';
                    }
                    ctx.write_output(os.str(), self);
                    return;
                }

                std::vector<stylometry::FeatureColumn> columns;
                std::vector<int> labels;
                for (auto i : pool) {
                    const auto fields = profile_fields(stylometry::surface_features(samples[i].text));
                    if (columns.empty()) {
                        for (const auto& [name, _] : fields) columns.push_back({name, {}});
                        if (reference) columns.push_back({"ld_score", {}});
                    }
                    for (std::size_t k = 0; k < fields.size(); ++k) columns[k].values.push_back(fields[k].second);
                    if (reference)
                        columns.back().values.push_back(
                            fusion::featurize(samples[i], 0.0, *reference).ld_to_reference);
                    labels.push_back(samples[i].is_human() ? -1 : 1);
                }
                const auto results = stylometry::feature_classifier_eval(columns, labels, ctx.globals().seed,
                                                                         opts->train_fraction);
                os << "feature,f1,threshold,polarity\n";
                for (const auto& r : results) {
                    os << r.name << ',' << format_double(r.f1) << ',' << format_double(r.threshold) << ','
                       << (r.higher_is_positive ? "higher-is-ai" : "lower-is-ai") << '\n';
                }
                ctx.write_output(os.str(), self);
            }};
}

struct NgramOptions {
    unsigned n = 1;
    std::string group_by = "source";
};

Command make_ngram(CLI::App& app) {
    auto opts = std::make_shared<NgramOptions>();
    auto* sub = app.add_subcommand("ngram", "Unique/total word n-gram counts per group (CSV)");
    sub->add_option("--n", opts->n, "n-gram order (1 or 2)")->capture_default_str();
    sub->add_option("--group-by", opts->group_by, std::string(kGroupByHelp))->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto samples = ctx.load_corpus();
                const auto groups = group_texts(samples, corpus::select(samples, ctx.filter()), opts->group_by);
                std::ostringstream os;
                os << "group,n,unique_count,total_count\n";
                for (const auto& [key, texts] : groups.texts) {
                    const auto r = stylometry::ngram_report(texts, opts->n);
                    os << csv_field(key) << ',' << r.n << ',' << r.unique_count << ',' << r.total_count << '\n';
                }
                ctx.write_output(os.str(), self);
            }};
}

// --- fuse-train / fuse-eval ------------------------------------------------

struct FuseOptions {
    std::string detector;
    std::string polarity = "higher-is-ai";
    std::vector<std::string> reference_filter;
    std::size_t n_train_human = 50;
    std::size_t n_train_ai = 50;
    double c = 1.0;
    double gamma = 1.0;
    std::size_t seeds = 1;
};

void add_fuse_options(CLI::App* sub, FuseOptions& o) {
    sub->add_option("--detector", o.detector, "Base detector name in the score files")->required();
    sub->add_option("--polarity", o.polarity, "higher-is-ai or lower-is-ai for the raw detector score")
        ->capture_default_str();
    sub->add_option("--reference-filter", o.reference_filter, "key=value selecting the reference model pool")
        ->required();
    sub->add_option("--n-train-human", o.n_train_human, "Human training samples")->capture_default_str();
    sub->add_option("--n-train-ai", o.n_train_ai, "AI training samples")->capture_default_str();
    sub->add_option("--c", o.c, "SVM box constraint")->capture_default_str();
    sub->add_option("--gamma", o.gamma, "RBF kernel width on standardized features")->capture_default_str();
}

struct FusionData {
    std::vector<corpus::TextSample> pool;  // evaluated samples (reference pool removed)
    corpus::ScoreTable scores;
    fusion::ReferenceDistribution reference;
    std::vector<fusion::FeatureVector> features;  // aligned with pool, polarity applied
    std::vector<int> labels;
};

FusionData prepare_fusion(Context& ctx, const FuseOptions& o) {
    const auto samples = ctx.load_corpus();
    FusionData data;
    data.scores = ctx.load_scores();
    auto ref = split_reference(samples, ctx.filter(), o.reference_filter);
    data.reference = ref.reference;
    for (auto i : ref.pool) {
        const auto score = data.scores.find(samples[i].id, o.detector);
        if (!score)
            throw ValidationError("sample '" + samples[i].id + "' has no score for detector '" + o.detector + "'");
        data.features.push_back(fusion::featurize(samples[i], signed_score(*score, o.polarity), data.reference));
        data.labels.push_back(samples[i].is_human() ? -1 : 1);
        data.pool.push_back(samples[i]);
    }
    return data;
}

corpus::Split split_pool(const FusionData& data, const FuseOptions& o, std::uint64_t seed) {
    corpus::SplitSpec spec;
    spec.seed = seed;
    spec.n_train_human = o.n_train_human;
    spec.n_train_ai = o.n_train_ai;
    spec.detectors = {o.detector};
    return corpus::split(data.pool, data.scores, spec);
}

template <class T>
std::vector<T> gather(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

Command make_fuse_train(CLI::App& app) {
    auto opts = std::make_shared<FuseOptions>();
    auto* sub = app.add_subcommand("fuse-train", "Train the (detector score, LD-Score) RBF-SVM (model JSON)");
    add_fuse_options(sub, *opts);
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto data = prepare_fusion(ctx, *opts);
                const auto split = split_pool(data, *opts, ctx.globals().seed);
                const auto features = gather(data.features, split.train);
                const auto labels = gather(data.labels, split.train);
                const auto model = fusion::train(features, labels, {opts->c, opts->gamma});
                auto doc = fusion::to_json(model);
                doc["featurization"] = {{"detector", opts->detector},
                                        {"polarity", opts->polarity},
                                        {"reference", distribution_array(data.reference.pooled)}};
                std::vector<std::string> train_ids;
                for (auto i : split.train) train_ids.push_back(data.pool[i].id);
                doc["train_ids"] = train_ids;
                ctx.write_output(doc.dump(2) + "\n", self);
            }};
}

Command make_fuse_eval(CLI::App& app) {
    auto opts = std::make_shared<FuseOptions>();
    auto* sub = app.add_subcommand(
        "fuse-eval", "Baseline vs LD-augmented detection metrics over one or more seeds (CSV)");
    add_fuse_options(sub, *opts);
    sub->add_option("--seeds", opts->seeds, "Number of consecutive seeds starting at --seed")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                if (opts->seeds == 0) throw ValidationError("--seeds must be >= 1");
                const auto data = prepare_fusion(ctx, *opts);
                const auto filter = ctx.filter();
                const std::string key_prefix = csv_field(opts->detector) + ',' + csv_field(filter.describe("domain")) +
                                               ',' + csv_field(filter.describe("temperature")) + ',' +
                                               csv_field(filter.describe("variant"));
                constexpr std::size_t kCols = 8;
                std::vector<std::array<double, kCols>> rows;
                std::ostringstream os;
                os << "detector,domain,temperature,variant,seed,"
                      "baseline_auroc,baseline_f1,baseline_tpr,baseline_fpr,"
                      "augmented_auroc,augmented_f1,augmented_tpr,augmented_fpr,n_pos,n_neg\n";
                std::size_t n_pos = 0;
                std::size_t n_neg = 0;
                for (std::size_t s = 0; s < opts->seeds; ++s) {
                    const std::uint64_t seed = ctx.globals().seed + s;
                    const auto split = split_pool(data, *opts, seed);
                    const auto train_f = gather(data.features, split.train);
                    const auto train_y = gather(data.labels, split.train);
                    const auto eval_f = gather(data.features, split.eval);
                    const auto eval_y = gather(data.labels, split.eval);

                    std::vector<double> train_raw;
                    std::vector<double> eval_raw;
                    for (const auto& f : train_f) train_raw.push_back(f.base_score);
                    for (const auto& f : eval_f) eval_raw.push_back(f.base_score);
                    const auto baseline =
                        fusion::evaluate(eval_raw, eval_y, fusion::calibrate_threshold(train_raw, train_y));
                    const auto model = fusion::train(train_f, train_y, {opts->c, opts->gamma});
                    const auto augmented = fusion::evaluate(model, eval_f, eval_y);
                    n_pos = augmented.n_pos;
                    n_neg = augmented.n_neg;

                    const std::array<double, kCols> row{baseline.auroc, baseline.f1, baseline.tpr, baseline.fpr,
                                                        augmented.auroc, augmented.f1, augmented.tpr, augmented.fpr};
                    rows.push_back(row);
                    os << key_prefix << ',' << seed;
                    for (double v : row) os << ',' << format_double(v);
                    os << ',' << n_pos << ',' << n_neg << '\n';
                }
                std::array<double, kCols> mean{};
                std::array<double, kCols> stddev{};
                for (const auto& r : rows)
                    for (std::size_t k = 0; k < kCols; ++k) mean[k] += r[k] / static_cast<double>(rows.size());
                if (rows.size() > 1) {
                    for (const auto& r : rows)
                        for (std::size_t k = 0; k < kCols; ++k) stddev[k] += (r[k] - mean[k]) * (r[k] - mean[k]);
                    for (auto& v : stddev) v = std::sqrt(v / static_cast<double>(rows.size() - 1));
                }
                for (const auto& [label, values] : {std::pair{"mean", mean}, std::pair{"std", stddev}}) {
                    os << key_prefix << ',' << label;
                    for (double v : values) os << ',' << format_double(v);
                    os << ',' << n_pos << ',' << n_neg << '\n';
                }
                ctx.write_output(os.str(), self);
            }};
}

// --- adv -------------------------------------------------------------------

struct AdvOptions {
    std::string pairs;
    std::string group_by = "letter";
};

Command make_adv(CLI::App& app) {
    auto opts = std::make_shared<AdvOptions>();
    auto* sub = app.add_subcommand("adv", "Letter-avoidance attack effectiveness per model, letter or attack (CSV)");
    sub->add_option("--pairs", opts->pairs, "CSV with header original_id,adversarial_id")->required();
    sub->add_option("--group-by", opts->group_by, "model, letter or attack")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                const auto group_by = adversarial::parse_group_by(opts->group_by);
                if (!group_by) throw ValidationError("--group-by must be model, letter or attack");
                const auto samples = ctx.load_corpus();
                std::map<std::string, std::size_t> by_id;
                for (std::size_t i = 0; i < samples.size(); ++i) by_id[samples[i].id] = i;

                std::istringstream in(ctx.read_input(opts->pairs));
                std::string line;
                std::size_t line_no = 0;
                bool header = false;
                std::set<std::string> matched;
                std::set<std::pair<std::string, std::string>> seen_keys;
                std::vector<adversarial::AttackOutcome> outcomes;
                const auto filter = ctx.filter();
                while (std::getline(in, line)) {
                    ++line_no;
                    if (!line.empty() && line.back() == '\r') line.pop_back();
                    if (line.empty()) continue;
                    const auto fields = split_list(line, ',');
                    if (!header) {
                        if (fields != std::vector<std::string>{"original_id", "adversarial_id"})
                            throw ValidationError(opts->pairs + ": expected header 'original_id,adversarial_id'");
                        header = true;
                        continue;
                    }
                    if (fields.size() != 2)
                        throw ValidationError(opts->pairs + ": line " + std::to_string(line_no) + ": expected 2 fields");
                    const auto orig = by_id.find(fields[0]);
                    const auto adv = by_id.find(fields[1]);
                    if (orig == by_id.end() || adv == by_id.end())
                        throw ValidationError(opts->pairs + ": line " + std::to_string(line_no) + ": unknown sample id");
                    const auto& a = samples[adv->second];
                    if (a.variant != corpus::Variant::avoid_one && a.variant != corpus::Variant::avoid_two)
                        throw ValidationError(opts->pairs + ": line " + std::to_string(line_no) + ": '" + a.id +
                                              "' is not an avoid_one/avoid_two sample");
                    if (!seen_keys.insert({fields[0], std::string(corpus::to_string(a.variant))}).second)
                        throw ValidationError(opts->pairs + ": line " + std::to_string(line_no) +
                                              ": duplicate (original, variant) pair");
                    matched.insert(a.id);
                    if (!filter.matches(a)) continue;
                    outcomes.push_back(adversarial::assess(a.id, a.source, a.variant, samples[orig->second].text,
                                                           a.text, a.avoided_letters));
                }
                if (!header) throw ValidationError(opts->pairs + ": empty pair file");
                std::vector<std::string> unmatched;
                for (const auto& s : samples) {
                    const bool adversarial_row =
                        s.variant == corpus::Variant::avoid_one || s.variant == corpus::Variant::avoid_two;
                    if (adversarial_row && filter.matches(s) && !matched.count(s.id)) unmatched.push_back(s.id);
                }
                if (!unmatched.empty()) {
                    std::cerr << "warning: " << unmatched.size()
                              << " adversarial sample(s) have no original in the pair file (listed in the manifest)\n";
                }
                ctx.note("unmatched_adversarial", unmatched);
                if (outcomes.empty()) throw ValidationError("no samples matched");

                std::ostringstream os;
                os << "group_key,n,mean_percent_reduction,full_avoidance_rate\n";
                for (const auto& r : adversarial::aggregate_report(outcomes, *group_by)) {
                    os << csv_field(r.key) << ',' << r.n << ','
                       << (std::isnan(r.mean_percent_reduction) ? "" : format_double(r.mean_percent_reduction)) << ','
                       << format_double(r.full_avoidance_rate) << '\n';
                }
                ctx.write_output(os.str(), self);
            }};
}

// --- simulate / synth ------------------------------------------------------

struct SimulateOptions {
    std::string sizes = "100,1000,10000,100000,1000000";
    std::string skew;
    unsigned replicates = 4;
    std::size_t vocab_size = 5000;
    double zipf = 1.0;
};

Command make_simulate(CLI::App& app) {
    auto opts = std::make_shared<SimulateOptions>();
    auto* sub = app.add_subcommand("simulate", "Letter-level convergence of sampled word streams (JSON curve)");
    sub->add_option("--sizes", opts->sizes, "Comma-separated, strictly increasing sample sizes")->capture_default_str();
    sub->add_option("--skew", opts->skew, "Domain skew LETTERS:BOOST applied to the sampling distribution");
    sub->add_option("--replicates", opts->replicates, "Draws averaged per size")->capture_default_str();
    sub->add_option("--vocab-size", opts->vocab_size, "Synthetic vocabulary size (without --corpus)")
        ->capture_default_str();
    sub->add_option("--zipf", opts->zipf, "Synthetic vocabulary Zipf exponent")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                std::vector<std::uint64_t> sizes;
                for (const auto& s : split_list(opts->sizes, ',')) {
                    try {
                        std::size_t used = 0;
                        sizes.push_back(std::stoull(s, &used));
                        if (used != s.size()) throw std::invalid_argument("trailing");
                    } catch (const std::exception&) {
                        throw ValidationError("--sizes: '" + s + "' is not a count");
                    }
                }
                chardist::WordDistribution reference;
                std::string reference_kind;
                if (!ctx.globals().corpus.empty()) {
                    const auto samples = ctx.load_corpus();
                    std::vector<std::string> texts;
                    for (auto i : corpus::select(samples, ctx.filter())) texts.push_back(samples[i].text);
                    if (texts.empty()) throw ValidationError("no samples matched");
                    reference = chardist::pooled_word_distribution(texts);
                    reference_kind = "corpus";
                } else {
                    synthetic::VocabularyOptions vocab;
                    vocab.size = opts->vocab_size;
                    vocab.zipf_exponent = opts->zipf;
                    reference = synthetic::synthetic_vocabulary(vocab, SplitMix64::stream(ctx.globals().seed, 1u << 20).next());
                    reference_kind = "synthetic";
                }
                const auto skew = parse_skew(opts->skew);
                const auto curve =
                    analysis::convergence_simulation(reference, sizes, skew, ctx.globals().seed, opts->replicates);
                ordered_json doc;
                doc["reference"] = reference_kind;
                doc["vocabulary_size"] = reference.p.size();
                doc["skew"] = skew ? ordered_json{{"focus_letters", skew->focus_letters}, {"boost", skew->boost}}
                                   : ordered_json(nullptr);
                doc["replicates"] = opts->replicates;
                doc["sample_sizes"] = curve.sample_sizes;
                doc["errors"] = curve.errors;
                doc["fitted_slope"] = curve.fitted_slope;
                doc["intercept"] = curve.intercept;
                doc["residual_rms"] = curve.residual_rms;
                // Order-of-magnitude exposure figures motivating the simulation (not computed here).
                doc["exposure_scales"] = {{"ai_training_words", 7.5e11},
                                          {"human_lifetime_words", 1.67e9},
                                          {"exposure_ratio", 300},
                                          {"error_ratio", 17}};
                ctx.write_output(doc.dump(2) + "\n", self);
            }};
}

struct SynthOptions {
    synthetic::WallOptions wall;
    std::string skew = "bcdfgmpw:4";
};

Command make_synth(CLI::App& app) {
    auto opts = std::make_shared<SynthOptions>();
    auto* sub = app.add_subcommand("synth", "Write a synthetic corpus: AI sources from one vocabulary, human from a skewed one");
    sub->add_option("--ai-sources", opts->wall.ai_sources, "Number of AI sources")->capture_default_str();
    sub->add_option("--samples-per-source", opts->wall.samples_per_source, "Samples per source")->capture_default_str();
    sub->add_option("--words-per-sample", opts->wall.words_per_sample, "Words per sample")->capture_default_str();
    sub->add_option("--vocab-size", opts->wall.vocabulary.size, "Vocabulary size")->capture_default_str();
    sub->add_option("--skew", opts->skew, "Human domain skew LETTERS:BOOST")->capture_default_str();
    return {sub, [opts](Context& ctx, const CLI::App& self) {
                auto wall = opts->wall;
                wall.skew = *parse_skew(opts->skew);
                std::ostringstream os;
                corpus::write_corpus(os, synthetic::wall_corpus(wall, ctx.globals().seed));
                ctx.write_output(os.str(), self);
            }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
    return {make_dist(app),      make_score(app),     make_matrix(app),     make_separation(app), make_dendro(app),
            make_pca(app),       make_corr(app),      make_stylo(app),      make_ngram(app),      make_fuse_train(app),
            make_fuse_eval(app), make_adv(app),       make_simulate(app),   make_synth(app)};
}

}  // namespace ldscore::cli
