#pragma once
// Corpus ingestion, score files and deterministic train/eval splitting.
//
// Corpus file: UTF-8, one JSON object per line:
//   {"id": "q1-h0", "text": "...", "domain": "finance", "source": "human",
//    "temperature": null, "variant": "original", "avoided_letters": []}
// `temperature` and `avoided_letters` may be omitted (null / empty).
// Blank lines are skipped; unknown keys are rejected.
//
// Score file: UTF-8 CSV with header `sample_id,detector,score`.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ldscore::corpus {

enum class Variant { original, paraphrase, avoid_one, avoid_two };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view s);

inline constexpr std::string_view kHumanSource = "human";

struct TextSample {
    std::string id;
    std::string text;
    std::string domain;
    std::string source;
    std::optional<double> temperature;
    Variant variant = Variant::original;
    std::string avoided_letters;  // sorted, distinct, a-z

    bool is_human() const { return source == kHumanSource; }
};

// Throws ValidationError describing the first violated invariant.
void validate(const TextSample& s);

std::vector<TextSample> load_corpus(const std::string& path);
std::vector<TextSample> parse_corpus(std::istream& in);

void write_corpus(std::ostream& out, const std::vector<TextSample>& samples);
std::string to_json_line(const TextSample& s);

struct ScoreRecord {
    std::string sample_id;
    std::string detector;
    double score = 0.0;
};

std::vector<ScoreRecord> load_scores(const std::string& path);
std::vector<ScoreRecord> parse_scores(std::istream& in);

// (sample_id, detector) -> score lookup.
class ScoreTable {
public:
    ScoreTable() = default;
    explicit ScoreTable(const std::vector<ScoreRecord>& records);

    // Rejects a duplicate key.
    void add(const ScoreRecord& r);
    std::optional<double> find(std::string_view sample_id, std::string_view detector) const;
    std::vector<std::string> detectors() const;
    // Sample ids scored by `detector`, in insertion order.
    std::vector<std::string> sample_ids(std::string_view detector) const;
    std::size_t size() const { return records_.size(); }

private:
    std::vector<ScoreRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Conjunction over keys, disjunction over values of the same key.
// Keys: id, domain, source, variant, temperature, class (human|ai).
// temperature accepts a decimal or "none".
class SampleFilter {
public:
    SampleFilter() = default;

    // Parses "key=value" expressions.
    static SampleFilter parse(const std::vector<std::string>& expressions);

    void allow(const std::string& key, const std::string& value);
    bool matches(const TextSample& s) const;
    bool empty() const { return allowed_.empty(); }
    // Value when `key` is pinned to exactly one value, else "all".
    std::string describe(const std::string& key) const;

private:
    std::map<std::string, std::set<std::string>> allowed_;
};

std::vector<std::size_t> select(const std::vector<TextSample>& samples, const SampleFilter& filter);

struct SplitSpec {
    std::uint64_t seed = 0;
    std::size_t n_train_human = 0;
    std::size_t n_train_ai = 0;
    SampleFilter filter;
    // Every selected sample must carry a score for each of these.
    std::vector<std::string> detectors;
};

// Indices into the sample vector, ascending.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> eval;
};

// Filters, checks score coverage, then shuffles each class with its own
// stream (human: stream(seed, 0), ai: stream(seed, 1)) and takes the first
// n_train_* of each. Everything else that passed the filter is eval.
Split split(const std::vector<TextSample>& samples, const ScoreTable& scores, const SplitSpec& spec);

}  // namespace ldscore::corpus
