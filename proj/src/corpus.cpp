#include "ldscore/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "ldscore/error.hpp"
#include "ldscore/rng.hpp"

namespace ldscore::corpus {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kKeys[] = {"id",          "text",    "domain",         "source",
                                      "temperature", "variant", "avoided_letters"};

[[noreturn]] void fail_line(std::size_t line, std::string_view field, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ": field '" << field << "': " << what;
    throw ValidationError(os.str());
}

std::string require_string(const json& obj, std::string_view key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail_line(line, key, "missing");
    if (!it->is_string()) fail_line(line, key, "expected a string");
    return it->get<std::string>();
}

std::optional<double> parse_decimal(std::string_view s) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::string score_key(std::string_view sample_id, std::string_view detector) {
    std::string key(sample_id);
    key.push_back('\x1f');
    key.append(detector);
    return key;
}

}  // namespace

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::original: return "original";
        case Variant::paraphrase: return "paraphrase";
        case Variant::avoid_one: return "avoid_one";
        case Variant::avoid_two: return "avoid_two";
    }
    return "original";
}

std::optional<Variant> parse_variant(std::string_view s) {
    if (s == "original") return Variant::original;
    if (s == "paraphrase") return Variant::paraphrase;
    if (s == "avoid_one") return Variant::avoid_one;
    if (s == "avoid_two") return Variant::avoid_two;
    return std::nullopt;
}

void validate(const TextSample& s) {
    if (s.id.empty()) throw ValidationError("sample id must be nonempty");
    const auto ctx = "sample '" + s.id + "': ";
    if (s.temperature) {
        if (!std::isfinite(*s.temperature) || *s.temperature < 0.0 || *s.temperature > 1.0)
            throw ValidationError(ctx + "temperature must lie in [0,1]");
        if (s.is_human()) throw ValidationError(ctx + "human samples carry no temperature");
    }
    for (std::size_t i = 0; i < s.avoided_letters.size(); ++i) {
        const char c = s.avoided_letters[i];
        if (c < 'a' || c > 'z') throw ValidationError(ctx + "avoided letters must be lowercase a-z");
        if (i > 0 && s.avoided_letters[i - 1] >= c)
            throw ValidationError(ctx + "avoided letters must be distinct");
    }
    std::size_t expected = 0;
    if (s.variant == Variant::avoid_one) expected = 1;
    if (s.variant == Variant::avoid_two) expected = 2;
    if (s.avoided_letters.size() != expected) {
        throw ValidationError(ctx + "variant '" + std::string(to_string(s.variant)) + "' requires " +
                              std::to_string(expected) + " avoided letter(s), got " +
                              std::to_string(s.avoided_letters.size()));
    }
}

std::vector<TextSample> parse_corpus(std::istream& in) {
    std::vector<TextSample> samples;
    std::unordered_map<std::string, std::size_t> first_line;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty()) continue;
        json obj;
        try {
            obj = json::parse(raw);
        } catch (const json::parse_error& e) {
            fail_line(line, "<record>", std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) fail_line(line, "<record>", "expected a JSON object");
        for (const auto& [key, _] : obj.items()) {
            if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
                fail_line(line, key, "unknown key");
        }

        TextSample s;
        s.id = require_string(obj, "id", line);
        s.text = require_string(obj, "text", line);
        s.domain = require_string(obj, "domain", line);
        s.source = require_string(obj, "source", line);
        const auto variant = parse_variant(require_string(obj, "variant", line));
        if (!variant) fail_line(line, "variant", "expected original|paraphrase|avoid_one|avoid_two");
        s.variant = *variant;

        if (const auto it = obj.find("temperature"); it != obj.end() && !it->is_null()) {
            if (!it->is_number()) fail_line(line, "temperature", "expected a number or null");
            s.temperature = it->get<double>();
        }
        if (const auto it = obj.find("avoided_letters"); it != obj.end()) {
            if (!it->is_array()) fail_line(line, "avoided_letters", "expected an array");
            for (const auto& el : *it) {
                if (!el.is_string() || el.get<std::string>().size() != 1)
                    fail_line(line, "avoided_letters", "expected single-character strings");
                s.avoided_letters.push_back(el.get<std::string>()[0]);
            }
            std::sort(s.avoided_letters.begin(), s.avoided_letters.end());
        }

        try {
            validate(s);
        } catch (const ValidationError& e) {
            fail_line(line, "<record>", e.what());
        }
        const auto [it, inserted] = first_line.emplace(s.id, line);
        if (!inserted) {
            throw ValidationError("duplicate id '" + s.id + "' on lines " + std::to_string(it->second) +
                                  "," + std::to_string(line));
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

std::vector<TextSample> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open corpus file: " + path);
    return parse_corpus(in);
}

std::string to_json_line(const TextSample& s) {
    ordered_json obj;
    obj["id"] = s.id;
    obj["text"] = s.text;
    obj["domain"] = s.domain;
    obj["source"] = s.source;
    obj["temperature"] = s.temperature ? ordered_json(*s.temperature) : ordered_json(nullptr);
    obj["variant"] = to_string(s.variant);
    auto letters = ordered_json::array();
    for (char c : s.avoided_letters) letters.push_back(std::string(1, c));
    obj["avoided_letters"] = std::move(letters);
    return obj.dump();
}

void write_corpus(std::ostream& out, const std::vector<TextSample>& samples) {
    for (const auto& s : samples) out << to_json_line(s) << '\n';
}

std::vector<ScoreRecord> parse_scores(std::istream& in) {
    std::vector<ScoreRecord> records;
    ScoreTable seen;
    std::string raw;
    std::size_t line = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view view = trim(raw);
        if (line == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
        if (view.empty()) continue;
        const auto fields = split_commas(view);
        if (!header_seen) {
            if (fields.size() != 3 || fields[0] != "sample_id" || fields[1] != "detector" ||
                fields[2] != "score") {
                throw ValidationError("line " + std::to_string(line) +
                                      ": expected header 'sample_id,detector,score'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3)
            throw ValidationError("line " + std::to_string(line) + ": expected 3 fields");
        if (fields[0].empty() || fields[1].empty())
            throw ValidationError("line " + std::to_string(line) + ": empty sample_id or detector");
        const auto value = parse_decimal(fields[2]);
        if (!value || !std::isfinite(*value)) {
            throw ValidationError("line " + std::to_string(line) + ": score '" + std::string(fields[2]) +
                                  "' is not a finite decimal");
        }
        ScoreRecord r{std::string(fields[0]), std::string(fields[1]), *value};
        if (seen.find(r.sample_id, r.detector)) {
            throw ValidationError("line " + std::to_string(line) + ": duplicate key (" + r.sample_id + ", " +
                                  r.detector + ")");
        }
        seen.add(r);
        records.push_back(std::move(r));
    }
    if (!header_seen) throw ValidationError("score file is empty; expected header 'sample_id,detector,score'");
    return records;
}

std::vector<ScoreRecord> load_scores(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open score file: " + path);
    return parse_scores(in);
}

ScoreTable::ScoreTable(const std::vector<ScoreRecord>& records) {
    for (const auto& r : records) add(r);
}

void ScoreTable::add(const ScoreRecord& r) {
    if (!std::isfinite(r.score)) throw ValidationError("non-finite score for " + r.sample_id);
    const auto [it, inserted] = index_.emplace(score_key(r.sample_id, r.detector), records_.size());
    if (!inserted) throw ValidationError("duplicate score key (" + r.sample_id + ", " + r.detector + ")");
    records_.push_back(r);
}

std::optional<double> ScoreTable::find(std::string_view sample_id, std::string_view detector) const {
    const auto it = index_.find(score_key(sample_id, detector));
    if (it == index_.end()) return std::nullopt;
    return records_[it->second].score;
}

std::vector<std::string> ScoreTable::detectors() const {
    std::set<std::string> names;
    for (const auto& r : records_) names.insert(r.detector);
    return {names.begin(), names.end()};
}

std::vector<std::string> ScoreTable::sample_ids(std::string_view detector) const {
    std::vector<std::string> ids;
    for (const auto& r : records_) {
        if (r.detector == detector) ids.push_back(r.sample_id);
    }
    return ids;
}

void SampleFilter::allow(const std::string& key, const std::string& value) {
    static const std::set<std::string> known{"id", "domain", "source", "variant", "temperature", "class"};
    if (!known.count(key)) throw ValidationError("unknown filter key '" + key + "'");
    if (key == "variant" && !parse_variant(value))
        throw ValidationError("filter: unknown variant '" + value + "'");
    if (key == "class" && value != "human" && value != "ai")
        throw ValidationError("filter: class must be 'human' or 'ai'");
    if (key == "temperature" && value != "none" && !parse_decimal(value))
        throw ValidationError("filter: temperature must be a decimal or 'none'");
    allowed_[key].insert(value);
}

SampleFilter SampleFilter::parse(const std::vector<std::string>& expressions) {
    SampleFilter f;
    for (const auto& e : expressions) {
        const auto eq = e.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ValidationError("filter '" + e + "' is not of the form key=value");
        f.allow(e.substr(0, eq), e.substr(eq + 1));
    }
    return f;
}

bool SampleFilter::matches(const TextSample& s) const {
    for (const auto& [key, values] : allowed_) {
        bool any = false;
        for (const auto& v : values) {
            if (key == "id") any = s.id == v;
            else if (key == "domain") any = s.domain == v;
            else if (key == "source") any = s.source == v;
            else if (key == "variant") any = to_string(s.variant) == v;
            else if (key == "class") any = (v == "human") == s.is_human();
            else if (key == "temperature") {
                if (v == "none") any = !s.temperature.has_value();
                else any = s.temperature.has_value() && *s.temperature == *parse_decimal(v);
            }
            if (any) break;
        }
        if (!any) return false;
    }
    return true;
}

std::string SampleFilter::describe(const std::string& key) const {
    const auto it = allowed_.find(key);
    if (it == allowed_.end() || it->second.size() != 1) return "all";
    return *it->second.begin();
}

std::vector<std::size_t> select(const std::vector<TextSample>& samples, const SampleFilter& filter) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (filter.matches(samples[i])) out.push_back(i);
    }
    return out;
}

Split split(const std::vector<TextSample>& samples, const ScoreTable& scores, const SplitSpec& spec) {
    const auto selected = select(samples, spec.filter);
    std::vector<std::size_t> human;
    std::vector<std::size_t> ai;
    for (const auto i : selected) {
        for (const auto& d : spec.detectors) {
            if (!scores.find(samples[i].id, d))
                throw ValidationError("sample '" + samples[i].id + "' has no score for detector '" + d + "'");
        }
        (samples[i].is_human() ? human : ai).push_back(i);
    }
    if (human.size() < spec.n_train_human) {
        throw ValidationError("insufficient human samples: " + std::to_string(human.size()) + " < " +
                              std::to_string(spec.n_train_human));
    }
    if (ai.size() < spec.n_train_ai) {
        throw ValidationError("insufficient ai samples: " + std::to_string(ai.size()) + " < " +
                              std::to_string(spec.n_train_ai));
    }

    auto human_rng = SplitMix64::stream(spec.seed, 0);
    auto ai_rng = SplitMix64::stream(spec.seed, 1);
    human_rng.shuffle(human);
    ai_rng.shuffle(ai);

    Split out;
    out.train.insert(out.train.end(), human.begin(), human.begin() + spec.n_train_human);
    out.train.insert(out.train.end(), ai.begin(), ai.begin() + spec.n_train_ai);
    out.eval.insert(out.eval.end(), human.begin() + spec.n_train_human, human.end());
    out.eval.insert(out.eval.end(), ai.begin() + spec.n_train_ai, ai.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.eval.begin(), out.eval.end());
    return out;
}

}  // namespace ldscore::corpus
