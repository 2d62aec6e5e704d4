#pragma once
// Shared plumbing for the ldscore subcommands: global flags, input
// digests, guarded output writing and run manifests.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldscore/chardist.hpp"
#include "ldscore/corpus.hpp"

namespace ldscore::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct GlobalOptions {
    std::string corpus;
    std::vector<std::string> scores;
    std::uint64_t seed = 0;
    std::string out;
    bool force = false;
    std::vector<std::string> filters;
};

class Context {
public:
    Context(CLI::App& app, GlobalOptions& globals) : app_(app), globals_(globals) {}

    GlobalOptions& globals() { return globals_; }

    // Reads the file and records its SHA-256 for the manifest.
    std::string read_input(const std::string& path);

    std::vector<corpus::TextSample> load_corpus();
    corpus::ScoreTable load_scores();
    corpus::SampleFilter filter() const { return corpus::SampleFilter::parse(globals_.filters); }

    void note(const std::string& key, nlohmann::ordered_json value) { extras_[key] = std::move(value); }

    // Writes `content` to --out and the run manifest to --out.manifest.json.
    // Refuses to replace either file without --force.
    void write_output(const std::string& content, const CLI::App& command);

private:
    nlohmann::ordered_json manifest(const CLI::App& command) const;

    CLI::App& app_;
    GlobalOptions& globals_;
    std::map<std::string, std::string> digests_;
    nlohmann::ordered_json extras_ = nlohmann::ordered_json::object();
};

std::string sha256_hex(std::string_view bytes);

// Shortest round-trip decimal representation.
std::string format_double(double v);

std::string csv_field(std::string_view s);

// Group key of a sample: source, domain, variant, id or temperature.
std::string group_key(const corpus::TextSample& s, const std::string& group_by);

struct Groups {
    std::map<std::string, std::vector<std::string>> texts;
};

Groups group_texts(const std::vector<corpus::TextSample>& samples, const std::vector<std::size_t>& indices,
                   const std::string& group_by);

// "pooled" (sum raw counts) or "per-sample-mean".
std::map<std::string, chardist::LetterDistribution> group_distributions(const Groups& groups,
                                                                        const std::string& pooling);

std::vector<std::string> split_list(const std::string& s, char sep);

}  // namespace ldscore::cli
