#include "cli_support.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "ldscore/error.hpp"

namespace ldscore::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string Context::read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    digests_[path] = sha256_hex(bytes);
    return bytes;
}

std::vector<corpus::TextSample> Context::load_corpus() {
    if (globals_.corpus.empty()) throw ValidationError("--corpus is required");
    std::istringstream in(read_input(globals_.corpus));
    try {
        return corpus::parse_corpus(in);
    } catch (const ValidationError& e) {
        throw ValidationError(globals_.corpus + ": " + e.what());
    }
}

corpus::ScoreTable Context::load_scores() {
    if (globals_.scores.empty()) throw ValidationError("--scores is required");
    corpus::ScoreTable table;
    for (const auto& path : globals_.scores) {
        std::istringstream in(read_input(path));
        try {
            for (const auto& r : corpus::parse_scores(in)) table.add(r);
        } catch (const ValidationError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }
    return table;
}

nlohmann::ordered_json Context::manifest(const CLI::App& command) const {
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    std::map<std::string, nlohmann::ordered_json> sorted;
    const auto collect = [&](const CLI::App& a) {
        for (const CLI::Option* opt : a.get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "help" || name == "version") continue;
            if (opt->get_type_size() == 0) {
                sorted[name] = opt->count() > 0;
            } else if (opt->count() > 0) {
                const auto& results = opt->results();
                if (opt->get_expected_max() > 1 || results.size() > 1) sorted[name] = results;
                else sorted[name] = results.empty() ? std::string() : results.front();
            } else if (!opt->get_default_str().empty()) {
                sorted[name] = opt->get_default_str();
            } else {
                sorted[name] = nullptr;
            }
        }
    };
    collect(app_);
    collect(command);
    for (auto& [k, v] : sorted) flags[k] = v;

    nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : digests_) inputs.push_back({{"path", path}, {"sha256", digest}});

    nlohmann::ordered_json doc;
    doc["command"] = command.get_name();
    doc["tool_version"] = kToolVersion;
    doc["seed"] = globals_.seed;
    doc["flags"] = flags;
    doc["inputs"] = inputs;
    if (!extras_.empty()) doc["notes"] = extras_;
    return doc;
}

void Context::write_output(const std::string& content, const CLI::App& command) {
    if (globals_.out.empty()) throw ValidationError("--out is required");
    const fs::path out = globals_.out;
    const fs::path manifest_path = globals_.out + ".manifest.json";
    if (!globals_.force) {
        for (const auto& p : {out, manifest_path}) {
            if (fs::exists(p)) throw ValidationError("refusing to overwrite " + p.string() + " (use --force)");
        }
    }
    const auto write = [](const fs::path& p, const std::string& bytes) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw ValidationError("cannot write " + p.string());
        f << bytes;
        if (!f) throw ValidationError("write failed: " + p.string());
    };
    write(out, content);
    write(manifest_path, manifest(command).dump(2) + "\n");
}

std::string group_key(const corpus::TextSample& s, const std::string& group_by) {
    if (group_by == "source") return s.source;
    if (group_by == "domain") return s.domain;
    if (group_by == "variant") return std::string(corpus::to_string(s.variant));
    if (group_by == "id") return s.id;
    if (group_by == "temperature") return s.temperature ? format_double(*s.temperature) : "none";
    throw ValidationError("unknown --group-by '" + group_by + "'");
}

Groups group_texts(const std::vector<corpus::TextSample>& samples, const std::vector<std::size_t>& indices,
                   const std::string& group_by) {
    if (indices.empty()) throw ValidationError("no samples matched");
    Groups g;
    for (auto i : indices) g.texts[group_key(samples[i], group_by)].push_back(samples[i].text);
    return g;
}

std::map<std::string, chardist::LetterDistribution> group_distributions(const Groups& groups,
                                                                        const std::string& pooling) {
    if (pooling != "pooled" && pooling != "per-sample-mean")
        throw ValidationError("--pooling must be 'pooled' or 'per-sample-mean'");
    std::map<std::string, chardist::LetterDistribution> out;
    for (const auto& [key, texts] : groups.texts) {
        try {
            out[key] = pooling == "pooled" ? chardist::pooled_distribution(texts) : chardist::mean_distribution(texts);
        } catch (const ValidationError& e) {
            throw ValidationError("group '" + key + "': " + e.what());
        }
    }
    return out;
}

}  // namespace ldscore::cli
