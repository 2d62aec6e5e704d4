#include "ldscore/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ldscore/error.hpp"
#include "ldscore/text.hpp"

namespace ldscore::adversarial {

namespace {

std::size_t letter_index(char letter) {
    if (letter < 'a' || letter > 'z') throw ValidationError(std::string("target letter must be a-z, got '") + letter + "'");
    return static_cast<std::size_t>(letter - 'a');
}

void check_targets(std::string_view targets) {
    if (targets.empty() || targets.size() > 2) throw ValidationError("attack needs one or two target letters");
    for (char c : targets) letter_index(c);
    if (targets.size() == 2 && targets[0] == targets[1]) throw ValidationError("target letters must be distinct");
}

double reduction_from_counts(std::uint64_t orig, std::uint64_t adv) {
    return 100.0 * (static_cast<double>(orig) - static_cast<double>(adv)) / static_cast<double>(orig);
}

struct Accumulator {
    std::size_t units = 0;
    std::size_t successes = 0;
    double reduction_sum = 0.0;
    std::size_t reduction_n = 0;

    AggregateRow finish(std::string key) const {
        AggregateRow row;
        row.key = std::move(key);
        row.n = units;
        row.full_avoidance_rate = static_cast<double>(successes) / static_cast<double>(units);
        row.mean_percent_reduction = reduction_n ? reduction_sum / static_cast<double>(reduction_n)
                                                 : std::numeric_limits<double>::quiet_NaN();
        return row;
    }
};

}  // namespace

double percent_reduction(std::string_view original, std::string_view adversarial, char letter) {
    const auto i = letter_index(letter);
    const auto orig = text::count_letters(original)[i];
    if (orig == 0)
        throw ValidationError(std::string("percent_reduction: original has no '") + letter + "'; reduction undefined");
    return reduction_from_counts(orig, text::count_letters(adversarial)[i]);
}

bool avoidance_success(std::string_view adversarial, std::string_view targets) {
    check_targets(targets);
    const auto counts = text::count_letters(adversarial);
    return std::all_of(targets.begin(), targets.end(), [&](char c) { return counts[letter_index(c)] == 0; });
}

AttackOutcome assess(std::string sample_id, std::string model, corpus::Variant attack, std::string_view original,
                     std::string_view adversarial, std::string_view targets) {
    check_targets(targets);
    const auto orig = text::count_letters(original);
    const auto adv = text::count_letters(adversarial);
    AttackOutcome out;
    out.sample_id = std::move(sample_id);
    out.model = std::move(model);
    out.attack = attack;
    out.target_letters = std::string(targets);
    out.fully_avoided = true;
    for (char c : targets) {
        const auto i = letter_index(c);
        out.percent_reduction.push_back(orig[i] ? std::optional(reduction_from_counts(orig[i], adv[i])) : std::nullopt);
        out.letter_absent.push_back(adv[i] == 0);
        out.fully_avoided = out.fully_avoided && adv[i] == 0;
    }
    return out;
}

std::optional<GroupBy> parse_group_by(std::string_view s) {
    if (s == "model") return GroupBy::model;
    if (s == "letter") return GroupBy::letter;
    if (s == "attack") return GroupBy::attack;
    return std::nullopt;
}

std::vector<AggregateRow> aggregate_report(std::span<const AttackOutcome> outcomes, GroupBy group_by) {
    if (outcomes.empty()) throw ValidationError("aggregate_report: no outcomes");
    std::map<std::string, Accumulator> groups;
    for (const auto& o : outcomes) {
        if (group_by == GroupBy::letter) {
            for (std::size_t k = 0; k < o.target_letters.size(); ++k) {
                auto& acc = groups[std::string(1, o.target_letters[k])];
                ++acc.units;
                acc.successes += o.letter_absent[k] ? 1 : 0;
                if (o.percent_reduction[k]) {
                    acc.reduction_sum += *o.percent_reduction[k];
                    ++acc.reduction_n;
                }
            }
            continue;
        }
        auto& acc = groups[group_by == GroupBy::model ? o.model : std::string(corpus::to_string(o.attack))];
        ++acc.units;
        acc.successes += o.fully_avoided ? 1 : 0;
        for (const auto& r : o.percent_reduction) {
            if (r) {
                acc.reduction_sum += *r;
                ++acc.reduction_n;
            }
        }
    }
    std::vector<AggregateRow> rows;
    for (const auto& [key, acc] : groups) rows.push_back(acc.finish(key));
    if (group_by == GroupBy::letter) {
        std::stable_sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
            return a.full_avoidance_rate > b.full_avoidance_rate;
        });
    }
    return rows;
}

}  // namespace ldscore::adversarial
