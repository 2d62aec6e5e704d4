#pragma once
// Effectiveness of letter-avoidance (lipogram) rewrites, measured on the
// same folded a-z alphabet as the letter distributions.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldscore/corpus.hpp"

namespace ldscore::adversarial {

// 100 * (orig - adv) / orig for the folded letter. Negative when the rewrite
// added occurrences. Throws ValidationError when the original has none.
double percent_reduction(std::string_view original, std::string_view adversarial, char letter);

// True iff none of the 1-2 targets occurs in the folded text.
bool avoidance_success(std::string_view adversarial, std::string_view targets);

struct AttackOutcome {
    std::string sample_id;
    std::string model;
    corpus::Variant attack = corpus::Variant::avoid_one;
    std::string target_letters;
    // One entry per target letter; empty when the original lacks that letter.
    std::vector<std::optional<double>> percent_reduction;
    std::vector<bool> letter_absent;
    bool fully_avoided = false;
};

AttackOutcome assess(std::string sample_id, std::string model, corpus::Variant attack, std::string_view original,
                     std::string_view adversarial, std::string_view targets);

enum class GroupBy { model, letter, attack };

std::optional<GroupBy> parse_group_by(std::string_view s);

struct AggregateRow {
    std::string key;
    std::size_t n = 0;
    // Mean over (pair, letter) rows with a defined reduction; NaN if none.
    double mean_percent_reduction = 0.0;
    double full_avoidance_rate = 0.0;
};

// Units: for `letter`, each (pair, letter) row, success = that letter absent;
// for `model` and `attack`, each pair, success = every target absent.
// Letter rows are sorted by descending success rate (then key); the others
// by key.
std::vector<AggregateRow> aggregate_report(std::span<const AttackOutcome> outcomes, GroupBy group_by);

}  // namespace ldscore::adversarial
