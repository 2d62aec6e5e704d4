#pragma once
// Two-feature fusion of a base detector score with the LD-Score to a
// reference pool of model outputs, through an RBF-kernel SVM.
//
// Labels are +1 for AI-generated (the positive class) and -1 for human.
//
// Training solves the C-SVC dual
//     min_a  1/2 a'Qa - e'a,   Q_ij = y_i y_j K(x_i, x_j),
//     s.t.   0 <= a_i <= C,    y'a = 0,
// by SMO with maximal-violating-pair working-set selection and a full
// gradient cache, on z-scored features. Decision value:
//     f(x) = sum_i a_i y_i exp(-gamma * |z_i - z(x)|^2) + b.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ldscore/chardist.hpp"
#include "ldscore/corpus.hpp"

namespace ldscore::fusion {

struct FeatureVector {
    double base_score = 0.0;
    double ld_to_reference = 0.0;

    std::array<double, 2> as_array() const { return {base_score, ld_to_reference}; }
};

struct ReferenceDistribution {
    chardist::LetterDistribution pooled;
};

ReferenceDistribution build_reference(std::span<const std::string> model_texts);

FeatureVector featurize(const corpus::TextSample& sample, double base_score, const ReferenceDistribution& reference);

// Per-feature z-score from training statistics (population stddev). A
// constant feature gets stddev 1 so it standardizes to 0.
struct Scaler {
    std::array<double, 2> mean{0.0, 0.0};
    std::array<double, 2> stddev{1.0, 1.0};

    static Scaler fit(std::span<const FeatureVector> features);
    std::array<double, 2> apply(const FeatureVector& f) const;
};

struct SvmParams {
    double c = 1.0;
    double gamma = 1.0;
    // Training must bring the maximal KKT violation below `tolerance` within
    // max_iterations pair updates. It then keeps updating until the violation
    // is below refine_tolerance, stopping without error at the cap or when an
    // update no longer changes any alpha.
    double tolerance = 1e-3;
    double refine_tolerance = 1e-10;
    std::uint64_t max_iterations = 1'000'000;
};

struct FusionModel {
    std::vector<std::array<double, 2>> support_vectors;  // standardized coordinates
    std::vector<double> alphas_times_labels;
    double bias = 0.0;
    double gamma = 1.0;
    double c = 1.0;
    Scaler scaler;
    double threshold = 0.0;
    double kkt_residual = 0.0;  // max violation m(a) - M(a) at exit
    std::uint64_t iterations = 0;
};

// Dual variables and gradient at SMO exit, one entry per training point.
struct DualSolution {
    std::vector<double> alpha;
    std::vector<double> gradient;
    double bias = 0.0;
    double kkt_residual = 0.0;
    std::uint64_t iterations = 0;
};

// SMO on already standardized points. Throws NumericError carrying the
// residual when max_iterations pair updates do not reach the tolerance.
DualSolution solve_dual(std::span<const std::array<double, 2>> points, std::span<const int> labels,
                        const SvmParams& params);

// Standardizes, solves the dual, keeps a_i > 0 as support vectors, then
// calibrates the threshold on the training decision values.
FusionModel train(std::span<const FeatureVector> features, std::span<const int> labels, const SvmParams& params);

double decision_value(const FusionModel& model, const FeatureVector& feature);
// +1 when decision_value > threshold, else -1.
int predict(const FusionModel& model, const FeatureVector& feature);

// Mann-Whitney AUC: P(score_pos > score_neg) + 1/2 P(tie).
double auroc(std::span<const double> scores, std::span<const int> labels);

// F1 of the positive class when predicting +1 iff score > threshold.
double f1_at(std::span<const double> scores, std::span<const int> labels, double threshold);

// Candidates: (min score - 1), which predicts everything positive, and the
// midpoints of consecutive sorted unique scores. Returns the smallest
// candidate achieving the maximal F1.
double calibrate_threshold(std::span<const double> scores, std::span<const int> labels);

struct MetricsReport {
    double auroc = 0.0;
    double f1 = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

// Needs both classes.
MetricsReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold);
MetricsReport evaluate(const FusionModel& model, std::span<const FeatureVector> features, std::span<const int> labels);

// Fraction of scores above threshold; for single-class (e.g. human-only) subsets.
double positive_rate(std::span<const double> scores, double threshold);

inline constexpr int kModelFormatVersion = 1;

nlohmann::ordered_json to_json(const FusionModel& model);
FusionModel model_from_json(const nlohmann::json& doc);

}  // namespace ldscore::fusion
