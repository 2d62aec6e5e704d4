#pragma once
// Group-level structure: pairwise divergence matrices, the AI/human
// separation check, average-linkage dendrograms, PCA over letter
// distributions, Pearson correlation of detector signals, and the
// word-sampling convergence simulation.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldscore/chardist.hpp"

namespace ldscore::analysis {

using chardist::kAlphabetSize;
using chardist::LetterDistribution;
using chardist::WordDistribution;

struct DivergenceMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> m;

    std::size_t size() const { return labels.size(); }
    std::size_t index_of(const std::string& label) const;
};

// Labels come out in the map's (lexicographic) order.
DivergenceMatrix pairwise_matrix(const std::map<std::string, LetterDistribution>& groups);
DivergenceMatrix pairwise_word_matrix(const std::map<std::string, WordDistribution>& groups);

struct SeparationReport {
    double max_ai_ai = 0.0;
    double min_human_ai = 0.0;
    bool holds = false;
    std::pair<std::string, std::string> argmax_pair;
    std::pair<std::string, std::string> argmin_pair;
};

// holds <=> max over AI-AI cells < min over human-AI cells.
SeparationReport separation_report(const DivergenceMatrix& matrix, const std::set<std::string>& human_labels);

// Leaf when children is empty; merges have exactly two children.
struct DendrogramNode {
    std::string label;  // leaf label; empty for merges
    double height = 0.0;
    std::vector<DendrogramNode> children;

    bool is_leaf() const { return children.empty(); }
    std::vector<std::string> leaves() const;
};

// UPGMA. Each cluster is keyed by its lexicographically smallest leaf; among
// equal linkage distances the smallest (key_a, key_b) pair merges first, and
// the child with the smaller key is placed left.
DendrogramNode agglomerative_cluster(const DivergenceMatrix& matrix);

struct PcaResult {
    std::vector<std::vector<double>> coordinates;  // n x k
    std::vector<double> explained_variance_ratio;  // k, non-increasing
    std::vector<std::array<double, kAlphabetSize>> component_loadings;  // k x 26, orthonormal rows
    std::array<double, kAlphabetSize> mean{};
    std::array<double, kAlphabetSize> all_variance_ratios{};  // every component, sums to 1
};

// Covariance (n - 1 normalization) eigendecomposition of one point per
// distribution. Loadings are oriented so the largest-magnitude coefficient
// is positive (first index wins a magnitude tie).
PcaResult pca(std::span<const LetterDistribution> distributions, std::size_t k);

// mean + coordinates * loadings, one row per input point.
std::vector<std::array<double, kAlphabetSize>> reconstruct(const PcaResult& result);

double pearson(std::span<const double> xs, std::span<const double> ys);

struct Signal {
    std::string name;
    std::vector<std::string> ids;
    std::vector<double> values;
};

struct CorrelationMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> m;
};

// All signals must list identical ids in identical order.
CorrelationMatrix correlation_matrix(std::span<const Signal> signals);

// Domain skew: P_domain(w) proportional to P(w) * (1 + boost * f(w)), where
// f(w) is the fraction of w's letters drawn from focus_letters.
struct DomainSkew {
    std::string focus_letters;
    double boost = 0.0;
};

WordDistribution apply_skew(const WordDistribution& reference, const DomainSkew& skew);

struct ConvergenceCurve {
    std::vector<std::uint64_t> sample_sizes;
    std::vector<double> errors;
    double fitted_slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

// For each N, draw N words i.i.d. from the reference (or its skewed
// variant), project the sample onto letters and record the LD-Score to the
// reference's projected letter distribution; errors are averaged over
// `replicates` draws. Draw r at size index i uses stream(seed, i * replicates + r).
// The slope is an OLS fit of log10(error) on log10(N).
ConvergenceCurve convergence_simulation(const WordDistribution& reference,
                                        std::span<const std::uint64_t> sample_sizes,
                                        const std::optional<DomainSkew>& skew, std::uint64_t seed,
                                        unsigned replicates = 1);

// OLS fit of y on x: returns (slope, intercept, residual rms).
std::array<double, 3> least_squares_line(std::span<const double> xs, std::span<const double> ys);

}  // namespace ldscore::analysis
