#include "ldscore/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ldscore/error.hpp"
#include "ldscore/rng.hpp"
#include "ldscore/synthetic.hpp"

namespace ldscore::analysis {

std::size_t DivergenceMatrix::index_of(const std::string& label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ValidationError("label '" + label + "' not in matrix");
    return static_cast<std::size_t>(it - labels.begin());
}

DivergenceMatrix pairwise_matrix(const std::map<std::string, LetterDistribution>& groups) {
    if (groups.size() < 2) throw ValidationError("pairwise_matrix: need at least two groups");
    DivergenceMatrix out;
    std::vector<const LetterDistribution*> dists;
    for (const auto& [label, d] : groups) {
        if (d.total_letters == 0) throw ValidationError("pairwise_matrix: group '" + label + "' is degenerate");
        out.labels.push_back(label);
        dists.push_back(&d);
    }
    const std::size_t n = out.labels.size();
    out.m.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = chardist::ld_score(*dists[i], *dists[j]).value;
            out.m[i][j] = v;
            out.m[j][i] = v;
        }
    }
    return out;
}

DivergenceMatrix pairwise_word_matrix(const std::map<std::string, WordDistribution>& groups) {
    if (groups.size() < 2) throw ValidationError("pairwise_word_matrix: need at least two groups");
    DivergenceMatrix out;
    std::vector<const WordDistribution*> dists;
    for (const auto& [label, d] : groups) {
        if (d.p.empty()) throw ValidationError("pairwise_word_matrix: group '" + label + "' is degenerate");
        out.labels.push_back(label);
        dists.push_back(&d);
    }
    const std::size_t n = out.labels.size();
    out.m.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = chardist::wd_score(*dists[i], *dists[j]);
            out.m[i][j] = v;
            out.m[j][i] = v;
        }
    }
    return out;
}

SeparationReport separation_report(const DivergenceMatrix& matrix, const std::set<std::string>& human_labels) {
    std::vector<bool> is_human(matrix.size(), false);
    for (const auto& h : human_labels) is_human[matrix.index_of(h)] = true;
    const auto n_human = static_cast<std::size_t>(std::count(is_human.begin(), is_human.end(), true));
    if (n_human == 0 || matrix.size() - n_human < 2)
        throw ValidationError("separation_report: need at least one human and two AI labels");

    SeparationReport r;
    r.max_ai_ai = -std::numeric_limits<double>::infinity();
    r.min_human_ai = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        for (std::size_t j = i + 1; j < matrix.size(); ++j) {
            const double v = matrix.m[i][j];
            if (!is_human[i] && !is_human[j]) {
                if (v > r.max_ai_ai) {
                    r.max_ai_ai = v;
                    r.argmax_pair = {matrix.labels[i], matrix.labels[j]};
                }
            } else if (is_human[i] != is_human[j]) {
                if (v < r.min_human_ai) {
                    r.min_human_ai = v;
                    r.argmin_pair = {matrix.labels[i], matrix.labels[j]};
                }
            }
        }
    }
    r.holds = r.max_ai_ai < r.min_human_ai;
    return r;
}

std::vector<std::string> DendrogramNode::leaves() const {
    if (is_leaf()) return {label};
    std::vector<std::string> out;
    for (const auto& c : children) {
        auto sub = c.leaves();
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

DendrogramNode agglomerative_cluster(const DivergenceMatrix& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw ValidationError("agglomerative_cluster: need at least two labels");
    {
        std::set<std::string> unique(matrix.labels.begin(), matrix.labels.end());
        if (unique.size() != n) throw ValidationError("agglomerative_cluster: duplicate labels");
    }

    struct Cluster {
        DendrogramNode node;
        std::string key;
        std::size_t size = 1;
        bool active = true;
    };
    std::vector<Cluster> clusters;
    for (const auto& label : matrix.labels) clusters.push_back({DendrogramNode{label, 0.0, {}}, label, 1, true});
    auto dist = matrix.m;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        double best = std::numeric_limits<double>::infinity();
        std::pair<std::string, std::string> best_keys;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!clusters[i].active) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!clusters[j].active) continue;
                auto keys = std::minmax(clusters[i].key, clusters[j].key);
                const double d = dist[i][j];
                if (!found || d < best || (d == best && std::pair(keys.first, keys.second) < best_keys)) {
                    found = true;
                    best = d;
                    best_a = i;
                    best_b = j;
                    best_keys = {keys.first, keys.second};
                }
            }
        }

        auto& a = clusters[best_a];
        auto& b = clusters[best_b];
        const double na = static_cast<double>(a.size);
        const double nb = static_cast<double>(b.size);
        for (std::size_t k = 0; k < n; ++k) {
            if (!clusters[k].active || k == best_a || k == best_b) continue;
            const double d = (na * dist[best_a][k] + nb * dist[best_b][k]) / (na + nb);
            dist[best_a][k] = d;
            dist[k][best_a] = d;
        }
        DendrogramNode merged;
        merged.height = best;
        if (a.key < b.key) merged.children = {std::move(a.node), std::move(b.node)};
        else merged.children = {std::move(b.node), std::move(a.node)};
        a.node = std::move(merged);
        a.key = std::min(a.key, b.key);
        a.size += b.size;
        b.active = false;
    }
    for (auto& c : clusters) {
        if (c.active) return std::move(c.node);
    }
    throw NumericError("agglomerative_cluster: no root");  // unreachable
}

PcaResult pca(std::span<const LetterDistribution> distributions, std::size_t k) {
    const std::size_t n = distributions.size();
    if (n < 2) throw ValidationError("pca: need at least two distributions");
    if (k < 1 || k > std::min<std::size_t>(n - 1, kAlphabetSize))
        throw ValidationError("pca: k must lie in [1, min(n-1, 26)], got " + std::to_string(k));

    constexpr int d = static_cast<int>(kAlphabetSize);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), d);
    for (std::size_t i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), j) = distributions[i].p[static_cast<std::size_t>(j)];
    }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw NumericError("pca: eigendecomposition failed");
    // Ascending -> descending.
    Eigen::VectorXd values = solver.eigenvalues().reverse();
    Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        values(i) = std::max(values(i), 0.0);
        total += values(i);
    }
    if (!(total > 0.0)) throw ValidationError("pca: inputs have zero variance");

    for (int c = 0; c < d; ++c) {
        Eigen::Index arg = 0;
        for (Eigen::Index r = 1; r < d; ++r) {
            if (std::abs(vectors(r, c)) > std::abs(vectors(arg, c))) arg = r;
        }
        if (vectors(arg, c) < 0.0) vectors.col(c) *= -1.0;
    }

    PcaResult out;
    for (int j = 0; j < d; ++j) {
        out.mean[static_cast<std::size_t>(j)] = mean(j);
        out.all_variance_ratios[static_cast<std::size_t>(j)] = values(j) / total;
    }
    for (std::size_t c = 0; c < k; ++c) {
        out.explained_variance_ratio.push_back(out.all_variance_ratios[c]);
        std::array<double, kAlphabetSize> row{};
        for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = vectors(j, static_cast<Eigen::Index>(c));
        out.component_loadings.push_back(row);
    }
    const Eigen::MatrixXd projected = centered * vectors.leftCols(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> coords(k);
        for (std::size_t c = 0; c < k; ++c) coords[c] = projected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        out.coordinates.push_back(std::move(coords));
    }
    return out;
}

std::vector<std::array<double, kAlphabetSize>> reconstruct(const PcaResult& result) {
    std::vector<std::array<double, kAlphabetSize>> out;
    for (const auto& coords : result.coordinates) {
        auto row = result.mean;
        for (std::size_t c = 0; c < coords.size(); ++c) {
            for (std::size_t j = 0; j < kAlphabetSize; ++j) row[j] += coords[c] * result.component_loadings[c][j];
        }
        out.push_back(row);
    }
    return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ValidationError("pearson: length mismatch");
    if (xs.size() < 2) throw ValidationError("pearson: need at least two observations");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw NumericError("pearson: correlation undefined for a constant sequence");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(std::span<const Signal> signals) {
    if (signals.empty()) throw ValidationError("correlation_matrix: no signals");
    for (const auto& s : signals) {
        if (s.ids.size() != s.values.size())
            throw ValidationError("correlation_matrix: signal '" + s.name + "' has mismatched ids/values");
        if (s.ids != signals.front().ids) {
            throw ValidationError("correlation_matrix: signal '" + s.name + "' is not aligned with '" +
                                  signals.front().name + "'");
        }
    }
    CorrelationMatrix out;
    const std::size_t n = signals.size();
    out.m.assign(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        out.labels.push_back(signals[i].name);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = pearson(signals[i].values, signals[j].values);
            out.m[i][j] = r;
            out.m[j][i] = r;
        }
    }
    return out;
}

WordDistribution apply_skew(const WordDistribution& reference, const DomainSkew& skew) {
    if (!(skew.boost >= 0.0)) throw ValidationError("skew: boost must be nonnegative");
    std::array<bool, kAlphabetSize> focus{};
    for (char c : skew.focus_letters) {
        if (c < 'a' || c > 'z') throw ValidationError("skew: focus letters must be a-z");
        focus[static_cast<std::size_t>(c - 'a')] = true;
    }
    WordDistribution out;
    out.total_words = reference.total_words;
    double total = 0.0;
    for (const auto& [word, prob] : reference.p) {
        const auto counts = text::count_letters(word);
        std::uint64_t length = 0;
        std::uint64_t hits = 0;
        for (std::size_t i = 0; i < kAlphabetSize; ++i) {
            length += counts[i];
            if (focus[i]) hits += counts[i];
        }
        const double f = length ? static_cast<double>(hits) / static_cast<double>(length) : 0.0;
        const double w = prob * (1.0 + skew.boost * f);
        out.p.emplace(word, w);
        total += w;
    }
    if (!(total > 0.0)) throw ValidationError("skew: degenerate reference");
    for (auto& [_, w] : out.p) w /= total;
    return out;
}

std::array<double, 3> least_squares_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ValidationError("least squares: need >= 2 paired points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw ValidationError("least squares: x values are all equal");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (intercept + slope * xs[i]);
        ss += r * r;
    }
    return {slope, intercept, std::sqrt(ss / n)};
}

ConvergenceCurve convergence_simulation(const WordDistribution& reference,
                                        std::span<const std::uint64_t> sample_sizes,
                                        const std::optional<DomainSkew>& skew, std::uint64_t seed,
                                        unsigned replicates) {
    if (reference.p.empty()) throw ValidationError("convergence_simulation: degenerate reference");
    if (sample_sizes.empty()) throw ValidationError("convergence_simulation: no sample sizes");
    if (replicates == 0) throw ValidationError("convergence_simulation: replicates must be >= 1");
    for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
        if (sample_sizes[i] < 10) throw ValidationError("convergence_simulation: sample sizes must be >= 10");
        if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1])
            throw ValidationError("convergence_simulation: sample sizes must be strictly increasing");
    }

    const auto target = chardist::project_word_to_letter(reference);
    const synthetic::WordSampler sampler(skew ? apply_skew(reference, *skew) : reference);

    // Per-word letter fractions L(w, l) / |w|, in sampler order.
    const auto& words = sampler.words();
    std::vector<std::array<double, kAlphabetSize>> fractions(words.size());
    for (std::size_t w = 0; w < words.size(); ++w) {
        const auto counts = text::count_letters(words[w]);
        std::uint64_t length = 0;
        for (auto c : counts) length += c;
        if (length == 0) throw ValidationError("convergence_simulation: word '" + words[w] + "' has no letters");
        for (std::size_t l = 0; l < kAlphabetSize; ++l)
            fractions[w][l] = static_cast<double>(counts[l]) / static_cast<double>(length);
    }

    ConvergenceCurve curve;
    std::vector<std::uint64_t> counts(words.size());
    for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
        const std::uint64_t n = sample_sizes[i];
        double error = 0.0;
        for (unsigned r = 0; r < replicates; ++r) {
            auto rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(i) * replicates + r);
            std::fill(counts.begin(), counts.end(), 0);
            for (std::uint64_t draw = 0; draw < n; ++draw) ++counts[sampler.draw_index(rng)];
            LetterDistribution sample;
            sample.total_letters = 1;
            for (std::size_t w = 0; w < words.size(); ++w) {
                if (counts[w] == 0) continue;
                const double weight = static_cast<double>(counts[w]) / static_cast<double>(n);
                for (std::size_t l = 0; l < kAlphabetSize; ++l) sample.p[l] += weight * fractions[w][l];
            }
            error += chardist::ld_score(sample, target).value;
        }
        curve.sample_sizes.push_back(n);
        curve.errors.push_back(error / replicates);
    }

    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < curve.errors.size(); ++i) {
        if (!(curve.errors[i] > 0.0))
            throw NumericError("convergence_simulation: zero error at N=" + std::to_string(curve.sample_sizes[i]) +
                               "; log-log fit undefined");
        lx.push_back(std::log10(static_cast<double>(curve.sample_sizes[i])));
        ly.push_back(std::log10(curve.errors[i]));
    }
    if (lx.size() >= 2) {
        const auto [slope, intercept, rms] = least_squares_line(lx, ly);
        curve.fitted_slope = slope;
        curve.intercept = intercept;
        curve.residual_rms = rms;
    }
    return curve;
}

}  // namespace ldscore::analysis
