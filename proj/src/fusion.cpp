#include "ldscore/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ldscore/error.hpp"

namespace ldscore::fusion {

namespace {

constexpr double kTau = 1e-12;
constexpr std::string_view kModelFormat = "ldscore-fusion-model";

double rbf(const std::array<double, 2>& a, const std::array<double, 2>& b, double gamma) {
    const double d0 = a[0] - b[0];
    const double d1 = a[1] - b[1];
    return std::exp(-gamma * (d0 * d0 + d1 * d1));
}

void check_labels(std::span<const int> labels, std::size_t expected, std::string_view where) {
    if (labels.size() != expected) throw ValidationError(std::string(where) + ": label count mismatch");
    bool pos = false;
    bool neg = false;
    for (int y : labels) {
        if (y == 1) pos = true;
        else if (y == -1) neg = true;
        else throw ValidationError(std::string(where) + ": labels must be +1 or -1");
    }
    if (!pos || !neg) throw ValidationError(std::string(where) + ": both classes must be present");
}

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

Confusion confusion_at(std::span<const double> scores, std::span<const int> labels, double threshold) {
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] > threshold;
        if (labels[i] == 1) (predicted ? c.tp : c.fn)++;
        else (predicted ? c.fp : c.tn)++;
    }
    return c;
}

double f1_of(const Confusion& c) {
    if (c.tp == 0) return 0.0;
    return 2.0 * static_cast<double>(c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

}  // namespace

ReferenceDistribution build_reference(std::span<const std::string> model_texts) {
    if (model_texts.empty()) throw ValidationError("build_reference: no model texts");
    return ReferenceDistribution{chardist::pooled_distribution(model_texts)};
}

FeatureVector featurize(const corpus::TextSample& sample, double base_score, const ReferenceDistribution& reference) {
    if (!std::isfinite(base_score)) throw ValidationError("featurize: non-finite base score for " + sample.id);
    chardist::LetterDistribution d;
    try {
        d = chardist::letter_distribution(sample.text);
    } catch (const ValidationError&) {
        throw ValidationError("featurize: sample '" + sample.id + "' has no letters a-z");
    }
    return FeatureVector{base_score, chardist::ld_score(d, reference.pooled).value};
}

Scaler Scaler::fit(std::span<const FeatureVector> features) {
    if (features.empty()) throw ValidationError("scaler: no features");
    Scaler s;
    const double n = static_cast<double>(features.size());
    for (std::size_t k = 0; k < 2; ++k) {
        double mean = 0.0;
        for (const auto& f : features) mean += f.as_array()[k];
        mean /= n;
        double var = 0.0;
        for (const auto& f : features) {
            const double d = f.as_array()[k] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        s.mean[k] = mean;
        s.stddev[k] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

std::array<double, 2> Scaler::apply(const FeatureVector& f) const {
    const auto raw = f.as_array();
    return {(raw[0] - mean[0]) / stddev[0], (raw[1] - mean[1]) / stddev[1]};
}

DualSolution solve_dual(std::span<const std::array<double, 2>> points, std::span<const int> labels,
                        const SvmParams& params) {
    check_labels(labels, points.size(), "svm");
    if (!(params.c > 0.0) || !(params.gamma > 0.0)) throw ValidationError("svm: c and gamma must be positive");
    if (!(params.tolerance > 0.0)) throw ValidationError("svm: tolerance must be positive");

    const std::size_t n = points.size();
    const double c = params.c;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    std::vector<double> yd(n);
    for (std::size_t t = 0; t < n; ++t) yd[t] = static_cast<double>(labels[t]);

    const auto in_up = [&](std::size_t t) { return (yd[t] > 0 && alpha[t] < c) || (yd[t] < 0 && alpha[t] > 0); };
    const auto in_low = [&](std::size_t t) { return (yd[t] > 0 && alpha[t] > 0) || (yd[t] < 0 && alpha[t] < c); };

    std::vector<double> q_i(n);
    std::vector<double> q_j(n);
    DualSolution out;
    bool converged = false;
    for (;;) {
        double g_max = -std::numeric_limits<double>::infinity();
        double g_min = std::numeric_limits<double>::infinity();
        std::size_t i = n;
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -yd[t] * grad[t];
            if (in_up(t) && v > g_max) {
                g_max = v;
                i = t;
            }
            if (in_low(t) && v < g_min) {
                g_min = v;
                j = t;
            }
        }
        out.kkt_residual = (i == n || j == n) ? 0.0 : g_max - g_min;
        converged = converged || out.kkt_residual < params.tolerance;
        if (i == n || j == n || out.kkt_residual < params.refine_tolerance) break;
        if (out.iterations >= params.max_iterations) {
            if (converged) break;
            throw NumericError("svm: no convergence after " + std::to_string(out.iterations) +
                               " pair updates; KKT residual " + std::to_string(out.kkt_residual));
        }
        ++out.iterations;

        for (std::size_t t = 0; t < n; ++t) {
            q_i[t] = yd[i] * yd[t] * rbf(points[i], points[t], params.gamma);
            q_j[t] = yd[j] * yd[t] * rbf(points[j], points[t], params.gamma);
        }
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        if (yd[i] != yd[j]) {
            double quad = q_i[i] + q_j[j] + 2.0 * q_i[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if (alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            double quad = q_i[i] + q_j[j] - 2.0 * q_i[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c) {
                if (alpha[i] > c) {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c) {
                if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double d_ai = alpha[i] - old_ai;
        const double d_aj = alpha[j] - old_aj;
        if (converged && d_ai == 0.0 && d_aj == 0.0) break;  // refinement stalled at rounding level
        for (std::size_t t = 0; t < n; ++t) grad[t] += q_i[t] * d_ai + q_j[t] * d_aj;
    }

    // b = -rho: mean of y_t G_t over free vectors, else midpoint of the bounds.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = yd[t] * grad[t];
        if (alpha[t] >= c) {
            if (yd[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (yd[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    out.bias = -rho;
    out.alpha = std::move(alpha);
    out.gradient = std::move(grad);
    return out;
}

FusionModel train(std::span<const FeatureVector> features, std::span<const int> labels, const SvmParams& params) {
    check_labels(labels, features.size(), "train");
    for (const auto& f : features) {
        if (!std::isfinite(f.base_score) || !std::isfinite(f.ld_to_reference))
            throw ValidationError("train: non-finite feature");
    }
    FusionModel model;
    model.scaler = Scaler::fit(features);
    model.gamma = params.gamma;
    model.c = params.c;

    std::vector<std::array<double, 2>> points;
    points.reserve(features.size());
    for (const auto& f : features) points.push_back(model.scaler.apply(f));
    const auto dual = solve_dual(points, labels, params);
    model.bias = dual.bias;
    model.kkt_residual = dual.kkt_residual;
    model.iterations = dual.iterations;
    for (std::size_t t = 0; t < points.size(); ++t) {
        if (dual.alpha[t] > 0.0) {
            model.support_vectors.push_back(points[t]);
            model.alphas_times_labels.push_back(dual.alpha[t] * static_cast<double>(labels[t]));
        }
    }

    std::vector<double> train_scores;
    train_scores.reserve(features.size());
    for (const auto& f : features) train_scores.push_back(decision_value(model, f));
    model.threshold = calibrate_threshold(train_scores, labels);
    return model;
}

double decision_value(const FusionModel& model, const FeatureVector& feature) {
    const auto z = model.scaler.apply(feature);
    double acc = 0.0;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        acc += model.alphas_times_labels[i] * rbf(model.support_vectors[i], z, model.gamma);
    return acc + model.bias;
}

int predict(const FusionModel& model, const FeatureVector& feature) {
    return decision_value(model, feature) > model.threshold ? 1 : -1;
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
    check_labels(labels, scores.size(), "auroc");
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (1-based, tie-averaged) ranks of the positives, doubled to stay integral.
    std::uint64_t twice_rank_sum = 0;
    std::uint64_t n_pos = 0;
    std::uint64_t n_neg = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const std::uint64_t twice_avg_rank = (i + 1) + j;  // (first + last) rank
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] == 1) {
                twice_rank_sum += twice_avg_rank;
                ++n_pos;
            } else {
                ++n_neg;
            }
        }
        i = j;
    }
    // 2U = 2R - n_pos (n_pos + 1)
    const std::uint64_t twice_u = twice_rank_sum - n_pos * (n_pos + 1);
    return (static_cast<double>(twice_u) / 2.0) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double f1_at(std::span<const double> scores, std::span<const int> labels, double threshold) {
    if (scores.size() != labels.size()) throw ValidationError("f1: length mismatch");
    return f1_of(confusion_at(scores, labels, threshold));
}

double calibrate_threshold(std::span<const double> scores, std::span<const int> labels) {
    check_labels(labels, scores.size(), "calibrate_threshold");
    for (double s : scores) {
        if (!std::isfinite(s)) throw ValidationError("calibrate_threshold: non-finite score");
    }
    // Per unique score: (positives, negatives), ascending.
    std::map<double, std::pair<std::uint64_t, std::uint64_t>> buckets;
    std::uint64_t total_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        auto& b = buckets[scores[i]];
        if (labels[i] == 1) {
            ++b.first;
            ++total_pos;
        } else {
            ++b.second;
        }
    }
    // Start with everything predicted positive, then peel off buckets from
    // the bottom. F1 = 2TP / (TP + FP + P); compared as exact fractions.
    std::uint64_t tp = total_pos;
    std::uint64_t fp = scores.size() - total_pos;
    double best_threshold = buckets.begin()->first - 1.0;
    std::uint64_t best_num = 2 * tp;
    std::uint64_t best_den = tp + fp + total_pos;

    for (auto it = buckets.begin(); std::next(it) != buckets.end(); ++it) {
        tp -= it->second.first;
        fp -= it->second.second;
        const std::uint64_t num = 2 * tp;
        const std::uint64_t den = tp + fp + total_pos;
        // num/den > best_num/best_den; both sides stay below 6n^2.
        if (num * best_den > best_num * den) {
            best_num = num;
            best_den = den;
            const double lo = it->first;
            const double hi = std::next(it)->first;
            best_threshold = lo + (hi - lo) / 2.0;
        }
    }
    return best_threshold;
}

MetricsReport evaluate(std::span<const double> scores, std::span<const int> labels, double threshold) {
    if (scores.empty()) throw ValidationError("evaluate: empty evaluation set");
    check_labels(labels, scores.size(), "evaluate");
    const auto c = confusion_at(scores, labels, threshold);
    MetricsReport r;
    r.n_pos = c.tp + c.fn;
    r.n_neg = c.fp + c.tn;
    r.auroc = auroc(scores, labels);
    r.f1 = f1_of(c);
    r.tpr = static_cast<double>(c.tp) / static_cast<double>(r.n_pos);
    r.fpr = static_cast<double>(c.fp) / static_cast<double>(r.n_neg);
    return r;
}

MetricsReport evaluate(const FusionModel& model, std::span<const FeatureVector> features, std::span<const int> labels) {
    std::vector<double> scores;
    scores.reserve(features.size());
    for (const auto& f : features) scores.push_back(decision_value(model, f));
    return evaluate(scores, labels, model.threshold);
}

double positive_rate(std::span<const double> scores, double threshold) {
    if (scores.empty()) throw ValidationError("positive_rate: empty set");
    std::size_t above = 0;
    for (double s : scores) above += s > threshold ? 1 : 0;
    return static_cast<double>(above) / static_cast<double>(scores.size());
}

nlohmann::ordered_json to_json(const FusionModel& model) {
    nlohmann::ordered_json doc;
    doc["format"] = kModelFormat;
    doc["version"] = kModelFormatVersion;
    doc["kernel"] = "rbf";
    doc["gamma"] = model.gamma;
    doc["c"] = model.c;
    doc["bias"] = model.bias;
    doc["threshold"] = model.threshold;
    doc["kkt_residual"] = model.kkt_residual;
    doc["iterations"] = model.iterations;
    doc["scaler"] = {{"mean", model.scaler.mean}, {"stddev", model.scaler.stddev}};
    doc["support_vectors"] = model.support_vectors;
    doc["coefficients"] = model.alphas_times_labels;
    return doc;
}

FusionModel model_from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("format").get<std::string>() != kModelFormat)
            throw ValidationError("model: unexpected format tag");
        if (doc.at("version").get<int>() != kModelFormatVersion)
            throw ValidationError("model: unsupported version " + doc.at("version").dump());
        FusionModel m;
        m.gamma = doc.at("gamma").get<double>();
        m.c = doc.at("c").get<double>();
        m.bias = doc.at("bias").get<double>();
        m.threshold = doc.at("threshold").get<double>();
        m.kkt_residual = doc.at("kkt_residual").get<double>();
        m.iterations = doc.at("iterations").get<std::uint64_t>();
        m.scaler.mean = doc.at("scaler").at("mean").get<std::array<double, 2>>();
        m.scaler.stddev = doc.at("scaler").at("stddev").get<std::array<double, 2>>();
        m.support_vectors = doc.at("support_vectors").get<std::vector<std::array<double, 2>>>();
        m.alphas_times_labels = doc.at("coefficients").get<std::vector<double>>();
        if (m.support_vectors.size() != m.alphas_times_labels.size())
            throw ValidationError("model: support vector / coefficient count mismatch");
        if (!(m.gamma > 0.0) || !(m.scaler.stddev[0] > 0.0) || !(m.scaler.stddev[1] > 0.0))
            throw ValidationError("model: gamma and stddevs must be positive");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model: malformed document: ") + e.what());
    }
}

}  // namespace ldscore::fusion
