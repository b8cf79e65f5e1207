#include "dualcascade/confidence.hpp"

#include <algorithm>
#include <cmath>

#include "dualcascade/error.hpp"

namespace dualcascade {

std::string_view score_kind_name(ScoreKind kind) {
    switch (kind) {
    case ScoreKind::MaxProbability: return "max";
    case ScoreKind::Difference: return "diff";
    case ScoreKind::EntropyNormalized: return "entropy";
    }
    return "?";
}

ScoreKind parse_score_kind(std::string_view name) {
    if (name == "max") return ScoreKind::MaxProbability;
    if (name == "diff") return ScoreKind::Difference;
    if (name == "entropy") return ScoreKind::EntropyNormalized;
    throw DataError("unknown score function '" + std::string(name) + "' (expected max, diff or entropy)");
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) throw DataError("softmax of an empty vector");
    for (double z : logits) {
        if (!std::isfinite(z)) throw DataError("softmax input is not finite");
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - top);
        total += out[i];
    }
    for (double& p : out) p /= total;
    return out;
}

double entropy_normalizer(std::size_t num_classes) {
    const double k = static_cast<double>(num_classes);
    double sum = 0.0;
    for (std::size_t i = 1; i <= num_classes; ++i) {
        const double r = static_cast<double>(i) / k;
        sum -= r * std::log(r);
    }
    return sum;
}

double score(std::span<const double> probs, ScoreKind kind) {
    switch (kind) {
    case ScoreKind::MaxProbability:
        return *std::max_element(probs.begin(), probs.end());
    case ScoreKind::Difference: {
        // Top two positions; a repeated maximum gives 0.
        double first = -1.0;
        double second = -1.0;
        for (double p : probs) {
            if (p > first) {
                second = first;
                first = p;
            } else if (p > second) {
                second = p;
            }
        }
        return first - second;
    }
    case ScoreKind::EntropyNormalized: {
        double h = 0.0;
        for (double p : probs) {
            if (p > 0.0) h -= p * std::log(p);
        }
        return h / entropy_normalizer(probs.size());
    }
    }
    return 0.0;
}

double score_logits(std::span<const double> logits, ScoreKind kind) {
    const auto p = softmax(logits);
    return score(p, kind);
}

bool passes_threshold(double s, double lambda, ScoreKind kind) {
    return lower_is_better(kind) ? s <= lambda : s >= lambda;
}

Selection better_score(double score_a, double score_b, ScoreKind kind) {
    const bool a_wins = lower_is_better(kind) ? score_a <= score_b : score_a >= score_b;
    return a_wins ? Selection::A : Selection::B;
}

std::size_t argmax(std::span<const double> values) {
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

} // namespace dualcascade
