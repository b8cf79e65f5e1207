#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's scoring, decision or counting code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <vector>

#include "dualcascade/records.hpp"

namespace oracle {

enum class Kind { Max, Diff, Entropy };

inline std::vector<double> softmax(const std::vector<double>& z) {
    double m = z[0];
    for (double v : z) m = std::max(m, v);
    std::vector<double> p;
    double sum = 0.0;
    for (double v : z) {
        p.push_back(std::exp(v - m));
        sum += p.back();
    }
    for (double& v : p) v /= sum;
    return p;
}

inline double score(const std::vector<double>& p, Kind kind) {
    std::vector<double> sorted = p;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    switch (kind) {
    case Kind::Max: return sorted[0];
    case Kind::Diff: return sorted[0] - sorted[1];
    case Kind::Entropy: {
        double h = 0.0;
        for (double v : p) {
            if (v > 0.0) h -= v * std::log(v);
        }
        double denom = 0.0;
        const double k = static_cast<double>(p.size());
        for (std::size_t i = 1; i <= p.size(); ++i) denom -= (i / k) * std::log(i / k);
        return h / denom;
    }
    }
    return 0.0;
}

inline int argmax(const std::vector<double>& z) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(z.size()); ++i) {
        if (z[i] > z[best]) best = i;
    }
    return best;
}

/// Brute-force cascade decision: returns (predicted label, escalated).
inline std::pair<int, bool> decide(const dualcascade::PairedSample& s, Kind kind, double lambda, bool post_check) {
    const double sa = score(softmax(s.logits_a), kind);
    const bool lower = kind == Kind::Entropy;
    const bool pass = lower ? sa <= lambda : sa >= lambda;
    if (pass) return {argmax(s.logits_a), false};
    if (!post_check) return {argmax(s.logits_b), true};
    const double sb = score(softmax(s.logits_b), kind);
    const bool keep_a = lower ? sa <= sb : sa >= sb;
    return {argmax(keep_a ? s.logits_a : s.logits_b), true};
}

inline std::size_t correct_count(const dualcascade::PairedDataset& d, Kind kind, double lambda, bool post_check) {
    std::size_t n = 0;
    for (const auto& s : d.samples) n += decide(s, kind, lambda, post_check).first == s.label ? 1 : 0;
    return n;
}

/// Best correct-count over the dense grid lambda = k * 1e-4, k = 0..10000.
inline std::size_t dense_grid_best(const dualcascade::PairedDataset& d, Kind kind, bool post_check) {
    std::size_t best = 0;
    for (int k = 0; k <= 10000; ++k) best = std::max(best, correct_count(d, kind, k * 1e-4, post_check));
    return best;
}

/// Best correct-count over every pass-set a threshold in [0,1] can realise:
/// lambda equal to each model-A score in [0,1], plus 0 and 1.
inline std::size_t realisable_best(const dualcascade::PairedDataset& d, Kind kind, bool post_check) {
    std::set<double> lambdas{0.0, 1.0};
    for (const auto& s : d.samples) {
        const double sa = score(softmax(s.logits_a), kind);
        if (sa >= 0.0 && sa <= 1.0) lambdas.insert(sa);
    }
    std::size_t best = 0;
    for (double l : lambdas) best = std::max(best, correct_count(d, kind, l, post_check));
    return best;
}

/// Complementarity from explicit index sets.
inline double complementarity(const std::vector<bool>& a, const std::vector<bool>& b) {
    std::set<std::size_t> sa, sb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]) sa.insert(i);
        if (b[i]) sb.insert(i);
    }
    std::set<std::size_t> uni, inter;
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(uni, uni.end()));
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(inter, inter.end()));
    const long long na = static_cast<long long>(sa.size());
    const long long nb = static_cast<long long>(sb.size());
    const long long num = static_cast<long long>(uni.size()) - static_cast<long long>(inter.size()) -
                          (na > nb ? na - nb : nb - na);
    return static_cast<double>(num) / static_cast<double>(a.size());
}

} // namespace oracle
