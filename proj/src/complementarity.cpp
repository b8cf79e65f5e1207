#include "dualcascade/complementarity.hpp"

#include <cstdio>
#include <sstream>

#include "dualcascade/confidence.hpp"
#include "dualcascade/error.hpp"
#include "dualcascade/kernels.hpp"

namespace dualcascade {

double OverlapCounts::ratio() const {
    if (total == 0) throw DataError("complementarity of an empty dataset");
    const auto disparity = a > b ? a - b : b - a;
    const long long numerator = static_cast<long long>(either) - static_cast<long long>(both) -
                                static_cast<long long>(disparity);
    return static_cast<double>(numerator) / static_cast<double>(total);
}

int predicted_label(std::span<const double> logits) {
    return static_cast<int>(argmax(logits));
}

std::vector<bool> correctness(const PairedDataset& paired, bool model_a) {
    std::vector<bool> out;
    out.reserve(paired.size());
    for (const auto& s : paired.samples) {
        out.push_back(predicted_label(model_a ? s.logits_a : s.logits_b) == s.label);
    }
    return out;
}

OverlapCounts overlap_counts(const std::vector<bool>& correct_a, const std::vector<bool>& correct_b) {
    if (correct_a.size() != correct_b.size()) throw DataError("correctness vectors differ in length");
    OverlapCounts c;
    c.total = correct_a.size();
    for (std::size_t i = 0; i < c.total; ++i) {
        const bool a = correct_a[i];
        const bool b = correct_b[i];
        c.either += (a || b) ? 1 : 0;
        c.both += (a && b) ? 1 : 0;
        c.a += a ? 1 : 0;
        c.b += b ? 1 : 0;
    }
    return c;
}

double complementarity(const std::vector<bool>& correct_a, const std::vector<bool>& correct_b) {
    return overlap_counts(correct_a, correct_b).ratio();
}

double complementarity(const PairedDataset& paired) {
    if (paired.empty()) throw DataError("complementarity of an empty dataset");
    return complementarity(correctness(paired, true), correctness(paired, false));
}

ComplementarityMatrix complementarity_matrix(const std::vector<NamedRecords>& models) {
    if (models.size() < 2) throw DataError("complementarity matrix needs at least 2 models");

    // Aligning every model against the first fixes a common id order; any
    // pair is then alignable iff each model aligns with the first.
    std::vector<std::vector<bool>> correct(models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        const std::size_t other = i == 0 ? 1 : 0;
        PairedDataset paired;
        try {
            paired = align_records(models[i].records, models[other].records, models[i].name, models[other].name);
        } catch (const DataError& e) {
            throw DataError("cannot align " + models[i].name + " with " + models[other].name + ": " + e.what());
        }
        correct[i] = correctness(paired, true);
    }

    ComplementarityMatrix m;
    for (const auto& model : models) m.names.push_back(model.name);
    m.values = kernels::complementarity_cells(correct);
    return m;
}

std::pair<std::size_t, std::size_t> pick_best_pair(const ComplementarityMatrix& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw DataError("need at least 2 models to pick a pair");
    std::pair<std::size_t, std::size_t> best{0, 1};
    bool have = false;
    auto name_pair = [&](std::size_t i, std::size_t j) {
        const auto& x = matrix.names[i];
        const auto& y = matrix.names[j];
        return x < y ? std::pair{x, y} : std::pair{y, x};
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = matrix.at(i, j);
            if (!have) {
                best = {i, j};
                have = true;
                continue;
            }
            const double bv = matrix.at(best.first, best.second);
            if (v > bv || (v == bv && name_pair(i, j) < name_pair(best.first, best.second))) best = {i, j};
        }
    }
    return best;
}

std::string matrix_to_csv(const ComplementarityMatrix& matrix) {
    std::ostringstream out;
    out << "model";
    for (const auto& name : matrix.names) out << ',' << name;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out << matrix.names[i];
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.6f", matrix.at(i, j));
            out << ',' << buf;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace dualcascade
